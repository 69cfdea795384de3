#include "pseudoscore/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "pseudoscore/csv.hpp"
#include "pseudoscore/log.hpp"
#include "pseudoscore/parallel.hpp"
#include "pseudoscore/rng.hpp"
#include "pseudoscore/split.hpp"
#include "pseudoscore/stats.hpp"

namespace pseudoscore::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json read_json(const std::string& path) {
    return json::parse(read_text(path));
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path);
}

/// Whole-file write through a temporary plus rename, so readers never see a
/// half-written report.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + tmp);
    }
    fs::rename(tmp, path);
}

std::string files_digest(const data::DatasetPaths& paths) {
    std::uint64_t h = 14695981039346656037ull;
    for (const std::string* path : {&paths.users, &paths.app_usage, &paths.calls, &paths.loans}) {
        std::ifstream in(*path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open input file " + *path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        h = fnv1a(buffer.str(), fnv1a(*path, h));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Dataset load_cached_dataset(const std::string& dir) {
    data::DatasetPaths paths{dir + "/users.tsv", dir + "/app_usage.tsv", dir + "/calls.tsv",
                             dir + "/loans.tsv"};
    return data::load_dataset(paths, data::LoadOptions{}).dataset;
}

std::unordered_map<std::string, Label> read_label_map(const std::string& path) {
    std::unordered_map<std::string, Label> map;
    std::vector<std::string> header;
    for_each_row(path, '\t', header, [&](std::size_t line, const std::vector<std::string>& f) {
        if (f.size() != 2)
            throw std::runtime_error(path + " line " + std::to_string(line) + ": expected 2 fields");
        Label label;
        if (f[1] == "good") label = Label::Good;
        else if (f[1] == "bad") label = Label::Bad;
        else if (f[1] == "unlabeled") label = Label::Unlabeled;
        else
            throw std::runtime_error(path + " line " + std::to_string(line) + ": unknown label \"" +
                                     f[1] + "\"");
        map[f[0]] = label;
    });
    return map;
}

std::vector<Label> read_row_labels(const std::string& path, const std::vector<std::string>& ids) {
    const auto map = read_label_map(path);
    std::vector<Label> labels(ids.size(), Label::Unlabeled);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto it = map.find(ids[i]);
        if (it != map.end()) labels[i] = it->second;
    }
    return labels;
}

std::string groups_label(const std::set<scoring::FeatureGroup>& groups) {
    std::string s;
    for (scoring::FeatureGroup g : groups) {
        if (!s.empty()) s += '+';
        s += scoring::to_string(g);
    }
    return s;
}

std::string join_group_array(const json& arr) {
    std::string s;
    for (const auto& g : arr) {
        if (!s.empty()) s += '+';
        s += g.get<std::string>();
    }
    return s;
}

std::string render_report_text(const json& r) {
    std::ostringstream os;
    os << "pseudoscore run report\n======================\n\n";

    const json& d = r.at("dataset");
    os << "dataset (" << d.at("source").get<std::string>() << ")\n"
       << "  users " << d.at("users") << ", apps " << d.at("apps") << ", usage rows "
       << d.at("usage_rows") << ", call events " << d.at("call_rows") << ", loans "
       << d.at("loan_rows") << "\n\n";

    const json& n = r.at("network");
    os << "network\n"
       << "  bipartite: " << n.at("bipartite_edges") << " user-app edges over " << n.at("users")
       << " users and " << n.at("apps") << " apps\n"
       << "  unipartite: " << n.at("unipartite_nodes") << " nodes, " << n.at("unipartite_edges")
       << " edges, density " << fmt("%.6f", n.at("density").get<double>()) << ", "
       << n.at("isolated_users") << " isolated\n"
       << "  labels: " << n.at("good") << " good, " << n.at("bad") << " bad, "
       << n.at("unlabeled") << " unlabeled";
    if (!n.at("default_rate").is_null())
        os << " (default rate " << fmt("%.4f", n.at("default_rate").get<double>()) << ")";
    os << "\n  horizon " << n.at("label_as_of").get<std::string>() << ", repayment window "
       << n.at("label_window_days") << " days\n\n";

    const json& h = r.at("holdout");
    os << "holdout (train fraction " << fmt("%.2f", h.at("train_fraction").get<double>()) << ": "
       << h.at("train_rows") << " train / " << h.at("test_rows") << " test rows)\n"
       << "  " << pad("model", 24) << pad("auc", 10) << pad("brier", 10) << pad("profit", 10)
       << "reject\n";
    for (const auto& [name, v] : h.at("models").items()) {
        os << "  " << pad(name, 24) << pad(fmt("%.4f", v.at("auc").get<double>()), 10)
           << pad(fmt("%.4f", v.at("brier").get<double>()), 10)
           << pad(fmt("%.4f", v.at("profit").get<double>()), 10)
           << fmt("%.4f", v.at("rejection_fraction").get<double>()) << '\n';
    }
    os << '\n';

    const json& ab = r.at("ablation");
    std::size_t width = 8;
    for (const auto& cell : ab.at("cells"))
        width = std::max(width, join_group_array(cell.at("groups")).size());
    width += 2;
    os << "ablation (" << ab.at("folds") << "-fold cross-validation, mean over folds)\n"
       << "  " << pad("groups", width) << pad("model", 24) << pad("auc", 10) << pad("brier", 10)
       << "profit\n";
    for (const auto& cell : ab.at("cells")) {
        os << "  " << pad(join_group_array(cell.at("groups")), width)
           << pad(cell.at("model").get<std::string>(), 24)
           << pad(fmt("%.4f", cell.at("mean_auc").get<double>()), 10)
           << pad(fmt("%.4f", cell.at("mean_brier").get<double>()), 10)
           << fmt("%.4f", cell.at("mean_profit").get<double>()) << '\n';
    }
    os << '\n';

    os << "feature-group importance (auc drop on the holdout when a group's columns are "
          "permuted)\n";
    for (const auto& [model, groups] : r.at("importance").items()) {
        os << "  " << pad(model, 24);
        bool first = true;
        for (const auto& [group, value] : groups.items()) {
            if (!first) os << ", ";
            os << group << " " << fmt("%+.4f", value.get<double>());
            first = false;
        }
        os << '\n';
    }
    os << '\n';

    const json& sig = r.at("significance");
    if (!ab.at("cells").empty() && !sig.empty()) {
        const std::string base = join_group_array(ab.at("cells")[0].at("groups"));
        struct Row {
            std::string model, other;
            double delta, lo, hi, p;
        };
        std::vector<Row> rows;
        std::size_t other_width = 0;
        for (const auto& entry : sig) {
            if (entry.at("a_model") != entry.at("b_model")) continue;
            const std::string a = entry.at("a_groups").get<std::string>();
            const std::string b = entry.at("b_groups").get<std::string>();
            if (a != base && b != base) continue;
            // delta is stored as a - b; flip it so every row reads other - base
            const double flip = a == base ? -1.0 : 1.0;
            Row row;
            row.model = entry.at("a_model").get<std::string>();
            row.other = a == base ? b : a;
            row.delta = flip * entry.at("delta_auc").get<double>();
            row.lo = flip < 0 ? -entry.at("ci_high").get<double>() : entry.at("ci_low").get<double>();
            row.hi = flip < 0 ? -entry.at("ci_low").get<double>() : entry.at("ci_high").get<double>();
            row.p = entry.at("p_value").get<double>();
            other_width = std::max(other_width, row.other.size());
            rows.push_back(std::move(row));
        }
        os << "significance: auc delta vs " << base << " (paired bootstrap over folds)\n";
        for (const auto& row : rows) {
            os << "  " << pad(row.model, 24) << pad(row.other, other_width + 2)
               << pad(fmt("%+.4f", row.delta), 10) << "ci [" << fmt("%+.4f", row.lo) << ", "
               << fmt("%+.4f", row.hi) << "], p " << fmt("%.4f", row.p) << '\n';
        }
        os << "  (full pairwise table in the evaluate stage's significance.tsv)\n";
    }
    return os.str();
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg, bool require_upstream)
    : cfg_(std::move(cfg)),
      threads_(resolve_threads(cfg_.threads)),
      require_upstream_(require_upstream) {
    keys_ = stage_keys(cfg_, cfg_.files ? files_digest(cfg_.files->paths) : std::string());
}

template <class Resolve, class Fill>
std::string Pipeline::stage_entry(const char* stage, const std::string& key,
                                  const char* subcommand, Resolve&& resolve_upstream,
                                  Fill&& fill) {
    if (const auto it = done_.find(stage); it != done_.end()) return it->second;
    const fs::path dir = fs::path(cfg_.output_dir) / "cache" / (std::string(stage) + "-" + key);
    if (fs::exists(dir)) {
        Log::info(stage, "cached: ", dir.string());
        stages_.push_back({stage, 0.0, true});
        done_[stage] = dir.string();
        return dir.string();
    }
    if (require_upstream_ && depth_ > 0 && subcommand)
        throw std::runtime_error(std::string(stage) +
                                 " artifacts are missing for this config; run `pseudoscore " +
                                 subcommand + "` first");
    ++depth_;
    std::string result;
    try {
        resolve_upstream();
    } catch (...) {
        --depth_;
        throw;
    }
    try {
        const auto start = std::chrono::steady_clock::now();
        fs::path partial = dir;
        partial += ".partial";
        std::error_code ec;
        fs::remove_all(partial, ec);
        fs::create_directories(partial);
        fill(partial.string());
        fs::rename(partial, dir);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        stages_.push_back({stage, secs, false});
        Log::info(stage, "done in ", fmt("%.2f", secs), " s: ", dir.string());
        result = dir.string();
    } catch (const std::exception& e) {
        --depth_;
        // the .partial directory stays behind, marking the incomplete output
        throw std::runtime_error(std::string(stage) + " stage failed: " + e.what());
    }
    --depth_;
    done_[stage] = result;
    return result;
}

std::string Pipeline::data_stage() {
    return stage_entry(
        "data", keys_.data, cfg_.synth ? "synth" : nullptr, [] {},
        [&](const std::string& dir) { fill_data(dir); });
}

std::string Pipeline::network_stage() {
    std::string data_dir;
    return stage_entry(
        "network", keys_.network, "build-net", [&] { data_dir = data_stage(); },
        [&](const std::string& dir) { fill_network(dir, data_dir); });
}

std::string Pipeline::features_stage() {
    std::string data_dir, network_dir;
    return stage_entry(
        "features", keys_.features, "featurize",
        [&] {
            network_dir = network_stage();
            data_dir = data_stage();
        },
        [&](const std::string& dir) { fill_features(dir, data_dir, network_dir); });
}

std::string Pipeline::train_stage() {
    std::string features_dir;
    return stage_entry(
        "train", keys_.train, "train", [&] { features_dir = features_stage(); },
        [&](const std::string& dir) { fill_train(dir, features_dir); });
}

std::string Pipeline::evaluate_stage() {
    std::string features_dir;
    return stage_entry(
        "evaluate", keys_.evaluate, "evaluate", [&] { features_dir = features_stage(); },
        [&](const std::string& dir) { fill_evaluate(dir, features_dir); });
}

void Pipeline::fill_data(const std::string& dir) {
    Dataset ds;
    json meta;
    if (cfg_.synth) {
        Log::info("data", "synthesizing ", cfg_.synth->user_count, " users (seed ", cfg_.seed, ")");
        ds = data::generate_synthetic(*cfg_.synth, cfg_.seed);
        meta["source"] = "synth";
        meta["rejected_rows"] = 0;
    } else {
        const auto loaded = data::load_dataset(cfg_.files->paths, cfg_.files->options);
        ds = loaded.dataset;
        meta["source"] = "files";
        meta["rejected_rows"] = loaded.users_stats.rejected + loaded.usage_stats.rejected +
                                loaded.calls_stats.rejected + loaded.loans_stats.rejected;
    }
    data::write_dataset(ds, dir);
    std::set<std::string> apps;
    for (const auto& row : ds.usage) apps.insert(row.app_id);
    meta["users"] = ds.users.size();
    meta["apps"] = apps.size();
    meta["usage_rows"] = ds.usage.size();
    meta["call_rows"] = ds.calls.size();
    meta["loan_rows"] = ds.loans.size();
    write_json(dir + "/meta.json", meta);
    Log::info("data", ds.users.size(), " users, ", ds.usage.size(), " usage rows, ",
              ds.calls.size(), " call events, ", ds.loans.size(), " loans");
}

void Pipeline::fill_network(const std::string& dir, const std::string& data_dir) {
    const auto ds = load_cached_dataset(data_dir);
    std::vector<std::string> all_users;
    all_users.reserve(ds.users.size());
    for (const auto& u : ds.users) all_users.push_back(u.user_id);

    const auto nb = net::build_bipartite(ds.usage, cfg_.bipartite, all_users);
    auto nu = net::project_to_unipartite(nb, cfg_.projection);

    Date as_of;
    if (cfg_.label_as_of) {
        as_of = *cfg_.label_as_of;
    } else {
        const auto horizon = data::data_horizon(ds.loans);
        if (!horizon) throw std::runtime_error("no loans to derive labels from; set labels.as_of");
        as_of = *horizon;
    }
    const auto label_map = data::derive_labels(ds.loans, cfg_.label_window_days, as_of);
    int ignored = 0;
    const auto labeled = net::attach_labels(std::move(nu), label_map, &ignored);
    const auto& graph = labeled.network.graph;

    net::write_bipartite(nb, dir + "/bipartite.tsv");
    net::write_unipartite(labeled.network, dir + "/unipartite.tsv");

    std::size_t good = 0, bad = 0, unlabeled = 0;
    {
        std::ofstream out(dir + "/labels.tsv", std::ios::binary);
        out << "user_id\tlabel\n";
        for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
            out << labeled.network.ids[i] << '\t' << to_string(labeled.labels[i]) << '\n';
            if (labeled.labels[i] == Label::Good) ++good;
            else if (labeled.labels[i] == Label::Bad) ++bad;
            else ++unlabeled;
        }
        if (!out) throw std::runtime_error("cannot write " + dir + "/labels.tsv");
    }

    int isolated = 0;
    for (int v = 0; v < graph.node_count(); ++v)
        if (graph.degree(v) == 0) ++isolated;

    json meta;
    meta["users"] = nb.user_count();
    meta["apps"] = nb.app_count();
    meta["bipartite_edges"] = nb.edge_count();
    meta["unipartite_nodes"] = graph.node_count();
    meta["unipartite_edges"] = graph.edge_count();
    meta["density"] = graph.node_count() > 1
                          ? 2.0 * static_cast<double>(graph.edge_count()) /
                                (static_cast<double>(graph.node_count()) * (graph.node_count() - 1))
                          : 0.0;
    meta["isolated_users"] = isolated;
    meta["good"] = good;
    meta["bad"] = bad;
    meta["unlabeled"] = unlabeled;
    meta["default_rate"] =
        good + bad ? json(static_cast<double>(bad) / static_cast<double>(good + bad)) : json();
    meta["label_window_days"] = cfg_.label_window_days;
    meta["label_as_of"] = to_string(as_of);
    meta["ignored_labels"] = ignored;
    write_json(dir + "/meta.json", meta);
    Log::info("network", nb.edge_count(), " bipartite edges -> ", graph.edge_count(),
              " unipartite edges over ", graph.node_count(), " users (", bad, " bad, ", good,
              " good, ", unlabeled, " unlabeled)");
}

void Pipeline::fill_features(const std::string& dir, const std::string& data_dir,
                             const std::string& network_dir) {
    const auto ds = load_cached_dataset(data_dir);
    const auto nb = net::read_bipartite(network_dir + "/bipartite.tsv");
    auto nu = net::read_unipartite(network_dir + "/unipartite.tsv");
    const auto label_map = read_label_map(network_dir + "/labels.tsv");
    const auto labeled = net::attach_labels(std::move(nu), label_map);

    scoring::FeatureMatrix m(labeled.network.ids);
    for (scoring::FeatureGroup g : cfg_.groups) {
        switch (g) {
            case scoring::FeatureGroup::Sociodemographic:
                scoring::add_sociodemographic_features(m, ds.users);
                break;
            case scoring::FeatureGroup::Behavior:
                scoring::add_behavior_features(m, ds.calls, ds.loans);
                break;
            case scoring::FeatureGroup::Neighborhood:
                scoring::add_neighborhood_features(m, labeled, threads_);
                break;
            case scoring::FeatureGroup::Centrality:
                scoring::add_centrality_features(m, labeled, cfg_.include_betweenness, threads_);
                break;
            case scoring::FeatureGroup::Influence:
                scoring::add_influence_features(m, labeled, nb, ds.usage, cfg_.influence);
                break;
            case scoring::FeatureGroup::Embedding: {
                auto n2v = cfg_.node2vec;
                n2v.seed = derive_seed(cfg_.seed, "embed");
                // Walk generation parallelizes deterministically; the update
                // pass stays single-threaded so reruns stay bit-identical.
                if (cfg_.embed_bipartite) {
                    const auto big = net::bipartite_as_graph(nb);
                    const auto walks = embed::generate_walks(big, n2v, threads_);
                    const auto emb = embed::train_skipgram(walks, big.node_count(), n2v, 1);
                    scoring::add_embedding_features(m, emb, nb.user_ids);
                } else {
                    const auto& graph = labeled.network.graph;
                    const auto walks = embed::generate_walks(graph, n2v, threads_);
                    const auto emb = embed::train_skipgram(walks, graph.node_count(), n2v, 1);
                    scoring::add_embedding_features(m, emb, labeled.network.ids);
                }
                break;
            }
        }
        Log::info("features", scoring::to_string(g), " done, ", m.column_count(),
                  " columns total");
    }

    scoring::write_feature_matrix(m, dir + "/features.tsv");
    {
        // row-aligned labels travel with the matrix so the model stages need
        // only this directory
        std::ofstream out(dir + "/labels.tsv", std::ios::binary);
        out << "user_id\tlabel\n";
        for (std::size_t i = 0; i < labeled.labels.size(); ++i)
            out << m.row_ids()[i] << '\t' << to_string(labeled.labels[i]) << '\n';
        if (!out) throw std::runtime_error("cannot write " + dir + "/labels.tsv");
    }

    json group_columns = json::object();
    for (scoring::FeatureGroup g : m.column_groups()) {
        const std::string name = scoring::to_string(g);
        group_columns[name] = group_columns.value(name, 0) + 1;
    }
    json meta;
    meta["rows"] = m.row_count();
    meta["columns"] = m.column_count();
    meta["group_columns"] = group_columns;
    write_json(dir + "/meta.json", meta);
}

void Pipeline::fill_train(const std::string& dir, const std::string& features_dir) {
    auto m = scoring::read_feature_matrix(features_dir + "/features.tsv");
    const auto labels = read_row_labels(features_dir + "/labels.tsv", m.row_ids());
    const auto split =
        scoring::split_train_test(labels, cfg_.train_fraction, derive_seed(cfg_.seed, "holdout"));
    const auto columns = m.columns_in_groups(cfg_.groups);
    if (columns.empty()) throw std::runtime_error("no feature columns in the enabled groups");

    std::vector<Label> test_labels;
    test_labels.reserve(split.test_rows.size());
    std::size_t train_bad = 0, test_bad = 0;
    for (int r : split.train_rows) train_bad += labels[static_cast<std::size_t>(r)] == Label::Bad;
    for (int r : split.test_rows) {
        test_labels.push_back(labels[static_cast<std::size_t>(r)]);
        test_bad += test_labels.back() == Label::Bad;
    }

    json models = json::object();
    json importance_groups = json::object();
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> per_kind_importance;
    std::vector<Eigen::VectorXd> per_kind_scores;

    for (scoring::ModelKind kind : cfg_.model_kinds) {
        const std::string kind_name = scoring::to_string(kind);
        Log::info("train", "fitting ", kind_name, " on ", split.train_rows.size(), " rows, ",
                  columns.size(), " features");
        const auto scorer =
            scoring::train_scorer(m, labels, split.train_rows, columns, kind, cfg_.models,
                                  derive_seed(cfg_.seed, "train." + kind_name));
        Eigen::VectorXd scores = scorer.score(m, split.test_rows);
        const std::vector<double> score_vec(scores.data(), scores.data() + scores.size());
        const double auc_value = eval::auc(score_vec, test_labels);
        const double brier_value = eval::brier(score_vec, test_labels);
        const auto profit = eval::profit_measure(score_vec, test_labels, cfg_.profit);

        json details = std::visit(
            overloaded{
                [](const scoring::LogRegModel& model) {
                    return json{{"converged", model.converged},
                                {"iterations", model.iterations},
                                {"gradient_norm", model.gradient_norm}};
                },
                [](const scoring::ForestModel& model) {
                    return json{{"trees", model.trees.size()},
                                {"oob_error", std::isnan(model.oob_error) ? json()
                                                                          : json(model.oob_error)}};
                },
                [](const scoring::FeedforwardModel& model) {
                    return json{{"epochs", model.epoch_loss.size()},
                                {"final_loss",
                                 model.epoch_loss.empty() ? json() : json(model.epoch_loss.back())}};
                },
            },
            scorer.model);
        models[kind_name] = {{"auc", auc_value},
                             {"brier", brier_value},
                             {"profit", profit.emp},
                             {"rejection_fraction", profit.rejection_fraction},
                             {"details", details}};
        Log::info("train", kind_name, " holdout auc ", fmt("%.4f", auc_value), ", brier ",
                  fmt("%.4f", brier_value), ", profit ", fmt("%.4f", profit.emp));

        scoring::ImportanceOptions iopt;
        iopt.metric = scoring::MetricKind::Auc;
        iopt.repeats = cfg_.importance_repeats;
        iopt.seed = derive_seed(cfg_.seed, "importance." + kind_name);
        iopt.profit = cfg_.profit;
        const auto importance =
            scoring::permutation_importance(scorer, m, labels, split.test_rows, iopt);
        json rollup = json::object();
        for (const auto& [group, value] : importance.group_mean)
            rollup[scoring::to_string(group)] = value;
        importance_groups[kind_name] = rollup;
        feature_names = importance.feature_names;
        per_kind_importance.push_back(importance.importance);
        per_kind_scores.push_back(std::move(scores));
    }

    json holdout;
    holdout["train_fraction"] = cfg_.train_fraction;
    holdout["train_rows"] = split.train_rows.size();
    holdout["test_rows"] = split.test_rows.size();
    holdout["train_bad"] = train_bad;
    holdout["test_bad"] = test_bad;

    json train;
    train["holdout"] = holdout;
    train["models"] = models;
    train["importance_groups"] = importance_groups;
    write_json(dir + "/train.json", train);

    {
        std::ofstream out(dir + "/importance.tsv", std::ios::binary);
        out << "feature\tgroup";
        for (scoring::ModelKind kind : cfg_.model_kinds) out << '\t' << scoring::to_string(kind);
        out << '\n';
        for (std::size_t i = 0; i < feature_names.size(); ++i) {
            const int col = m.column_index(feature_names[i]);
            out << feature_names[i] << '\t'
                << scoring::to_string(m.column_groups()[static_cast<std::size_t>(col)]);
            for (const auto& imp : per_kind_importance) out << '\t' << format_double(imp[i]);
            out << '\n';
        }
        if (!out) throw std::runtime_error("cannot write " + dir + "/importance.tsv");
    }

    if (cfg_.export_scores) {
        std::ofstream out(dir + "/scores.tsv", std::ios::binary);
        out << "user_id\tlabel";
        for (scoring::ModelKind kind : cfg_.model_kinds) out << '\t' << scoring::to_string(kind);
        out << '\n';
        for (std::size_t i = 0; i < split.test_rows.size(); ++i) {
            const auto row = static_cast<std::size_t>(split.test_rows[i]);
            out << m.row_ids()[row] << '\t' << to_string(labels[row]);
            for (const auto& scores : per_kind_scores)
                out << '\t' << format_double(scores[static_cast<Eigen::Index>(i)]);
            out << '\n';
        }
        if (!out) throw std::runtime_error("cannot write " + dir + "/scores.tsv");
    }
}

void Pipeline::fill_evaluate(const std::string& dir, const std::string& features_dir) {
    const auto m = scoring::read_feature_matrix(features_dir + "/features.tsv");
    const auto labels = read_row_labels(features_dir + "/labels.tsv", m.row_ids());

    std::set<scoring::FeatureGroup> available;
    for (scoring::FeatureGroup g : m.column_groups())
        if (cfg_.groups.count(g)) available.insert(g);
    const auto combinations = cfg_.combinations.empty()
                                  ? scoring::default_group_combinations(available)
                                  : cfg_.combinations;

    scoring::AblationOptions options;
    options.folds = cfg_.folds;
    options.seed = derive_seed(cfg_.seed, "evaluate");
    options.threads = threads_;
    options.models = cfg_.models;
    options.profit = cfg_.profit;
    Log::info("evaluate", combinations.size(), " group combinations x ", cfg_.model_kinds.size(),
              " models, ", cfg_.folds, " folds");
    const auto table = scoring::ablation_study(m, labels, combinations, cfg_.model_kinds, options);

    json cells = json::array();
    for (const auto& cell : table.cells) {
        json groups = json::array();
        for (scoring::FeatureGroup g : cell.groups) groups.push_back(scoring::to_string(g));
        cells.push_back({{"groups", std::move(groups)},
                         {"model", scoring::to_string(cell.model)},
                         {"fold_auc", cell.fold_auc},
                         {"fold_brier", cell.fold_brier},
                         {"fold_profit", cell.fold_profit},
                         {"mean_auc", cell.mean_auc},
                         {"mean_brier", cell.mean_brier},
                         {"mean_profit", cell.mean_profit}});
    }

    json significance = json::array();
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        for (std::size_t j = i + 1; j < table.cells.size(); ++j) {
            const auto& a = table.cells[i];
            const auto& b = table.cells[j];
            const auto cmp = eval::compare_models(a.fold_auc, b.fold_auc, cfg_.bootstrap_rounds,
                                                  derive_seed(cfg_.seed, "significance", i, j));
            significance.push_back({{"a_groups", groups_label(a.groups)},
                                    {"a_model", scoring::to_string(a.model)},
                                    {"b_groups", groups_label(b.groups)},
                                    {"b_model", scoring::to_string(b.model)},
                                    {"delta_auc", cmp.delta},
                                    {"ci_low", cmp.ci_low},
                                    {"ci_high", cmp.ci_high},
                                    {"p_value", cmp.p_value}});
        }
    }

    json evaluate;
    evaluate["folds"] = table.folds;
    evaluate["cells"] = cells;
    evaluate["significance"] = significance;
    write_json(dir + "/evaluate.json", evaluate);

    {
        std::ofstream out(dir + "/ablation.tsv", std::ios::binary);
        out << "groups\tmodel\tmean_auc\tmean_brier\tmean_profit\tfold_auc\n";
        for (const auto& cell : table.cells) {
            out << groups_label(cell.groups) << '\t' << scoring::to_string(cell.model) << '\t'
                << format_double(cell.mean_auc) << '\t' << format_double(cell.mean_brier) << '\t'
                << format_double(cell.mean_profit) << '\t';
            for (std::size_t f = 0; f < cell.fold_auc.size(); ++f) {
                if (f) out << ',';
                out << format_double(cell.fold_auc[f]);
            }
            out << '\n';
        }
        if (!out) throw std::runtime_error("cannot write " + dir + "/ablation.tsv");
    }
    {
        std::ofstream out(dir + "/significance.tsv", std::ios::binary);
        out << "a_groups\ta_model\tb_groups\tb_model\tdelta_auc\tci_low\tci_high\tp_value\n";
        for (const auto& entry : significance) {
            out << entry.at("a_groups").get<std::string>() << '\t'
                << entry.at("a_model").get<std::string>() << '\t'
                << entry.at("b_groups").get<std::string>() << '\t'
                << entry.at("b_model").get<std::string>() << '\t'
                << format_double(entry.at("delta_auc").get<double>()) << '\t'
                << format_double(entry.at("ci_low").get<double>()) << '\t'
                << format_double(entry.at("ci_high").get<double>()) << '\t'
                << format_double(entry.at("p_value").get<double>()) << '\n';
        }
        if (!out) throw std::runtime_error("cannot write " + dir + "/significance.tsv");
    }
}

RunReport Pipeline::report_stage() {
    ++depth_;
    std::string data_dir, network_dir, features_dir, train_dir, evaluate_dir;
    try {
        data_dir = data_stage();
        network_dir = network_stage();
        features_dir = features_stage();
        train_dir = train_stage();
        evaluate_dir = evaluate_stage();
        --depth_;
    } catch (...) {
        --depth_;
        throw;
    }

    const auto start = std::chrono::steady_clock::now();
    json report;
    report["config"] = json::parse(canonical_config(cfg_));
    report["dataset"] = read_json(data_dir + "/meta.json");
    report["network"] = read_json(network_dir + "/meta.json");
    report["features"] = read_json(features_dir + "/meta.json");
    const json train = read_json(train_dir + "/train.json");
    report["holdout"] = train.at("holdout");
    report["holdout"]["models"] = train.at("models");
    report["importance"] = train.at("importance_groups");
    const json evaluate = read_json(evaluate_dir + "/evaluate.json");
    report["ablation"] = {{"folds", evaluate.at("folds")}, {"cells", evaluate.at("cells")}};
    report["significance"] = evaluate.at("significance");

    RunReport out;
    out.report_json = report.dump(2) + "\n";
    out.report_text = render_report_text(report);
    out.ablation_tsv = read_text(evaluate_dir + "/ablation.tsv");

    write_file_atomic(cfg_.output_dir + "/report.json", out.report_json);
    write_file_atomic(cfg_.output_dir + "/report.txt", out.report_text);
    write_file_atomic(cfg_.output_dir + "/ablation.tsv", out.ablation_tsv);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    stages_.push_back({"report", secs, false});

    json timing_entries = json::array();
    for (const auto& s : stages_)
        timing_entries.push_back(
            {{"stage", s.stage}, {"seconds", s.seconds}, {"cached", s.cached}});
    json timings;
    timings["stages"] = timing_entries;
    write_file_atomic(cfg_.output_dir + "/timings.json", timings.dump(2) + "\n");

    out.stages = stages_;
    Log::info("report", "wrote report.json, report.txt, ablation.tsv under ", cfg_.output_dir);
    return out;
}

RunReport Pipeline::run() {
    data_stage();
    network_stage();
    features_stage();
    train_stage();
    evaluate_stage();
    return report_stage();
}

}  // namespace pseudoscore::cli
