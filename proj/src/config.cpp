#include "pseudoscore/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pseudoscore/rng.hpp"

namespace pseudoscore::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) fail(where, "unknown key \"" + key + "\"");
    }
}

template <class T>
T get_or(const json& obj, const std::string& where, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(where + "." + key, "wrong value type");
    }
}

double get_positive(const json& obj, const std::string& where, const char* key, double fallback) {
    const double v = get_or<double>(obj, where, key, fallback);
    if (!(v > 0)) fail(where + "." + key, "must be positive");
    return v;
}

int get_positive_int(const json& obj, const std::string& where, const char* key, int fallback) {
    const int v = get_or<int>(obj, where, key, fallback);
    if (v <= 0) fail(where + "." + key, "must be positive");
    return v;
}

data::ColumnMap parse_schema(const json& obj, const std::string& where) {
    data::ColumnMap map;
    if (!obj.is_object()) fail(where, "expected an object of field -> column mappings");
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_string()) fail(where + "." + key, "column name must be a string");
        map[key] = value.get<std::string>();
    }
    return map;
}

FilesConfig parse_files(const json& obj, const std::string& where) {
    check_keys(obj, where,
               {"users", "app_usage", "calls", "loans", "delimiter", "reject_tolerance",
                "amount_menu", "schema"});
    FilesConfig files;
    for (const char* key : {"users", "app_usage", "calls", "loans"})
        if (!obj.contains(key)) fail(where, std::string("missing path \"") + key + "\"");
    files.paths.users = obj.at("users").get<std::string>();
    files.paths.app_usage = obj.at("app_usage").get<std::string>();
    files.paths.calls = obj.at("calls").get<std::string>();
    files.paths.loans = obj.at("loans").get<std::string>();
    const auto delim = get_or<std::string>(obj, where, "delimiter", "\t");
    if (delim.size() != 1) fail(where + ".delimiter", "must be a single character");
    files.options.delimiter = delim[0];
    files.options.reject_tolerance =
        get_or<double>(obj, where, "reject_tolerance", files.options.reject_tolerance);
    if (files.options.reject_tolerance < 0 || files.options.reject_tolerance > 1)
        fail(where + ".reject_tolerance", "must lie in [0,1]");
    files.options.amount_menu =
        get_or<std::vector<double>>(obj, where, "amount_menu", files.options.amount_menu);
    if (obj.contains("schema")) {
        const auto& schema = obj.at("schema");
        check_keys(schema, where + ".schema", {"users", "app_usage", "calls", "loans"});
        if (schema.contains("users"))
            files.options.users_schema = parse_schema(schema.at("users"), where + ".schema.users");
        if (schema.contains("app_usage"))
            files.options.app_usage_schema =
                parse_schema(schema.at("app_usage"), where + ".schema.app_usage");
        if (schema.contains("calls"))
            files.options.calls_schema = parse_schema(schema.at("calls"), where + ".schema.calls");
        if (schema.contains("loans"))
            files.options.loans_schema = parse_schema(schema.at("loans"), where + ".schema.loans");
    }
    return files;
}

data::SynthSpec parse_synth(const json& obj, const std::string& where) {
    check_keys(obj, where,
               {"users", "apps", "categories", "signal_strength", "base_default_rate",
                "risky_user_fraction", "type_separation", "mean_apps_per_user",
                "popularity_exponent", "unlabeled_fraction", "calls_per_user", "night_shift",
                "period_start", "period_days", "amount_menu"});
    data::SynthSpec spec;
    spec.user_count = get_positive_int(obj, where, "users", spec.user_count);
    spec.app_count = get_positive_int(obj, where, "apps", spec.app_count);
    if (obj.contains("categories")) {
        spec.categories.clear();
        for (const auto& cat : obj.at("categories")) {
            check_keys(cat, where + ".categories[]", {"name", "share", "risky"});
            data::CategorySpec c;
            c.name = cat.at("name").get<std::string>();
            c.share = cat.at("share").get<double>();
            c.risky = get_or<bool>(cat, where + ".categories[]", "risky", false);
            spec.categories.push_back(std::move(c));
        }
    }
    spec.signal_strength = get_or<double>(obj, where, "signal_strength", spec.signal_strength);
    spec.base_default_rate =
        get_or<double>(obj, where, "base_default_rate", spec.base_default_rate);
    spec.risky_user_fraction =
        get_or<double>(obj, where, "risky_user_fraction", spec.risky_user_fraction);
    spec.type_separation = get_or<double>(obj, where, "type_separation", spec.type_separation);
    spec.mean_apps_per_user = get_positive(obj, where, "mean_apps_per_user", spec.mean_apps_per_user);
    spec.popularity_exponent =
        get_or<double>(obj, where, "popularity_exponent", spec.popularity_exponent);
    spec.unlabeled_fraction =
        get_or<double>(obj, where, "unlabeled_fraction", spec.unlabeled_fraction);
    spec.calls_per_user = get_or<double>(obj, where, "calls_per_user", spec.calls_per_user);
    spec.night_shift = get_or<double>(obj, where, "night_shift", spec.night_shift);
    if (obj.contains("period_start")) {
        const auto date = parse_date(obj.at("period_start").get<std::string>());
        if (!date) fail(where + ".period_start", "expected YYYY-MM-DD");
        spec.period_start = *date;
    }
    spec.period_days = get_positive_int(obj, where, "period_days", spec.period_days);
    spec.amount_menu = get_or<std::vector<double>>(obj, where, "amount_menu", spec.amount_menu);
    return spec;
}

std::set<scoring::FeatureGroup> parse_groups(const json& arr, const std::string& where) {
    std::set<scoring::FeatureGroup> groups;
    if (!arr.is_array()) fail(where, "expected an array of group names");
    for (const auto& g : arr) {
        try {
            groups.insert(scoring::parse_feature_group(g.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            fail(where, e.what());
        }
    }
    if (groups.empty()) fail(where, "empty group list");
    return groups;
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(root, "top level",
               {"seed", "threads", "output_dir", "data", "labels", "network", "features",
                "models", "experiment", "profit"});

    PipelineConfig cfg;
    cfg.seed = get_or<std::uint64_t>(root, "top level", "seed", 0);
    cfg.threads = get_or<int>(root, "top level", "threads", 0);
    if (cfg.threads < 0) fail("threads", "must be >= 0");
    cfg.output_dir = get_or<std::string>(root, "top level", "output_dir", cfg.output_dir);

    if (!root.contains("data")) fail("data", "missing section");
    const auto& data_obj = root.at("data");
    check_keys(data_obj, "data", {"source", "files", "synth"});
    const auto source = get_or<std::string>(data_obj, "data", "source", "");
    if (source == "files") {
        if (!data_obj.contains("files")) fail("data", "source \"files\" needs a files block");
        if (data_obj.contains("synth")) fail("data", "source \"files\" excludes a synth block");
        cfg.files = parse_files(data_obj.at("files"), "data.files");
    } else if (source == "synth") {
        if (data_obj.contains("files")) fail("data", "source \"synth\" excludes a files block");
        cfg.synth = data_obj.contains("synth") ? parse_synth(data_obj.at("synth"), "data.synth")
                                               : data::SynthSpec{};
    } else {
        fail("data.source", "must be \"files\" or \"synth\"");
    }

    if (root.contains("labels")) {
        const auto& labels = root.at("labels");
        check_keys(labels, "labels", {"window_days", "as_of"});
        cfg.label_window_days = get_positive_int(labels, "labels", "window_days", 60);
        if (labels.contains("as_of") && !labels.at("as_of").is_null()) {
            const auto date = parse_date(labels.at("as_of").get<std::string>());
            if (!date) fail("labels.as_of", "expected YYYY-MM-DD");
            cfg.label_as_of = *date;
        }
    }

    if (root.contains("network")) {
        const auto& network = root.at("network");
        check_keys(network, "network",
                   {"frequency_threshold", "bipartite_weights", "projection", "dense_app_guard",
                    "max_app_user_share"});
        cfg.bipartite.frequency_threshold =
            get_or<double>(network, "network", "frequency_threshold", 1.0);
        if (cfg.bipartite.frequency_threshold < 0)
            fail("network.frequency_threshold", "must be >= 0");
        const auto weights = get_or<std::string>(network, "network", "bipartite_weights", "unit");
        if (weights == "unit") cfg.bipartite.weight_mode = net::BipartiteWeightMode::Unit;
        else if (weights == "usage_intensity")
            cfg.bipartite.weight_mode = net::BipartiteWeightMode::UsageIntensity;
        else fail("network.bipartite_weights", "must be \"unit\" or \"usage_intensity\"");
        const auto rule = get_or<std::string>(network, "network", "projection", "shared_count");
        if (rule == "shared_count") cfg.projection.rule = net::ProjectionRule::SharedCount;
        else if (rule == "min_intensity")
            cfg.projection.rule = net::ProjectionRule::MinIntensity;
        else fail("network.projection", "must be \"shared_count\" or \"min_intensity\"");
        cfg.projection.dense_app_guard = get_or<bool>(network, "network", "dense_app_guard", false);
        cfg.projection.max_app_user_share =
            get_or<double>(network, "network", "max_app_user_share", 0.2);
        if (cfg.projection.max_app_user_share <= 0 || cfg.projection.max_app_user_share > 1)
            fail("network.max_app_user_share", "must lie in (0,1]");
    }

    cfg.groups = {scoring::FeatureGroup::Sociodemographic, scoring::FeatureGroup::Behavior,
                  scoring::FeatureGroup::Neighborhood,     scoring::FeatureGroup::Centrality,
                  scoring::FeatureGroup::Influence,        scoring::FeatureGroup::Embedding};
    if (root.contains("features")) {
        const auto& features = root.at("features");
        check_keys(features, "features",
                   {"groups", "include_betweenness", "pagerank", "node2vec", "embed_source"});
        if (features.contains("groups")) cfg.groups = parse_groups(features.at("groups"), "features.groups");
        cfg.include_betweenness = get_or<bool>(features, "features", "include_betweenness", true);
        if (features.contains("pagerank")) {
            const auto& pr = features.at("pagerank");
            check_keys(pr, "features.pagerank",
                       {"alpha", "tolerance", "max_iterations", "rfm_half_life_days"});
            cfg.influence.alpha = get_or<double>(pr, "features.pagerank", "alpha", 0.85);
            if (!(cfg.influence.alpha > 0 && cfg.influence.alpha < 1))
                fail("features.pagerank.alpha", "must lie in (0,1)");
            cfg.influence.tolerance = get_positive(pr, "features.pagerank", "tolerance", 1e-9);
            cfg.influence.max_iterations =
                get_positive_int(pr, "features.pagerank", "max_iterations", 200);
            cfg.influence.rfm_half_life_days =
                get_positive(pr, "features.pagerank", "rfm_half_life_days", 30.0);
        }
        if (features.contains("node2vec")) {
            const auto& n2v = features.at("node2vec");
            check_keys(n2v, "features.node2vec",
                       {"dimensions", "walks_per_node", "walk_length", "context_window",
                        "return_param", "inout_param", "negative_samples", "epochs",
                        "learning_rate"});
            auto& e = cfg.node2vec;
            e.dimensions = get_positive_int(n2v, "features.node2vec", "dimensions", e.dimensions);
            e.walks_per_node =
                get_positive_int(n2v, "features.node2vec", "walks_per_node", e.walks_per_node);
            e.walk_length = get_positive_int(n2v, "features.node2vec", "walk_length", e.walk_length);
            e.context_window =
                get_positive_int(n2v, "features.node2vec", "context_window", e.context_window);
            e.return_param = get_positive(n2v, "features.node2vec", "return_param", e.return_param);
            e.inout_param = get_positive(n2v, "features.node2vec", "inout_param", e.inout_param);
            e.negative_samples =
                get_positive_int(n2v, "features.node2vec", "negative_samples", e.negative_samples);
            e.epochs = get_positive_int(n2v, "features.node2vec", "epochs", e.epochs);
            e.learning_rate =
                get_positive(n2v, "features.node2vec", "learning_rate", e.learning_rate);
            try {
                embed::validate(e);
            } catch (const std::invalid_argument& err) {
                fail("features.node2vec", err.what());
            }
        }
        const auto src = get_or<std::string>(features, "features", "embed_source", "unipartite");
        if (src == "unipartite") cfg.embed_bipartite = false;
        else if (src == "bipartite") cfg.embed_bipartite = true;
        else fail("features.embed_source", "must be \"unipartite\" or \"bipartite\"");
    }

    cfg.model_kinds = {scoring::ModelKind::LogisticRegression, scoring::ModelKind::RandomForest,
                       scoring::ModelKind::FeedforwardNet};
    if (root.contains("models")) {
        const auto& models = root.at("models");
        check_keys(models, "models", {"kinds", "logreg", "random_forest", "feedforward"});
        if (models.contains("kinds")) {
            cfg.model_kinds.clear();
            for (const auto& k : models.at("kinds")) {
                try {
                    const auto kind = scoring::parse_model_kind(k.get<std::string>());
                    for (auto existing : cfg.model_kinds)
                        if (existing == kind) fail("models.kinds", "duplicate kind");
                    cfg.model_kinds.push_back(kind);
                } catch (const std::invalid_argument& e) {
                    fail("models.kinds", e.what());
                }
            }
            if (cfg.model_kinds.empty()) fail("models.kinds", "empty model list");
        }
        if (models.contains("logreg")) {
            const auto& lr = models.at("logreg");
            check_keys(lr, "models.logreg", {"l2_penalty", "tolerance", "max_iterations", "balanced"});
            auto& c = cfg.models.logreg;
            c.l2_penalty = get_or<double>(lr, "models.logreg", "l2_penalty", c.l2_penalty);
            if (c.l2_penalty < 0) fail("models.logreg.l2_penalty", "must be >= 0");
            c.tolerance = get_positive(lr, "models.logreg", "tolerance", c.tolerance);
            c.max_iterations = get_positive_int(lr, "models.logreg", "max_iterations", c.max_iterations);
            c.balanced = get_or<bool>(lr, "models.logreg", "balanced", c.balanced);
        }
        if (models.contains("random_forest")) {
            const auto& rf = models.at("random_forest");
            check_keys(rf, "models.random_forest",
                       {"trees", "max_depth", "min_leaf", "features_per_split", "balanced"});
            auto& c = cfg.models.forest;
            c.trees = get_positive_int(rf, "models.random_forest", "trees", c.trees);
            c.max_depth = get_positive_int(rf, "models.random_forest", "max_depth", c.max_depth);
            c.min_leaf = get_positive_int(rf, "models.random_forest", "min_leaf", c.min_leaf);
            c.features_per_split =
                get_or<int>(rf, "models.random_forest", "features_per_split", c.features_per_split);
            if (c.features_per_split < 0)
                fail("models.random_forest.features_per_split", "must be >= 0");
            c.balanced = get_or<bool>(rf, "models.random_forest", "balanced", c.balanced);
        }
        if (models.contains("feedforward")) {
            const auto& ff = models.at("feedforward");
            check_keys(ff, "models.feedforward",
                       {"hidden_units", "epochs", "learning_rate", "batch_size", "init_scale",
                        "l2_penalty", "balanced"});
            auto& c = cfg.models.feedforward;
            c.hidden_units = get_positive_int(ff, "models.feedforward", "hidden_units", c.hidden_units);
            c.epochs = get_positive_int(ff, "models.feedforward", "epochs", c.epochs);
            c.learning_rate = get_positive(ff, "models.feedforward", "learning_rate", c.learning_rate);
            c.batch_size = get_positive_int(ff, "models.feedforward", "batch_size", c.batch_size);
            c.init_scale = get_positive(ff, "models.feedforward", "init_scale", c.init_scale);
            c.l2_penalty = get_or<double>(ff, "models.feedforward", "l2_penalty", c.l2_penalty);
            if (c.l2_penalty < 0) fail("models.feedforward.l2_penalty", "must be >= 0");
            c.balanced = get_or<bool>(ff, "models.feedforward", "balanced", c.balanced);
        }
    }

    if (root.contains("experiment")) {
        const auto& exp = root.at("experiment");
        check_keys(exp, "experiment",
                   {"folds", "train_fraction", "combinations", "bootstrap_rounds",
                    "importance_repeats", "export_scores"});
        cfg.folds = get_or<int>(exp, "experiment", "folds", cfg.folds);
        if (cfg.folds < 2) fail("experiment.folds", "must be >= 2");
        cfg.train_fraction =
            get_or<double>(exp, "experiment", "train_fraction", cfg.train_fraction);
        if (!(cfg.train_fraction > 0 && cfg.train_fraction < 1))
            fail("experiment.train_fraction", "must lie in (0,1)");
        if (exp.contains("combinations")) {
            if (!exp.at("combinations").is_array())
                fail("experiment.combinations", "expected an array of group-name arrays");
            for (const auto& combo : exp.at("combinations"))
                cfg.combinations.push_back(parse_groups(combo, "experiment.combinations[]"));
        }
        cfg.bootstrap_rounds =
            get_positive_int(exp, "experiment", "bootstrap_rounds", cfg.bootstrap_rounds);
        cfg.importance_repeats =
            get_positive_int(exp, "experiment", "importance_repeats", cfg.importance_repeats);
        cfg.export_scores = get_or<bool>(exp, "experiment", "export_scores", false);
    }

    if (root.contains("profit")) {
        const auto& profit = root.at("profit");
        check_keys(profit, "profit", {"roi", "p0", "p1", "prior_bad", "lambda_grid"});
        cfg.profit.roi = get_or<double>(profit, "profit", "roi", cfg.profit.roi);
        if (!(cfg.profit.roi > 0 && cfg.profit.roi < 1)) fail("profit.roi", "must lie in (0,1)");
        cfg.profit.p0 = get_or<double>(profit, "profit", "p0", cfg.profit.p0);
        cfg.profit.p1 = get_or<double>(profit, "profit", "p1", cfg.profit.p1);
        if (cfg.profit.p0 < 0 || cfg.profit.p0 > 1 || cfg.profit.p1 < 0 || cfg.profit.p1 > 1 ||
            cfg.profit.p0 + cfg.profit.p1 > 1)
            fail("profit", "p0 and p1 must be probabilities with p0 + p1 <= 1");
        if (profit.contains("prior_bad") && !profit.at("prior_bad").is_null()) {
            const double prior = profit.at("prior_bad").get<double>();
            if (!(prior > 0 && prior < 1)) fail("profit.prior_bad", "must lie in (0,1)");
            cfg.profit.prior_bad = prior;
        }
        cfg.profit.lambda_grid = get_or<int>(profit, "profit", "lambda_grid", cfg.profit.lambda_grid);
        if (cfg.profit.lambda_grid < 2) fail("profit.lambda_grid", "must be >= 2");
    }

    // combinations must stay within the enabled groups
    for (const auto& combo : cfg.combinations)
        for (scoring::FeatureGroup g : combo)
            if (!cfg.groups.count(g))
                fail("experiment.combinations",
                     "group " + scoring::to_string(g) + " is not enabled in features.groups");
    return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

json synth_json(const data::SynthSpec& s) {
    json cats = json::array();
    for (const auto& c : s.categories)
        cats.push_back({{"name", c.name}, {"share", c.share}, {"risky", c.risky}});
    return {{"users", s.user_count},
            {"apps", s.app_count},
            {"categories", std::move(cats)},
            {"signal_strength", s.signal_strength},
            {"base_default_rate", s.base_default_rate},
            {"risky_user_fraction", s.risky_user_fraction},
            {"type_separation", s.type_separation},
            {"mean_apps_per_user", s.mean_apps_per_user},
            {"popularity_exponent", s.popularity_exponent},
            {"unlabeled_fraction", s.unlabeled_fraction},
            {"calls_per_user", s.calls_per_user},
            {"night_shift", s.night_shift},
            {"period_start", to_string(s.period_start)},
            {"period_days", s.period_days},
            {"amount_menu", s.amount_menu}};
}

json schema_json(const data::ColumnMap& map) {
    json obj = json::object();
    for (const auto& [field, column] : map) obj[field] = column;
    return obj;
}

json files_json(const FilesConfig& f) {
    return {{"users", f.paths.users},
            {"app_usage", f.paths.app_usage},
            {"calls", f.paths.calls},
            {"loans", f.paths.loans},
            {"delimiter", std::string(1, f.options.delimiter)},
            {"reject_tolerance", f.options.reject_tolerance},
            {"amount_menu", f.options.amount_menu},
            {"schema",
             {{"users", schema_json(f.options.users_schema)},
              {"app_usage", schema_json(f.options.app_usage_schema)},
              {"calls", schema_json(f.options.calls_schema)},
              {"loans", schema_json(f.options.loans_schema)}}}};
}

json data_json(const PipelineConfig& cfg) {
    json obj;
    obj["source"] = cfg.files ? "files" : "synth";
    if (cfg.files) obj["files"] = files_json(*cfg.files);
    if (cfg.synth) obj["synth"] = synth_json(*cfg.synth);
    obj["seed"] = cfg.seed;
    return obj;
}

json labels_json(const PipelineConfig& cfg) {
    json obj;
    obj["window_days"] = cfg.label_window_days;
    obj["as_of"] = cfg.label_as_of ? json(to_string(*cfg.label_as_of)) : json();
    return obj;
}

json network_json(const PipelineConfig& cfg) {
    return {{"frequency_threshold", cfg.bipartite.frequency_threshold},
            {"bipartite_weights",
             cfg.bipartite.weight_mode == net::BipartiteWeightMode::Unit ? "unit"
                                                                         : "usage_intensity"},
            {"projection", cfg.projection.rule == net::ProjectionRule::SharedCount
                               ? "shared_count"
                               : "min_intensity"},
            {"dense_app_guard", cfg.projection.dense_app_guard},
            {"max_app_user_share", cfg.projection.max_app_user_share}};
}

json features_json(const PipelineConfig& cfg) {
    json groups = json::array();
    for (scoring::FeatureGroup g : cfg.groups) groups.push_back(scoring::to_string(g));
    return {{"groups", std::move(groups)},
            {"include_betweenness", cfg.include_betweenness},
            {"pagerank",
             {{"alpha", cfg.influence.alpha},
              {"tolerance", cfg.influence.tolerance},
              {"max_iterations", cfg.influence.max_iterations},
              {"rfm_half_life_days", cfg.influence.rfm_half_life_days}}},
            {"node2vec",
             {{"dimensions", cfg.node2vec.dimensions},
              {"walks_per_node", cfg.node2vec.walks_per_node},
              {"walk_length", cfg.node2vec.walk_length},
              {"context_window", cfg.node2vec.context_window},
              {"return_param", cfg.node2vec.return_param},
              {"inout_param", cfg.node2vec.inout_param},
              {"negative_samples", cfg.node2vec.negative_samples},
              {"epochs", cfg.node2vec.epochs},
              {"learning_rate", cfg.node2vec.learning_rate}}},
            {"embed_source", cfg.embed_bipartite ? "bipartite" : "unipartite"}};
}

json models_json(const PipelineConfig& cfg) {
    json kinds = json::array();
    for (scoring::ModelKind k : cfg.model_kinds) kinds.push_back(scoring::to_string(k));
    return {{"kinds", std::move(kinds)},
            {"logreg",
             {{"l2_penalty", cfg.models.logreg.l2_penalty},
              {"tolerance", cfg.models.logreg.tolerance},
              {"max_iterations", cfg.models.logreg.max_iterations},
              {"balanced", cfg.models.logreg.balanced}}},
            {"random_forest",
             {{"trees", cfg.models.forest.trees},
              {"max_depth", cfg.models.forest.max_depth},
              {"min_leaf", cfg.models.forest.min_leaf},
              {"features_per_split", cfg.models.forest.features_per_split},
              {"balanced", cfg.models.forest.balanced}}},
            {"feedforward",
             {{"hidden_units", cfg.models.feedforward.hidden_units},
              {"epochs", cfg.models.feedforward.epochs},
              {"learning_rate", cfg.models.feedforward.learning_rate},
              {"batch_size", cfg.models.feedforward.batch_size},
              {"init_scale", cfg.models.feedforward.init_scale},
              {"l2_penalty", cfg.models.feedforward.l2_penalty},
              {"balanced", cfg.models.feedforward.balanced}}}};
}

json experiment_json(const PipelineConfig& cfg) {
    json combos = json::array();
    for (const auto& combo : cfg.combinations) {
        json one = json::array();
        for (scoring::FeatureGroup g : combo) one.push_back(scoring::to_string(g));
        combos.push_back(std::move(one));
    }
    return {{"folds", cfg.folds},
            {"train_fraction", cfg.train_fraction},
            {"combinations", std::move(combos)},
            {"bootstrap_rounds", cfg.bootstrap_rounds},
            {"importance_repeats", cfg.importance_repeats},
            {"export_scores", cfg.export_scores}};
}

json profit_json(const PipelineConfig& cfg) {
    json obj = {{"roi", cfg.profit.roi},
                {"p0", cfg.profit.p0},
                {"p1", cfg.profit.p1},
                {"lambda_grid", cfg.profit.lambda_grid}};
    obj["prior_bad"] = cfg.profit.prior_bad ? json(*cfg.profit.prior_bad) : json();
    return obj;
}

std::string key_of(const json& j, const std::string& upstream) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(j.dump() + "|" + upstream)));
    return buf;
}

}  // namespace

std::string canonical_config(const PipelineConfig& cfg) {
    json root = {{"seed", cfg.seed},
                 {"data", data_json(cfg)},
                 {"labels", labels_json(cfg)},
                 {"network", network_json(cfg)},
                 {"features", features_json(cfg)},
                 {"models", models_json(cfg)},
                 {"experiment", experiment_json(cfg)},
                 {"profit", profit_json(cfg)}};
    root["data"].erase("seed");  // already echoed at the top level
    return root.dump(2) + "\n";
}

StageKeys stage_keys(const PipelineConfig& cfg, const std::string& data_digest) {
    StageKeys keys;
    keys.data = key_of(data_json(cfg), data_digest);
    json network = network_json(cfg);
    network["labels"] = labels_json(cfg);
    keys.network = key_of(network, keys.data);
    keys.features = key_of(features_json(cfg), keys.network);
    json experiment = {{"models", models_json(cfg)},
                       {"experiment", experiment_json(cfg)},
                       {"profit", profit_json(cfg)},
                       {"seed", cfg.seed}};
    keys.train = key_of(experiment, keys.features + "|train");
    keys.evaluate = key_of(experiment, keys.features + "|evaluate");
    return keys;
}

}  // namespace pseudoscore::cli
