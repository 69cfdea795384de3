#include "pseudoscore/ablation.hpp"

#include <algorithm>
#include <stdexcept>

#include "pseudoscore/log.hpp"
#include "pseudoscore/parallel.hpp"
#include "pseudoscore/rng.hpp"
#include "pseudoscore/split.hpp"

namespace pseudoscore::scoring {

Eigen::VectorXd TrainedScorer::score(const FeatureMatrix& m, const std::vector<int>& rows) const {
    const Eigen::MatrixXd x = imputer.transform(m, rows);
    return std::visit([&](const auto& fitted) { return fitted.score(x); }, model);
}

TrainedScorer train_scorer(const FeatureMatrix& m, const std::vector<Label>& labels,
                           const std::vector<int>& train_rows, const std::vector<int>& columns,
                           ModelKind kind, const ModelConfigs& configs, std::uint64_t seed) {
    TrainedScorer scorer;
    scorer.kind = kind;
    scorer.imputer = Imputer::fit(m, columns, train_rows);
    const Eigen::MatrixXd x = scorer.imputer.transform(m, train_rows);
    const auto y = outcomes(labels, train_rows);
    auto names = scorer.imputer.output_names(m);
    switch (kind) {
        case ModelKind::LogisticRegression: {
            auto cfg = configs.logreg;
            cfg.seed = seed;
            scorer.model = train_logreg(x, y, cfg, std::move(names));
            break;
        }
        case ModelKind::RandomForest: {
            auto cfg = configs.forest;
            cfg.seed = seed;
            scorer.model = train_random_forest(x, y, cfg, std::move(names));
            break;
        }
        case ModelKind::FeedforwardNet: {
            auto cfg = configs.feedforward;
            cfg.seed = seed;
            scorer.model = train_feedforward(x, y, cfg, std::move(names));
            break;
        }
    }
    return scorer;
}

std::vector<std::set<FeatureGroup>> default_group_combinations(
    const std::set<FeatureGroup>& available) {
    std::vector<std::set<FeatureGroup>> combos;
    for (FeatureGroup g : available) combos.push_back({g});
    const FeatureGroup socio = FeatureGroup::Sociodemographic;
    if (available.count(socio))
        for (FeatureGroup g : available)
            if (g != socio) combos.push_back({socio, g});
    if (available.size() > 1) combos.push_back(available);
    return combos;
}

namespace {

std::vector<std::vector<int>> usable_folds(const std::vector<Label>& labels,
                                           const AblationOptions& options) {
    for (int attempt = 0; attempt <= options.max_fold_retries; ++attempt) {
        auto folds = stratified_folds(labels, options.folds,
                                      derive_seed(options.seed, "ablation.folds",
                                                  static_cast<std::uint64_t>(attempt)));
        bool ok = true;
        for (const auto& fold : folds) {
            int bad = 0, good = 0;
            for (int r : fold) (labels[static_cast<std::size_t>(r)] == Label::Bad ? bad : good) += 1;
            if (bad == 0 || good == 0) ok = false;
        }
        if (ok) return folds;
        Log::warn("ablation", "fold draw ", attempt, " produced a single-class fold; resampling");
    }
    throw std::runtime_error(
        "ablation_study: could not stratify folds with both classes; too few minority labels");
}

}  // namespace

AblationTable ablation_study(const FeatureMatrix& m, const std::vector<Label>& labels,
                             const std::vector<std::set<FeatureGroup>>& combinations,
                             const std::vector<ModelKind>& kinds, const AblationOptions& options) {
    if (static_cast<int>(labels.size()) != m.row_count())
        throw std::invalid_argument("ablation_study: label count mismatch");
    if (kinds.empty()) throw std::invalid_argument("ablation_study: no model kinds requested");

    std::vector<std::set<FeatureGroup>> combos;
    for (const auto& c : combinations)
        if (std::find(combos.begin(), combos.end(), c) == combos.end()) combos.push_back(c);
    if (combos.empty()) throw std::invalid_argument("ablation_study: no group combinations");
    std::vector<std::vector<int>> combo_columns;
    for (const auto& c : combos) {
        auto cols = m.columns_in_groups(c);
        if (cols.empty()) {
            std::string names;
            for (FeatureGroup g : c) names += (names.empty() ? "" : "+") + to_string(g);
            throw std::invalid_argument("ablation_study: no columns in group set " + names);
        }
        combo_columns.push_back(std::move(cols));
    }

    const auto folds = usable_folds(labels, options);
    const auto fold_count = folds.size();

    AblationTable table;
    table.folds = static_cast<int>(fold_count);
    for (const auto& c : combos)
        for (ModelKind kind : kinds) {
            AblationCell cell;
            cell.groups = c;
            cell.model = kind;
            cell.fold_auc.resize(fold_count);
            cell.fold_brier.resize(fold_count);
            cell.fold_profit.resize(fold_count);
            table.cells.push_back(std::move(cell));
        }

    // train rows per fold = all labeled rows outside the fold
    std::vector<std::vector<int>> train_rows(fold_count);
    for (std::size_t f = 0; f < fold_count; ++f)
        for (std::size_t o = 0; o < fold_count; ++o)
            if (o != f)
                train_rows[f].insert(train_rows[f].end(), folds[o].begin(), folds[o].end());
    for (auto& rows : train_rows) std::sort(rows.begin(), rows.end());

    const std::size_t jobs = table.cells.size() * fold_count;
    parallel_for(jobs, options.threads, [&](std::size_t job) {
        const std::size_t cell_index = job / fold_count;
        const std::size_t fold = job % fold_count;
        auto& cell = table.cells[cell_index];
        const std::size_t combo_index = cell_index / kinds.size();

        const auto scorer = train_scorer(
            m, labels, train_rows[fold], combo_columns[combo_index], cell.model, options.models,
            derive_seed(options.seed, "ablation.cell", cell_index, fold));
        const Eigen::VectorXd scores = scorer.score(m, folds[fold]);

        std::vector<double> s(scores.data(), scores.data() + scores.size());
        std::vector<Label> l;
        l.reserve(folds[fold].size());
        for (int r : folds[fold]) l.push_back(labels[static_cast<std::size_t>(r)]);
        cell.fold_auc[fold] = eval::auc(s, l);
        cell.fold_brier[fold] = eval::brier(s, l);
        cell.fold_profit[fold] = eval::profit_measure(s, l, options.profit).emp;
    }, 1);

    for (auto& cell : table.cells) {
        const auto mean = [&](const std::vector<double>& v) {
            double sum = 0.0;
            for (double x : v) sum += x;
            return sum / static_cast<double>(v.size());
        };
        cell.mean_auc = mean(cell.fold_auc);
        cell.mean_brier = mean(cell.fold_brier);
        cell.mean_profit = mean(cell.fold_profit);
    }
    return table;
}

namespace {

double metric_value(MetricKind metric, const std::vector<double>& scores,
                    const std::vector<Label>& labels, const eval::ProfitParams& profit) {
    switch (metric) {
        case MetricKind::Auc: return eval::auc(scores, labels);
        case MetricKind::Brier: return eval::brier(scores, labels);
        case MetricKind::Profit: return eval::profit_measure(scores, labels, profit).emp;
    }
    throw std::logic_error("unreachable metric kind");
}

}  // namespace

ImportanceResult permutation_importance(const TrainedScorer& scorer, FeatureMatrix& m,
                                        const std::vector<Label>& labels,
                                        const std::vector<int>& test_rows,
                                        const ImportanceOptions& options) {
    if (options.repeats < 1)
        throw std::invalid_argument("permutation_importance: repeats must be positive");
    std::vector<Label> l;
    l.reserve(test_rows.size());
    for (int r : test_rows) l.push_back(labels[static_cast<std::size_t>(r)]);
    const auto scores_of = [&]() {
        const Eigen::VectorXd v = scorer.score(m, test_rows);
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    const double base = metric_value(options.metric, scores_of(), l, options.profit);
    // Brier degrades upward, the others downward.
    const double sign = options.metric == MetricKind::Brier ? -1.0 : 1.0;

    ImportanceResult result;
    const auto& columns = scorer.imputer.columns();
    result.importance.resize(columns.size(), 0.0);
    std::vector<double> group_sum(6, 0.0);
    std::vector<int> group_n(6, 0);
    std::vector<double> saved(test_rows.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        result.feature_names.push_back(m.column_names()[static_cast<std::size_t>(columns[c])]);
        auto& col = m.mutable_column(columns[c]);
        for (std::size_t i = 0; i < test_rows.size(); ++i) saved[i] = col[test_rows[i]];
        double drop_sum = 0.0;
        for (int rep = 0; rep < options.repeats; ++rep) {
            std::vector<double> shuffled = saved;
            Rng rng(derive_seed(options.seed, "importance", static_cast<std::uint64_t>(c),
                                static_cast<std::uint64_t>(rep)));
            rng.shuffle(shuffled);
            for (std::size_t i = 0; i < test_rows.size(); ++i) col[test_rows[i]] = shuffled[i];
            drop_sum += sign * (base - metric_value(options.metric, scores_of(), l, options.profit));
        }
        for (std::size_t i = 0; i < test_rows.size(); ++i) col[test_rows[i]] = saved[i];
        result.importance[c] = drop_sum / options.repeats;
        const auto g = static_cast<std::size_t>(m.column_groups()[static_cast<std::size_t>(columns[c])]);
        group_sum[g] += result.importance[c];
        group_n[g] += 1;
    }
    for (std::size_t g = 0; g < group_sum.size(); ++g)
        if (group_n[g] > 0)
            result.group_mean.emplace_back(static_cast<FeatureGroup>(g), group_sum[g] / group_n[g]);
    return result;
}

}  // namespace pseudoscore::scoring
