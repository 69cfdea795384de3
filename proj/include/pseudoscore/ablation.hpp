#pragma once

#include <cstdint>
#include <set>
#include <variant>
#include <vector>

#include "pseudoscore/feature_matrix.hpp"
#include "pseudoscore/forest.hpp"
#include "pseudoscore/logreg.hpp"
#include "pseudoscore/metrics.hpp"
#include "pseudoscore/neural.hpp"

namespace pseudoscore::scoring {

struct ModelConfigs {
    LogRegConfig logreg;
    ForestConfig forest;
    FeedforwardConfig feedforward;
};

/// One fitted scoring cell: imputation learned on its training rows plus the
/// model. Scores any rows of a matrix that still carries the training
/// columns.
struct TrainedScorer {
    ModelKind kind = ModelKind::LogisticRegression;
    Imputer imputer;
    std::variant<LogRegModel, ForestModel, FeedforwardModel> model;

    Eigen::VectorXd score(const FeatureMatrix& m, const std::vector<int>& rows) const;
};

TrainedScorer train_scorer(const FeatureMatrix& m, const std::vector<Label>& labels,
                           const std::vector<int>& train_rows, const std::vector<int>& columns,
                           ModelKind kind, const ModelConfigs& configs, std::uint64_t seed);

struct AblationOptions {
    int folds = 5;
    std::uint64_t seed = 0;
    int threads = 1;
    int max_fold_retries = 5;
    ModelConfigs models;
    eval::ProfitParams profit;
};

struct AblationCell {
    std::set<FeatureGroup> groups;
    ModelKind model = ModelKind::LogisticRegression;
    std::vector<double> fold_auc;
    std::vector<double> fold_brier;
    std::vector<double> fold_profit;
    double mean_auc = 0.0;
    double mean_brier = 0.0;
    double mean_profit = 0.0;
};

struct AblationTable {
    std::vector<AblationCell> cells;
    int folds = 0;
};

/// Each group alone, each remaining group paired with sociodemographic, and
/// all groups together; restricted to the groups actually present.
std::vector<std::set<FeatureGroup>> default_group_combinations(
    const std::set<FeatureGroup>& available);

/// Cross-validated metric table over (group combination x model kind)
/// cells. Duplicate combinations collapse to one row. Folds are shared
/// across cells so per-fold vectors are paired for significance testing.
AblationTable ablation_study(const FeatureMatrix& m, const std::vector<Label>& labels,
                             const std::vector<std::set<FeatureGroup>>& combinations,
                             const std::vector<ModelKind>& kinds, const AblationOptions& options);

enum class MetricKind { Auc, Brier, Profit };

struct ImportanceOptions {
    MetricKind metric = MetricKind::Auc;
    int repeats = 5;
    std::uint64_t seed = 0;
    eval::ProfitParams profit;
};

struct ImportanceResult {
    std::vector<std::string> feature_names;  // the scorer's source columns
    std::vector<double> importance;          // mean metric degradation
    std::vector<std::pair<FeatureGroup, double>> group_mean;
};

/// Permutes one source column at a time across the test rows (missing
/// entries shuffle along, so indicators follow) and measures how much the
/// metric degrades. Larger is more important; unused features sit near 0.
ImportanceResult permutation_importance(const TrainedScorer& scorer, FeatureMatrix& m,
                                        const std::vector<Label>& labels,
                                        const std::vector<int>& test_rows,
                                        const ImportanceOptions& options = {});

}  // namespace pseudoscore::scoring
