#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pseudoscore/model.hpp"

namespace pseudoscore::scoring {

struct ForestConfig {
    int trees = 200;
    int max_depth = 12;
    int min_leaf = 5;            // smallest row count allowed on either side
    int features_per_split = 0;  // 0 picks floor(sqrt(column count))
    bool balanced = true;        // class-weighted impurity
    std::uint64_t seed = 0;
};

struct SplitCandidate {
    int feature = -1;  // -1 when no admissible split exists
    double threshold = 0.0;
    double gain = 0.0;  // weighted Gini decrease
};

/// Exhaustive best split over the listed features: candidate thresholds are
/// midpoints between consecutive distinct values, rows with value <=
/// threshold go left. Ties keep the earliest (feature, threshold) pair.
SplitCandidate best_gini_split(const Eigen::MatrixXd& x, const std::vector<int>& y,
                               const std::vector<double>& sample_weight,
                               const std::vector<int>& rows, const std::vector<int>& features,
                               int min_leaf);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double bad_share = 0.0;  // weighted Bad share of the training rows here
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const Eigen::MatrixXd& x, Eigen::Index row) const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    double oob_error = 0.0;  // NaN when no row ever fell out of bag
    std::vector<std::string> feature_names;
    std::uint64_t seed = 0;

    /// Mean Bad share of the reached leaves: each tree votes with its leaf
    /// estimate, the score is the average vote.
    Eigen::VectorXd score(const Eigen::MatrixXd& x) const;
};

/// Bootstrap-resampled trees over random feature subsets, deterministic for
/// a seed.
ForestModel train_random_forest(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const ForestConfig& cfg,
                                std::vector<std::string> feature_names = {});

}  // namespace pseudoscore::scoring
