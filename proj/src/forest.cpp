#include "pseudoscore/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pseudoscore/rng.hpp"

namespace pseudoscore::scoring {

namespace {

double gini(double bad_weight, double total_weight) {
    if (total_weight <= 0) return 0.0;
    const double pb = bad_weight / total_weight;
    return 1.0 - pb * pb - (1.0 - pb) * (1.0 - pb);
}

}  // namespace

SplitCandidate best_gini_split(const Eigen::MatrixXd& x, const std::vector<int>& y,
                               const std::vector<double>& sample_weight,
                               const std::vector<int>& rows, const std::vector<int>& features,
                               int min_leaf) {
    SplitCandidate best;
    if (static_cast<int>(rows.size()) < 2 * min_leaf) return best;

    double total_w = 0.0, total_bad = 0.0;
    for (int r : rows) {
        const double w = sample_weight[static_cast<std::size_t>(r)];
        total_w += w;
        if (y[static_cast<std::size_t>(r)] == 1) total_bad += w;
    }
    const double parent = gini(total_bad, total_w);

    std::vector<std::pair<double, int>> sorted;  // (value, row)
    for (int f : features) {
        sorted.clear();
        for (int r : rows) sorted.emplace_back(x(r, f), r);
        std::sort(sorted.begin(), sorted.end());

        double left_w = 0.0, left_bad = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            const int r = sorted[i].second;
            const double w = sample_weight[static_cast<std::size_t>(r)];
            left_w += w;
            if (y[static_cast<std::size_t>(r)] == 1) left_bad += w;
            if (sorted[i].first == sorted[i + 1].first) continue;
            const auto left_n = static_cast<int>(i) + 1;
            const auto right_n = static_cast<int>(sorted.size()) - left_n;
            if (left_n < min_leaf || right_n < min_leaf) continue;
            const double threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
            if (!(threshold > sorted[i].first)) continue;  // adjacent doubles collapse
            const double right_w = total_w - left_w;
            const double gain = parent - (left_w / total_w) * gini(left_bad, left_w) -
                                (right_w / total_w) * gini(total_bad - left_bad, right_w);
            if (gain > best.gain + 1e-12) {
                best.feature = f;
                best.threshold = threshold;
                best.gain = gain;
            }
        }
    }
    return best;
}

double DecisionTree::predict(const Eigen::MatrixXd& x, Eigen::Index row) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(node)];
        node = x(row, n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].bad_share;
}

Eigen::VectorXd ForestModel::score(const Eigen::MatrixXd& x) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
    for (const auto& tree : trees)
        for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] += tree.predict(x, i);
    return out / static_cast<double>(trees.size());
}

namespace {

struct TreeBuilder {
    const Eigen::MatrixXd& x;
    const std::vector<int>& y;
    const std::vector<double>& sw;
    const ForestConfig& cfg;
    int features_per_split;
    Rng& rng;
    DecisionTree tree;
    std::vector<int> feature_pool;

    int build(std::vector<int> rows, int depth) {
        double total_w = 0.0, bad_w = 0.0;
        for (int r : rows) {
            const double w = sw[static_cast<std::size_t>(r)];
            total_w += w;
            if (y[static_cast<std::size_t>(r)] == 1) bad_w += w;
        }
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({-1, 0.0, -1, -1, total_w > 0 ? bad_w / total_w : 0.0});
        if (depth >= cfg.max_depth || bad_w == 0.0 || bad_w == total_w ||
            static_cast<int>(rows.size()) < 2 * cfg.min_leaf)
            return index;

        // Fresh random feature subset per node, evaluated in ascending order.
        const auto d = static_cast<int>(x.cols());
        feature_pool.resize(static_cast<std::size_t>(d));
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
        const int k = std::min(features_per_split, d);
        for (int i = 0; i < k; ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(i, d - 1));
            std::swap(feature_pool[static_cast<std::size_t>(i)], feature_pool[j]);
        }
        std::vector<int> chosen(feature_pool.begin(), feature_pool.begin() + k);
        std::sort(chosen.begin(), chosen.end());

        const auto split = best_gini_split(x, y, sw, rows, chosen, cfg.min_leaf);
        if (split.feature < 0) return index;

        std::vector<int> left_rows, right_rows;
        for (int r : rows)
            (x(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        tree.nodes[static_cast<std::size_t>(index)].feature = split.feature;
        tree.nodes[static_cast<std::size_t>(index)].threshold = split.threshold;
        const int left = build(std::move(left_rows), depth + 1);
        tree.nodes[static_cast<std::size_t>(index)].left = left;
        const int right = build(std::move(right_rows), depth + 1);
        tree.nodes[static_cast<std::size_t>(index)].right = right;
        return index;
    }
};

}  // namespace

ForestModel train_random_forest(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const ForestConfig& cfg, std::vector<std::string> feature_names) {
    if (cfg.trees < 1) throw std::invalid_argument("train_random_forest: trees must be >= 1");
    if (cfg.max_depth < 1) throw std::invalid_argument("train_random_forest: max_depth must be >= 1");
    if (cfg.min_leaf < 1) throw std::invalid_argument("train_random_forest: min_leaf must be >= 1");
    if (x.rows() < 2) throw std::invalid_argument("train_random_forest: need at least two rows");
    if (static_cast<Eigen::Index>(y.size()) != x.rows())
        throw std::invalid_argument("train_random_forest: label count mismatch");
    if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != x.cols())
        throw std::invalid_argument("train_random_forest: feature name count mismatch");

    const auto n = static_cast<int>(x.rows());
    const auto d = static_cast<int>(x.cols());
    int per_split = cfg.features_per_split;
    if (per_split <= 0) per_split = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
    per_split = std::min(per_split, d);

    const auto weights = cfg.balanced ? balanced_class_weights(y)
                                      : std::array<double, 2>{1.0, 1.0};
    const auto sw = sample_weights(y, weights);

    ForestModel model;
    model.seed = cfg.seed;
    model.feature_names = std::move(feature_names);
    model.trees.reserve(static_cast<std::size_t>(cfg.trees));

    std::vector<double> oob_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<int> oob_count(static_cast<std::size_t>(n), 0);
    std::vector<char> in_bag(static_cast<std::size_t>(n));
    for (int t = 0; t < cfg.trees; ++t) {
        Rng rng(derive_seed(cfg.seed, "forest.tree", static_cast<std::uint64_t>(t)));
        std::vector<int> rows(static_cast<std::size_t>(n));
        std::fill(in_bag.begin(), in_bag.end(), 0);
        for (auto& r : rows) {
            r = static_cast<int>(rng.uniform_int(0, n - 1));
            in_bag[static_cast<std::size_t>(r)] = 1;
        }
        TreeBuilder builder{x, y, sw, cfg, per_split, rng, {}, {}};
        builder.build(std::move(rows), 0);
        model.trees.push_back(std::move(builder.tree));
        for (int i = 0; i < n; ++i) {
            if (in_bag[static_cast<std::size_t>(i)]) continue;
            oob_sum[static_cast<std::size_t>(i)] += model.trees.back().predict(x, i);
            oob_count[static_cast<std::size_t>(i)] += 1;
        }
    }

    int voted = 0, wrong = 0;
    for (int i = 0; i < n; ++i) {
        if (oob_count[static_cast<std::size_t>(i)] == 0) continue;
        ++voted;
        const double mean_share =
            oob_sum[static_cast<std::size_t>(i)] / oob_count[static_cast<std::size_t>(i)];
        const int predicted = mean_share >= 0.5 ? 1 : 0;
        if (predicted != y[static_cast<std::size_t>(i)]) ++wrong;
    }
    model.oob_error = voted > 0 ? static_cast<double>(wrong) / static_cast<double>(voted)
                                : std::numeric_limits<double>::quiet_NaN();
    return model;
}

}  // namespace pseudoscore::scoring
