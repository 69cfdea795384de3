#include "pseudoscore/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pseudoscore::scoring {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::LogisticRegression: return "logistic_regression";
        case ModelKind::RandomForest: return "random_forest";
        case ModelKind::FeedforwardNet: return "feedforward_net";
    }
    throw std::logic_error("unreachable model kind");
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "logistic_regression") return ModelKind::LogisticRegression;
    if (name == "random_forest") return ModelKind::RandomForest;
    if (name == "feedforward_net") return ModelKind::FeedforwardNet;
    throw std::invalid_argument("unknown model kind: " + name);
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    if (x.rows() == 0) throw std::invalid_argument("standardizer: no rows");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = (x.col(c).array() - s.mean[c]).square().sum() /
                           static_cast<double>(x.rows());
        const double sd = std::sqrt(var);
        s.scale[c] = sd > 0 ? sd : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size())
        throw std::invalid_argument("standardizer: column count mismatch");
    return (x.rowwise() - mean.transpose()).array().rowwise() /
           scale.transpose().array();
}

std::array<double, 2> balanced_class_weights(const std::vector<int>& y) {
    double counts[2] = {0, 0};
    for (int v : y) counts[v] += 1;
    if (counts[0] == 0 || counts[1] == 0)
        throw std::invalid_argument("class weights: both classes must be present");
    const double n = counts[0] + counts[1];
    return {n / (2.0 * counts[0]), n / (2.0 * counts[1])};
}

std::vector<double> sample_weights(const std::vector<int>& y, const std::array<double, 2>& w) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = w[static_cast<std::size_t>(y[i])];
    return out;
}

Imputer Imputer::fit(const FeatureMatrix& m, const std::vector<int>& columns,
                     const std::vector<int>& train_rows) {
    if (columns.empty()) throw std::invalid_argument("imputer: no columns selected");
    if (train_rows.empty()) throw std::invalid_argument("imputer: no training rows");
    Imputer imp;
    imp.columns_ = columns;
    imp.medians_.resize(columns.size());
    std::vector<double> values;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& col = m.column(columns[c]);
        values.clear();
        bool any_missing = false;
        for (int r : train_rows) {
            const double v = col[r];
            if (std::isnan(v))
                any_missing = true;
            else
                values.push_back(v);
        }
        if (values.empty()) {
            imp.medians_[c] = 0.0;
        } else {
            const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
            std::nth_element(values.begin(), mid, values.end());
            double median = *mid;
            if (values.size() % 2 == 0) {
                const double lower = *std::max_element(values.begin(), mid);
                median = 0.5 * (median + lower);
            }
            imp.medians_[c] = median;
        }
        if (any_missing) imp.indicator_positions_.push_back(static_cast<int>(c));
    }
    return imp;
}

Eigen::MatrixXd Imputer::transform(const FeatureMatrix& m, const std::vector<int>& rows) const {
    const std::size_t base = columns_.size();
    Eigen::MatrixXd x(rows.size(), base + indicator_positions_.size());
    for (std::size_t c = 0; c < base; ++c) {
        const auto& col = m.column(columns_[c]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double v = col[rows[r]];
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                std::isnan(v) ? medians_[c] : v;
        }
    }
    for (std::size_t i = 0; i < indicator_positions_.size(); ++i) {
        const auto& col = m.column(columns_[static_cast<std::size_t>(indicator_positions_[i])]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(base + i)) =
                std::isnan(col[rows[r]]) ? 1.0 : 0.0;
    }
    return x;
}

std::vector<std::string> Imputer::output_names(const FeatureMatrix& m) const {
    std::vector<std::string> names;
    names.reserve(columns_.size() + indicator_positions_.size());
    for (int c : columns_) names.push_back(m.column_names()[static_cast<std::size_t>(c)]);
    for (int pos : indicator_positions_)
        names.push_back(m.column_names()[static_cast<std::size_t>(columns_[static_cast<std::size_t>(pos)])] +
                        "_missing");
    return names;
}

std::vector<int> outcomes(const std::vector<Label>& labels, const std::vector<int>& rows) {
    std::vector<int> y;
    y.reserve(rows.size());
    for (int r : rows) {
        const Label l = labels[static_cast<std::size_t>(r)];
        if (l == Label::Unlabeled)
            throw std::invalid_argument("outcomes: Unlabeled row in a training/evaluation set");
        y.push_back(l == Label::Bad ? 1 : 0);
    }
    return y;
}

}  // namespace pseudoscore::scoring
