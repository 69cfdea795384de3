#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pseudoscore/feature_matrix.hpp"
#include "pseudoscore/records.hpp"

namespace pseudoscore::scoring {

enum class ModelKind { LogisticRegression, RandomForest, FeedforwardNet };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);  // throws on unknown name

/// Per-column mean/deviation learned on training rows. Zero-variance
/// columns keep scale 1 so transforming them is a no-op shift.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& x);
    Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

/// Balanced class weights: each class contributes half the total weight.
/// Index by the outcome (1 = Bad).
std::array<double, 2> balanced_class_weights(const std::vector<int>& y);

/// Per-sample weight vector from class weights.
std::vector<double> sample_weights(const std::vector<int>& y, const std::array<double, 2>& w);

/// Train-time missing-value handling: learns column medians on the training
/// rows and appends a 0/1 indicator column for every feature with training
/// gaps, so missingness itself stays visible to the models.
class Imputer {
public:
    static Imputer fit(const FeatureMatrix& m, const std::vector<int>& columns,
                       const std::vector<int>& train_rows);

    /// Dense design matrix for the given rows: imputed source columns first,
    /// then the indicator columns, in fit order.
    Eigen::MatrixXd transform(const FeatureMatrix& m, const std::vector<int>& rows) const;

    /// Output column names: source names plus "<name>_missing" indicators.
    std::vector<std::string> output_names(const FeatureMatrix& m) const;

    const std::vector<int>& columns() const { return columns_; }

private:
    std::vector<int> columns_;
    std::vector<double> medians_;
    std::vector<int> indicator_positions_;  // positions within columns_
};

/// Labels as 0/1 outcomes for the given rows; throws on Unlabeled.
std::vector<int> outcomes(const std::vector<Label>& labels, const std::vector<int>& rows);

}  // namespace pseudoscore::scoring
