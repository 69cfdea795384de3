#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pseudoscore/model.hpp"

namespace pseudoscore::scoring {

struct LogRegConfig {
    double l2_penalty = 1.0;     // on weights, never on the intercept
    double tolerance = 1e-6;     // gradient norm at which ascent stops
    int max_iterations = 1000;
    bool balanced = true;        // class-weighted log-likelihood
    std::uint64_t seed = 0;      // recorded only; the fit is deterministic
};

/// Penalized weighted log-likelihood, higher is better. theta packs the
/// intercept first, then one weight per column of x.
double logreg_objective(const Eigen::MatrixXd& x, const std::vector<int>& y,
                        const std::vector<double>& sample_weight, double l2,
                        const Eigen::VectorXd& theta);

/// Analytic gradient of logreg_objective with respect to theta.
Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const std::vector<double>& sample_weight, double l2,
                                const Eigen::VectorXd& theta);

struct LogRegModel {
    Standardizer standardizer;
    Eigen::VectorXd weights;  // in standardized feature space
    double bias = 0.0;
    bool converged = false;
    double gradient_norm = 0.0;  // at the final iterate
    int iterations = 0;
    std::vector<std::string> feature_names;
    std::uint64_t seed = 0;

    /// Probability of Bad for each raw (unstandardized) feature row.
    Eigen::VectorXd score(const Eigen::MatrixXd& x) const;

    /// Coefficients mapped back to the raw feature scale.
    Eigen::VectorXd raw_weights() const;
    double raw_bias() const;
};

/// Gradient ascent with a backtracking step on the standardized design
/// matrix. Non-convergence is reported through the model fields, not thrown.
LogRegModel train_logreg(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const LogRegConfig& cfg, std::vector<std::string> feature_names = {});

}  // namespace pseudoscore::scoring
