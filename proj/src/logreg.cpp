#include "pseudoscore/logreg.hpp"

#include <cmath>
#include <stdexcept>

#include "pseudoscore/log.hpp"

namespace pseudoscore::scoring {

namespace {

double softplus(double z) {
    const double hi = z > 0 ? z : 0.0;
    return hi + std::log1p(std::exp(-std::fabs(z)));
}

void check_shapes(const Eigen::MatrixXd& x, const std::vector<int>& y,
                  const std::vector<double>& sample_weight, const Eigen::VectorXd& theta) {
    if (static_cast<Eigen::Index>(y.size()) != x.rows())
        throw std::invalid_argument("logreg: label count mismatch");
    if (sample_weight.size() != y.size())
        throw std::invalid_argument("logreg: weight count mismatch");
    if (theta.size() != x.cols() + 1)
        throw std::invalid_argument("logreg: theta must hold intercept plus one weight per column");
}

}  // namespace

double logreg_objective(const Eigen::MatrixXd& x, const std::vector<int>& y,
                        const std::vector<double>& sample_weight, double l2,
                        const Eigen::VectorXd& theta) {
    check_shapes(x, y, sample_weight, theta);
    const Eigen::VectorXd z =
        (x * theta.tail(x.cols())).array() + theta[0];
    double ll = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        // log p = -softplus(-z), log(1-p) = -softplus(z)
        const double term = y[static_cast<std::size_t>(i)] == 1 ? -softplus(-z[i]) : -softplus(z[i]);
        ll += sample_weight[static_cast<std::size_t>(i)] * term;
    }
    return ll - 0.5 * l2 * theta.tail(x.cols()).squaredNorm();
}

Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const std::vector<double>& sample_weight, double l2,
                                const Eigen::VectorXd& theta) {
    check_shapes(x, y, sample_weight, theta);
    const Eigen::VectorXd z = (x * theta.tail(x.cols())).array() + theta[0];
    Eigen::VectorXd residual(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double p = 1.0 / (1.0 + std::exp(-z[i]));
        residual[i] = sample_weight[static_cast<std::size_t>(i)] *
                      (static_cast<double>(y[static_cast<std::size_t>(i)]) - p);
    }
    Eigen::VectorXd grad(theta.size());
    grad[0] = residual.sum();
    grad.tail(x.cols()) = x.transpose() * residual - l2 * theta.tail(x.cols());
    return grad;
}

Eigen::VectorXd LogRegModel::score(const Eigen::MatrixXd& x) const {
    const Eigen::MatrixXd xs = standardizer.transform(x);
    Eigen::VectorXd z = (xs * weights).array() + bias;
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = 1.0 / (1.0 + std::exp(-z[i]));
    return z;
}

Eigen::VectorXd LogRegModel::raw_weights() const {
    return (weights.array() / standardizer.scale.array()).matrix();
}

double LogRegModel::raw_bias() const {
    return bias - (weights.array() * standardizer.mean.array() / standardizer.scale.array()).sum();
}

LogRegModel train_logreg(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const LogRegConfig& cfg, std::vector<std::string> feature_names) {
    if (x.rows() < 2) throw std::invalid_argument("train_logreg: need at least two rows");
    if (cfg.l2_penalty < 0) throw std::invalid_argument("train_logreg: negative l2_penalty");
    if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != x.cols())
        throw std::invalid_argument("train_logreg: feature name count mismatch");

    LogRegModel model;
    model.standardizer = Standardizer::fit(x);
    model.feature_names = std::move(feature_names);
    model.seed = cfg.seed;
    const Eigen::MatrixXd xs = model.standardizer.transform(x);
    const auto weights = cfg.balanced ? balanced_class_weights(y)
                                      : std::array<double, 2>{1.0, 1.0};
    const auto sw = sample_weights(y, weights);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(x.cols() + 1);
    double step = 1.0 / (1.0 + static_cast<double>(x.rows()));
    double obj = logreg_objective(xs, y, sw, cfg.l2_penalty, theta);
    for (model.iterations = 0; model.iterations < cfg.max_iterations; ++model.iterations) {
        const Eigen::VectorXd grad = logreg_gradient(xs, y, sw, cfg.l2_penalty, theta);
        model.gradient_norm = grad.norm();
        if (model.gradient_norm < cfg.tolerance) {
            model.converged = true;
            break;
        }
        double next_obj;
        while (true) {
            next_obj = logreg_objective(xs, y, sw, cfg.l2_penalty, theta + step * grad);
            if (next_obj >= obj || step < 1e-18) break;
            step *= 0.5;
        }
        if (next_obj < obj) break;  // no ascent direction left at machine precision
        theta += step * grad;
        obj = next_obj;
        step *= 1.2;
    }
    if (!model.converged) {
        model.gradient_norm = logreg_gradient(xs, y, sw, cfg.l2_penalty, theta).norm();
        Log::warn("scoring", "logreg stopped at gradient norm ", model.gradient_norm, " after ",
                  model.iterations, " iterations");
    }
    model.bias = theta[0];
    model.weights = theta.tail(x.cols());
    return model;
}

}  // namespace pseudoscore::scoring
