#include "pseudoscore/neural.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pseudoscore/rng.hpp"

namespace pseudoscore::scoring {

namespace {

double softplus(double z) {
    const double hi = z > 0 ? z : 0.0;
    return hi + std::log1p(std::exp(-std::fabs(z)));
}

struct ParamView {
    Eigen::Map<const Eigen::MatrixXd> w1;
    Eigen::Map<const Eigen::VectorXd> b1;
    Eigen::Map<const Eigen::VectorXd> w2;
    double b2;
};

ParamView unpack(const Eigen::VectorXd& theta, int inputs, int hidden) {
    const double* p = theta.data();
    return {Eigen::Map<const Eigen::MatrixXd>(p, hidden, inputs),
            Eigen::Map<const Eigen::VectorXd>(p + hidden * inputs, hidden),
            Eigen::Map<const Eigen::VectorXd>(p + hidden * inputs + hidden, hidden),
            p[hidden * inputs + 2 * hidden]};
}

void check_shapes(const Eigen::VectorXd& theta, int hidden, const Eigen::MatrixXd& x,
                  const std::vector<int>& y, const std::vector<double>& sample_weight) {
    if (hidden < 1) throw std::invalid_argument("feedforward: hidden_units must be >= 1");
    if (theta.size() != feedforward_param_count(static_cast<int>(x.cols()), hidden))
        throw std::invalid_argument("feedforward: theta length mismatch");
    if (static_cast<Eigen::Index>(y.size()) != x.rows())
        throw std::invalid_argument("feedforward: label count mismatch");
    if (sample_weight.size() != y.size())
        throw std::invalid_argument("feedforward: weight count mismatch");
    if (x.rows() == 0) throw std::invalid_argument("feedforward: empty batch");
}

}  // namespace

int feedforward_param_count(int inputs, int hidden) { return hidden * inputs + 2 * hidden + 1; }

double feedforward_loss(const Eigen::VectorXd& theta, int hidden, const Eigen::MatrixXd& x,
                        const std::vector<int>& y, const std::vector<double>& sample_weight,
                        double l2) {
    check_shapes(theta, hidden, x, y, sample_weight);
    const auto pv = unpack(theta, static_cast<int>(x.cols()), hidden);
    const Eigen::MatrixXd h = ((x * pv.w1.transpose()).rowwise() + pv.b1.transpose())
                                  .array()
                                  .tanh();
    const Eigen::VectorXd z = (h * pv.w2).array() + pv.b2;
    double loss = 0.0, weight_sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double term = y[static_cast<std::size_t>(i)] == 1 ? softplus(-z[i]) : softplus(z[i]);
        loss += sample_weight[static_cast<std::size_t>(i)] * term;
        weight_sum += sample_weight[static_cast<std::size_t>(i)];
    }
    loss /= weight_sum;
    loss += 0.5 * l2 * (pv.w1.squaredNorm() + pv.w2.squaredNorm());
    return loss;
}

Eigen::VectorXd feedforward_gradient(const Eigen::VectorXd& theta, int hidden,
                                     const Eigen::MatrixXd& x, const std::vector<int>& y,
                                     const std::vector<double>& sample_weight, double l2) {
    check_shapes(theta, hidden, x, y, sample_weight);
    const auto inputs = static_cast<int>(x.cols());
    const auto pv = unpack(theta, inputs, hidden);

    const Eigen::MatrixXd h = ((x * pv.w1.transpose()).rowwise() + pv.b1.transpose())
                                  .array()
                                  .tanh();
    const Eigen::VectorXd z = (h * pv.w2).array() + pv.b2;

    double weight_sum = 0.0;
    for (double w : sample_weight) weight_sum += w;
    Eigen::VectorXd dz(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double p = 1.0 / (1.0 + std::exp(-z[i]));
        dz[i] = sample_weight[static_cast<std::size_t>(i)] *
                (p - static_cast<double>(y[static_cast<std::size_t>(i)])) / weight_sum;
    }

    const Eigen::MatrixXd dh =
        (dz * pv.w2.transpose()).cwiseProduct((1.0 - h.array().square()).matrix());

    Eigen::VectorXd grad(theta.size());
    Eigen::Map<Eigen::MatrixXd> g_w1(grad.data(), hidden, inputs);
    Eigen::Map<Eigen::VectorXd> g_b1(grad.data() + hidden * inputs, hidden);
    Eigen::Map<Eigen::VectorXd> g_w2(grad.data() + hidden * inputs + hidden, hidden);
    g_w1 = dh.transpose() * x + l2 * pv.w1;
    g_b1 = dh.colwise().sum().transpose();
    g_w2 = h.transpose() * dz + l2 * pv.w2;
    grad[hidden * inputs + 2 * hidden] = dz.sum();
    return grad;
}

Eigen::VectorXd FeedforwardModel::score(const Eigen::MatrixXd& x) const {
    const Eigen::MatrixXd xs = standardizer.transform(x);
    const Eigen::MatrixXd h =
        ((xs * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
    Eigen::VectorXd z = (h * w2).array() + b2;
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = 1.0 / (1.0 + std::exp(-z[i]));
    return z;
}

FeedforwardModel train_feedforward(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                   const FeedforwardConfig& cfg,
                                   std::vector<std::string> feature_names) {
    if (cfg.hidden_units < 1)
        throw std::invalid_argument("train_feedforward: hidden_units must be >= 1");
    if (cfg.init_scale == 0.0)
        throw std::invalid_argument(
            "train_feedforward: init_scale 0 keeps all hidden units identical; use a positive value");
    if (cfg.init_scale < 0) throw std::invalid_argument("train_feedforward: negative init_scale");
    if (cfg.epochs < 1) throw std::invalid_argument("train_feedforward: epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("train_feedforward: batch_size must be >= 1");
    if (cfg.learning_rate <= 0)
        throw std::invalid_argument("train_feedforward: learning_rate must be positive");
    if (x.rows() < 2) throw std::invalid_argument("train_feedforward: need at least two rows");
    if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != x.cols())
        throw std::invalid_argument("train_feedforward: feature name count mismatch");

    FeedforwardModel model;
    model.standardizer = Standardizer::fit(x);
    model.feature_names = std::move(feature_names);
    model.seed = cfg.seed;
    const Eigen::MatrixXd xs = model.standardizer.transform(x);
    const auto weights = cfg.balanced ? balanced_class_weights(y)
                                      : std::array<double, 2>{1.0, 1.0};
    const auto sw = sample_weights(y, weights);

    const auto n = static_cast<int>(xs.rows());
    const auto inputs = static_cast<int>(xs.cols());
    const int hidden = cfg.hidden_units;
    Eigen::VectorXd theta(feedforward_param_count(inputs, hidden));
    {
        Rng init_rng(derive_seed(cfg.seed, "nn.init"));
        for (int i = 0; i < hidden * inputs; ++i)
            theta[i] = init_rng.uniform(-cfg.init_scale, cfg.init_scale);
        for (int i = hidden * inputs; i < hidden * inputs + hidden; ++i) theta[i] = 0.0;
        for (int i = hidden * inputs + hidden; i < hidden * inputs + 2 * hidden; ++i)
            theta[i] = init_rng.uniform(-cfg.init_scale, cfg.init_scale);
        theta[hidden * inputs + 2 * hidden] = 0.0;
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Eigen::MatrixXd xb;
    std::vector<int> yb;
    std::vector<double> wb;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, "nn.order", static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);
        for (int start = 0; start < n; start += cfg.batch_size) {
            const int stop = std::min(start + cfg.batch_size, n);
            const int m = stop - start;
            xb.resize(m, inputs);
            yb.resize(static_cast<std::size_t>(m));
            wb.resize(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                const int r = order[static_cast<std::size_t>(start + i)];
                xb.row(i) = xs.row(r);
                yb[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(r)];
                wb[static_cast<std::size_t>(i)] = sw[static_cast<std::size_t>(r)];
            }
            theta -= cfg.learning_rate *
                     feedforward_gradient(theta, hidden, xb, yb, wb, cfg.l2_penalty);
        }
        const double loss = feedforward_loss(theta, hidden, xs, y, sw, cfg.l2_penalty);
        if (std::isnan(loss))
            throw std::runtime_error("train_feedforward: loss diverged to NaN at epoch " +
                                     std::to_string(epoch) + "; lower the learning rate");
        model.epoch_loss.push_back(loss);
    }

    const auto pv = unpack(theta, inputs, hidden);
    model.w1 = pv.w1;
    model.b1 = pv.b1;
    model.w2 = pv.w2;
    model.b2 = pv.b2;
    return model;
}

}  // namespace pseudoscore::scoring
