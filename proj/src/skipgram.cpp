#include "pseudoscore/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "pseudoscore/csv.hpp"
#include "pseudoscore/log.hpp"
#include "pseudoscore/parallel.hpp"
#include "pseudoscore/rng.hpp"

namespace pseudoscore::embed {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(z)) without overflow for large |z|.
double softplus(double z) {
    const double hi = z > 0 ? z : 0.0;
    return hi + std::log1p(std::exp(-std::fabs(z)));
}

}  // namespace

double sgns_pair_loss(const Eigen::VectorXd& input, const Eigen::VectorXd& output, bool positive) {
    const double s = input.dot(output);
    return softplus(positive ? -s : s);
}

void sgns_pair_gradient(const Eigen::VectorXd& input, const Eigen::VectorXd& output, bool positive,
                        Eigen::VectorXd& grad_input, Eigen::VectorXd& grad_output) {
    const double s = input.dot(output);
    const double g = sigmoid(s) - (positive ? 1.0 : 0.0);
    grad_input = g * output;
    grad_output = g * input;
}

namespace {

struct TrainShared {
    const std::vector<std::vector<int>>* walks;
    Eigen::MatrixXd* w_in;
    Eigen::MatrixXd* w_out;
    const std::vector<double>* noise_cum;
    const Node2VecConfig* cfg;
    std::size_t total_positions;  // across all epochs, for the decay schedule
    std::atomic<std::size_t> processed{0};
};

// Trains one contiguous block of walks. Updates go straight into the shared
// matrices; with a single worker this is exact SGD, with several it is the
// usual lock-free approximation.
void train_block(TrainShared& sh, std::size_t lo, std::size_t hi, Rng rng, double& loss_sum,
                 std::size_t& sample_count) {
    const auto& cfg = *sh.cfg;
    Eigen::MatrixXd& w_in = *sh.w_in;
    Eigen::MatrixXd& w_out = *sh.w_out;
    Eigen::VectorXd input_grad(cfg.dimensions);
    const double floor = cfg.learning_rate * 1e-4;
    for (std::size_t w = lo; w < hi; ++w) {
        const auto& walk = (*sh.walks)[w];
        const std::size_t done = sh.processed.fetch_add(walk.size(), std::memory_order_relaxed);
        const double progress = static_cast<double>(done) / static_cast<double>(sh.total_positions);
        const double alpha = std::max(cfg.learning_rate * (1.0 - progress), floor);
        const int len = static_cast<int>(walk.size());
        for (int i = 0; i < len; ++i) {
            const int center = walk[i];
            const int jlo = std::max(0, i - cfg.context_window);
            const int jhi = std::min(len - 1, i + cfg.context_window);
            for (int j = jlo; j <= jhi; ++j) {
                if (j == i) continue;
                const int context = walk[j];
                input_grad.setZero();
                {
                    const double s = w_out.col(context).dot(w_in.col(center));
                    const double g = sigmoid(s) - 1.0;
                    loss_sum += softplus(-s);
                    ++sample_count;
                    input_grad.noalias() += g * w_out.col(context);
                    w_out.col(context).noalias() -= alpha * g * w_in.col(center);
                }
                for (int k = 0; k < cfg.negative_samples; ++k) {
                    const int target = rng.categorical_from_cumulative(*sh.noise_cum);
                    if (target == context) continue;
                    const double s = w_out.col(target).dot(w_in.col(center));
                    const double g = sigmoid(s);
                    loss_sum += softplus(s);
                    ++sample_count;
                    input_grad.noalias() += g * w_out.col(target);
                    w_out.col(target).noalias() -= alpha * g * w_in.col(center);
                }
                w_in.col(center).noalias() -= alpha * input_grad;
            }
        }
    }
}

}  // namespace

Embedding train_skipgram(const std::vector<std::vector<int>>& walks, int node_count,
                         const Node2VecConfig& cfg, int threads, std::vector<double>* epoch_loss) {
    validate(cfg);
    if (node_count <= 0) throw std::invalid_argument("train_skipgram: node_count must be positive");
    if (walks.empty()) throw std::invalid_argument("train_skipgram: empty walk corpus");
    if (epoch_loss) epoch_loss->clear();

    std::vector<double> counts(static_cast<std::size_t>(node_count), 0.0);
    std::size_t positions = 0;
    std::size_t pair_walks = 0;
    for (const auto& walk : walks) {
        for (int node : walk) {
            if (node < 0 || node >= node_count)
                throw std::invalid_argument("train_skipgram: walk node outside [0, node_count)");
            counts[static_cast<std::size_t>(node)] += 1.0;
        }
        positions += walk.size();
        if (walk.size() >= 2) ++pair_walks;
    }
    int distinct = 0;
    for (double c : counts)
        if (c > 0) ++distinct;

    const int d = cfg.dimensions;
    Eigen::MatrixXd w_in(d, node_count);
    {
        Rng init_rng(derive_seed(cfg.seed, "sgns.init"));
        const double half = 0.5 / d;
        for (int col = 0; col < node_count; ++col)
            for (int row = 0; row < d; ++row) w_in(row, col) = init_rng.uniform(-half, half);
    }

    if (pair_walks == 0 || distinct < 2) {
        Log::warn("embed", "degenerate walk corpus (", distinct,
                  " distinct node(s)); returning untrained vectors");
        return {std::move(w_in)};
    }

    std::vector<double> noise_cum(static_cast<std::size_t>(node_count));
    double acc = 0.0;
    for (int v = 0; v < node_count; ++v) {
        acc += std::pow(counts[static_cast<std::size_t>(v)], 0.75);
        noise_cum[static_cast<std::size_t>(v)] = acc;
    }

    Eigen::MatrixXd w_out = Eigen::MatrixXd::Zero(d, node_count);
    TrainShared sh;
    sh.walks = &walks;
    sh.w_in = &w_in;
    sh.w_out = &w_out;
    sh.noise_cum = &noise_cum;
    sh.cfg = &cfg;
    sh.total_positions = positions * static_cast<std::size_t>(cfg.epochs);

    threads = resolve_threads(threads);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::size_t samples = 0;
        if (threads <= 1) {
            train_block(sh, 0, walks.size(),
                        Rng(derive_seed(cfg.seed, "sgns.train", static_cast<std::uint64_t>(epoch))),
                        loss_sum, samples);
        } else {
            std::vector<std::thread> pool;
            std::vector<double> losses(static_cast<std::size_t>(threads), 0.0);
            std::vector<std::size_t> sample_counts(static_cast<std::size_t>(threads), 0);
            for (int t = 0; t < threads; ++t) {
                const std::size_t lo = walks.size() * static_cast<std::size_t>(t) /
                                       static_cast<std::size_t>(threads);
                const std::size_t hi = walks.size() * static_cast<std::size_t>(t + 1) /
                                       static_cast<std::size_t>(threads);
                pool.emplace_back([&sh, lo, hi, t, epoch, &cfg, &losses, &sample_counts] {
                    train_block(sh, lo, hi,
                                Rng(derive_seed(cfg.seed, "sgns.train",
                                                static_cast<std::uint64_t>(epoch),
                                                static_cast<std::uint64_t>(t))),
                                losses[static_cast<std::size_t>(t)],
                                sample_counts[static_cast<std::size_t>(t)]);
                });
            }
            for (auto& th : pool) th.join();
            for (int t = 0; t < threads; ++t) {
                loss_sum += losses[static_cast<std::size_t>(t)];
                samples += sample_counts[static_cast<std::size_t>(t)];
            }
        }
        if (epoch_loss) epoch_loss->push_back(samples ? loss_sum / static_cast<double>(samples) : 0.0);
    }

    if (!w_in.allFinite())
        throw std::runtime_error(
            "train_skipgram: non-finite embedding entries; lower the learning rate");
    return {std::move(w_in)};
}

Embedding embed_network(const net::WeightedGraph& g, const Node2VecConfig& cfg, int threads) {
    const auto walks = generate_walks(g, cfg, threads);
    if (walks.empty()) return {Eigen::MatrixXd(cfg.dimensions, 0)};
    return train_skipgram(walks, g.node_count(), cfg, threads);
}

void write_embedding(const Embedding& e, const std::vector<std::string>& node_ids,
                     const std::string& path) {
    if (static_cast<int>(node_ids.size()) != e.node_count())
        throw std::invalid_argument("write_embedding: one id per node required");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_embedding: cannot open " + path);
    for (int v = 0; v < e.node_count(); ++v) {
        out << node_ids[static_cast<std::size_t>(v)];
        for (int row = 0; row < e.dimensions(); ++row)
            out << '\t' << format_double(e.vectors(row, v));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_embedding: write failed for " + path);
}

}  // namespace pseudoscore::embed
