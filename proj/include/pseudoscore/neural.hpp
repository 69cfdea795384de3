#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pseudoscore/model.hpp"

namespace pseudoscore::scoring {

struct FeedforwardConfig {
    int hidden_units = 16;
    int epochs = 200;
    double learning_rate = 0.05;
    int batch_size = 32;
    double init_scale = 0.1;  // uniform half-width; zero would freeze the symmetry
    double l2_penalty = 0.0;
    bool balanced = true;
    std::uint64_t seed = 0;
};

/// Parameters of the one-hidden-layer network packed flat:
/// w1 (hidden x inputs, column-major), b1, w2, b2.
int feedforward_param_count(int inputs, int hidden);

/// Weighted mean cross-entropy of tanh-hidden / sigmoid-output forward
/// passes over the batch, plus (l2/2) * squared weight norm (biases free).
double feedforward_loss(const Eigen::VectorXd& theta, int hidden, const Eigen::MatrixXd& x,
                        const std::vector<int>& y, const std::vector<double>& sample_weight,
                        double l2);

/// Backpropagated gradient of feedforward_loss with respect to theta.
Eigen::VectorXd feedforward_gradient(const Eigen::VectorXd& theta, int hidden,
                                     const Eigen::MatrixXd& x, const std::vector<int>& y,
                                     const std::vector<double>& sample_weight, double l2);

struct FeedforwardModel {
    Standardizer standardizer;
    Eigen::MatrixXd w1;  // hidden x inputs
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;
    double b2 = 0.0;
    std::vector<double> epoch_loss;  // full-set loss after each epoch
    std::vector<std::string> feature_names;
    std::uint64_t seed = 0;

    Eigen::VectorXd score(const Eigen::MatrixXd& x) const;
};

/// Mini-batch SGD on the standardized design matrix, deterministic per
/// seed. Throws std::invalid_argument on init_scale = 0 and
/// std::runtime_error when the loss turns NaN (diverged).
FeedforwardModel train_feedforward(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                   const FeedforwardConfig& cfg,
                                   std::vector<std::string> feature_names = {});

}  // namespace pseudoscore::scoring
