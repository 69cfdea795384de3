#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pseudoscore/node2vec.hpp"

namespace pseudoscore::embed {

/// Learned node vectors, one column per node.
struct Embedding {
    Eigen::MatrixXd vectors;

    int dimensions() const { return static_cast<int>(vectors.rows()); }
    int node_count() const { return static_cast<int>(vectors.cols()); }
};

/// Loss of one (input, output) sample: -log sigmoid(x.y) for a positive
/// pair, -log sigmoid(-x.y) for a drawn negative. Summing this over the
/// positive pair and its negatives gives the training objective.
double sgns_pair_loss(const Eigen::VectorXd& input, const Eigen::VectorXd& output, bool positive);

/// Analytic gradient of sgns_pair_loss with respect to both vectors.
void sgns_pair_gradient(const Eigen::VectorXd& input, const Eigen::VectorXd& output, bool positive,
                        Eigen::VectorXd& grad_input, Eigen::VectorXd& grad_output);

/// Skip-gram with negative sampling over the walk corpus. Negatives come
/// from the unigram distribution raised to 3/4. With threads = 1 the result
/// is bit-reproducible for a seed; more threads update the shared weights
/// without locks and only reproduce statistically. A corpus without any
/// (center, context) pair trains nothing and returns the random
/// initialization with a warning. epoch_loss, when given, receives the mean
/// per-sample loss of each epoch.
Embedding train_skipgram(const std::vector<std::vector<int>>& walks, int node_count,
                         const Node2VecConfig& cfg, int threads = 1,
                         std::vector<double>* epoch_loss = nullptr);

/// generate_walks followed by train_skipgram.
Embedding embed_network(const net::WeightedGraph& g, const Node2VecConfig& cfg, int threads = 1);

/// One line per node: id then the vector entries.
void write_embedding(const Embedding& e, const std::vector<std::string>& node_ids,
                     const std::string& path);

}  // namespace pseudoscore::embed
