#pragma once

#include <Eigen/Core>
#include <vector>

#include "pseudoscore/graph.hpp"

namespace pseudoscore::netfeat {

/// Personalized PageRank parameters: the fixed point solved is
///   r = alpha * A * r + (1 - alpha) * e
/// with A the column-normalized weighted adjacency operator (transition by
/// edge-weight proportion) and e the restart vector.
struct PageRankConfig {
    double alpha = 0.85;                 // damping, strictly inside (0,1)
    Eigen::VectorXd restart;             // nonnegative, sums to 1 within 1e-12
    double tolerance = 1e-9;             // L1 change between iterations
    int max_iterations = 200;
};

struct PageRankScores {
    Eigen::VectorXd scores;  // nonnegative, sums to 1
    int iterations = 0;
    double residual = 0.0;   // final L1 change
    bool converged = false;
};

/// Power iteration on the sparse adjacency. Mass of degree-0 (dangling)
/// nodes is redistributed through the restart vector. Non-convergence after
/// max_iterations is reported in the result, not thrown.
PageRankScores personalized_pagerank(const net::WeightedGraph& g, const PageRankConfig& cfg);

/// Uniform restart over all nodes.
Eigen::VectorXd uniform_restart(int node_count);

/// Uniform mass over the Bad-labeled nodes. Throws std::invalid_argument
/// when the network has no Bad node.
Eigen::VectorXd restart_from_bad_users(const net::LabeledNetwork& g);

/// Restart over the bipartite node set (users first, apps after): app nodes
/// weighted by normalized usage frequency times exp(-recency / half_life),
/// user nodes zero. Pairs with personalized_pagerank on
/// bipartite_as_graph(nb); the first user_count entries of the scores are
/// the user-side influence. Throws std::invalid_argument if every app weight
/// is zero.
Eigen::VectorXd restart_from_app_rfm(const net::BipartiteNetwork& nb,
                                     const std::vector<AppUsage>& usage,
                                     double half_life_days = 30.0);

}  // namespace pseudoscore::netfeat
