#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pseudoscore/graph.hpp"

namespace pseudoscore::embed {

struct Node2VecConfig {
    int dimensions = 64;
    int walks_per_node = 10;
    int walk_length = 80;       // nodes per walk, start included
    int context_window = 10;
    double return_param = 1.0;  // p, stepping back to the previous node
    double inout_param = 1.0;   // q, stepping away from its neighborhood
    int negative_samples = 5;
    int epochs = 5;
    double learning_rate = 0.025;  // linearly decayed while training
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument unless every field is positive and
/// context_window < walk_length.
void validate(const Node2VecConfig& cfg);

/// Second-order transition distribution standing at `curr` after arriving
/// from `prev`. Unnormalized weight is w(curr,x) scaled by 1/p when x is
/// prev itself, by 1 when x neighbors prev, by 1/q otherwise; pass prev = -1
/// for the first step, which is plain weight-proportional. Pairs come back
/// in neighbor order and sum to 1; a neighborless curr yields an empty list.
std::vector<std::pair<int, double>> walk_transition_probs(const net::WeightedGraph& g, int prev,
                                                          int curr, const Node2VecConfig& cfg);

/// Biased walk corpus: walks_per_node rounds, each visiting every node once
/// in a freshly shuffled order. Walks truncate early at neighborless nodes.
/// Corpus content and order depend only on the seed, not on thread count.
std::vector<std::vector<int>> generate_walks(const net::WeightedGraph& g,
                                             const Node2VecConfig& cfg, int threads = 1);

}  // namespace pseudoscore::embed
