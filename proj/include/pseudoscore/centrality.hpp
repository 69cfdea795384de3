#pragma once

#include <optional>
#include <vector>

#include "pseudoscore/graph.hpp"

namespace pseudoscore::netfeat {

struct Closeness {
    // average BFS hop distance to the reachable nodes; empty for an isolated
    // node. Reported raw (larger = less central), not as a reciprocal.
    std::optional<double> avg_distance;
    int reachable_count = 0;
};

/// Unweighted closeness of one node. Similarity weights are not costs, so
/// distances are hop counts. Throws std::out_of_range for an unknown index.
Closeness closeness(const net::WeightedGraph& g, int node);

std::vector<Closeness> closeness_all(const net::WeightedGraph& g, int threads = 1);

/// Unweighted shortest-path betweenness for every node (Brandes dependency
/// accumulation, parallel by BFS source). Undirected convention: each
/// unordered pair counted once.
std::vector<double> betweenness(const net::WeightedGraph& g, int threads = 1);

}  // namespace pseudoscore::netfeat
