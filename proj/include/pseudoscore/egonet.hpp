#pragma once

#include <optional>
#include <vector>

#include "pseudoscore/graph.hpp"

namespace pseudoscore::netfeat {

/// Features of a node's direct neighborhood.
struct EgonetFeatures {
    int degree = 0;
    int good_degree = 0;  // labeled Good neighbors
    int bad_degree = 0;   // labeled Bad neighbors
    int triangle_count = 0;
    double transitivity = 0.0;  // 2T / (d(d-1)), 0 for degree < 2
    // weighted share of Bad among labeled neighbors; empty when no neighbor
    // carries a label
    std::optional<double> relational_neighbor;
};

/// Extracts neighborhood features for one node. Throws std::out_of_range for
/// an unknown node index.
EgonetFeatures egonet_features(const net::LabeledNetwork& g, int node);

/// All nodes at once; parallel by node.
std::vector<EgonetFeatures> egonet_features_all(const net::LabeledNetwork& g, int threads = 1);

}  // namespace pseudoscore::netfeat
