#include "pseudoscore/egonet.hpp"

#include <stdexcept>

#include "pseudoscore/parallel.hpp"

namespace pseudoscore::netfeat {

namespace {

/// Edges among the neighbors of u, via sorted-list intersections.
/// Each neighbor pair (v, w) with an edge is seen from both sides, so the
/// intersection total is twice the triangle count through u.
int triangles_through(const net::WeightedGraph& g, int u) {
    const auto nbrs = g.neighbors(u);
    long total = 0;
    for (int v : nbrs) {
        const auto vn = g.neighbors(v);
        std::size_t i = 0, j = 0;
        while (i < nbrs.size() && j < vn.size()) {
            if (nbrs[i] == vn[j]) {
                ++total;
                ++i;
                ++j;
            } else if (nbrs[i] < vn[j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }
    return static_cast<int>(total / 2);
}

}  // namespace

EgonetFeatures egonet_features(const net::LabeledNetwork& g, int node) {
    const auto& graph = g.network.graph;
    if (node < 0 || node >= graph.node_count()) throw std::out_of_range("unknown node index");

    EgonetFeatures f;
    const auto nbrs = graph.neighbors(node);
    const auto ws = graph.weights(node);
    f.degree = static_cast<int>(nbrs.size());

    double bad_weight = 0.0, labeled_weight = 0.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        switch (g.labels[nbrs[i]]) {
            case Label::Good:
                ++f.good_degree;
                labeled_weight += ws[i];
                break;
            case Label::Bad:
                ++f.bad_degree;
                labeled_weight += ws[i];
                bad_weight += ws[i];
                break;
            case Label::Unlabeled:
                break;  // counts toward degree only
        }
    }
    f.triangle_count = triangles_through(graph, node);
    f.transitivity = f.degree >= 2
                         ? 2.0 * f.triangle_count / (static_cast<double>(f.degree) * (f.degree - 1))
                         : 0.0;
    if (labeled_weight > 0) f.relational_neighbor = bad_weight / labeled_weight;
    return f;
}

std::vector<EgonetFeatures> egonet_features_all(const net::LabeledNetwork& g, int threads) {
    std::vector<EgonetFeatures> out(static_cast<std::size_t>(g.network.node_count()));
    parallel_for(out.size(), threads, [&](std::size_t u) {
        out[u] = egonet_features(g, static_cast<int>(u));
    });
    return out;
}

}  // namespace pseudoscore::netfeat
