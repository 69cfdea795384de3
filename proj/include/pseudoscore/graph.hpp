#pragma once

#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pseudoscore/records.hpp"

namespace pseudoscore::net {

/// Undirected weighted graph with sorted neighbor lists (CSR layout).
/// Immutable after construction; all feature extractors iterate neighbors.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Builds from undirected edges (u, v, w). Rejects self-loops,
    /// duplicate edges and non-positive weights.
    static WeightedGraph from_edges(int node_count,
                                    const std::vector<std::tuple<int, int, double>>& edges);

    int node_count() const { return static_cast<int>(offsets_.size()) - 1; }
    std::size_t edge_count() const { return adjacency_.size() / 2; }

    int degree(int u) const { return offsets_[u + 1] - offsets_[u]; }
    std::span<const int> neighbors(int u) const {
        return {adjacency_.data() + offsets_[u], static_cast<std::size_t>(degree(u))};
    }
    std::span<const double> weights(int u) const {
        return {weights_.data() + offsets_[u], static_cast<std::size_t>(degree(u))};
    }
    double weighted_degree(int u) const { return weighted_degree_[u]; }

    /// Binary search in the sorted neighbor list.
    bool has_edge(int u, int v) const;
    /// Weight of edge (u, v); 0 when absent.
    double edge_weight(int u, int v) const;

private:
    std::vector<int> offsets_;   // node_count + 1
    std::vector<int> adjacency_; // sorted per node
    std::vector<double> weights_;
    std::vector<double> weighted_degree_;
};

/// Users linked to the apps they use frequently (two node classes).
struct BipartiteNetwork {
    std::vector<std::string> user_ids;
    std::vector<std::string> app_ids;
    std::unordered_map<std::string, int> user_index;
    std::unordered_map<std::string, int> app_index;
    // adjacency user -> apps, sorted by app index, with edge weights
    std::vector<std::vector<std::pair<int, double>>> user_apps;
    // reverse adjacency app -> users, sorted by user index
    std::vector<std::vector<std::pair<int, double>>> app_users;

    int user_count() const { return static_cast<int>(user_ids.size()); }
    int app_count() const { return static_cast<int>(app_ids.size()); }
    std::size_t edge_count() const;
};

/// User-user pseudo-social network: nodes are users, an edge means shared
/// app adoption; weights count shared apps (or sum min intensities).
struct UnipartiteNetwork {
    std::vector<std::string> ids;
    std::unordered_map<std::string, int> index;
    WeightedGraph graph;

    int node_count() const { return graph.node_count(); }
    int index_of(const std::string& id) const;  // throws on unknown id
};

struct LabeledNetwork {
    UnipartiteNetwork network;
    std::vector<Label> labels;  // one per node, Unlabeled permitted
};

enum class BipartiteWeightMode { Unit, UsageIntensity };
enum class ProjectionRule { SharedCount, MinIntensity };

struct BipartiteOptions {
    double frequency_threshold = 1.0;  // uses/week needed for an edge
    BipartiteWeightMode weight_mode = BipartiteWeightMode::Unit;
};

struct ProjectionOptions {
    ProjectionRule rule = ProjectionRule::SharedCount;
    bool dense_app_guard = false;     // skip near-ubiquitous apps when projecting
    double max_app_user_share = 0.2;  // guard threshold
};

/// Connects each user to every app with uses_per_week >= the threshold.
/// Users and apps appearing in the usage list become nodes even when no row
/// passes the threshold; `extra_user_ids` registers users with no usage rows
/// so they survive as isolated nodes.
BipartiteNetwork build_bipartite(const std::vector<AppUsage>& usage,
                                 const BipartiteOptions& options = {},
                                 std::span<const std::string> extra_user_ids = {});

/// One-mode projection: users are linked iff they share at least one app.
/// Deterministic and independent of input edge order.
UnipartiteNetwork project_to_unipartite(const BipartiteNetwork& nb,
                                        const ProjectionOptions& options = {});

/// Joins labels to the network; nodes missing from the map become Unlabeled.
/// Labels for ids that are not nodes are counted into *ignored_labels.
LabeledNetwork attach_labels(UnipartiteNetwork nu,
                             const std::unordered_map<std::string, Label>& labels,
                             int* ignored_labels = nullptr);

/// The bipartite adjacency as one undirected graph: user nodes first
/// (indices [0, user_count)), app nodes after. Used for influence scoring
/// and embeddings on the bipartite architecture.
WeightedGraph bipartite_as_graph(const BipartiteNetwork& nb);

/// Edge-list dump/restore ("node_id node_id weight" per line; isolated nodes
/// in "#node <id>" comment lines so round-trips preserve them).
void write_unipartite(const UnipartiteNetwork& nu, const std::string& path);
UnipartiteNetwork read_unipartite(const std::string& path);
void write_bipartite(const BipartiteNetwork& nb, const std::string& path);
BipartiteNetwork read_bipartite(const std::string& path);

}  // namespace pseudoscore::net
