#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pseudoscore/feature_matrix.hpp"
#include "pseudoscore/graph.hpp"
#include "pseudoscore/records.hpp"
#include "pseudoscore/skipgram.hpp"

namespace pseudoscore::scoring {

/// Age (missing as NaN), device app count, region one-hots over the codes
/// seen in the data plus a region_missing flag.
void add_sociodemographic_features(FeatureMatrix& m, const std::vector<UserRecord>& users);

/// Time-of-day partition for behavior aggregation: bucket names with their
/// exclusive upper hour bounds, increasing, last one 24.
struct BehaviorBuckets {
    std::vector<std::pair<std::string, int>> buckets = {
        {"night", 6}, {"morning", 12}, {"afternoon", 18}, {"evening", 24}};
};

/// Event count and total duration per direction, kind, weekday/weekend and
/// time-of-day bucket. Only events dated before the user's first loan grant
/// enter the aggregates (users without loans keep all their events), so the
/// features never peek past the lending decision.
void add_behavior_features(FeatureMatrix& m, const std::vector<CallEvent>& calls,
                           const std::vector<LoanRecord>& loans,
                           const BehaviorBuckets& buckets = {});

/// Egonet statistics per user: degree, labeled-neighbor degrees, triangles,
/// transitivity, the weighted Bad share among labeled neighbors (NaN when no
/// neighbor is labeled) and a has_labeled_neighbor flag.
void add_neighborhood_features(FeatureMatrix& m, const net::LabeledNetwork& g, int threads = 1);

/// Closeness (average hop distance, NaN for isolated users), reachable node
/// count and, optionally, betweenness; the latter costs a BFS per node.
void add_centrality_features(FeatureMatrix& m, const net::LabeledNetwork& g,
                             bool include_betweenness = true, int threads = 1);

struct InfluenceOptions {
    double alpha = 0.85;
    double tolerance = 1e-9;
    int max_iterations = 200;
    double rfm_half_life_days = 30.0;
};

/// Personalized PageRank exposure scores: ppr_bad restarts on the labeled
/// defaulters of the user network, ppr_app_rfm walks the bipartite network
/// restarting on recency/frequency-weighted apps. A restart that cannot be
/// formed (no Bad user, no active app) yields an all-NaN column and a
/// warning instead of failing the whole feature pass.
void add_influence_features(FeatureMatrix& m, const net::LabeledNetwork& nu,
                            const net::BipartiteNetwork& nb, const std::vector<AppUsage>& usage,
                            const InfluenceOptions& options = {});

/// Embedding columns emb_0..emb_{d-1}. node_ids names the embedding columns
/// in node order; for bipartite embeddings pass the user ids (user nodes
/// come first).
void add_embedding_features(FeatureMatrix& m, const embed::Embedding& embedding,
                            const std::vector<std::string>& node_ids);

}  // namespace pseudoscore::scoring
