#include "pseudoscore/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "pseudoscore/centrality.hpp"
#include "pseudoscore/egonet.hpp"
#include "pseudoscore/log.hpp"
#include "pseudoscore/pagerank.hpp"

namespace pseudoscore::scoring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::unordered_map<std::string, int> row_lookup(const FeatureMatrix& m) {
    std::unordered_map<std::string, int> idx;
    idx.reserve(m.row_ids().size());
    for (int r = 0; r < m.row_count(); ++r) idx.emplace(m.row_ids()[static_cast<std::size_t>(r)], r);
    return idx;
}

}  // namespace

void add_sociodemographic_features(FeatureMatrix& m, const std::vector<UserRecord>& users) {
    const auto rows = row_lookup(m);
    const int n = m.row_count();

    Eigen::VectorXd age = Eigen::VectorXd::Constant(n, kNaN);
    Eigen::VectorXd apps = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd region_missing = Eigen::VectorXd::Zero(n);
    std::set<std::string> regions;
    for (const auto& u : users)
        if (u.region) regions.insert(*u.region);
    std::unordered_map<std::string, Eigen::VectorXd> onehot;
    for (const auto& r : regions) onehot.emplace(r, Eigen::VectorXd::Zero(n));

    for (const auto& u : users) {
        const auto it = rows.find(u.user_id);
        if (it == rows.end()) continue;
        const int row = it->second;
        if (u.age) age[row] = *u.age;
        apps[row] = u.device_app_count;
        if (u.region)
            onehot.at(*u.region)[row] = 1.0;
        else
            region_missing[row] = 1.0;
    }

    m.add_column("age", FeatureGroup::Sociodemographic, std::move(age));
    m.add_column("device_app_count", FeatureGroup::Sociodemographic, std::move(apps));
    for (const auto& r : regions)
        m.add_column("region_" + r, FeatureGroup::Sociodemographic, std::move(onehot.at(r)));
    m.add_column("region_missing", FeatureGroup::Sociodemographic, std::move(region_missing));
}

void add_behavior_features(FeatureMatrix& m, const std::vector<CallEvent>& calls,
                           const std::vector<LoanRecord>& loans, const BehaviorBuckets& buckets) {
    if (buckets.buckets.empty() || buckets.buckets.back().second != 24)
        throw std::invalid_argument("behavior buckets must end at hour 24");
    for (std::size_t i = 1; i < buckets.buckets.size(); ++i)
        if (buckets.buckets[i].second <= buckets.buckets[i - 1].second)
            throw std::invalid_argument("behavior bucket bounds must increase");

    const auto rows = row_lookup(m);
    const int n = m.row_count();

    std::unordered_map<std::string, Date> first_grant;
    for (const auto& loan : loans) {
        const auto it = first_grant.find(loan.user_id);
        if (it == first_grant.end() || loan.grant_date < it->second)
            first_grant.insert_or_assign(loan.user_id, loan.grant_date);
    }

    const auto b = buckets.buckets.size();
    // direction x kind x daytype x bucket, each with a count and a duration
    const std::size_t cells = 2 * 2 * 2 * b;
    std::vector<Eigen::VectorXd> counts(cells, Eigen::VectorXd::Zero(n));
    std::vector<Eigen::VectorXd> durations(cells, Eigen::VectorXd::Zero(n));

    for (const auto& ev : calls) {
        const auto it = rows.find(ev.user_id);
        if (it == rows.end()) continue;
        const auto grant = first_grant.find(ev.user_id);
        if (grant != first_grant.end() && !(ev.timestamp.date() < grant->second)) continue;

        const int hour = static_cast<int>(ev.timestamp.seconds_of_day() / 3600);
        std::size_t bucket = 0;
        while (bucket + 1 < b && hour >= buckets.buckets[bucket].second) ++bucket;
        const std::size_t dir = ev.direction == CallDirection::Made ? 0 : 1;
        const std::size_t kind = ev.kind == CallKind::Call ? 0 : 1;
        const std::size_t weekend = is_weekend(ev.timestamp.date()) ? 1 : 0;
        const std::size_t cell = ((dir * 2 + kind) * 2 + weekend) * b + bucket;
        counts[cell][it->second] += 1.0;
        durations[cell][it->second] += ev.duration_s;
    }

    const char* dirs[] = {"made", "received"};
    const char* kinds[] = {"call", "sms"};
    const char* daytypes[] = {"weekday", "weekend"};
    for (std::size_t dir = 0; dir < 2; ++dir)
        for (std::size_t kind = 0; kind < 2; ++kind)
            for (std::size_t day = 0; day < 2; ++day)
                for (std::size_t bucket = 0; bucket < b; ++bucket) {
                    const std::size_t cell = ((dir * 2 + kind) * 2 + day) * b + bucket;
                    const std::string stem = std::string(dirs[dir]) + "_" + kinds[kind] + "_" +
                                             daytypes[day] + "_" + buckets.buckets[bucket].first;
                    m.add_column(stem + "_count", FeatureGroup::Behavior,
                                 std::move(counts[cell]));
                    m.add_column(stem + "_duration", FeatureGroup::Behavior,
                                 std::move(durations[cell]));
                }
}

void add_neighborhood_features(FeatureMatrix& m, const net::LabeledNetwork& g, int threads) {
    const auto feats = netfeat::egonet_features_all(g, threads);
    const int n = m.row_count();
    Eigen::VectorXd degree(n), good_degree(n), bad_degree(n), triangles(n), transitivity(n),
        relational(n), has_labeled(n);
    for (int r = 0; r < n; ++r) {
        const int node = g.network.index_of(m.row_ids()[static_cast<std::size_t>(r)]);
        const auto& f = feats[static_cast<std::size_t>(node)];
        degree[r] = f.degree;
        good_degree[r] = f.good_degree;
        bad_degree[r] = f.bad_degree;
        triangles[r] = f.triangle_count;
        transitivity[r] = f.transitivity;
        relational[r] = f.relational_neighbor ? *f.relational_neighbor : kNaN;
        has_labeled[r] = f.relational_neighbor ? 1.0 : 0.0;
    }
    m.add_column("degree", FeatureGroup::Neighborhood, std::move(degree));
    m.add_column("good_degree", FeatureGroup::Neighborhood, std::move(good_degree));
    m.add_column("bad_degree", FeatureGroup::Neighborhood, std::move(bad_degree));
    m.add_column("triangle_count", FeatureGroup::Neighborhood, std::move(triangles));
    m.add_column("transitivity", FeatureGroup::Neighborhood, std::move(transitivity));
    m.add_column("relational_neighbor", FeatureGroup::Neighborhood, std::move(relational));
    m.add_column("has_labeled_neighbor", FeatureGroup::Neighborhood, std::move(has_labeled));
}

void add_centrality_features(FeatureMatrix& m, const net::LabeledNetwork& g,
                             bool include_betweenness, int threads) {
    const auto close = netfeat::closeness_all(g.network.graph, threads);
    const int n = m.row_count();
    Eigen::VectorXd avg_dist(n), reachable(n);
    for (int r = 0; r < n; ++r) {
        const int node = g.network.index_of(m.row_ids()[static_cast<std::size_t>(r)]);
        const auto& c = close[static_cast<std::size_t>(node)];
        avg_dist[r] = c.avg_distance ? *c.avg_distance : kNaN;
        reachable[r] = c.reachable_count;
    }
    m.add_column("closeness", FeatureGroup::Centrality, std::move(avg_dist));
    m.add_column("closeness_reachable", FeatureGroup::Centrality, std::move(reachable));

    if (!include_betweenness) return;
    const auto btw = netfeat::betweenness(g.network.graph, threads);
    Eigen::VectorXd betweenness(n);
    for (int r = 0; r < n; ++r)
        betweenness[r] =
            btw[static_cast<std::size_t>(g.network.index_of(m.row_ids()[static_cast<std::size_t>(r)]))];
    m.add_column("betweenness", FeatureGroup::Centrality, std::move(betweenness));
}

void add_influence_features(FeatureMatrix& m, const net::LabeledNetwork& nu,
                            const net::BipartiteNetwork& nb, const std::vector<AppUsage>& usage,
                            const InfluenceOptions& options) {
    const int n = m.row_count();

    Eigen::VectorXd ppr_bad = Eigen::VectorXd::Constant(n, kNaN);
    try {
        netfeat::PageRankConfig cfg;
        cfg.alpha = options.alpha;
        cfg.tolerance = options.tolerance;
        cfg.max_iterations = options.max_iterations;
        cfg.restart = netfeat::restart_from_bad_users(nu);
        const auto scores = netfeat::personalized_pagerank(nu.network.graph, cfg);
        for (int r = 0; r < n; ++r)
            ppr_bad[r] = scores.scores[nu.network.index_of(m.row_ids()[static_cast<std::size_t>(r)])];
    } catch (const std::invalid_argument& e) {
        Log::warn("features", "ppr_bad unavailable: ", e.what());
    }
    m.add_column("ppr_bad", FeatureGroup::Influence, std::move(ppr_bad));

    Eigen::VectorXd ppr_rfm = Eigen::VectorXd::Constant(n, kNaN);
    try {
        netfeat::PageRankConfig cfg;
        cfg.alpha = options.alpha;
        cfg.tolerance = options.tolerance;
        cfg.max_iterations = options.max_iterations;
        cfg.restart = netfeat::restart_from_app_rfm(nb, usage, options.rfm_half_life_days);
        const auto graph = net::bipartite_as_graph(nb);
        const auto scores = netfeat::personalized_pagerank(graph, cfg);
        for (int r = 0; r < n; ++r) {
            const auto it = nb.user_index.find(m.row_ids()[static_cast<std::size_t>(r)]);
            if (it == nb.user_index.end())
                throw std::out_of_range("influence features: user missing from bipartite network");
            ppr_rfm[r] = scores.scores[it->second];
        }
    } catch (const std::invalid_argument& e) {
        Log::warn("features", "ppr_app_rfm unavailable: ", e.what());
    }
    m.add_column("ppr_app_rfm", FeatureGroup::Influence, std::move(ppr_rfm));
}

void add_embedding_features(FeatureMatrix& m, const embed::Embedding& embedding,
                            const std::vector<std::string>& node_ids) {
    if (static_cast<int>(node_ids.size()) > embedding.node_count())
        throw std::invalid_argument("embedding features: more ids than embedding columns");
    std::unordered_map<std::string, int> node_of;
    node_of.reserve(node_ids.size());
    for (std::size_t i = 0; i < node_ids.size(); ++i)
        node_of.emplace(node_ids[i], static_cast<int>(i));

    const int n = m.row_count();
    for (int dim = 0; dim < embedding.dimensions(); ++dim) {
        Eigen::VectorXd col(n);
        for (int r = 0; r < n; ++r) {
            const auto it = node_of.find(m.row_ids()[static_cast<std::size_t>(r)]);
            if (it == node_of.end())
                throw std::out_of_range("embedding features: user missing from the embedded network");
            col[r] = embedding.vectors(dim, it->second);
        }
        m.add_column("emb_" + std::to_string(dim), FeatureGroup::Embedding, std::move(col));
    }
}

}  // namespace pseudoscore::scoring
