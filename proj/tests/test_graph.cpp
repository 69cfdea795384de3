#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pseudoscore/graph.hpp"
#include "pseudoscore/rng.hpp"

using namespace pseudoscore;
using namespace pseudoscore::net;

namespace {

AppUsage usage_row(const std::string& user, const std::string& app, double per_week,
                   double recency = 1.0) {
    AppUsage r;
    r.user_id = user;
    r.app_id = app;
    r.app_category = "misc";
    r.uses_per_week = per_week;
    r.days_since_last_use = recency;
    return r;
}

// pairwise set-intersection reference for the one-mode projection
std::map<std::pair<std::string, std::string>, double> brute_force_projection(
    const std::vector<AppUsage>& rows, double threshold, ProjectionRule rule) {
    std::map<std::string, std::map<std::string, double>> apps_of;  // user -> app -> weight
    for (const auto& r : rows)
        if (r.uses_per_week >= threshold) apps_of[r.user_id][r.app_id] = r.uses_per_week;

    std::map<std::pair<std::string, std::string>, double> edges;
    for (auto u = apps_of.begin(); u != apps_of.end(); ++u) {
        for (auto v = std::next(u); v != apps_of.end(); ++v) {
            double weight = 0.0;
            for (const auto& [app, wu] : u->second) {
                auto it = v->second.find(app);
                if (it == v->second.end()) continue;
                weight += rule == ProjectionRule::SharedCount ? 1.0 : std::min(wu, it->second);
            }
            if (weight > 0) edges[{std::min(u->first, v->first), std::max(u->first, v->first)}] = weight;
        }
    }
    return edges;
}

std::map<std::pair<std::string, std::string>, double> edge_map(const UnipartiteNetwork& nu) {
    std::map<std::pair<std::string, std::string>, double> edges;
    for (int u = 0; u < nu.node_count(); ++u) {
        const auto nb = nu.graph.neighbors(u);
        const auto w = nu.graph.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (nb[k] <= u) continue;
            edges[{std::min(nu.ids[u], nu.ids[nb[k]]), std::max(nu.ids[u], nu.ids[nb[k]])}] = w[k];
        }
    }
    return edges;
}

}  // namespace

TEST_CASE("weighted graph construction and lookups") {
    const auto g = WeightedGraph::from_edges(4, {{0, 1, 2.0}, {1, 2, 1.0}, {0, 3, 0.5}});
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(2) == 1);

    const auto nb = g.neighbors(0);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK(g.edge_weight(0, 1) == 2.0);
    CHECK(g.edge_weight(3, 0) == 0.5);
    CHECK(g.edge_weight(0, 2) == 0.0);
    CHECK(g.weighted_degree(0) == doctest::Approx(2.5));
}

TEST_CASE("graph construction rejects malformed edges") {
    CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 0, 2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_edges(2, {{0, 2, 1.0}}), std::out_of_range);
}

TEST_CASE("bipartite edges follow the frequency threshold") {
    BipartiteOptions opt;
    opt.frequency_threshold = 3.0;

    const auto nb = build_bipartite({usage_row("u1", "a1", 5.0)}, opt);
    CHECK(nb.user_count() == 1);
    CHECK(nb.app_count() == 1);
    CHECK(nb.edge_count() == 1);

    opt.frequency_threshold = 6.0;
    const auto none = build_bipartite({usage_row("u1", "a1", 5.0)}, opt);
    CHECK(none.user_count() == 1);  // nodes survive even when the edge does not
    CHECK(none.app_count() == 1);
    CHECK(none.edge_count() == 0);
}

TEST_CASE("bipartite weight modes") {
    BipartiteOptions unit;
    unit.weight_mode = BipartiteWeightMode::Unit;
    const auto nb1 = build_bipartite({usage_row("u1", "a1", 5.0)}, unit);
    CHECK(nb1.user_apps[0][0].second == 1.0);

    BipartiteOptions intensity;
    intensity.weight_mode = BipartiteWeightMode::UsageIntensity;
    const auto nb2 = build_bipartite({usage_row("u1", "a1", 5.0)}, intensity);
    CHECK(nb2.user_apps[0][0].second == 5.0);
}

TEST_CASE("users without usage rows survive as isolated nodes") {
    const std::vector<std::string> extra = {"lonely"};
    const auto nb = build_bipartite({usage_row("u1", "a1", 2.0)}, {}, extra);
    CHECK(nb.user_count() == 2);
    CHECK(nb.user_index.count("lonely") == 1);

    const auto nu = project_to_unipartite(nb);
    CHECK(nu.node_count() == 2);
    CHECK(nu.graph.degree(nu.index_of("lonely")) == 0);
}

TEST_CASE("seven-user three-app adoption pattern") {
    // one hub user shares an app with every other user; a second app links
    // three of them into triangles and the third covers the rest
    std::vector<AppUsage> rows;
    for (int i = 0; i < 7; ++i) rows.push_back(usage_row("u" + std::to_string(i), "a0", 3.0));
    rows.push_back(usage_row("u1", "a1", 2.0));
    rows.push_back(usage_row("u2", "a1", 2.0));
    rows.push_back(usage_row("u5", "a2", 4.0));
    rows.push_back(usage_row("u6", "a2", 4.0));

    const auto nb = build_bipartite(rows);
    CHECK(nb.user_count() == 7);
    CHECK(nb.app_count() == 3);
    CHECK(nb.edge_count() == 11);

    const auto nu = project_to_unipartite(nb);
    CHECK(nu.node_count() == 7);
    const int hub = nu.index_of("u0");
    CHECK(nu.graph.degree(hub) == 6);
    CHECK(nu.graph.edge_weight(nu.index_of("u1"), nu.index_of("u2")) == 2.0);
    CHECK(nu.graph.edge_weight(nu.index_of("u5"), nu.index_of("u6")) == 2.0);
    CHECK(nu.graph.edge_weight(nu.index_of("u3"), nu.index_of("u4")) == 1.0);
}

TEST_CASE("basic projection weights") {
    const auto nb = build_bipartite({usage_row("u1", "a1", 2.0), usage_row("u2", "a1", 2.0),
                                     usage_row("u1", "a2", 2.0), usage_row("u2", "a2", 2.0),
                                     usage_row("u3", "a2", 2.0)});
    const auto nu = project_to_unipartite(nb);
    CHECK(nu.graph.edge_weight(nu.index_of("u1"), nu.index_of("u2")) == 2.0);
    CHECK(nu.graph.edge_weight(nu.index_of("u1"), nu.index_of("u3")) == 1.0);
    CHECK(nu.graph.edge_weight(nu.index_of("u2"), nu.index_of("u3")) == 1.0);
}

TEST_CASE("projection matches pairwise set intersection on random graphs") {
    std::mt19937 rng(314);
    for (int trial = 0; trial < 40; ++trial) {
        const int users = 2 + static_cast<int>(rng() % 60);
        const int apps = 1 + static_cast<int>(rng() % 15);
        std::vector<AppUsage> rows;
        for (int u = 0; u < users; ++u) {
            for (int a = 0; a < apps; ++a) {
                if (rng() % 4 != 0) continue;
                rows.push_back(usage_row("u" + std::to_string(u), "a" + std::to_string(a),
                                         1.0 + (rng() % 80) / 10.0));
            }
        }
        const ProjectionRule rule =
            trial % 2 == 0 ? ProjectionRule::SharedCount : ProjectionRule::MinIntensity;

        BipartiteOptions bopt;
        bopt.frequency_threshold = 2.0;
        bopt.weight_mode = rule == ProjectionRule::SharedCount ? BipartiteWeightMode::Unit
                                                               : BipartiteWeightMode::UsageIntensity;
        ProjectionOptions popt;
        popt.rule = rule;

        const auto nu = project_to_unipartite(build_bipartite(rows, bopt), popt);
        const auto expected = brute_force_projection(rows, 2.0, rule);
        const auto actual = edge_map(nu);

        REQUIRE(actual.size() == expected.size());
        for (const auto& [key, w] : expected) {
            REQUIRE(actual.count(key) == 1);
            CHECK(actual.at(key) == doctest::Approx(w).epsilon(1e-12));
        }
    }
}

TEST_CASE("projection is independent of input row order") {
    std::vector<AppUsage> rows = {usage_row("u1", "a1", 2.0), usage_row("u2", "a1", 3.0),
                                  usage_row("u3", "a1", 4.0), usage_row("u1", "a2", 5.0),
                                  usage_row("u3", "a2", 6.0)};
    const auto base = edge_map(project_to_unipartite(build_bipartite(rows)));

    std::mt19937 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(rows.begin(), rows.end(), rng);
        CHECK(edge_map(project_to_unipartite(build_bipartite(rows))) == base);
    }
}

TEST_CASE("raising the frequency threshold never adds edges") {
    std::mt19937 rng(9);
    std::vector<AppUsage> rows;
    for (int u = 0; u < 30; ++u)
        for (int a = 0; a < 8; ++a)
            if (rng() % 3 == 0)
                rows.push_back(usage_row("u" + std::to_string(u), "a" + std::to_string(a),
                                         (rng() % 100) / 10.0));

    std::set<std::pair<std::string, std::string>> previous_edges;
    bool first = true;
    for (double threshold : {9.0, 6.0, 3.0, 0.0}) {  // loosening direction
        BipartiteOptions opt;
        opt.frequency_threshold = threshold;
        std::set<std::pair<std::string, std::string>> edges;
        for (const auto& [key, w] : edge_map(project_to_unipartite(build_bipartite(rows, opt))))
            edges.insert(key);
        if (!first)
            CHECK(std::includes(edges.begin(), edges.end(), previous_edges.begin(),
                                previous_edges.end()));
        previous_edges = std::move(edges);
        first = false;
    }
}

TEST_CASE("dense app guard drops near-ubiquitous apps from the projection") {
    std::vector<AppUsage> rows;
    for (int u = 0; u < 10; ++u) rows.push_back(usage_row("u" + std::to_string(u), "everyone", 5.0));
    rows.push_back(usage_row("u0", "niche", 5.0));
    rows.push_back(usage_row("u1", "niche", 5.0));

    const auto nb = build_bipartite(rows);

    ProjectionOptions guarded;
    guarded.dense_app_guard = true;
    guarded.max_app_user_share = 0.2;  // "everyone" covers 100% of users
    const auto nu = project_to_unipartite(nb, guarded);
    CHECK(nu.graph.edge_count() == 1);  // only the niche app links anyone
    CHECK(nu.graph.edge_weight(nu.index_of("u0"), nu.index_of("u1")) == 1.0);

    const auto unguarded = project_to_unipartite(nb);
    CHECK(unguarded.graph.edge_count() == 45);  // complete graph on 10 users
}

TEST_CASE("labels attach to nodes with ignored-id accounting") {
    const auto nb = build_bipartite({usage_row("u1", "a1", 2.0), usage_row("u2", "a1", 2.0)});
    auto nu = project_to_unipartite(nb);

    std::unordered_map<std::string, Label> labels = {
        {"u1", Label::Bad}, {"ghost", Label::Good}, {"phantom", Label::Bad}};
    int ignored = 0;
    const auto g = attach_labels(std::move(nu), labels, &ignored);

    CHECK(ignored == 2);
    CHECK(g.labels[g.network.index_of("u1")] == Label::Bad);
    CHECK(g.labels[g.network.index_of("u2")] == Label::Unlabeled);

    int bad = 0;
    for (const auto l : g.labels)
        if (l == Label::Bad) ++bad;
    CHECK(bad == 1);
}

TEST_CASE("bipartite adjacency as a single graph") {
    BipartiteOptions opt;
    opt.weight_mode = BipartiteWeightMode::UsageIntensity;
    const auto nb = build_bipartite({usage_row("u1", "a1", 2.0), usage_row("u2", "a1", 3.0),
                                     usage_row("u2", "a2", 4.0)},
                                    opt);
    const auto g = bipartite_as_graph(nb);

    REQUIRE(g.node_count() == nb.user_count() + nb.app_count());
    CHECK(g.edge_count() == 3);

    const int u2 = nb.user_index.at("u2");
    const int a1 = nb.user_count() + nb.app_index.at("a1");
    const int a2 = nb.user_count() + nb.app_index.at("a2");
    CHECK(g.edge_weight(u2, a1) == 3.0);
    CHECK(g.edge_weight(u2, a2) == 4.0);
    CHECK_FALSE(g.has_edge(nb.user_index.at("u1"), u2));  // no user-user edges
}

TEST_CASE("unipartite dump and restore round-trips") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() /
                     ("pseudoscore_graph_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);

    const std::vector<std::string> extra = {"isolated"};
    const auto nb = build_bipartite({usage_row("u1", "a1", 2.0), usage_row("u2", "a1", 2.5),
                                     usage_row("u1", "a2", 3.0), usage_row("u2", "a2", 2.0),
                                     usage_row("u3", "a2", 9.0)},
                                    {}, extra);
    const auto nu = project_to_unipartite(nb);

    const auto path = (dir / "unipartite.tsv").string();
    write_unipartite(nu, path);
    const auto restored = read_unipartite(path);

    CHECK(restored.node_count() == nu.node_count());
    CHECK(edge_map(restored) == edge_map(nu));
    CHECK(restored.graph.degree(restored.index_of("isolated")) == 0);

    const auto bpath = (dir / "bipartite.tsv").string();
    write_bipartite(nb, bpath);
    const auto nb2 = read_bipartite(bpath);
    CHECK(nb2.user_count() == nb.user_count());
    CHECK(nb2.app_count() == nb.app_count());
    CHECK(nb2.edge_count() == nb.edge_count());
    for (const auto& id : nb.user_ids) CHECK(nb2.user_index.count(id) == 1);
    CHECK(edge_map(project_to_unipartite(nb2)) == edge_map(nu));

    fs::remove_all(dir);
}
