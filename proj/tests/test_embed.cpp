#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pseudoscore/csv.hpp"
#include "pseudoscore/graph.hpp"
#include "pseudoscore/node2vec.hpp"
#include "pseudoscore/skipgram.hpp"

using namespace pseudoscore;
using namespace pseudoscore::net;
using namespace pseudoscore::embed;

namespace {

WeightedGraph random_graph(std::mt19937& rng, int max_nodes, double edge_prob) {
    const int n = 3 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes - 2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit(rng) < edge_prob) edges.emplace_back(u, v, 0.5 + 4.5 * unit(rng));
    return WeightedGraph::from_edges(n, edges);
}

Node2VecConfig small_config() {
    Node2VecConfig cfg;
    cfg.dimensions = 8;
    cfg.walks_per_node = 4;
    cfg.walk_length = 12;
    cfg.context_window = 3;
    cfg.epochs = 3;
    cfg.seed = 17;
    return cfg;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("node2vec config validation") {
    CHECK_NOTHROW(validate(Node2VecConfig{}));

    auto broken = [](auto&& mutate) {
        Node2VecConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    };
    broken([](Node2VecConfig& c) { c.dimensions = 0; });
    broken([](Node2VecConfig& c) { c.walks_per_node = 0; });
    broken([](Node2VecConfig& c) { c.walk_length = 0; });
    broken([](Node2VecConfig& c) { c.context_window = 0; });
    broken([](Node2VecConfig& c) { c.context_window = c.walk_length; });
    broken([](Node2VecConfig& c) { c.return_param = 0.0; });
    broken([](Node2VecConfig& c) { c.inout_param = -1.0; });
    broken([](Node2VecConfig& c) { c.negative_samples = 0; });
    broken([](Node2VecConfig& c) { c.epochs = 0; });
    broken([](Node2VecConfig& c) { c.learning_rate = 0.0; });
}

TEST_CASE("first walk step is weight proportional") {
    const auto g = WeightedGraph::from_edges(3, {{0, 1, 3.0}, {0, 2, 1.0}});
    Node2VecConfig cfg;
    cfg.return_param = 7.0;  // irrelevant on the first step
    cfg.inout_param = 0.1;

    const auto probs = walk_transition_probs(g, -1, 0, cfg);
    REQUIRE(probs.size() == 2);
    std::map<int, double> by_node(probs.begin(), probs.end());
    CHECK(by_node.at(1) == doctest::Approx(0.75));
    CHECK(by_node.at(2) == doctest::Approx(0.25));
}

TEST_CASE("triangle with unit weights is symmetric") {
    const auto g = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    Node2VecConfig cfg;  // p = q = 1
    for (int prev = 0; prev < 3; ++prev) {
        for (int curr = 0; curr < 3; ++curr) {
            if (prev == curr) continue;
            const auto probs = walk_transition_probs(g, prev, curr, cfg);
            REQUIRE(probs.size() == 2);
            CHECK(probs[0].second == doctest::Approx(0.5));
            CHECK(probs[1].second == doctest::Approx(0.5));
        }
    }
}

TEST_CASE("path bias follows the return and in-out parameters") {
    // a-b-c-d as 0-1-2-3; standing at c after b, the choices are back to b
    // (scaled 1/p) or on to d (not adjacent to b, scaled 1/q)
    const auto g = WeightedGraph::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    Node2VecConfig cfg;
    cfg.return_param = 2.0;
    cfg.inout_param = 4.0;

    const auto probs = walk_transition_probs(g, 1, 2, cfg);
    REQUIRE(probs.size() == 2);
    std::map<int, double> by_node(probs.begin(), probs.end());
    CHECK(by_node.at(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(by_node.at(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("transition probabilities match exhaustive bias enumeration") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 12; ++trial) {
        const auto g = random_graph(rng, 20, 0.3);
        Node2VecConfig cfg;
        cfg.return_param = 0.25 + (rng() % 16) / 4.0;
        cfg.inout_param = 0.25 + (rng() % 16) / 4.0;

        for (int curr = 0; curr < g.node_count(); ++curr) {
            std::vector<int> prevs{-1};
            for (const int p : g.neighbors(curr)) prevs.push_back(p);
            for (const int prev : prevs) {
                const auto probs = walk_transition_probs(g, prev, curr, cfg);
                REQUIRE(probs.size() == g.neighbors(curr).size());
                if (probs.empty()) continue;

                double total = 0.0;
                std::map<int, double> unnormalized;
                const auto nbrs = g.neighbors(curr);
                const auto ws = g.weights(curr);
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    double beta = 1.0;
                    if (prev >= 0) {
                        if (nbrs[i] == prev)
                            beta = 1.0 / cfg.return_param;
                        else if (!g.has_edge(prev, nbrs[i]))
                            beta = 1.0 / cfg.inout_param;
                    }
                    unnormalized[nbrs[i]] = ws[i] * beta;
                    total += ws[i] * beta;
                }
                double sum = 0.0;
                for (const auto& [node, p] : probs) {
                    CHECK(std::abs(p - unnormalized.at(node) / total) < 1e-12);
                    sum += p;
                }
                CHECK(std::abs(sum - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("transition probability preconditions") {
    const auto g = WeightedGraph::from_edges(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    Node2VecConfig cfg;

    const auto lonely = WeightedGraph::from_edges(2, {});
    CHECK(walk_transition_probs(lonely, -1, 0, cfg).empty());

    CHECK_THROWS_AS(walk_transition_probs(g, 2, 0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(walk_transition_probs(g, -1, 9, cfg), std::out_of_range);
}

TEST_CASE("walk corpus shape and step validity") {
    std::mt19937 rng(31);
    const auto g = random_graph(rng, 25, 0.2);
    const auto cfg = small_config();

    const auto walks = generate_walks(g, cfg);
    REQUIRE(walks.size() ==
            static_cast<std::size_t>(cfg.walks_per_node) * static_cast<std::size_t>(g.node_count()));

    for (int round = 0; round < cfg.walks_per_node; ++round) {
        std::set<int> starts;
        for (int k = 0; k < g.node_count(); ++k) {
            const auto& walk = walks[static_cast<std::size_t>(round * g.node_count() + k)];
            REQUIRE(!walk.empty());
            CHECK(static_cast<int>(walk.size()) <= cfg.walk_length);
            starts.insert(walk.front());
            for (std::size_t i = 1; i < walk.size(); ++i)
                CHECK(g.has_edge(walk[i - 1], walk[i]));
            if (static_cast<int>(walk.size()) < cfg.walk_length)
                CHECK(g.degree(walk.back()) == 0);  // only sinks truncate
        }
        CHECK(static_cast<int>(starts.size()) == g.node_count());  // every node starts once
    }
}

TEST_CASE("isolated nodes walk nowhere") {
    const auto g = WeightedGraph::from_edges(3, {{0, 1, 1.0}});
    const auto walks = generate_walks(g, small_config());
    int singleton_walks = 0;
    for (const auto& walk : walks) {
        if (walk.front() == 2) {
            CHECK(walk.size() == 1);
            ++singleton_walks;
        }
    }
    CHECK(singleton_walks == small_config().walks_per_node);
}

TEST_CASE("two-node graph walks strictly alternate") {
    const auto g = WeightedGraph::from_edges(2, {{0, 1, 1.0}});
    for (const auto& walk : generate_walks(g, small_config())) {
        CHECK(static_cast<int>(walk.size()) == small_config().walk_length);
        for (std::size_t i = 1; i < walk.size(); ++i) CHECK(walk[i] == 1 - walk[i - 1]);
    }
}

TEST_CASE("walk generation is deterministic and thread independent") {
    std::mt19937 rng(8);
    const auto g = random_graph(rng, 30, 0.15);
    const auto cfg = small_config();

    const auto a = generate_walks(g, cfg, 1);
    const auto b = generate_walks(g, cfg, 1);
    const auto c = generate_walks(g, cfg, 4);
    CHECK(a == b);
    CHECK(a == c);

    Node2VecConfig other = cfg;
    other.seed = cfg.seed + 1;
    CHECK(a != generate_walks(g, other, 1));
}

TEST_CASE("pair loss gradient matches central finite differences") {
    std::mt19937 rng(1001);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double h = 1e-6;

    for (int trial = 0; trial < 20; ++trial) {
        const int d = 3 + static_cast<int>(rng() % 6);
        Eigen::VectorXd x(d), y(d);
        for (int i = 0; i < d; ++i) {
            x[i] = unit(rng);
            y[i] = unit(rng);
        }
        const bool positive = trial % 2 == 0;

        Eigen::VectorXd gx(d), gy(d);
        sgns_pair_gradient(x, y, positive, gx, gy);

        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd =
                (sgns_pair_loss(xp, y, positive) - sgns_pair_loss(xm, y, positive)) / (2 * h);
            CHECK(std::abs(gx[i] - fd) / std::max(1.0, std::abs(fd)) < 1e-5);

            Eigen::VectorXd yp = y, ym = y;
            yp[i] += h;
            ym[i] -= h;
            const double fdy =
                (sgns_pair_loss(x, yp, positive) - sgns_pair_loss(x, ym, positive)) / (2 * h);
            CHECK(std::abs(gy[i] - fdy) / std::max(1.0, std::abs(fdy)) < 1e-5);
        }
    }
}

TEST_CASE("pair loss is the negative log likelihood") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
    CHECK(sgns_pair_loss(zero, zero, true) == doctest::Approx(std::log(2.0)));
    CHECK(sgns_pair_loss(zero, zero, false) == doctest::Approx(std::log(2.0)));

    Eigen::VectorXd a = Eigen::VectorXd::Ones(4);
    CHECK(sgns_pair_loss(a, a, true) < sgns_pair_loss(a, a, false));
    CHECK(sgns_pair_loss(a, -a, false) < sgns_pair_loss(a, -a, true));
}

TEST_CASE("skip-gram training drives the loss down") {
    std::mt19937 rng(64);
    const auto g = random_graph(rng, 20, 0.3);
    auto cfg = small_config();
    cfg.epochs = 8;

    const auto walks = generate_walks(g, cfg);
    std::vector<double> losses;
    const auto emb = train_skipgram(walks, g.node_count(), cfg, 1, &losses);

    REQUIRE(static_cast<int>(losses.size()) == cfg.epochs);
    CHECK(emb.dimensions() == cfg.dimensions);
    CHECK(emb.node_count() == g.node_count());
    CHECK(emb.vectors.allFinite());
    for (const double l : losses) CHECK(std::isfinite(l));
    CHECK(losses.back() < losses.front());
}

TEST_CASE("single-threaded training is bit reproducible") {
    std::mt19937 rng(65);
    const auto g = random_graph(rng, 15, 0.3);
    const auto cfg = small_config();
    const auto walks = generate_walks(g, cfg);

    const auto a = train_skipgram(walks, g.node_count(), cfg, 1);
    const auto b = train_skipgram(walks, g.node_count(), cfg, 1);
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("barbell graph clusters in embedding space") {
    // two 5-cliques joined by a single bridge edge
    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) edges.emplace_back(u, v, 1.0);
    for (int u = 5; u < 10; ++u)
        for (int v = u + 1; v < 10; ++v) edges.emplace_back(u, v, 1.0);
    edges.emplace_back(4, 5, 1.0);
    const auto g = WeightedGraph::from_edges(10, edges);

    Node2VecConfig cfg;
    cfg.dimensions = 16;
    cfg.walks_per_node = 12;
    cfg.walk_length = 20;
    cfg.context_window = 4;
    cfg.epochs = 6;
    cfg.seed = 3;

    const auto emb = embed_network(g, cfg);
    REQUIRE(emb.node_count() == 10);

    double intra = 0.0, inter = 0.0;
    int intra_n = 0, inter_n = 0;
    for (int u = 0; u < 10; ++u) {
        for (int v = u + 1; v < 10; ++v) {
            const double c = cosine(emb.vectors.col(u), emb.vectors.col(v));
            if ((u < 5) == (v < 5)) {
                intra += c;
                ++intra_n;
            } else {
                inter += c;
                ++inter_n;
            }
        }
    }
    CHECK(intra / intra_n > inter / inter_n);
}

TEST_CASE("degenerate corpora return the seeded initialization") {
    Node2VecConfig cfg = small_config();

    // every walk stuck at a single node, so no (center, context) pair exists
    const std::vector<std::vector<int>> stuck = {{0}, {0}, {1}};
    const auto emb = train_skipgram(stuck, 2, cfg, 1);
    CHECK(emb.dimensions() == cfg.dimensions);
    CHECK(emb.node_count() == 2);
    CHECK(emb.vectors.allFinite());
    const double half = 0.5 / cfg.dimensions;
    CHECK(emb.vectors.cwiseAbs().maxCoeff() <= half);

    CHECK_THROWS_AS(train_skipgram({}, 2, cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(train_skipgram({{0, 5}}, 2, cfg, 1), std::invalid_argument);
}

TEST_CASE("embedding export is one row per node") {
    namespace fs = std::filesystem;
    const auto g = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    auto cfg = small_config();
    cfg.dimensions = 4;
    const auto emb = embed_network(g, cfg);

    const auto path = (fs::temp_directory_path() /
                       ("pseudoscore_emb_" + std::to_string(std::random_device{}())))
                          .string();
    write_embedding(emb, {"a", "b", "c"}, path);

    std::ifstream in(path);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto fields = split_fields(line, '\t');
        REQUIRE(fields.size() == 5);
        const int node = rows;
        for (int i = 0; i < 4; ++i)
            CHECK(std::stod(fields[static_cast<std::size_t>(i + 1)]) ==
                  doctest::Approx(emb.vectors(i, node)));
        ++rows;
    }
    CHECK(rows == 3);
    fs::remove(path);

    CHECK_THROWS_AS(write_embedding(emb, {"a", "b"}, path), std::invalid_argument);
}
