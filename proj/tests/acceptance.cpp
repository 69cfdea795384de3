// End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
// the process exits nonzero if any criterion fails. Oracles here recompute
// every quantity from first principles (brute force enumeration, dense linear
// algebra, finite differences) rather than reusing library code paths.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pseudoscore/centrality.hpp"
#include "pseudoscore/config.hpp"
#include "pseudoscore/egonet.hpp"
#include "pseudoscore/graph.hpp"
#include "pseudoscore/logreg.hpp"
#include "pseudoscore/metrics.hpp"
#include "pseudoscore/model.hpp"
#include "pseudoscore/neural.hpp"
#include "pseudoscore/node2vec.hpp"
#include "pseudoscore/pagerank.hpp"
#include "pseudoscore/pipeline.hpp"
#include "pseudoscore/skipgram.hpp"

namespace {

using namespace pseudoscore;
namespace fs = std::filesystem;
using nlohmann::json;

struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "pseudoscore-accept-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

net::WeightedGraph random_graph(std::mt19937& rng, int max_nodes, double edge_prob,
                                bool weighted) {
    const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes - 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit(rng) < edge_prob)
                edges.emplace_back(u, v, weighted ? 0.5 + 4.5 * unit(rng) : 1.0);
    return net::WeightedGraph::from_edges(n, edges);
}

std::vector<int> bfs_distances(const net::WeightedGraph& g, int source) {
    std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const int v : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] >= 0) continue;
            dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

std::vector<double> path_counts(const net::WeightedGraph& g, int source,
                                const std::vector<int>& dist) {
    std::vector<double> sigma(static_cast<std::size_t>(g.node_count()), 0.0);
    sigma[static_cast<std::size_t>(source)] = 1.0;
    std::vector<int> order(static_cast<std::size_t>(g.node_count()));
    for (int i = 0; i < g.node_count(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    });
    for (const int v : order) {
        if (dist[static_cast<std::size_t>(v)] <= 0) continue;
        for (const int u : g.neighbors(v))
            if (dist[static_cast<std::size_t>(u)] + 1 == dist[static_cast<std::size_t>(v)])
                sigma[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(u)];
    }
    return sigma;
}

// betweenness straight from its definition: for every unordered pair (s,t)
// and interior node v, add sigma_sv * sigma_vt / sigma_st
std::vector<double> betweenness_by_pairs(const net::WeightedGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<int>> dist(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> sigma(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        dist[static_cast<std::size_t>(s)] = bfs_distances(g, s);
        sigma[static_cast<std::size_t>(s)] = path_counts(g, s, dist[static_cast<std::size_t>(s)]);
    }
    std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
            const int d = dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
            if (d < 0) continue;
            const double st = sigma[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
            for (int v = 0; v < n; ++v) {
                if (v == s || v == t) continue;
                const int dsv = dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)];
                const int dvt = dist[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)];
                if (dsv < 0 || dvt < 0 || dsv + dvt != d) continue;
                bc[static_cast<std::size_t>(v)] +=
                    sigma[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] *
                    sigma[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)] / st;
            }
        }
    }
    return bc;
}

Eigen::VectorXd dense_pagerank(const net::WeightedGraph& g, const Eigen::VectorXd& restart,
                               double alpha) {
    const int n = g.node_count();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        const double wdeg = g.weighted_degree(u);
        if (wdeg == 0.0) {
            p.col(u) = restart;  // dangling column teleports
            continue;
        }
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) p(nbrs[i], u) = ws[i] / wdeg;
    }
    Eigen::VectorXd r = restart;
    for (int it = 0; it < 400000; ++it) {
        Eigen::VectorXd next = alpha * (p * r) + (1.0 - alpha) * restart;
        const double change = (next - r).lpNorm<1>();
        r = next;
        if (change < 1e-14) break;
    }
    return r;
}

AppUsage usage_row(const std::string& user, const std::string& app, double per_week) {
    AppUsage r;
    r.user_id = user;
    r.app_id = app;
    r.app_category = "misc";
    r.uses_per_week = per_week;
    r.days_since_last_use = 1.0;
    return r;
}

std::map<std::pair<std::string, std::string>, double> brute_force_projection(
    const std::vector<AppUsage>& rows, double threshold, net::ProjectionRule rule) {
    std::map<std::string, std::map<std::string, double>> apps_of;
    for (const auto& r : rows)
        if (r.uses_per_week >= threshold) apps_of[r.user_id][r.app_id] = r.uses_per_week;

    std::map<std::pair<std::string, std::string>, double> edges;
    for (auto u = apps_of.begin(); u != apps_of.end(); ++u) {
        for (auto v = std::next(u); v != apps_of.end(); ++v) {
            double weight = 0.0;
            for (const auto& [app, wu] : u->second) {
                auto it = v->second.find(app);
                if (it == v->second.end()) continue;
                weight +=
                    rule == net::ProjectionRule::SharedCount ? 1.0 : std::min(wu, it->second);
            }
            if (weight > 0)
                edges[{std::min(u->first, v->first), std::max(u->first, v->first)}] = weight;
        }
    }
    return edges;
}

std::map<std::pair<std::string, std::string>, double> edge_map(const net::UnipartiteNetwork& nu) {
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

double auc_by_pairs(const std::vector<double>& scores, const std::vector<Label>& labels) {
    double concordant = 0.0, tied = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != Label::Bad) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != Label::Good) continue;
            ++pairs;
            if (scores[i] > scores[j])
                concordant += 1.0;
            else if (scores[i] == scores[j])
                tied += 1.0;
        }
    }
    return (concordant + 0.5 * tied) / static_cast<double>(pairs);
}

double profit_by_grid(const std::vector<double>& scores, const std::vector<Label>& labels,
                      const eval::ProfitParams& params) {
    std::size_t n_bad = 0, n_good = 0;
    for (const Label l : labels) (l == Label::Bad ? n_bad : n_good) += 1;
    const double pi_bad = params.prior_bad
                              ? *params.prior_bad
                              : static_cast<double>(n_bad) / static_cast<double>(n_bad + n_good);
    const double pi_good = 1.0 - pi_bad;

    std::vector<double> cutoffs(scores.begin(), scores.end());
    std::sort(cutoffs.begin(), cutoffs.end());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
    cutoffs.push_back(cutoffs.back() + 1.0);  // reject nobody

    // class-conditional rejection rates per cutoff, counted directly
    std::vector<std::pair<double, double>> rates;
    for (const double t : cutoffs) {
        std::size_t rb = 0, rg = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] < t) continue;
            (labels[i] == Label::Bad ? rb : rg) += 1;
        }
        rates.emplace_back(static_cast<double>(rb) / static_cast<double>(n_bad),
                           static_cast<double>(rg) / static_cast<double>(n_good));
    }

    const auto best_at = [&](double lambda) {
        double best = -1e300;
        for (const auto& [f_bad, f_good] : rates)
            best = std::max(best, lambda * pi_bad * f_bad - params.roi * pi_good * f_good);
        return best;
    };

    double emp = params.p0 * best_at(0.0) + params.p1 * best_at(1.0);
    const double middle = 1.0 - params.p0 - params.p1;
    if (middle > 1e-15) {
        const int g = params.lambda_grid;
        double integral = 0.0;
        for (int k = 0; k < g; ++k) {
            const double lambda = static_cast<double>(k) / static_cast<double>(g - 1);
            integral += ((k == 0 || k == g - 1) ? 0.5 : 1.0) * best_at(lambda);
        }
        emp += middle * integral / static_cast<double>(g - 1);
    }
    return emp;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// ---------------------------------------------------------------------------

bool criterion_egonet_fixture(std::string& detail) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int v = 1; v <= 6; ++v) edges.emplace_back(0, v, 1.0);
    net::LabeledNetwork g;
    g.network.graph = net::WeightedGraph::from_edges(7, edges);
    for (int i = 0; i < 7; ++i) {
        g.network.ids.push_back("u" + std::to_string(i));
        g.network.index[g.network.ids.back()] = i;
    }
    g.labels = {Label::Good, Label::Good, Label::Good, Label::Good, Label::Good, Label::Good,
                Label::Bad};

    const auto f = netfeat::egonet_features(g, 0);
    if (f.degree != 6 || f.good_degree != 5 || f.bad_degree != 1) {
        std::ostringstream os;
        os << "got degree " << f.degree << ", good " << f.good_degree << ", bad " << f.bad_degree;
        detail = os.str();
        return false;
    }
    return true;
}

bool criterion_projection(std::string& detail) {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 100; ++trial) {
        const int users = 2 + static_cast<int>(rng() % 99);
        const int apps = 1 + static_cast<int>(rng() % 20);
        std::vector<AppUsage> rows;
        for (int u = 0; u < users; ++u)
            for (int a = 0; a < apps; ++a)
                if (rng() % 4 == 0)
                    rows.push_back(usage_row("u" + std::to_string(u), "a" + std::to_string(a),
                                             static_cast<double>(1 + rng() % 9)));
        net::BipartiteOptions bopt;
        bopt.frequency_threshold = 2.0;
        bopt.weight_mode = net::BipartiteWeightMode::UsageIntensity;
        const auto nb = net::build_bipartite(rows, bopt);

        for (const auto rule : {net::ProjectionRule::SharedCount, net::ProjectionRule::MinIntensity}) {
            net::ProjectionOptions popt;
            popt.rule = rule;
            const auto projected = edge_map(net::project_to_unipartite(nb, popt));
            const auto expected = brute_force_projection(rows, 2.0, rule);
            if (projected != expected) {  // integer-valued weights, exact match required
                detail = "trial " + std::to_string(trial) + ": edge sets or weights differ";
                return false;
            }
        }
    }
    return true;
}

bool criterion_pagerank(std::string& detail) {
    std::mt19937 rng(515);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_graph(rng, 50, 0.1, true);
        const int n = g.node_count();

        Eigen::VectorXd restart(n);
        if (trial % 3 == 0) {
            restart = Eigen::VectorXd::Zero(n);  // point mass
            restart[static_cast<int>(rng() % static_cast<unsigned>(n))] = 1.0;
        } else {
            for (int i = 0; i < n; ++i)
                restart[i] = (trial % 3 == 1 || unit(rng) < 0.3) ? unit(rng) : 0.0;
            if (restart.sum() == 0.0) restart[0] = 1.0;
            restart /= restart.sum();
        }

        for (const double alpha : {0.5, 0.85, 0.99}) {
            netfeat::PageRankConfig cfg;
            cfg.alpha = alpha;
            cfg.restart = restart;
            cfg.tolerance = 1e-12;
            cfg.max_iterations = 200000;
            const auto r = netfeat::personalized_pagerank(g, cfg);
            const auto expected = dense_pagerank(g, restart, alpha);

            if (!r.converged || std::abs(r.scores.sum() - 1.0) > 1e-9) {
                detail = "trial " + std::to_string(trial) + ": not converged or sum off";
                return false;
            }
            for (int i = 0; i < n; ++i) {
                if (std::abs(r.scores[i] - expected[i]) > 1e-8) {
                    std::ostringstream os;
                    os << "trial " << trial << " alpha " << alpha << " node " << i << ": "
                       << r.scores[i] << " vs " << expected[i];
                    detail = os.str();
                    return false;
                }
            }
        }
    }
    return true;
}

bool criterion_centrality(std::string& detail) {
    std::mt19937 rng(303);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_graph(rng, 30, 0.12, false);
        const int n = g.node_count();

        const auto close = netfeat::closeness_all(g);
        for (int u = 0; u < n; ++u) {
            const auto dist = bfs_distances(g, u);
            long long total = 0;
            int reachable = 0;
            for (int v = 0; v < n; ++v) {
                if (v == u || dist[static_cast<std::size_t>(v)] < 0) continue;
                total += dist[static_cast<std::size_t>(v)];
                ++reachable;
            }
            if (close[static_cast<std::size_t>(u)].reachable_count != reachable) {
                detail = "trial " + std::to_string(trial) + ": reachable count differs";
                return false;
            }
            if (reachable > 0) {
                const double want = static_cast<double>(total) / reachable;
                if (!close[static_cast<std::size_t>(u)].avg_distance ||
                    std::abs(*close[static_cast<std::size_t>(u)].avg_distance - want) > 1e-9) {
                    detail = "trial " + std::to_string(trial) + ": closeness differs";
                    return false;
                }
            }
        }

        const auto fast = netfeat::betweenness(g);
        const auto slow = betweenness_by_pairs(g);
        for (int v = 0; v < n; ++v) {
            if (std::abs(fast[static_cast<std::size_t>(v)] - slow[static_cast<std::size_t>(v)]) >
                1e-9) {
                std::ostringstream os;
                os << "trial " << trial << " node " << v << ": betweenness "
                   << fast[static_cast<std::size_t>(v)] << " vs "
                   << slow[static_cast<std::size_t>(v)];
                detail = os.str();
                return false;
            }
        }
    }
    return true;
}

bool criterion_walk_bias(std::string& detail) {
    // four-node path, standing at node 2 after node 1: back gets 1/p, onward
    // gets 1/q, so p=2, q=4 yields 2/3 and 1/3
    {
        const auto path =
            net::WeightedGraph::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
        embed::Node2VecConfig cfg;
        cfg.return_param = 2.0;
        cfg.inout_param = 4.0;
        const auto probs = embed::walk_transition_probs(path, 1, 2, cfg);
        std::map<int, double> by_node(probs.begin(), probs.end());
        if (std::abs(by_node.at(1) - 2.0 / 3.0) > 1e-12 ||
            std::abs(by_node.at(3) - 1.0 / 3.0) > 1e-12) {
            detail = "path fixture probabilities off";
            return false;
        }
    }

    std::mt19937 rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_graph(rng, 20, 0.3, true);
        embed::Node2VecConfig cfg;
        cfg.return_param = 0.25 + (rng() % 16) / 4.0;
        cfg.inout_param = 0.25 + (rng() % 16) / 4.0;

        for (int curr = 0; curr < g.node_count(); ++curr) {
            std::vector<int> prevs{-1};
            for (const int p : g.neighbors(curr)) prevs.push_back(p);
            for (const int prev : prevs) {
                const auto probs = embed::walk_transition_probs(g, prev, curr, cfg);

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
                    if (std::abs(p - unnormalized.at(node) / total) > 1e-12) {
                        detail = "trial " + std::to_string(trial) + ": transition prob off";
                        return false;
                    }
                    sum += p;
                }
                if (!probs.empty() && std::abs(sum - 1.0) > 1e-12) {
                    detail = "trial " + std::to_string(trial) + ": probs do not sum to one";
                    return false;
                }
            }
        }
    }
    return true;
}

bool criterion_gradients(std::string& detail) {
    const double h = 1e-6;
    const auto rel_err = [](double a, double b) {
        return std::abs(a - b) / std::max(1.0, std::abs(b));
    };

    // batches of 5 to 20 samples with a noisy linear ground truth
    const auto make_batch = [](int n, unsigned seed) {
        std::mt19937 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::pair<Eigen::MatrixXd, std::vector<int>> d;
        d.first.resize(n, 3);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < 3; ++j) d.first(i, j) = gauss(rng);
            d.second.push_back(1.5 * d.first(i, 0) - d.first(i, 1) + 0.5 * gauss(rng) > 0 ? 1 : 0);
        }
        return d;
    };

    unsigned seed = 1000;
    for (const int n : {5, 12, 20}) {
        const auto [x, y] = make_batch(n, seed++);
        const auto w = scoring::sample_weights(y, scoring::balanced_class_weights(y));

        std::mt19937 rng(seed++);
        std::normal_distribution<double> gauss(0.0, 0.5);
        Eigen::VectorXd theta(4);
        for (int i = 0; i < 4; ++i) theta[i] = gauss(rng);
        const auto grad = scoring::logreg_gradient(x, y, w, 0.7, theta);
        for (int i = 0; i < 4; ++i) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp[i] += h;
            tm[i] -= h;
            const double fd = (scoring::logreg_objective(x, y, w, 0.7, tp) -
                               scoring::logreg_objective(x, y, w, 0.7, tm)) /
                              (2 * h);
            if (rel_err(grad[i], fd) >= 1e-5) {
                detail = "logreg gradient mismatch at n=" + std::to_string(n);
                return false;
            }
        }

        const int hidden = 4;
        const int params = scoring::feedforward_param_count(3, hidden);
        std::uniform_real_distribution<double> unit(-0.5, 0.5);
        Eigen::VectorXd phi(params);
        for (int i = 0; i < params; ++i) phi[i] = unit(rng);
        const auto ff_grad = scoring::feedforward_gradient(phi, hidden, x, y, w, 0.2);
        for (int i = 0; i < params; ++i) {
            Eigen::VectorXd tp = phi, tm = phi;
            tp[i] += h;
            tm[i] -= h;
            const double fd = (scoring::feedforward_loss(tp, hidden, x, y, w, 0.2) -
                               scoring::feedforward_loss(tm, hidden, x, y, w, 0.2)) /
                              (2 * h);
            if (rel_err(ff_grad[i], fd) >= 1e-5) {
                detail = "feedforward gradient mismatch at n=" + std::to_string(n);
                return false;
            }
        }
    }

    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 3 + static_cast<int>(rng() % 6);
        Eigen::VectorXd x(d), y(d);
        for (int i = 0; i < d; ++i) {
            x[i] = unit(rng);
            y[i] = unit(rng);
        }
        const bool positive = trial % 2 == 0;
        Eigen::VectorXd gx(d), gy(d);
        embed::sgns_pair_gradient(x, y, positive, gx, gy);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (embed::sgns_pair_loss(xp, y, positive) -
                               embed::sgns_pair_loss(xm, y, positive)) /
                              (2 * h);
            if (rel_err(gx[i], fd) >= 1e-5) {
                detail = "pair loss gradient mismatch at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    return true;
}

bool criterion_auc_brier(std::string& detail) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 197);
        std::vector<double> scores;
        std::vector<Label> labels;
        const int mode = trial % 4;  // continuous, quartered, coin-valued, near-constant
        for (int i = 0; i < n; ++i) {
            double s = unit(rng);
            if (mode == 1) s = std::round(s * 4.0) / 4.0;
            if (mode == 2) s = s < 0.5 ? 0.25 : 0.75;
            if (mode == 3) s = 0.5;
            scores.push_back(s);
            labels.push_back(unit(rng) < 0.4 ? Label::Bad : Label::Good);
        }
        labels[0] = Label::Bad;
        labels[1] = Label::Good;
        if (eval::auc(scores, labels) != auc_by_pairs(scores, labels)) {
            detail = "auc mismatch on trial " + std::to_string(trial);
            return false;
        }
    }

    const auto bad = std::vector<Label>{Label::Bad};
    const auto good = std::vector<Label>{Label::Good};
    const bool closed_forms =
        eval::brier({1.0, 1.0, 0.0}, {Label::Bad, Label::Bad, Label::Good}) == 0.0 &&
        eval::brier({0.5, 0.5, 0.5, 0.5},
                    {Label::Bad, Label::Good, Label::Bad, Label::Good}) == 0.25 &&
        std::abs(eval::brier({0.8}, bad) - 0.04) < 1e-15 &&
        std::abs(eval::brier({0.2}, good) - 0.04) < 1e-15;
    if (!closed_forms) {
        detail = "brier closed forms violated";
        return false;
    }
    return true;
}

bool criterion_profit(std::string& detail) {
    std::mt19937 rng(1887);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 120);
        std::vector<double> scores;
        std::vector<Label> labels;
        for (int i = 0; i < n; ++i) {
            double s = unit(rng);
            if (trial % 2 == 0) s = std::round(s * 4.0) / 4.0;
            scores.push_back(s);
            labels.push_back(unit(rng) < 0.4 ? Label::Bad : Label::Good);
        }
        labels[0] = Label::Bad;
        labels[1] = Label::Good;

        eval::ProfitParams params;
        params.roi = 0.26;
        params.p0 = 0.55;
        params.p1 = 0.10;
        if (trial % 5 == 0) params.prior_bad = 0.2;

        const auto r = eval::profit_measure(scores, labels, params);
        const double expected = profit_by_grid(scores, labels, params);
        if (std::abs(r.emp - expected) > 1e-6) {
            std::ostringstream os;
            os << "trial " << trial << ": emp " << r.emp << " vs grid " << expected;
            detail = os.str();
            return false;
        }
    }

    // full write-off, perfect ranking: the best cutoff rejects exactly the
    // bads and the expected profit equals the bad share
    {
        const std::vector<double> scores = {0.9, 0.9, 0.8, 0.3, 0.2, 0.2, 0.1, 0.1, 0.1, 0.1};
        const std::vector<Label> labels = {Label::Bad,  Label::Bad,  Label::Bad,  Label::Good,
                                           Label::Good, Label::Good, Label::Good, Label::Good,
                                           Label::Good, Label::Good};
        eval::ProfitParams params;
        params.p0 = 0.0;
        params.p1 = 1.0;
        const auto r = eval::profit_measure(scores, labels, params);
        if (std::abs(r.emp - 0.3) > 1e-12 || std::abs(r.rejection_fraction - 0.3) > 1e-12) {
            detail = "full write-off closed form violated";
            return false;
        }
    }
    {
        eval::ProfitParams params;
        params.p0 = 1.0;
        params.p1 = 0.0;
        const auto r = eval::profit_measure({0.9, 0.4, 0.6, 0.1},
                                            {Label::Bad, Label::Good, Label::Bad, Label::Good},
                                            params);
        if (r.emp != 0.0 || r.rejection_fraction != 0.0) {
            detail = "zero-loss closed form violated";
            return false;
        }
    }
    return true;
}

bool criterion_pipeline_signal(std::string& detail) {
    TempDir tmp;
    std::ostringstream cfg_json;
    cfg_json << R"({
      "seed": 42,
      "output_dir": ")" << tmp.sub("out") << R"(",
      "data": {"source": "synth", "synth": {"users": 5000, "signal_strength": 0.8}},
      "features": {"groups": ["sociodemographic", "neighborhood", "influence"]},
      "models": {"kinds": ["logistic_regression"]},
      "experiment": {"folds": 5,
                     "combinations": [["sociodemographic"],
                                      ["neighborhood", "influence"]]}
    })";
    auto cfg = cli::parse_config(cfg_json.str());

    cli::Pipeline pipeline(cfg);
    const std::string evaluate_dir = pipeline.evaluate_stage();
    const json evaluate = json::parse(read_file(evaluate_dir + "/evaluate.json"));

    double auc_socio = -1.0, auc_network = -1.0;
    for (const auto& cell : evaluate.at("cells")) {
        const auto& groups = cell.at("groups");
        if (groups.size() == 1 && groups[0] == "sociodemographic")
            auc_socio = cell.at("mean_auc").get<double>();
        if (groups.size() == 2 && groups[0] == "neighborhood" && groups[1] == "influence")
            auc_network = cell.at("mean_auc").get<double>();
    }
    double p_value = -1.0;
    for (const auto& entry : evaluate.at("significance")) {
        const std::string a = entry.at("a_groups").get<std::string>();
        const std::string b = entry.at("b_groups").get<std::string>();
        if ((a == "sociodemographic" && b == "neighborhood+influence") ||
            (b == "sociodemographic" && a == "neighborhood+influence"))
            p_value = entry.at("p_value").get<double>();
    }

    std::ostringstream os;
    os << "network auc " << auc_network << ", socio auc " << auc_socio << ", p " << p_value;
    detail = os.str();
    return auc_network >= 0.70 && auc_network - auc_socio >= 0.05 && p_value >= 0.0 &&
           p_value < 0.05;
}

bool criterion_reproducibility(std::string& detail) {
    const auto run_once = [](const std::string& out_dir) {
        std::ostringstream cfg_json;
        cfg_json << R"({
          "seed": 7,
          "output_dir": ")" << out_dir << R"(",
          "data": {"source": "synth", "synth": {"users": 250, "apps": 40}},
          "features": {"node2vec": {"dimensions": 16, "walks_per_node": 4,
                                    "walk_length": 20, "context_window": 3,
                                    "epochs": 2}},
          "models": {"random_forest": {"trees": 50, "max_depth": 8},
                     "feedforward": {"epochs": 60}},
          "experiment": {"folds": 3, "bootstrap_rounds": 2000, "importance_repeats": 2,
                         "combinations": [["sociodemographic"],
                                          ["sociodemographic", "behavior", "neighborhood",
                                           "centrality", "influence", "embedding"]]}
        })";
        cli::Pipeline pipeline(cli::parse_config(cfg_json.str()));
        return pipeline.run();
    };

    TempDir tmp;
    const auto first = run_once(tmp.sub("first"));
    const auto second = run_once(tmp.sub("second"));

    if (first.report_json != second.report_json) {
        detail = "report.json differs between runs";
        return false;
    }
    if (first.report_text != second.report_text) {
        detail = "report.txt differs between runs";
        return false;
    }
    if (first.ablation_tsv != second.ablation_tsv) {
        detail = "ablation.tsv differs between runs";
        return false;
    }
    // and the bytes on disk match the in-memory reports
    if (read_file(tmp.sub("first") + "/report.json") !=
        read_file(tmp.sub("second") + "/report.json")) {
        detail = "report.json files differ on disk";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* description;
        double time_limit_s;  // 0 = no limit
        std::function<bool(std::string&)> run;
    };

    const std::vector<Criterion> criteria = {
        {1, "egonet degree counts on the seven-node fixture", 1.0, criterion_egonet_fixture},
        {2, "one-mode projection equals pairwise set intersection on 100 random bipartite graphs",
         10.0, criterion_projection},
        {3, "personalized pagerank matches a dense power-iteration oracle at three damping levels",
         30.0, criterion_pagerank},
        {4, "closeness and betweenness match exhaustive shortest-path enumeration", 10.0,
         criterion_centrality},
        {5, "walk transition probabilities match the exhaustive bias formula", 10.0,
         criterion_walk_bias},
        {6, "analytic gradients match central finite differences", 30.0, criterion_gradients},
        {7, "auc equals brute-force pair counting on 1000 score sets; brier closed forms hold",
         30.0, criterion_auc_brier},
        {8, "profit measure matches a dense cutoff-lambda grid and its closed forms", 30.0,
         criterion_profit},
        {9, "network features lift a 5000-user synthetic cohort with a significant auc gain",
         300.0, criterion_pipeline_signal},
        {10, "identical configuration and seed reproduce byte-identical reports", 0.0,
         criterion_reproducibility},
    };

    bool all_ok = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.time_limit_s > 0.0 && secs > c.time_limit_s) {
            ok = false;
            detail = "exceeded the " + std::to_string(c.time_limit_s) + "s budget";
        }
        std::ostringstream line;
        line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.description
             << " (" << std::fixed << secs << "s)";
        if (!detail.empty()) line << " -- " << detail;
        std::cout << line.str() << std::endl;
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
