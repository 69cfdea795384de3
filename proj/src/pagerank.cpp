#include "pseudoscore/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pseudoscore/log.hpp"

namespace pseudoscore::netfeat {

namespace {

void validate(const net::WeightedGraph& g, const PageRankConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("pagerank: alpha must be strictly inside (0,1)");
    if (cfg.tolerance <= 0) throw std::invalid_argument("pagerank: tolerance must be positive");
    if (cfg.max_iterations <= 0)
        throw std::invalid_argument("pagerank: max_iterations must be positive");
    if (cfg.restart.size() != g.node_count())
        throw std::invalid_argument("pagerank: restart vector size mismatch");
    if ((cfg.restart.array() < 0).any())
        throw std::invalid_argument("pagerank: restart vector has negative mass");
    if (std::fabs(cfg.restart.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("pagerank: restart vector must sum to 1");
}

}  // namespace

PageRankScores personalized_pagerank(const net::WeightedGraph& g, const PageRankConfig& cfg) {
    validate(g, cfg);
    const int n = g.node_count();
    PageRankScores out;
    if (n == 0) return out;

    Eigen::VectorXd r = cfg.restart;
    Eigen::VectorXd next(n);
    for (out.iterations = 0; out.iterations < cfg.max_iterations;) {
        next.setZero();
        double dangling = 0.0;
        for (int u = 0; u < n; ++u) {
            const double mass = r[u];
            if (mass == 0.0) continue;
            const double wdeg = g.weighted_degree(u);
            if (wdeg == 0.0) {
                dangling += mass;
                continue;
            }
            const auto nbrs = g.neighbors(u);
            const auto ws = g.weights(u);
            const double share = mass / wdeg;
            for (std::size_t i = 0; i < nbrs.size(); ++i) next[nbrs[i]] += share * ws[i];
        }
        // dangling mass re-enters through the restart vector, like teleport
        next = cfg.alpha * (next + dangling * cfg.restart) + (1.0 - cfg.alpha) * cfg.restart;
        ++out.iterations;
        out.residual = (next - r).lpNorm<1>();
        r.swap(next);
        if (out.residual < cfg.tolerance) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged)
        Log::warn("pagerank", "no convergence after ", out.iterations,
                  " iterations, residual ", out.residual);
    out.scores = std::move(r);
    return out;
}

Eigen::VectorXd uniform_restart(int node_count) {
    if (node_count <= 0) throw std::invalid_argument("uniform_restart: empty node set");
    return Eigen::VectorXd::Constant(node_count, 1.0 / node_count);
}

Eigen::VectorXd restart_from_bad_users(const net::LabeledNetwork& g) {
    const int n = g.network.node_count();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    int bad = 0;
    for (int u = 0; u < n; ++u)
        if (g.labels[u] == Label::Bad) {
            e[u] = 1.0;
            ++bad;
        }
    if (bad == 0)
        throw std::invalid_argument("restart_from_bad_users: network has no Bad node");
    e /= static_cast<double>(bad);
    return e;
}

Eigen::VectorXd restart_from_app_rfm(const net::BipartiteNetwork& nb,
                                     const std::vector<AppUsage>& usage,
                                     double half_life_days) {
    if (half_life_days <= 0)
        throw std::invalid_argument("restart_from_app_rfm: half_life must be positive");
    const int users = nb.user_count();
    const int apps = nb.app_count();
    std::vector<double> freq_sum(apps, 0.0), rec_sum(apps, 0.0);
    std::vector<int> rows(apps, 0);
    for (const auto& row : usage) {
        const auto uit = nb.user_index.find(row.user_id);
        const auto ait = nb.app_index.find(row.app_id);
        if (uit == nb.user_index.end() || ait == nb.app_index.end()) continue;
        // only usage that became a bipartite edge feeds the indicator
        const auto& adj = nb.user_apps[uit->second];
        const auto pos = std::lower_bound(adj.begin(), adj.end(),
                                          std::make_pair(ait->second, 0.0),
                                          [](const auto& a, const auto& b) { return a.first < b.first; });
        if (pos == adj.end() || pos->first != ait->second) continue;
        freq_sum[ait->second] += row.uses_per_week;
        rec_sum[ait->second] += row.days_since_last_use;
        ++rows[ait->second];
    }
    double max_freq = 0.0;
    std::vector<double> mean_freq(apps, 0.0), mean_rec(apps, 0.0);
    for (int a = 0; a < apps; ++a) {
        if (rows[a] == 0) continue;
        mean_freq[a] = freq_sum[a] / rows[a];
        mean_rec[a] = rec_sum[a] / rows[a];
        max_freq = std::max(max_freq, mean_freq[a]);
    }
    if (max_freq <= 0.0)
        throw std::invalid_argument("restart_from_app_rfm: all app weights are zero");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(users + apps);
    for (int a = 0; a < apps; ++a)
        if (rows[a] > 0)
            e[users + a] = mean_freq[a] / max_freq * std::exp(-mean_rec[a] / half_life_days);
    const double total = e.sum();
    if (total <= 0.0)
        throw std::invalid_argument("restart_from_app_rfm: all app weights are zero");
    e /= total;
    return e;
}

}  // namespace pseudoscore::netfeat
