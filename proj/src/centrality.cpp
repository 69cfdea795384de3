#include "pseudoscore/centrality.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pseudoscore/parallel.hpp"

namespace pseudoscore::netfeat {

Closeness closeness(const net::WeightedGraph& g, int node) {
    const int n = g.node_count();
    if (node < 0 || node >= n) throw std::out_of_range("unknown node index");
    std::vector<int> dist(n, -1);
    std::vector<int> queue;
    queue.reserve(64);
    dist[node] = 0;
    queue.push_back(node);
    long long total = 0;
    int reached = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int v : g.neighbors(u)) {
            if (dist[v] >= 0) continue;
            dist[v] = dist[u] + 1;
            total += dist[v];
            ++reached;
            queue.push_back(v);
        }
    }
    Closeness c;
    c.reachable_count = reached;
    if (reached > 0) c.avg_distance = static_cast<double>(total) / reached;
    return c;
}

std::vector<Closeness> closeness_all(const net::WeightedGraph& g, int threads) {
    std::vector<Closeness> out(static_cast<std::size_t>(g.node_count()));
    parallel_for(out.size(), threads,
                 [&](std::size_t u) { out[u] = closeness(g, static_cast<int>(u)); });
    return out;
}

namespace {

/// One Brandes source pass: BFS + backward dependency accumulation into acc.
void brandes_from(const net::WeightedGraph& g, int source, std::vector<double>& acc,
                  std::vector<int>& dist, std::vector<double>& sigma,
                  std::vector<double>& delta, std::vector<int>& order) {
    const int n = g.node_count();
    dist.assign(n, -1);
    sigma.assign(n, 0.0);
    delta.assign(n, 0.0);
    order.clear();

    dist[source] = 0;
    sigma[source] = 1.0;
    order.push_back(source);
    for (std::size_t head = 0; head < order.size(); ++head) {
        const int u = order[head];
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                order.push_back(v);
            }
            if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
    }
    // reverse BFS order: farthest nodes first
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int w = *it;
        for (int v : g.neighbors(w))
            if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        if (w != source) acc[w] += delta[w];
    }
}

}  // namespace

std::vector<double> betweenness(const net::WeightedGraph& g, int threads) {
    const int n = g.node_count();
    threads = resolve_threads(threads);
    const int workers = std::max(1, std::min(threads, n));

    // Per-worker accumulators, sources dealt round-robin by index; the final
    // reduction runs in worker order, so results do not depend on scheduling.
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(workers));
    parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
        auto& acc = partial[w];
        acc.assign(n, 0.0);
        std::vector<int> dist, order;
        std::vector<double> sigma, delta;
        for (int s = static_cast<int>(w); s < n; s += workers)
            brandes_from(g, s, acc, dist, sigma, delta, order);
    }, 1);

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (const auto& acc : partial)
        for (int u = 0; u < n; ++u) out[u] += acc[u];
    // each unordered pair is accumulated from both endpoints
    for (auto& v : out) v /= 2.0;
    return out;
}

}  // namespace pseudoscore::netfeat
