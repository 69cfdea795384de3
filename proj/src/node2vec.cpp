#include "pseudoscore/node2vec.hpp"

#include <stdexcept>

#include "pseudoscore/parallel.hpp"
#include "pseudoscore/rng.hpp"

namespace pseudoscore::embed {

void validate(const Node2VecConfig& cfg) {
    if (cfg.dimensions <= 0) throw std::invalid_argument("node2vec: dimensions must be positive");
    if (cfg.walks_per_node <= 0)
        throw std::invalid_argument("node2vec: walks_per_node must be positive");
    if (cfg.walk_length <= 0) throw std::invalid_argument("node2vec: walk_length must be positive");
    if (cfg.context_window <= 0)
        throw std::invalid_argument("node2vec: context_window must be positive");
    if (cfg.context_window >= cfg.walk_length)
        throw std::invalid_argument("node2vec: context_window must be smaller than walk_length");
    if (cfg.return_param <= 0) throw std::invalid_argument("node2vec: return_param must be positive");
    if (cfg.inout_param <= 0) throw std::invalid_argument("node2vec: inout_param must be positive");
    if (cfg.negative_samples <= 0)
        throw std::invalid_argument("node2vec: negative_samples must be positive");
    if (cfg.epochs <= 0) throw std::invalid_argument("node2vec: epochs must be positive");
    if (cfg.learning_rate <= 0)
        throw std::invalid_argument("node2vec: learning_rate must be positive");
}

std::vector<std::pair<int, double>> walk_transition_probs(const net::WeightedGraph& g, int prev,
                                                          int curr, const Node2VecConfig& cfg) {
    validate(cfg);
    if (curr < 0 || curr >= g.node_count())
        throw std::out_of_range("walk_transition_probs: curr outside the graph");
    if (prev >= 0) {
        if (prev >= g.node_count())
            throw std::out_of_range("walk_transition_probs: prev outside the graph");
        if (!g.has_edge(prev, curr))
            throw std::invalid_argument("walk_transition_probs: prev is not adjacent to curr");
    }
    const auto nbrs = g.neighbors(curr);
    const auto ws = g.weights(curr);
    std::vector<std::pair<int, double>> probs;
    probs.reserve(nbrs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        double w = ws[i];
        if (prev >= 0) {
            if (nbrs[i] == prev)
                w /= cfg.return_param;
            else if (!g.has_edge(prev, nbrs[i]))
                w /= cfg.inout_param;
        }
        probs.emplace_back(nbrs[i], w);
        total += w;
    }
    for (auto& [node, w] : probs) w /= total;
    return probs;
}

namespace {

// One biased walk. `mark`/`stamp` cache the previous node's neighborhood so
// each step costs O(deg(prev) + deg(curr)) instead of a has_edge search per
// candidate.
std::vector<int> run_walk(const net::WeightedGraph& g, int start, const Node2VecConfig& cfg,
                          Rng& rng, std::vector<std::uint64_t>& mark, std::uint64_t& stamp,
                          std::vector<double>& cum) {
    std::vector<int> walk;
    walk.reserve(static_cast<std::size_t>(cfg.walk_length));
    walk.push_back(start);
    int prev = -1;
    int curr = start;
    for (int step = 1; step < cfg.walk_length; ++step) {
        const auto nbrs = g.neighbors(curr);
        if (nbrs.empty()) break;
        const auto ws = g.weights(curr);
        cum.resize(nbrs.size());
        double acc = 0.0;
        if (prev < 0) {
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                acc += ws[i];
                cum[i] = acc;
            }
        } else {
            ++stamp;
            for (int x : g.neighbors(prev)) mark[static_cast<std::size_t>(x)] = stamp;
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                double w = ws[i];
                if (nbrs[i] == prev)
                    w /= cfg.return_param;
                else if (mark[static_cast<std::size_t>(nbrs[i])] != stamp)
                    w /= cfg.inout_param;
                acc += w;
                cum[i] = acc;
            }
        }
        const int next = nbrs[static_cast<std::size_t>(rng.categorical_from_cumulative(cum))];
        walk.push_back(next);
        prev = curr;
        curr = next;
    }
    return walk;
}

}  // namespace

std::vector<std::vector<int>> generate_walks(const net::WeightedGraph& g,
                                             const Node2VecConfig& cfg, int threads) {
    validate(cfg);
    const int n = g.node_count();
    if (n == 0) return {};

    // Visit order per round is shuffled up front so the corpus layout is a
    // pure function of the seed.
    std::vector<std::vector<int>> orders(static_cast<std::size_t>(cfg.walks_per_node));
    for (int r = 0; r < cfg.walks_per_node; ++r) {
        auto& order = orders[static_cast<std::size_t>(r)];
        order.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
        Rng rng(derive_seed(cfg.seed, "walks.order", static_cast<std::uint64_t>(r)));
        rng.shuffle(order);
    }

    std::vector<std::vector<int>> walks(static_cast<std::size_t>(cfg.walks_per_node) *
                                        static_cast<std::size_t>(n));
    parallel_for(walks.size(), threads, [&](std::size_t i) {
        static thread_local std::vector<std::uint64_t> mark;
        static thread_local std::uint64_t stamp = 0;
        static thread_local std::vector<double> cum;
        if (mark.size() < static_cast<std::size_t>(n)) mark.resize(static_cast<std::size_t>(n), 0);
        const int round = static_cast<int>(i / static_cast<std::size_t>(n));
        const int node = orders[static_cast<std::size_t>(round)][i % static_cast<std::size_t>(n)];
        Rng rng(derive_seed(cfg.seed, "walks.step", static_cast<std::uint64_t>(round),
                            static_cast<std::uint64_t>(node)));
        walks[i] = run_walk(g, node, cfg, rng, mark, stamp, cum);
    });
    return walks;
}

}  // namespace pseudoscore::embed
