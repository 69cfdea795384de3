#include "pseudoscore/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pseudoscore/csv.hpp"
#include "pseudoscore/log.hpp"

namespace pseudoscore::net {

WeightedGraph WeightedGraph::from_edges(int node_count,
                                        const std::vector<std::tuple<int, int, double>>& edges) {
    std::vector<int> deg(node_count, 0);
    for (const auto& [u, v, w] : edges) {
        if (u < 0 || u >= node_count || v < 0 || v >= node_count)
            throw std::out_of_range("edge endpoint outside node range");
        if (u == v) throw std::invalid_argument("self-loop rejected");
        if (!(w > 0)) throw std::invalid_argument("edge weight must be positive");
        ++deg[u];
        ++deg[v];
    }
    WeightedGraph g;
    g.offsets_.assign(node_count + 1, 0);
    for (int u = 0; u < node_count; ++u) g.offsets_[u + 1] = g.offsets_[u] + deg[u];
    g.adjacency_.resize(g.offsets_.back());
    g.weights_.resize(g.offsets_.back());
    std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v, w] : edges) {
        g.adjacency_[cursor[u]] = v;
        g.weights_[cursor[u]++] = w;
        g.adjacency_[cursor[v]] = u;
        g.weights_[cursor[v]++] = w;
    }
    // sort each neighbor list by index, keep weights aligned
    std::vector<std::pair<int, double>> tmp;
    for (int u = 0; u < node_count; ++u) {
        const int lo = g.offsets_[u], hi = g.offsets_[u + 1];
        tmp.clear();
        for (int i = lo; i < hi; ++i) tmp.emplace_back(g.adjacency_[i], g.weights_[i]);
        std::sort(tmp.begin(), tmp.end());
        for (int i = lo; i < hi; ++i) {
            if (i > lo && tmp[i - lo].first == tmp[i - lo - 1].first)
                throw std::invalid_argument("duplicate edge rejected");
            g.adjacency_[i] = tmp[i - lo].first;
            g.weights_[i] = tmp[i - lo].second;
        }
    }
    g.weighted_degree_.assign(node_count, 0.0);
    for (int u = 0; u < node_count; ++u)
        for (double w : g.weights(u)) g.weighted_degree_[u] += w;
    return g;
}

bool WeightedGraph::has_edge(int u, int v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

double WeightedGraph::edge_weight(int u, int v) const {
    const auto nb = neighbors(u);
    const auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0.0;
    return weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

std::size_t BipartiteNetwork::edge_count() const {
    std::size_t n = 0;
    for (const auto& a : user_apps) n += a.size();
    return n;
}

int UnipartiteNetwork::index_of(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw std::out_of_range("unknown node id: " + id);
    return it->second;
}

BipartiteNetwork build_bipartite(const std::vector<AppUsage>& usage,
                                 const BipartiteOptions& opt,
                                 std::span<const std::string> extra_user_ids) {
    if (opt.frequency_threshold < 0)
        throw std::invalid_argument("frequency_threshold must be >= 0");
    BipartiteNetwork nb;
    auto user_of = [&](const std::string& id) {
        auto [it, inserted] = nb.user_index.emplace(id, nb.user_count());
        if (inserted) nb.user_ids.push_back(id);
        return it->second;
    };
    auto app_of = [&](const std::string& id) {
        auto [it, inserted] = nb.app_index.emplace(id, nb.app_count());
        if (inserted) nb.app_ids.push_back(id);
        return it->second;
    };
    for (const auto& id : extra_user_ids) user_of(id);

    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& row : usage) {
        const int u = user_of(row.user_id);
        const int a = app_of(row.app_id);
        if (row.uses_per_week < opt.frequency_threshold) continue;  // nodes stay
        const double w = opt.weight_mode == BipartiteWeightMode::Unit
                             ? 1.0
                             : std::max(row.uses_per_week, 1e-12);
        edges.emplace_back(u, a, w);
    }
    nb.user_apps.resize(nb.user_count());
    nb.app_users.resize(nb.app_count());
    for (const auto& [u, a, w] : edges) {
        nb.user_apps[u].emplace_back(a, w);
        nb.app_users[a].emplace_back(u, w);
    }
    for (auto& l : nb.user_apps) std::sort(l.begin(), l.end());
    for (auto& l : nb.app_users) std::sort(l.begin(), l.end());
    return nb;
}

UnipartiteNetwork project_to_unipartite(const BipartiteNetwork& nb, const ProjectionOptions& opt) {
    UnipartiteNetwork nu;
    nu.ids = nb.user_ids;
    nu.index = nb.user_index;
    const int n = nb.user_count();

    const std::size_t guard_cap =
        opt.dense_app_guard
            ? static_cast<std::size_t>(opt.max_app_user_share * static_cast<double>(n))
            : std::size_t(-1);

    // Accumulate pair weights app by app. Keyed on (min,max) packed into 64
    // bits; accumulation over unordered_map then sorted extraction keeps the
    // result independent of input order.
    std::unordered_map<std::uint64_t, double> acc;
    std::size_t skipped_apps = 0;
    for (int a = 0; a < nb.app_count(); ++a) {
        const auto& users = nb.app_users[a];
        if (users.size() > guard_cap) {
            ++skipped_apps;
            continue;
        }
        for (std::size_t i = 0; i < users.size(); ++i) {
            for (std::size_t j = i + 1; j < users.size(); ++j) {
                const auto [u, wu] = users[i];
                const auto [v, wv] = users[j];
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
                acc[key] += opt.rule == ProjectionRule::SharedCount ? 1.0 : std::min(wu, wv);
            }
        }
    }
    if (skipped_apps)
        Log::info("network", "dense-app guard skipped ", skipped_apps, " apps in projection");

    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(acc.size());
    for (const auto& [key, w] : acc)
        edges.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), w);
    std::sort(edges.begin(), edges.end());
    nu.graph = WeightedGraph::from_edges(n, edges);
    return nu;
}

LabeledNetwork attach_labels(UnipartiteNetwork nu,
                             const std::unordered_map<std::string, Label>& labels,
                             int* ignored_labels) {
    LabeledNetwork g;
    g.labels.assign(nu.ids.size(), Label::Unlabeled);
    for (std::size_t i = 0; i < nu.ids.size(); ++i) {
        auto it = labels.find(nu.ids[i]);
        if (it != labels.end()) g.labels[i] = it->second;
    }
    int ignored = 0;
    for (const auto& [id, label] : labels)
        if (!nu.index.count(id)) ++ignored;
    if (ignored) Log::warn("network", ignored, " labels refer to users absent from the network");
    if (ignored_labels) *ignored_labels = ignored;
    g.network = std::move(nu);
    return g;
}

WeightedGraph bipartite_as_graph(const BipartiteNetwork& nb) {
    const int u_count = nb.user_count();
    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < u_count; ++u)
        for (const auto& [a, w] : nb.user_apps[u]) edges.emplace_back(u, u_count + a, w);
    return WeightedGraph::from_edges(u_count + nb.app_count(), edges);
}

void write_unipartite(const UnipartiteNetwork& nu, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int u = 0; u < nu.node_count(); ++u)
        if (nu.graph.degree(u) == 0) out << "#node " << nu.ids[u] << '\n';
    for (int u = 0; u < nu.node_count(); ++u) {
        const auto nbrs = nu.graph.neighbors(u);
        const auto ws = nu.graph.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            if (u < nbrs[i])
                out << nu.ids[u] << ' ' << nu.ids[nbrs[i]] << ' ' << format_double(ws[i]) << '\n';
    }
}

UnipartiteNetwork read_unipartite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    UnipartiteNetwork nu;
    auto node_of = [&](const std::string& id) {
        auto [it, inserted] = nu.index.emplace(id, static_cast<int>(nu.ids.size()));
        if (inserted) nu.ids.push_back(id);
        return it->second;
    };
    std::vector<std::tuple<int, int, double>> edges;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (line[0] == '#') {
            ss >> a >> b;  // "#node <id>"
            if (a == "#node" && !b.empty()) node_of(b);
            continue;
        }
        double w;
        if (!(ss >> a >> b >> w)) throw std::runtime_error(path + ": malformed edge line");
        edges.emplace_back(node_of(a), node_of(b), w);
    }
    nu.graph = WeightedGraph::from_edges(static_cast<int>(nu.ids.size()), edges);
    return nu;
}

void write_bipartite(const BipartiteNetwork& nb, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int u = 0; u < nb.user_count(); ++u)
        if (nb.user_apps[u].empty()) out << "#user " << nb.user_ids[u] << '\n';
    for (int a = 0; a < nb.app_count(); ++a)
        if (nb.app_users[a].empty()) out << "#app " << nb.app_ids[a] << '\n';
    for (int u = 0; u < nb.user_count(); ++u)
        for (const auto& [a, w] : nb.user_apps[u])
            out << nb.user_ids[u] << ' ' << nb.app_ids[a] << ' ' << format_double(w) << '\n';
}

BipartiteNetwork read_bipartite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    BipartiteNetwork nb;
    auto user_of = [&](const std::string& id) {
        auto [it, inserted] = nb.user_index.emplace(id, nb.user_count());
        if (inserted) {
            nb.user_ids.push_back(id);
            nb.user_apps.emplace_back();
        }
        return it->second;
    };
    auto app_of = [&](const std::string& id) {
        auto [it, inserted] = nb.app_index.emplace(id, nb.app_count());
        if (inserted) {
            nb.app_ids.push_back(id);
            nb.app_users.emplace_back();
        }
        return it->second;
    };
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (line[0] == '#') {
            ss >> a >> b;
            if (a == "#user" && !b.empty()) user_of(b);
            if (a == "#app" && !b.empty()) app_of(b);
            continue;
        }
        double w;
        if (!(ss >> a >> b >> w)) throw std::runtime_error(path + ": malformed edge line");
        const int u = user_of(a), ap = app_of(b);
        nb.user_apps[u].emplace_back(ap, w);
        nb.app_users[ap].emplace_back(u, w);
    }
    for (auto& l : nb.user_apps) std::sort(l.begin(), l.end());
    for (auto& l : nb.app_users) std::sort(l.begin(), l.end());
    return nb;
}

}  // namespace pseudoscore::net
