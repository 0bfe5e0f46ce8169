#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hglfr/analysis.hpp"
#include "hglfr/graph.hpp"

namespace hglfr {

struct DetectionResult {
    Partition partition;
    std::string method;
    double gamma = 0;
    int iterations = 0;
    double q = 0;
};

// Asynchronous label propagation: nodes in random order adopt the most
// frequent neighbor label, ties broken uniformly at random.
inline DetectionResult label_propagation(const Graph& g, std::mt19937_64& rng,
                                         int max_sweeps = 100) {
    const int n = g.node_count();
    if (n == 0) throw validation_error("label propagation needs a nonempty graph");
    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        std::shuffle(order.begin(), order.end(), rng);
        bool stable = true;
        for (int v : order) {
            if (g.neighbors(v).empty()) continue;
            std::map<int, int> freq;
            for (int u : g.neighbors(v)) freq[label[u]] += 1;
            int best = 0;
            for (auto& [l, c] : freq) best = std::max(best, c);
            std::vector<int> modal;
            for (auto& [l, c] : freq)
                if (c == best) modal.push_back(l);
            bool already_modal =
                std::find(modal.begin(), modal.end(), label[v]) != modal.end();
            if (!already_modal) {
                label[v] = modal[std::uniform_int_distribution<std::size_t>(
                    0, modal.size() - 1)(rng)];
                stable = false;
            }
        }
        if (stable) break;
    }

    DetectionResult res{Partition(label, g), "label_propagation", 0.0, sweeps, 0.0};
    res.q = g.edge_count() > 0 ? modularity(g, res.partition, 1.0) : 0.0;
    return res;
}

namespace detail {

// Weighted multigraph view used by the aggregation phase.
struct WeightedGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;  // neighbor, weight
    std::vector<double> self_loop;                         // internal weight kept on a node
    std::vector<double> strength;                          // total incident weight incl. 2*self
    double total_weight = 0;                               // sum of strengths = 2m_w
};

inline WeightedGraph lift(const Graph& g) {
    WeightedGraph w;
    w.n = g.node_count();
    w.adj.assign(w.n, {});
    w.self_loop.assign(w.n, 0.0);
    w.strength.assign(w.n, 0.0);
    for (const auto& [u, v] : g.edges()) {
        w.adj[u].emplace_back(v, 1.0);
        w.adj[v].emplace_back(u, 1.0);
        w.strength[u] += 1.0;
        w.strength[v] += 1.0;
    }
    w.total_weight = 2.0 * g.edge_count();
    return w;
}

// One pass of local moving; returns true if any node moved.
inline bool local_move(const WeightedGraph& g, std::vector<int>& comm, double gamma,
                       std::mt19937_64& rng) {
    std::vector<double> comm_strength(g.n, 0.0);
    for (int v = 0; v < g.n; ++v) comm_strength[comm[v]] += g.strength[v];

    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const double two_m = g.total_weight;
    bool moved_any = false;
    std::vector<double> w_to(g.n, 0.0);
    std::vector<int> touched;
    for (int v : order) {
        touched.clear();
        for (const auto& [u, wt] : g.adj[v]) {
            if (w_to[comm[u]] == 0.0) touched.push_back(comm[u]);
            w_to[comm[u]] += wt;
        }
        int old = comm[v];
        comm_strength[old] -= g.strength[v];
        double base = w_to[old] - gamma * g.strength[v] * comm_strength[old] / two_m;
        int best = old;
        double best_gain = 0.0;
        for (int c : touched) {
            if (c == old) continue;
            double gain =
                (w_to[c] - gamma * g.strength[v] * comm_strength[c] / two_m) - base;
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best = c;
            }
        }
        comm[v] = best;
        comm_strength[best] += g.strength[v];
        if (best != old) moved_any = true;
        for (int c : touched) w_to[c] = 0.0;
        if (w_to[old] != 0.0) w_to[old] = 0.0;
    }
    return moved_any;
}

inline WeightedGraph aggregate(const WeightedGraph& g, const std::vector<int>& comm,
                               int comm_count) {
    WeightedGraph agg;
    agg.n = comm_count;
    agg.adj.assign(comm_count, {});
    agg.self_loop.assign(comm_count, 0.0);
    agg.strength.assign(comm_count, 0.0);
    agg.total_weight = g.total_weight;

    std::vector<std::map<int, double>> acc(comm_count);
    for (int v = 0; v < g.n; ++v) {
        agg.self_loop[comm[v]] += g.self_loop[v];
        for (const auto& [u, wt] : g.adj[v]) {
            if (u < v) continue;  // count each undirected edge once
            int a = comm[v], b = comm[u];
            if (a == b)
                agg.self_loop[a] += wt;
            else
                acc[std::min(a, b)][std::max(a, b)] += wt;
        }
    }
    for (int a = 0; a < comm_count; ++a) {
        for (auto& [b, wt] : acc[a]) {
            agg.adj[a].emplace_back(b, wt);
            agg.adj[b].emplace_back(a, wt);
            agg.strength[a] += wt;
            agg.strength[b] += wt;
        }
        agg.strength[a] += 2.0 * agg.self_loop[a];
    }
    return agg;
}

inline int relabel_dense(std::vector<int>& comm) {
    std::map<int, int> remap;
    for (int& c : comm) {
        auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
        c = it->second;
    }
    return static_cast<int>(remap.size());
}

// Split every community into its connected components.
inline std::vector<int> split_disconnected(const Graph& g, const std::vector<int>& comm) {
    const int n = g.node_count();
    std::vector<int> out(n, -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (out[s] != -1) continue;
        int label = next++;
        out[s] = label;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : g.neighbors(v)) {
                if (out[u] == -1 && comm[u] == comm[v] && comm[u] == comm[s]) {
                    out[u] = label;
                    stack.push_back(u);
                }
            }
        }
    }
    return out;
}

}  // namespace detail

// Louvain-style generalized-modularity maximization at resolution gamma, with
// a final refinement splitting any internally disconnected community.
inline DetectionResult maximize_modularity(const Graph& g, double gamma, std::mt19937_64& rng) {
    if (g.edge_count() <= 0)
        throw validation_error("modularity maximization needs at least one edge");
    if (gamma <= 0) throw validation_error("gamma must be positive");

    const int n = g.node_count();
    std::vector<int> node_comm(n);
    std::iota(node_comm.begin(), node_comm.end(), 0);

    detail::WeightedGraph level = detail::lift(g);
    std::vector<int> level_comm(n);
    std::iota(level_comm.begin(), level_comm.end(), 0);

    int iterations = 0;
    while (true) {
        ++iterations;
        bool moved = false;
        for (int pass = 0; pass < 100; ++pass) {
            if (!detail::local_move(level, level_comm, gamma, rng)) break;
            moved = true;
        }
        int count = detail::relabel_dense(level_comm);
        for (int v = 0; v < n; ++v) node_comm[v] = level_comm[node_comm[v]];
        if (!moved || count == level.n) break;
        level = detail::aggregate(level, level_comm, count);
        level_comm.assign(count, 0);
        std::iota(level_comm.begin(), level_comm.end(), 0);
    }

    auto refined = detail::split_disconnected(g, node_comm);
    Partition part(refined, g);

    // never return worse than the trivial one-community partition
    double q = modularity(g, part, gamma);
    Partition whole(std::vector<int>(n, 0), g);
    double q_whole = modularity(g, whole, gamma);
    if (q_whole > q) {
        part = std::move(whole);
        q = q_whole;
    }
    return DetectionResult{std::move(part), "modularity", gamma, iterations, q};
}

// Normalized mutual information with arithmetic-mean normalization.
inline double nmi(const Partition& p1, const Partition& p2) {
    if (p1.node_count() != p2.node_count())
        throw validation_error("nmi requires partitions over the same node universe");
    const int n = p1.node_count();
    if (n == 0) throw validation_error("nmi undefined on an empty node set");

    std::map<std::pair<int, int>, long long> joint;
    for (int v = 0; v < n; ++v)
        joint[{p1.community_of(v), p2.community_of(v)}] += 1;

    auto entropy = [n](const std::vector<int>& sizes) {
        double h = 0;
        for (int s : sizes) {
            if (s == 0) continue;
            double p = static_cast<double>(s) / n;
            h -= p * std::log(p);
        }
        return h;
    };
    double h1 = entropy(p1.community_sizes());
    double h2 = entropy(p2.community_sizes());
    if (h1 == 0.0 && h2 == 0.0) return 1.0;  // both trivial and identical in structure
    if (h1 == 0.0 || h2 == 0.0) return 0.0;

    double info = 0;
    for (const auto& [rs, count] : joint) {
        double pij = static_cast<double>(count) / n;
        double pi = static_cast<double>(p1.community_sizes()[rs.first]) / n;
        double pj = static_cast<double>(p2.community_sizes()[rs.second]) / n;
        info += pij * std::log(pij / (pi * pj));
    }
    double value = info / (0.5 * (h1 + h2));
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace hglfr
