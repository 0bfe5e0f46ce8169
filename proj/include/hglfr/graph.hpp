#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hglfr {

// Error categories surfaced to the CLI as distinct exit codes.
class validation_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class parameter_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class generation_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Simple undirected graph. Immutable after construction.
class Graph {
public:
    Graph() = default;

    // Validates node ids, rejects self-loops, deduplicates parallel edges.
    static Graph build(int node_count, std::vector<Edge> edge_list) {
        if (node_count < 0)
            throw validation_error("node_count must be non-negative");
        for (auto& [u, v] : edge_list) {
            if (u == v)
                throw validation_error("self-loop on node " + std::to_string(u));
            if (u < 0 || v < 0 || u >= node_count || v >= node_count)
                throw validation_error("edge endpoint out of range: (" +
                                       std::to_string(u) + "," + std::to_string(v) + ")");
            if (u > v) std::swap(u, v);
        }
        std::sort(edge_list.begin(), edge_list.end());
        edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());

        Graph g;
        g.n_ = node_count;
        g.edges_ = std::move(edge_list);
        g.adj_.assign(node_count, {});
        for (const auto& [u, v] : g.edges_) {
            g.adj_[u].push_back(v);
            g.adj_[v].push_back(u);
        }
        return g;
    }

    int node_count() const { return n_; }
    long long edge_count() const { return static_cast<long long>(edges_.size()); }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }

    long long degree_sum() const {
        return 2 * edge_count();
    }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
        int w = adj_[u].size() <= adj_[v].size() ? v : u;
        return std::find(a.begin(), a.end(), w) != a.end();
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

// Node -> community assignment with dense community ids 0..C-1.
// Community ids are remapped by first appearance, so construction is
// deterministic for a given assignment vector.
class Partition {
public:
    Partition() = default;

    Partition(std::vector<int> raw_assignment, const Graph& g) {
        if (static_cast<int>(raw_assignment.size()) != g.node_count())
            throw validation_error("partition does not cover the node universe");
        assignment_.resize(raw_assignment.size());
        std::vector<int> remap;
        remap.reserve(16);
        for (std::size_t v = 0; v < raw_assignment.size(); ++v) {
            int c = raw_assignment[v];
            if (c < 0) throw validation_error("negative community id");
            auto it = std::find(remap.begin(), remap.end(), c);
            int dense;
            if (it == remap.end()) {
                dense = static_cast<int>(remap.size());
                remap.push_back(c);
            } else {
                dense = static_cast<int>(it - remap.begin());
            }
            assignment_[v] = dense;
        }
        community_count_ = static_cast<int>(remap.size());
        sizes_.assign(community_count_, 0);
        degrees_.assign(community_count_, 0);
        for (int v = 0; v < g.node_count(); ++v) {
            sizes_[assignment_[v]] += 1;
            degrees_[assignment_[v]] += g.degree(v);
        }
    }

    int community_of(int v) const { return assignment_[v]; }
    int community_count() const { return community_count_; }
    int node_count() const { return static_cast<int>(assignment_.size()); }
    const std::vector<int>& assignment() const { return assignment_; }
    const std::vector<int>& community_sizes() const { return sizes_; }
    const std::vector<long long>& community_degrees() const { return degrees_; }

private:
    std::vector<int> assignment_;
    int community_count_ = 0;
    std::vector<int> sizes_;
    std::vector<long long> degrees_;
};

// C x C symmetric matrix of edge counts between communities.
// Diagonal entry (r,r) counts edges fully inside r.
inline std::vector<std::vector<long long>>
inter_community_edge_counts(const Graph& g, const Partition& p) {
    if (p.node_count() != g.node_count())
        throw validation_error("partition and graph node universes differ");
    int c = p.community_count();
    std::vector<std::vector<long long>> counts(c, std::vector<long long>(c, 0));
    for (const auto& [u, v] : g.edges()) {
        int r = p.community_of(u), s = p.community_of(v);
        counts[r][s] += 1;
        if (r != s) counts[s][r] += 1;
    }
    return counts;
}

// Merge communities of p_fine per the grouping map (community id -> group id).
inline Partition coarsen(const Partition& p_fine, const std::vector<int>& grouping,
                         const Graph& g) {
    if (static_cast<int>(grouping.size()) != p_fine.community_count())
        throw validation_error("grouping does not cover all communities");
    for (int gid : grouping)
        if (gid < 0) throw validation_error("missing group id in grouping");
    std::vector<int> assignment(p_fine.node_count());
    for (int v = 0; v < p_fine.node_count(); ++v)
        assignment[v] = grouping[p_fine.community_of(v)];
    return Partition(std::move(assignment), g);
}

// Nested coarsening chain l_0 .. l_{K-1}; the last level is the whole network.
class Hierarchy {
public:
    Hierarchy() = default;

    explicit Hierarchy(std::vector<Partition> levels) : levels_(std::move(levels)) {
        if (levels_.empty())
            throw validation_error("hierarchy needs at least one level");
        for (std::size_t i = 0; i + 1 < levels_.size(); ++i)
            parent_maps_.push_back(check_coarsening(levels_[i], levels_[i + 1]));
        if (levels_.back().community_count() != 1)
            throw validation_error("top hierarchy level must be a single community");
    }

    const std::vector<Partition>& levels() const { return levels_; }
    std::size_t level_count() const { return levels_.size(); }
    const Partition& level(std::size_t i) const { return levels_[i]; }
    // community id at level i -> community id at level i+1
    const std::vector<int>& parent_map(std::size_t i) const { return parent_maps_[i]; }

private:
    static std::vector<int> check_coarsening(const Partition& fine, const Partition& coarse) {
        if (fine.node_count() != coarse.node_count())
            throw validation_error("hierarchy levels cover different node universes");
        if (coarse.community_count() >= fine.community_count())
            throw validation_error("hierarchy level is not a strict coarsening");
        std::vector<int> parent(fine.community_count(), -1);
        for (int v = 0; v < fine.node_count(); ++v) {
            int f = fine.community_of(v), c = coarse.community_of(v);
            if (parent[f] == -1)
                parent[f] = c;
            else if (parent[f] != c)
                throw validation_error("community split across parents between levels");
        }
        return parent;
    }

    std::vector<Partition> levels_;
    std::vector<std::vector<int>> parent_maps_;
};

}  // namespace hglfr
