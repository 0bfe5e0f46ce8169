#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hglfr/analysis.hpp"
#include "hglfr/graph.hpp"
#include "hglfr/wiring.hpp"

namespace hglfr {

struct LoadedGraph {
    Graph graph;
    std::vector<std::string> labels;          // node index -> external label
    std::map<std::string, int> label_index;   // external label -> node index
};

// Edge list: one edge per line, two whitespace-separated labels, '#' comments.
// Arbitrary labels are remapped to dense ids in first-appearance order.
inline LoadedGraph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open edge list: " + path.string());
    LoadedGraph lg;
    std::vector<std::pair<int, int>> edges;
    std::string line;
    auto index_of = [&lg](const std::string& label) {
        auto [it, inserted] = lg.label_index.emplace(label, static_cast<int>(lg.labels.size()));
        if (inserted) lg.labels.push_back(label);
        return it->second;
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string a, b;
        if (!(ss >> a >> b)) continue;
        int ia = index_of(a);  // sequence the lookups: argument evaluation
        int ib = index_of(b);  // order must not decide label numbering
        edges.emplace_back(ia, ib);
    }
    lg.graph = Graph::build(static_cast<int>(lg.labels.size()), std::move(edges));
    return lg;
}

inline void write_edge_list(const std::filesystem::path& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write edge list: " + path.string());
    out << "# edge list: node_id node_id\n";
    for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
}

// Partition file: one line per node, "node_id<TAB>community_id".
inline std::vector<int> read_partition_file(const std::filesystem::path& path,
                                            const LoadedGraph& lg) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open partition: " + path.string());
    std::vector<int> assignment(lg.graph.node_count(), -1);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string node;
        int comm;
        if (!(ss >> node >> comm)) continue;
        auto it = lg.label_index.find(node);
        if (it == lg.label_index.end())
            throw validation_error("partition names unknown node: " + node);
        assignment[it->second] = comm;
    }
    for (std::size_t v = 0; v < assignment.size(); ++v)
        if (assignment[v] < 0)
            throw validation_error("partition misses node " + lg.labels[v]);
    return assignment;
}

inline void write_partition_file(const std::filesystem::path& path, const Partition& p) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write partition: " + path.string());
    for (int v = 0; v < p.node_count(); ++v)
        out << v << "\t" << p.community_of(v) << "\n";
}

// Hierarchy document: per transition, the mapping community_id -> parent id.
inline void write_hierarchy_file(const std::filesystem::path& path, const Hierarchy& h) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write hierarchy: " + path.string());
    out << "# hierarchy: per level, community_id parent_community_id\n";
    out << "levels " << h.level_count() << "\n";
    for (std::size_t i = 0; i + 1 < h.level_count(); ++i) {
        out << "level " << i << "\n";
        const auto& parent = h.parent_map(i);
        for (std::size_t c = 0; c < parent.size(); ++c)
            out << c << " " << parent[c] << "\n";
    }
}

// Returns, per transition level, the community -> parent mapping.
inline std::vector<std::vector<int>> read_hierarchy_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open hierarchy: " + path.string());
    std::vector<std::vector<int>> maps;
    std::string line;
    int declared_levels = -1;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        if (word == "levels") {
            ss >> declared_levels;
        } else if (word == "level") {
            maps.emplace_back();
        } else {
            int child = std::stoi(word), parent;
            if (!(ss >> parent)) throw validation_error("malformed hierarchy line");
            if (maps.empty()) throw validation_error("hierarchy entry before level header");
            auto& m = maps.back();
            if (static_cast<int>(m.size()) != child)
                throw validation_error("hierarchy community ids must be dense and ordered");
            m.push_back(parent);
        }
    }
    if (declared_levels >= 0 && static_cast<int>(maps.size()) + 1 != declared_levels)
        throw validation_error("hierarchy level count mismatch");
    return maps;
}

// One generated network on disk: edge list, per-level partitions, hierarchy
// document, and a metadata record.
inline void write_network_dir(const std::filesystem::path& dir, const GeneratedNetwork& net,
                              const std::string& generator_name, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    write_edge_list(dir / "edges.txt", net.graph);
    for (std::size_t i = 0; i < net.hierarchy.level_count(); ++i)
        write_partition_file(dir / ("level_" + std::to_string(i) + ".txt"),
                             net.hierarchy.level(i));
    write_hierarchy_file(dir / "hierarchy.txt", net.hierarchy);

    nlohmann::json meta;
    meta["schema"] = "hglfr-network-meta-v1";
    meta["generator"] = generator_name;
    meta["seed"] = seed;
    meta["n"] = net.graph.node_count();
    meta["m"] = net.graph.edge_count();
    meta["levels"] = net.hierarchy.level_count();
    meta["achieved_mu"] = net.meta.achieved_mu;
    meta["dropped_stubs"] = net.meta.dropped_stubs;
    meta["retries"] = net.meta.retries;
    meta["target_stub_sum"] = net.meta.target_stub_sum;
    const auto& ground = net.hierarchy.level(0);
    if (ground.community_count() >= 2) {
        auto window = resolution_window(omega_matrix(net.graph, ground));
        meta["omega_lower"] = window.lower;
        meta["omega_upper"] = window.upper;
        meta["distance"] = window.distance;
    }
    std::ofstream out(dir / "metadata.json");
    out << meta.dump(2) << "\n";
}

struct NetworkOnDisk {
    LoadedGraph loaded;
    std::vector<Partition> levels;
};

inline NetworkOnDisk read_network_dir(const std::filesystem::path& dir) {
    NetworkOnDisk net;
    net.loaded = read_edge_list(dir / "edges.txt");
    for (std::size_t i = 0;; ++i) {
        auto path = dir / ("level_" + std::to_string(i) + ".txt");
        if (!std::filesystem::exists(path)) break;
        net.levels.emplace_back(read_partition_file(path, net.loaded), net.loaded.graph);
    }
    if (net.levels.empty())
        throw validation_error("network directory has no level_0.txt: " + dir.string());
    return net;
}

}  // namespace hglfr
