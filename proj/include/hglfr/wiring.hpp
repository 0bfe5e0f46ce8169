#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <unordered_set>
#include <vector>

#include "hglfr/graph.hpp"
#include "hglfr/sampling.hpp"

namespace hglfr {

// Per-node stub budgets: internal edges within the home community plus one
// external budget per hierarchy level.
struct StubLedger {
    std::vector<int> internal;               // [node]
    std::vector<std::vector<int>> external;  // [level][node]
};

struct GenerationMetadata {
    int retries = 0;
    long long dropped_stubs = 0;
    double achieved_mu = 0.0;
    long long target_stub_sum = 0;
};

struct GeneratedNetwork {
    Graph graph;
    Hierarchy hierarchy;
    MixingSchedule schedule;
    HierarchySkeleton skeleton;
    DegreeSequence target_degrees;
    std::vector<int> community;  // node -> base community
    GenerationMetadata meta;
};

namespace detail {

inline std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

// Distribute `total` units over items proportionally to `weights`,
// largest-remainder rounding, ties to the lower index.
inline std::vector<int> largest_remainder(const std::vector<double>& weights, long long total) {
    const std::size_t n = weights.size();
    std::vector<int> out(n, 0);
    double wsum = 0;
    for (double w : weights) wsum += w;
    if (wsum <= 0 || total <= 0) return out;

    std::vector<std::pair<double, std::size_t>> rema(n);
    long long assigned = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double quota = total * weights[j] / wsum;
        out[j] = static_cast<int>(std::floor(quota));
        assigned += out[j];
        rema[j] = {quota - out[j], j};
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long long r = total - assigned, j = 0; r > 0; --r, ++j)
        out[rema[j % n].second] += 1;
    return out;
}

// Random stub matching with duplicate/self-edge repair. Stubs carry a part id;
// when forbid_same_part is set, matched stubs must come from different parts.
// Colliding pairs get two swap attempts against already-accepted edges of this
// context, then their stubs are dropped.
inline void match_stub_pool(std::vector<std::pair<int, int>> pool, bool forbid_same_part,
                            const std::vector<int>& node_part,
                            std::unordered_set<std::uint64_t>& edge_keys,
                            std::vector<Edge>& out_edges, std::mt19937_64& rng,
                            long long& dropped) {
    std::vector<Edge> accepted;

    auto valid = [&](int a, int b) {
        if (a == b) return false;
        if (forbid_same_part && node_part[a] == node_part[b]) return false;
        return edge_keys.find(edge_key(a, b)) == edge_keys.end();
    };
    auto add = [&](int a, int b) {
        edge_keys.insert(edge_key(a, b));
        accepted.push_back(make_edge(a, b));
    };

    int stale_rounds = 0;
    for (int round = 0; round < 200 && pool.size() >= 2 && stale_rounds < 4; ++round) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<std::pair<int, int>> next;
        bool progress = false;
        std::size_t i = 0;
        for (; i + 1 < pool.size(); i += 2) {
            int a = pool[i].first, b = pool[i + 1].first;
            if (valid(a, b)) {
                add(a, b);
                progress = true;
                continue;
            }
            bool repaired = false;
            for (int attempt = 0; attempt < 2 && !accepted.empty() && !repaired; ++attempt) {
                std::size_t j =
                    std::uniform_int_distribution<std::size_t>(0, accepted.size() - 1)(rng);
                auto [c, d] = accepted[j];
                if (std::bernoulli_distribution(0.5)(rng)) std::swap(c, d);
                edge_keys.erase(edge_key(c, d));
                if (valid(a, c) && valid(b, d) && edge_key(a, c) != edge_key(b, d)) {
                    accepted[j] = accepted.back();
                    accepted.pop_back();
                    add(a, c);
                    add(b, d);
                    repaired = true;
                } else if (valid(a, d) && valid(b, c) && edge_key(a, d) != edge_key(b, c)) {
                    accepted[j] = accepted.back();
                    accepted.pop_back();
                    add(a, d);
                    add(b, c);
                    repaired = true;
                } else {
                    edge_keys.insert(edge_key(c, d));
                }
            }
            if (repaired) {
                progress = true;
            } else {
                next.push_back(pool[i]);
                next.push_back(pool[i + 1]);
            }
        }
        if (i < pool.size()) next.push_back(pool[i]);  // odd leftover
        stale_rounds = progress ? 0 : stale_rounds + 1;
        pool = std::move(next);
    }
    dropped += static_cast<long long>(pool.size());
    out_edges.insert(out_edges.end(), accepted.begin(), accepted.end());
}

}  // namespace detail

// Stub budgets from the mixing schedule. Community-level totals use
// largest-remainder rounding against mu(c,i) * K_c; per-level demands are
// pre-balanced so no matching context is dominated by a single side (the
// unmatchable excess stays internal, preserving node degrees).
inline StubLedger build_ledger(const DegreeSequence& degrees, const std::vector<int>& community,
                               const std::vector<int>& sizes, const MixingSchedule& sched,
                               const HierarchySkeleton& sk) {
    const int n = static_cast<int>(degrees.size());
    const int cc = static_cast<int>(sizes.size());
    const int levels = sched.levels;

    std::vector<long long> community_degree(cc, 0);
    std::vector<std::vector<int>> members(cc);
    for (int v = 0; v < n; ++v) {
        community_degree[community[v]] += degrees[v];
        members[community[v]].push_back(v);
    }

    // community totals per level
    std::vector<std::vector<long long>> totals(cc, std::vector<long long>(levels, 0));
    for (int c = 0; c < cc; ++c)
        for (int i = 0; i < levels; ++i)
            totals[c][i] = std::llround(sched.mu[c][i] * community_degree[c]);

    // balance every matching context: within a level-i group, one side (a part
    // = group at level i-1) cannot demand more than its counterparts supply
    for (int i = 0; i < levels; ++i) {
        std::map<int, std::vector<int>> groups;  // level-i group -> communities
        for (int c = 0; c < cc; ++c) groups[sk.group_of[i][c]].push_back(c);
        for (auto& [gid, comms] : groups) {
            for (int pass = 0; pass < levels + 2; ++pass) {
                std::map<int, long long> part_demand;
                for (int c : comms) {
                    int part = i == 0 ? c : sk.group_of[i - 1][c];
                    part_demand[part] += totals[c][i];
                }
                long long total = 0, worst = -1;
                int worst_part = -1;
                for (auto& [part, d] : part_demand) {
                    total += d;
                    if (d > worst) {
                        worst = d;
                        worst_part = part;
                    }
                }
                if (worst <= 0) break;
                long long rest = total - worst;
                if (worst <= rest) break;
                if (rest == 0)
                    throw generation_error("no counterpart stubs at hierarchy level " +
                                           std::to_string(i));
                // shrink the dominating part to what the counterparts supply
                std::vector<int> part_comms;
                std::vector<double> w;
                for (int c : comms) {
                    int part = i == 0 ? c : sk.group_of[i - 1][c];
                    if (part == worst_part && totals[c][i] > 0) {
                        part_comms.push_back(c);
                        w.push_back(static_cast<double>(totals[c][i]));
                    }
                }
                auto reduced = detail::largest_remainder(w, rest);
                for (std::size_t j = 0; j < part_comms.size(); ++j)
                    totals[part_comms[j]][i] = reduced[j];
            }
        }
    }

    StubLedger ledger;
    ledger.internal.assign(n, 0);
    ledger.external.assign(levels, std::vector<int>(n, 0));

    for (int c = 0; c < cc; ++c) {
        std::vector<double> w(members[c].size());
        for (std::size_t j = 0; j < members[c].size(); ++j)
            w[j] = static_cast<double>(degrees[members[c][j]]);
        for (int i = 0; i < levels; ++i) {
            if (totals[c][i] <= 0) continue;
            auto share = detail::largest_remainder(w, totals[c][i]);
            for (std::size_t j = 0; j < members[c].size(); ++j)
                ledger.external[i][members[c][j]] = share[j];
        }
    }

    for (int v = 0; v < n; ++v) {
        int ext = 0;
        for (int i = 0; i < levels; ++i) ext += ledger.external[i][v];
        while (ext > degrees[v]) {
            int imax = 0;
            for (int i = 1; i < levels; ++i)
                if (ledger.external[i][v] > ledger.external[imax][v]) imax = i;
            ledger.external[imax][v] -= 1;
            ext -= 1;
        }
        ledger.internal[v] = degrees[v] - ext;
        int cap = sizes[community[v]] - 1;
        if (ledger.internal[v] > cap) {
            int surplus = ledger.internal[v] - cap;
            ledger.internal[v] = cap;
            int imax = 0;
            for (int i = 1; i < levels; ++i)
                if (ledger.external[i][v] > ledger.external[imax][v]) imax = i;
            ledger.external[imax][v] += surplus;
        }
    }
    return ledger;
}

// Step 5: configuration-model matching of each community's internal stubs.
inline void wire_internal(const std::vector<std::vector<int>>& members, StubLedger& ledger,
                          std::unordered_set<std::uint64_t>& edge_keys,
                          std::vector<Edge>& out_edges, std::mt19937_64& rng,
                          long long& dropped) {
    std::vector<int> no_parts;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const auto& mem = members[c];
        long long total = 0;
        for (int v : mem) total += ledger.internal[v];
        if (mem.size() == 1 && total > 0)
            throw generation_error("community of size 1 with positive internal budget");
        if (total % 2 != 0) {
            // parity repair on a random member
            std::uniform_int_distribution<std::size_t> pick(0, mem.size() - 1);
            for (int tries = 0; tries < 64; ++tries) {
                int v = mem[pick(rng)];
                if (ledger.internal[v] < static_cast<int>(mem.size()) - 1) {
                    ledger.internal[v] += 1;
                    total += 1;
                    break;
                }
                if (ledger.internal[v] > 0) {
                    ledger.internal[v] -= 1;
                    total -= 1;
                    break;
                }
            }
            if (total % 2 != 0) {
                dropped += 1;
                continue;
            }
        }
        std::vector<std::pair<int, int>> pool;
        pool.reserve(total);
        for (int v : mem)
            for (int s = 0; s < ledger.internal[v]; ++s) pool.emplace_back(v, 0);
        if (no_parts.empty()) no_parts.assign(ledger.internal.size(), 0);
        detail::match_stub_pool(std::move(pool), false, no_parts, edge_keys, out_edges, rng,
                                dropped);
    }
}

// Step 6: match level-i external stubs across the parts of each merged group,
// so a community only wires toward the communities it first meets at level i.
inline void wire_external(const std::vector<int>& community, const HierarchySkeleton& sk,
                          const StubLedger& ledger, std::unordered_set<std::uint64_t>& edge_keys,
                          std::vector<Edge>& out_edges, std::mt19937_64& rng,
                          long long& dropped) {
    const int n = static_cast<int>(community.size());
    const int levels = static_cast<int>(ledger.external.size());
    std::vector<int> node_part(n, 0);

    for (int i = 0; i < levels; ++i) {
        std::map<int, std::vector<std::pair<int, int>>> pools;  // level-i group -> stubs
        for (int v = 0; v < n; ++v) {
            int b = ledger.external[i][v];
            if (b <= 0) continue;
            int c = community[v];
            int part = i == 0 ? c : sk.group_of[i - 1][c];
            node_part[v] = part;
            auto& pool = pools[sk.group_of[i][c]];
            for (int s = 0; s < b; ++s) pool.emplace_back(v, part);
        }
        for (auto& [gid, pool] : pools) {
            if (pool.size() < 2) {
                dropped += static_cast<long long>(pool.size());
                continue;
            }
            bool multi_part = false;
            for (std::size_t j = 1; j < pool.size() && !multi_part; ++j)
                multi_part = pool[j].second != pool[0].second;
            if (!multi_part)
                throw generation_error("no counterpart stubs at hierarchy level " +
                                       std::to_string(i));
            detail::match_stub_pool(std::move(pool), true, node_part, edge_keys, out_edges, rng,
                                    dropped);
        }
    }
}

namespace detail {

// Greedy re-seating: when one side of a level-i matching context demands more
// stubs than its counterparts can supply, swap the most demanding community's
// sub-hierarchy with a random community from the largest other part.
inline bool reseat_skeleton(HierarchySkeleton& sk, const MixingSchedule& sched,
                            const std::vector<long long>& community_degree,
                            std::mt19937_64& rng, int max_swaps = 1000) {
    bool changed = false;
    int swaps = 0;
    for (int i = 1; i < sk.levels() && swaps < max_swaps; ++i) {
        for (int round = 0; round < 64 && swaps < max_swaps; ++round) {
            // demand per (group, part)
            std::map<int, std::map<int, long long>> demand;
            std::map<int, std::map<int, std::vector<int>>> part_members;
            for (int c = 0; c < sk.base_count; ++c) {
                int g = sk.group_of[i][c];
                int part = sk.group_of[i - 1][c];
                long long d = std::llround(sched.mu[c][i] * community_degree[c]);
                demand[g][part] += d;
                part_members[g][part].push_back(c);
            }
            bool fixed_any = false;
            for (auto& [g, parts] : demand) {
                if (parts.size() < 2) continue;
                long long total = 0, worst = -1;
                int worst_part = -1;
                for (auto& [p, d] : parts) {
                    total += d;
                    if (d > worst) { worst = d; worst_part = p; }
                }
                if (worst <= total - worst) continue;
                // offender: most demanding community of the dominating part
                int offender = -1;
                long long best = -1;
                for (int c : part_members[g][worst_part]) {
                    long long d = std::llround(sched.mu[c][i] * community_degree[c]);
                    if (d > best) { best = d; offender = c; }
                }
                // partner: random community from the largest other part
                int largest_part = -1;
                std::size_t largest_size = 0;
                for (auto& [p, mem] : part_members[g]) {
                    if (p == worst_part) continue;
                    if (mem.size() > largest_size) {
                        largest_size = mem.size();
                        largest_part = p;
                    }
                }
                if (offender < 0 || largest_part < 0) continue;
                auto& candidates = part_members[g][largest_part];
                int partner = candidates[std::uniform_int_distribution<std::size_t>(
                    0, candidates.size() - 1)(rng)];
                // swap the two communities' chains below level i
                for (int j = 0; j < i; ++j)
                    std::swap(sk.group_of[j][offender], sk.group_of[j][partner]);
                ++swaps;
                changed = true;
                fixed_any = true;
            }
            if (!fixed_any) break;
        }
    }
    if (changed) fill_spans(sk);
    return changed;
}

}  // namespace detail

// Full pipeline. LFR and GLFR run as single-level hierarchies.
inline GeneratedNetwork generate(const GeneratorParams& params,
                                 const HierarchyParams* hp_in = nullptr, int max_retries = 10) {
    params.validate();

    HierarchyParams hp;
    if (params.mode == Mode::HGLFR) {
        if (hp_in == nullptr)
            throw parameter_error("HGLFR mode requires hierarchy parameters");
        hp = *hp_in;
    } else {
        hp.levels = 1;
        hp.merge_prob = 1.0;
        hp.mu_levels = {params.mu};
        hp.delta_levels = {params.mode == Mode::GLFR ? params.delta_mu : 0.0};
        double lo = params.mu - hp.delta_levels[0];
        double hi = params.mu + hp.delta_levels[0];
        if (lo < 0.0 || hi >= 1.0) {
            // clamp the GLFR interval into (0,1)
            if (std::max(0.0, lo) > std::min(0.99, hi))
                throw parameter_error("empty mixing interval after clamping");
        }
    }
    hp.validate();

    std::string last_error = "generation failed";
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::seed_seq seq{params.seed, static_cast<std::uint64_t>(attempt)};
        std::mt19937_64 rng(seq);
        try {
            GeneratedNetwork net;
            net.target_degrees = sample_power_law_degrees(params, rng);
            auto sizes = sample_community_sizes(params, rng);
            const int cc = static_cast<int>(sizes.size());
            if (hp.levels >= 2 && cc < 2)
                throw parameter_error("hierarchy requested but only one community sampled");

            net.skeleton = sample_hierarchy(cc, hp, rng);
            net.schedule = assign_mixing(net.skeleton, hp, rng);
            net.community = assign_nodes(net.target_degrees, sizes, net.schedule, rng);

            std::vector<long long> community_degree(cc, 0);
            for (std::size_t v = 0; v < net.community.size(); ++v)
                community_degree[net.community[v]] += net.target_degrees[v];

            if (hp.levels >= 2 &&
                detail::reseat_skeleton(net.skeleton, net.schedule, community_degree, rng)) {
                net.schedule = assign_mixing(net.skeleton, hp, rng);
                net.community = assign_nodes(net.target_degrees, sizes, net.schedule, rng);
                community_degree.assign(cc, 0);
                for (std::size_t v = 0; v < net.community.size(); ++v)
                    community_degree[net.community[v]] += net.target_degrees[v];
            }

            auto ledger = build_ledger(net.target_degrees, net.community, sizes, net.schedule,
                                       net.skeleton);

            std::vector<std::vector<int>> members(cc);
            for (std::size_t v = 0; v < net.community.size(); ++v)
                members[net.community[v]].push_back(static_cast<int>(v));

            std::unordered_set<std::uint64_t> edge_keys;
            std::vector<Edge> edges;
            long long dropped = 0;
            wire_internal(members, ledger, edge_keys, edges, rng, dropped);
            wire_external(net.community, net.skeleton, ledger, edge_keys, edges, rng, dropped);

            net.graph = Graph::build(params.n, std::move(edges));
            net.meta.retries = attempt;
            net.meta.dropped_stubs = dropped;
            long long target_sum = 0;
            for (int k : net.target_degrees) target_sum += k;
            net.meta.target_stub_sum = target_sum;

            // hierarchy: ground truth plus each strictly coarser skeleton level
            Partition ground(net.community, net.graph);
            std::vector<Partition> levels{ground};
            for (int i = 0; i < net.skeleton.levels(); ++i) {
                Partition coarse = coarsen(ground, net.skeleton.group_of[i], net.graph);
                if (coarse.community_count() < levels.back().community_count())
                    levels.push_back(std::move(coarse));
            }
            if (levels.back().community_count() != 1) {
                std::vector<int> all_one(levels.front().community_count(), 0);
                levels.push_back(coarsen(ground, all_one, net.graph));
            }
            net.hierarchy = Hierarchy(std::move(levels));

            long long external_edges = 0;
            for (const auto& [u, v] : net.graph.edges())
                if (net.community[u] != net.community[v]) ++external_edges;
            net.meta.achieved_mu =
                net.graph.edge_count() > 0
                    ? static_cast<double>(external_edges) / net.graph.edge_count()
                    : 0.0;
            return net;
        } catch (const generation_error& e) {
            last_error = e.what();
        }
    }
    throw generation_error("generation failed after " + std::to_string(max_retries) +
                           " attempts: " + last_error);
}

}  // namespace hglfr
