// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here; do not loosen them to make a
// run green.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hglfr/analysis.hpp"
#include "hglfr/detection.hpp"
#include "hglfr/io.hpp"

using namespace hglfr;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// shared parameter builders (the N=1000 benchmark cell)

GeneratorParams base_params(Mode mode, double mu, double delta, std::uint64_t seed) {
    GeneratorParams p;
    p.n = 1000;
    p.avg_degree = 14;
    p.k_max = 100;
    p.tau1 = 2.5;
    p.tau2 = 1.5;
    p.c_min = 50;
    p.c_max = 200;
    p.mode = mode;
    p.mu = mu;
    p.delta_mu = delta;
    p.seed = seed;
    return p;
}

HierarchyParams make_hp(double merge_prob, std::vector<double> mu, std::vector<double> delta) {
    HierarchyParams hp;
    hp.levels = static_cast<int>(mu.size());
    hp.merge_prob = merge_prob;
    hp.mu_levels = std::move(mu);
    hp.delta_levels = std::move(delta);
    return hp;
}

HierarchyParams low_hp(double s) { return make_hp(s, {0.33, 0.03, 0.027}, {0.03, 0.01, 0.002}); }
HierarchyParams medium_hp(double s) { return make_hp(s, {0.4, 0.2, 0.1}, {0.1, 0.1, 0.1}); }
HierarchyParams high_hp(double s) { return make_hp(s, {0.8, 0.6, 0.3}, {0.2, 0.2, 0.2}); }

// ---------------------------------------------------------------------------
// criterion 10 bookkeeping: structural invariants checked on every network
// generated by criteria 4-8

struct InvariantLog {
    long long networks = 0;
    long long violations = 0;
    std::vector<std::string> notes;

    void fail(const std::string& what) {
        ++violations;
        if (notes.size() < 8) notes.push_back(what);
    }
} g_invariants;

void check_structural_invariants(const GeneratedNetwork& net) {
    ++g_invariants.networks;
    const Graph& g = net.graph;

    // simple graph: sorted unique edges, no self loops, adjacency consistent
    std::set<Edge> seen;
    long long degsum = 0;
    for (const auto& [u, v] : g.edges()) {
        if (u == v) g_invariants.fail("self loop");
        if (u > v) g_invariants.fail("edge not canonical");
        if (!seen.insert({u, v}).second) g_invariants.fail("duplicate edge");
    }
    for (int v = 0; v < g.node_count(); ++v) degsum += g.degree(v);
    if (degsum != 2 * g.edge_count()) g_invariants.fail("degree sum != 2m");

    // coarsening chain: re-derive parents independently of Hierarchy's ctor
    for (std::size_t i = 0; i + 1 < net.hierarchy.level_count(); ++i) {
        const auto& fine = net.hierarchy.level(i);
        const auto& coarse = net.hierarchy.level(i + 1);
        if (coarse.community_count() >= fine.community_count())
            g_invariants.fail("chain not strictly coarsening");
        std::vector<int> parent(fine.community_count(), -1);
        for (int v = 0; v < g.node_count(); ++v) {
            int f = fine.community_of(v), c = coarse.community_of(v);
            if (parent[f] == -1)
                parent[f] = c;
            else if (parent[f] != c)
                g_invariants.fail("community split across parents");
        }
    }
    if (net.hierarchy.level(net.hierarchy.level_count() - 1).community_count() != 1)
        g_invariants.fail("top level not whole network");

    // mixing schedule row sums stay below one
    for (int c = 0; c < net.schedule.community_count(); ++c)
        if (net.schedule.total_external(c) >= 1.0) g_invariants.fail("mu row sum >= 1");

    // per-node internal degree fits inside the community; realized degree
    // never exceeds target by more than the parity repair
    const auto& ground = net.hierarchy.level(0);
    const auto& sizes = ground.community_sizes();
    for (int v = 0; v < g.node_count(); ++v) {
        int internal = 0;
        for (int u : g.neighbors(v))
            if (ground.community_of(u) == ground.community_of(v)) ++internal;
        if (internal > sizes[ground.community_of(v)] - 1)
            g_invariants.fail("internal degree exceeds community capacity");
        if (g.degree(v) > net.target_degrees[v] + 1)
            g_invariants.fail("realized degree exceeds target");
    }

    // m conservation in the inter-community edge count matrix
    auto counts = inter_community_edge_counts(g, ground);
    long long total = 0;
    for (int r = 0; r < ground.community_count(); ++r)
        for (int s = r; s < ground.community_count(); ++s) total += counts[r][s];
    if (total != g.edge_count()) g_invariants.fail("edge count matrix loses edges");
}

GeneratedNetwork generate_checked(const GeneratorParams& p, const HierarchyParams* hp = nullptr) {
    auto net = generate(p, hp);
    check_structural_invariants(net);
    return net;
}

double ground_distance(const GeneratedNetwork& net) {
    return resolution_window(omega_matrix(net.graph, net.hierarchy.level(0))).distance;
}

double louvain_nmi(const GeneratedNetwork& net, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto res = maximize_modularity(net.graph, 1.0, rng);
    return nmi(res.partition, net.hierarchy.level(0));
}

// Piecewise-linear x where a decreasing curve first crosses its own
// half-performance level, the midpoint between its best and worst mean score.
// Normalizing per curve keeps the crossing meaningful when a generator's
// curve bottoms out above zero inside the measurable mu range.
double half_crossing(std::vector<std::pair<double, double>> curve) {
    std::sort(curve.begin(), curve.end());
    if (curve.empty()) return 0.0;
    double top = curve.front().second, bottom = curve.front().second;
    for (const auto& [x, y] : curve) {
        top = std::max(top, y);
        bottom = std::min(bottom, y);
    }
    double level = 0.5 * (top + bottom);
    if (curve.front().second < level) return curve.front().first;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        double y0 = curve[i].second, y1 = curve[i + 1].second;
        if (y0 >= level && y1 < level) {
            double t = (y0 - level) / (y0 - y1);
            return curve[i].first + t * (curve[i + 1].first - curve[i].first);
        }
    }
    return curve.back().first + 1.0;  // never crossed
}

// ---------------------------------------------------------------------------
// criteria

bool criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        int n = std::uniform_int_distribution<int>(3, 12)(rng);
        std::vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (std::bernoulli_distribution(0.4)(rng)) edges.emplace_back(u, v);
        if (edges.empty()) {
            --trial;
            continue;
        }
        auto g = Graph::build(n, edges);
        std::vector<int> assign(n);
        for (int& a : assign) a = std::uniform_int_distribution<int>(0, 3)(rng);
        Partition p(assign, g);
        for (double gamma : {0.5, 1.0, 2.0}) {
            // brute-force pairwise double sum
            double two_m = 2.0 * g.edge_count();
            double brute = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (p.community_of(i) != p.community_of(j)) continue;
                    brute += (g.has_edge(i, j) ? 1.0 : 0.0) -
                             gamma * g.degree(i) * g.degree(j) / two_m;
                }
            brute /= two_m;
            if (std::fabs(modularity(g, p, gamma) - brute) > 1e-12) return false;
        }
    }
    return seconds_since(t0) < 10.0;
}

bool criterion_2() {
    for (int k = 0; k < 50; ++k) {
        Mode mode = k % 2 == 0 ? Mode::LFR : Mode::GLFR;
        double mu = 0.1 + 0.015 * k;
        auto net = generate_checked(base_params(mode, mu, mode == Mode::GLFR ? 0.1 : 0.0,
                                                2000 + k));
        const auto& p = net.hierarchy.level(0);
        auto omega = omega_matrix(net.graph, p);
        double two_m = 2.0 * net.graph.edge_count();
        double identity = 0;
        for (int r = 0; r < p.community_count(); ++r) {
            double kr = static_cast<double>(p.community_degrees()[r]);
            identity += (kr / two_m) * (kr / two_m) * (omega.values[r][r] - 1.0);
        }
        if (std::fabs(modularity(net.graph, p, 1.0) - identity) > 1e-9) return false;
    }
    return true;
}

bool criterion_3() {
    OmegaMatrix omega;
    omega.values = {{6.31, 1.75, 0.15, 0.13},
                    {1.75, 7.38, 0.68, 0.08},
                    {0.15, 0.68, 7.43, 0.26},
                    {0.13, 0.08, 0.26, 1.36}};
    auto w = resolution_window(omega);
    return std::fabs(w.lower - 1.75) <= 1e-12 && std::fabs(w.upper - 1.36) <= 1e-12 &&
           std::fabs(w.distance - (-0.39)) <= 1e-12;
}

bool criterion_4(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    struct Cell {
        GeneratorParams gp;
        const HierarchyParams* hp;
    };
    static const HierarchyParams low = low_hp(0.3), medium = medium_hp(0.3),
                                 high = high_hp(0.3);
    std::vector<Cell> cells = {
        {base_params(Mode::LFR, 0.1, 0.0, 0), nullptr},
        {base_params(Mode::LFR, 0.5, 0.0, 0), nullptr},
        {base_params(Mode::GLFR, 0.3, 0.3, 0), nullptr},
        {base_params(Mode::HGLFR, 0.0, 0.0, 0), &low},
        {base_params(Mode::HGLFR, 0.0, 0.0, 0), &medium},
        {base_params(Mode::HGLFR, 0.0, 0.0, 0), &high},
    };
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        long long degsum = 0, nodes = 0, within = 0;
        for (int r = 0; r < 20; ++r) {
            GeneratorParams gp = cells[ci].gp;
            gp.seed = 4000 + 100 * ci + r;
            auto net = generate_checked(gp, cells[ci].hp);
            for (int v = 0; v < net.graph.node_count(); ++v) {
                degsum += net.graph.degree(v);
                if (std::abs(net.graph.degree(v) - net.target_degrees[v]) <= 2) ++within;
            }
            nodes += net.graph.node_count();
        }
        double mean = static_cast<double>(degsum) / nodes;
        double frac = static_cast<double>(within) / nodes;
        if (std::fabs(mean - 14.0) > 1.4 || frac < 0.95) {
            std::ostringstream ss;
            ss << "cell " << ci << ": mean degree " << mean << ", within-2 fraction " << frac;
            detail = ss.str();
            return false;
        }
    }
    double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) {
        detail = "runtime " + std::to_string(elapsed) + "s";
        return false;
    }
    return true;
}

bool criterion_5(std::string& detail) {
    // (a) LFR with achieved mu <= 0.4 never yields D < 0
    int lfr_checked = 0, lfr_negative = 0;
    for (int k = 0; k < 100; ++k) {
        double mu = 0.05 + 0.35 * (k % 10) / 9.0;
        auto net = generate_checked(base_params(Mode::LFR, mu, 0.0, 5000 + k));
        if (net.meta.achieved_mu > 0.4) continue;
        ++lfr_checked;
        if (ground_distance(net) < 0.0) ++lfr_negative;
    }
    // (b) High parametrization: >= 10% of realizations assortative with D < 0
    auto high = high_hp(0.1);
    int high_total = 0, high_hits = 0;
    for (int k = 0; k < 100; ++k) {
        auto net = generate_checked(base_params(Mode::HGLFR, 0.0, 0.0, 5200 + k), &high);
        ++high_total;
        if (net.meta.achieved_mu < 0.5 && ground_distance(net) < 0.0) ++high_hits;
    }
    std::ostringstream ss;
    ss << "LFR D<0 cases: " << lfr_negative << "/" << lfr_checked
       << "; High mu<0.5 & D<0: " << high_hits << "/" << high_total;
    detail = ss.str();
    return lfr_checked >= 50 && lfr_negative == 0 &&
           high_hits * 10 >= high_total && high_total >= 100;
}

bool criterion_6(std::string& detail) {
    // LFR curve over fixed-mu cells
    std::vector<std::pair<double, double>> lfr_curve;
    double low_cell_total = 0;
    int low_cell_count = 0;
    for (double mu : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
        double total = 0;
        for (int r = 0; r < 20; ++r) {
            auto net = generate_checked(base_params(Mode::LFR, mu, 0.0,
                                                    6000 + std::llround(mu * 1000) + r));
            total += louvain_nmi(net, 60'000 + r);
        }
        lfr_curve.push_back({mu, total / 20.0});
        if (mu <= 0.1 + 1e-9) {
            low_cell_total += total;
            low_cell_count += 20;
        }
    }
    double low_mean = low_cell_total / low_cell_count;

    // Medium-parametrization cells at several merge probabilities, joined and
    // binned by achieved mu (0.05-wide bins); the merge probability spreads
    // the realized mixing across the bins without touching the mixing levels
    std::map<int, std::vector<double>> bins;  // bin index -> nmi samples
    int kseed = 0;
    for (double s : {0.1, 0.3, 0.6, 0.9}) {
        auto medium = medium_hp(s);
        for (int k = 0; k < 100; ++k, ++kseed) {
            auto net =
                generate_checked(base_params(Mode::HGLFR, 0.0, 0.0, 6500 + kseed), &medium);
            double mu = net.meta.achieved_mu;
            if (mu < 0.025 || mu >= 0.975) continue;
            int bin = static_cast<int>(std::lround(mu / 0.05));
            auto& samples = bins[bin];
            if (samples.size() >= 20) continue;  // 20 realizations per bin
            samples.push_back(louvain_nmi(net, 65'000 + kseed));
        }
    }
    std::vector<std::pair<double, double>> hglfr_curve;
    for (const auto& [bin, samples] : bins) {
        if (samples.size() < 20) continue;
        double mean = 0;
        for (double v : samples) mean += v;
        hglfr_curve.push_back({0.05 * bin, mean / samples.size()});
    }

    double lfr_cross = half_crossing(lfr_curve);
    double hglfr_cross = half_crossing(hglfr_curve);
    std::ostringstream ss;
    ss << "LFR low-mu NMI " << low_mean << "; half-performance crossings: HGLFR "
       << hglfr_cross << " vs LFR " << lfr_cross << " (" << hglfr_curve.size()
       << " HGLFR bins)";
    detail = ss.str();
    return low_mean >= 0.95 && hglfr_curve.size() >= 2 && hglfr_cross < lfr_cross;
}

bool criterion_7(std::string& detail) {
    // Assortative population (achieved mu < 0.2) over near-uniform community
    // sizes, joining a cold cell with a cell whose sibling pairs mix so
    // strongly that no resolution can separate them (mu_r + mu_s > 1). The D
    // sign then reflects a genuine resolution-limit structure instead of
    // disassortativity, matching both buckets on the same assortativity filter.
    auto params = [](std::uint64_t seed) {
        GeneratorParams p = base_params(Mode::HGLFR, 0.0, 0.0, seed);
        p.c_min = 150;
        p.c_max = 180;
        return p;
    };
    auto hot = make_hp(0.15, {0.55, 0.02}, {0.03, 0.02});
    auto cold = make_hp(0.15, {0.03, 0.02}, {0.02, 0.02});
    std::vector<double> nmi_neg, nmi_pos;
    for (int k = 0; k < 300 && (nmi_neg.size() < 20 || nmi_pos.size() < 20); ++k) {
        const HierarchyParams& hp = k % 2 == 0 ? hot : cold;
        auto net = generate_checked(params(7000 + k), &hp);
        if (net.meta.achieved_mu >= 0.2) continue;
        double d = ground_distance(net);
        auto& bucket = d < 0.0 ? nmi_neg : nmi_pos;
        if (bucket.size() >= 20) continue;
        bucket.push_back(louvain_nmi(net, 70'000 + k));
    }
    auto mean = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        return v.empty() ? 0.0 : m / v.size();
    };
    std::ostringstream ss;
    ss << "D<0 mean NMI " << mean(nmi_neg) << " (" << nmi_neg.size() << " nets), D>0 mean NMI "
       << mean(nmi_pos) << " (" << nmi_pos.size() << " nets)";
    detail = ss.str();
    return nmi_neg.size() == 20 && nmi_pos.size() == 20 &&
           mean(nmi_pos) - mean(nmi_neg) >= 0.05;
}

bool criterion_8(std::string& detail) {
    auto hp = make_hp(0.4, {0.1, 0.05}, {0.02, 0.01});
    auto grid = default_gamma_grid();  // 200 log-spaced points
    int eligible = 0, good = 0, skipped = 0;
    for (int k = 0; eligible < 20 && k < 80; ++k) {
        auto net = generate_checked(base_params(Mode::HGLFR, 0.0, 0.0, 8000 + k), &hp);
        if (ground_distance(net) <= 0.0) {
            ++skipped;
            continue;
        }
        // the two structured levels of a 2-level network: ground truth and the
        // merged level (the whole-network top carries no structure)
        std::vector<Partition> parts;
        for (const auto& level : net.hierarchy.levels())
            if (level.community_count() >= 2) parts.push_back(level);
        if (parts.size() < 2) {
            ++skipped;
            continue;
        }
        ++eligible;
        auto sweep = gamma_sweep(net.graph, parts, grid);
        bool all_levels = true;
        for (std::size_t i = 0; i < parts.size(); ++i) all_levels &= bool(sweep.has_interval[i]);
        if (all_levels) ++good;
    }
    std::ostringstream ss;
    ss << good << "/" << eligible << " realizations with both levels in the argmax envelope ("
       << skipped << " skipped)";
    detail = ss.str();
    return eligible == 20 && good * 10 >= eligible * 9;
}

bool criterion_9(std::string& detail) {
    auto dir_a = fs::temp_directory_path() / "hglfr_accept_det_a";
    auto dir_b = fs::temp_directory_path() / "hglfr_accept_det_b";

    auto run = [&](const fs::path& dir) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        auto hp = medium_hp(0.3);
        auto net = generate(base_params(Mode::HGLFR, 0.0, 0.0, 9090), &hp);
        write_network_dir(dir / "net", net, "HGLFR_Medium", 9090);
        // detection + analysis CSV content must be reproducible too
        std::ofstream csv(dir / "results.csv");
        csv << "level,communities,achieved_mu,distance,q1,louvain_nmi\n";
        for (std::size_t i = 0; i < net.hierarchy.level_count(); ++i) {
            const auto& level = net.hierarchy.level(i);
            csv << i << "," << level.community_count() << ","
                << achieved_mu(net.graph, level) << ",";
            if (level.community_count() >= 2)
                csv << resolution_window(omega_matrix(net.graph, level)).distance;
            else
                csv << "undefined";
            std::mt19937_64 rng(99);
            auto res = maximize_modularity(net.graph, 1.0, rng);
            csv << "," << modularity(net.graph, level, 1.0) << ","
                << nmi(res.partition, level) << "\n";
        }
    };
    run(dir_a);
    run(dir_b);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
        if (!entry.is_regular_file()) continue;
        auto rel = fs::relative(entry.path(), dir_a);
        if (slurp(entry.path()) != slurp(dir_b / rel)) {
            detail = "mismatch in " + rel.string();
            return false;
        }
    }
    return true;
}

bool criterion_10(std::string& detail) {
    std::ostringstream ss;
    ss << g_invariants.networks << " networks checked, " << g_invariants.violations
       << " violations";
    for (const auto& note : g_invariants.notes) ss << "; " << note;
    detail = ss.str();
    return g_invariants.networks > 0 && g_invariants.violations == 0;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        bool ok;
        std::string detail;
    };
    std::vector<Entry> entries;

    auto run = [&](int id, const char* name, auto&& fn) {
        Entry e{id, name, false, {}};
        try {
            if constexpr (std::is_invocable_v<decltype(fn), std::string&>) {
                e.ok = fn(e.detail);
            } else {
                e.ok = fn();
            }
        } catch (const std::exception& ex) {
            e.ok = false;
            e.detail = std::string("exception: ") + ex.what();
        }
        std::cout << "criterion " << id << " (" << name << "): " << (e.ok ? "PASS" : "FAIL");
        if (!e.detail.empty()) std::cout << " -- " << e.detail;
        std::cout << std::endl;
        entries.push_back(std::move(e));
    };

    run(1, "modularity oracle equivalence", [] { return criterion_1(); });
    run(2, "Q-omega identity", [] { return criterion_2(); });
    run(3, "resolution window unit check", [] { return criterion_3(); });
    run(4, "degree fidelity", [](std::string& d) { return criterion_4(d); });
    run(5, "D-regime separation", [](std::string& d) { return criterion_5(d); });
    run(6, "detection by mu", [](std::string& d) { return criterion_6(d); });
    run(7, "detection by D", [](std::string& d) { return criterion_7(d); });
    run(8, "hierarchy detectability", [](std::string& d) { return criterion_8(d); });
    run(9, "determinism", [](std::string& d) { return criterion_9(d); });
    run(10, "structural invariants", [](std::string& d) { return criterion_10(d); });

    int failures = 0;
    for (const auto& e : entries)
        if (!e.ok) ++failures;
    if (failures > 0) std::cout << failures << " criteria failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
