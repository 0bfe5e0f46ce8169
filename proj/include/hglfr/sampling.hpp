#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hglfr/graph.hpp"

namespace hglfr {

enum class Mode { LFR, GLFR, HGLFR };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::LFR: return "LFR";
        case Mode::GLFR: return "GLFR";
        case Mode::HGLFR: return "HGLFR";
    }
    return "?";
}

struct GeneratorParams {
    int n = 0;
    double avg_degree = 0;
    int k_max = 0;
    double tau1 = 2.5;   // degree exponent
    double tau2 = 1.5;   // community size exponent
    int c_min = 0;
    int c_max = 0;
    Mode mode = Mode::LFR;
    double mu = 0.0;       // LFR/GLFR global mixing
    double delta_mu = 0.0; // GLFR half-width
    std::uint64_t seed = 0;

    void validate() const {
        if (n <= 0) throw parameter_error("n must be positive");
        if (avg_degree <= 0) throw parameter_error("avg_degree must be positive");
        if (k_max <= 0 || k_max >= n) throw parameter_error("require 0 < k_max < n");
        if (tau1 <= 1.0 || tau2 <= 1.0) throw parameter_error("power-law exponents must exceed 1");
        if (c_min <= 0 || c_min > c_max || c_max > n)
            throw parameter_error("require 0 < c_min <= c_max <= n");
        if (mode != Mode::HGLFR) {
            if (mu <= 0.0 || mu >= 1.0) throw parameter_error("mu must lie in (0,1)");
            if (delta_mu < 0.0) throw parameter_error("delta_mu must be >= 0");
        }
    }
};

struct HierarchyParams {
    int levels = 1;          // L: number of mixing levels above the ground truth
    double merge_prob = 0.5; // S
    std::vector<double> mu_levels;
    std::vector<double> delta_levels;

    void validate() const {
        if (levels < 1) throw parameter_error("hierarchy needs at least one level");
        if (merge_prob <= 0.0 || merge_prob > 1.0)
            throw parameter_error("merge probability must lie in (0,1]");
        if (static_cast<int>(mu_levels.size()) != levels ||
            static_cast<int>(delta_levels.size()) != levels)
            throw parameter_error("mu_levels and delta_levels must have length L");
        for (int i = 0; i < levels; ++i) {
            if (mu_levels[i] <= 0.0 || mu_levels[i] >= 1.0)
                throw parameter_error("each mu_level must lie in (0,1)");
            if (delta_levels[i] < 0.0)
                throw parameter_error("delta_levels must be >= 0");
        }
    }
};

// Realized per-community, per-level mixing fractions mu(c, i).
struct MixingSchedule {
    int levels = 0;
    std::vector<std::vector<double>> mu;  // [community][level]

    double total_external(int c) const {
        double s = 0;
        for (double x : mu[c]) s += x;
        return s;
    }
    double internal_fraction(int c) const { return 1.0 - total_external(c); }
    int community_count() const { return static_cast<int>(mu.size()); }
};

using DegreeSequence = std::vector<int>;

namespace detail {

// Discrete power law on integers [floor(k_lo) .. k_hi] with exponent -tau.
// A fractional lower endpoint fades out the weight of its floor, making the
// distribution mean continuous in k_lo.
inline std::vector<double> power_law_weights(double k_lo, int k_hi, double tau) {
    int k0 = static_cast<int>(std::floor(k_lo));
    if (k0 < 1) k0 = 1;
    double frac = std::max(0.0, k_lo - k0);
    std::vector<double> w(static_cast<std::size_t>(k_hi - k0 + 1), 0.0);
    for (int k = k0; k <= k_hi; ++k)
        w[k - k0] = std::pow(static_cast<double>(k), -tau);
    w[0] *= (1.0 - frac);
    return w;
}

inline double power_law_mean(double k_lo, int k_hi, double tau) {
    int k0 = std::max(1, static_cast<int>(std::floor(k_lo)));
    auto w = power_law_weights(k_lo, k_hi, tau);
    double num = 0, den = 0;
    for (int k = k0; k <= k_hi; ++k) {
        num += w[k - k0] * k;
        den += w[k - k0];
    }
    return den > 0 ? num / den : static_cast<double>(k_hi);
}

}  // namespace detail

// Step 1: sample N target degrees from a discrete power law whose lower
// cutoff is solved so the distribution mean matches avg_degree.
inline DegreeSequence sample_power_law_degrees(const GeneratorParams& p, std::mt19937_64& rng) {
    const double target = p.avg_degree;
    const int k_hi = p.k_max;
    double lo = 1.0, hi = static_cast<double>(k_hi);

    if (detail::power_law_mean(lo, k_hi, p.tau1) > target * 1.02)
        throw parameter_error("avg_degree unreachable: too low for k_max/tau1");
    if (detail::power_law_mean(hi, k_hi, p.tau1) < target * 0.98)
        throw parameter_error("avg_degree unreachable: too high for k_max/tau1");

    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        if (detail::power_law_mean(mid, k_hi, p.tau1) < target)
            lo = mid;
        else
            hi = mid;
    }
    double k_min = 0.5 * (lo + hi);
    double mean = detail::power_law_mean(k_min, k_hi, p.tau1);
    if (std::fabs(mean - target) > 0.02 * target)
        throw parameter_error("no feasible k_min for requested avg_degree");

    int k0 = std::max(1, static_cast<int>(std::floor(k_min)));
    auto w = detail::power_law_weights(k_min, k_hi, p.tau1);
    std::discrete_distribution<int> dist(w.begin(), w.end());

    DegreeSequence degrees(p.n);
    long long sum = 0;
    for (int v = 0; v < p.n; ++v) {
        degrees[v] = k0 + dist(rng);
        sum += degrees[v];
    }
    if (sum % 2 != 0) {
        // force an even stub total
        std::uniform_int_distribution<int> pick(0, p.n - 1);
        for (int tries = 0; tries < p.n * 4; ++tries) {
            int v = pick(rng);
            if (degrees[v] < k_hi) {
                degrees[v] += 1;
                break;
            }
            if (degrees[v] > 1) {
                degrees[v] -= 1;
                break;
            }
        }
    }
    return degrees;
}

// Step 2: community sizes from a power law on [c_min, c_max], covering N exactly.
inline std::vector<int> sample_community_sizes(const GeneratorParams& p, std::mt19937_64& rng) {
    if (p.n < p.c_min) throw parameter_error("n smaller than c_min");
    // n must be coverable by some community count before sampling can succeed
    bool feasible = false;
    for (int k = 1; k * p.c_min <= p.n; ++k)
        feasible |= p.n <= static_cast<long long>(k) * p.c_max;
    if (!feasible)
        throw parameter_error("no community count covers n with sizes in [c_min, c_max]");
    auto w = detail::power_law_weights(p.c_min, p.c_max, p.tau2);
    std::discrete_distribution<int> dist(w.begin(), w.end());

    std::vector<int> sizes;
    long long sum = 0;
    while (sum < p.n) {
        int s = p.c_min + dist(rng);
        sizes.push_back(s);
        sum += s;
    }
    long long excess = sum - p.n;
    sizes.back() -= static_cast<int>(excess);
    if (sizes.back() < p.c_min) {
        // fold the short remainder into the other communities
        int leftover = sizes.back();
        sizes.pop_back();
        std::size_t i = 0;
        while (leftover > 0) {
            bool moved = false;
            for (i = 0; i < sizes.size() && leftover > 0; ++i) {
                if (sizes[i] < p.c_max) {
                    sizes[i] += 1;
                    leftover -= 1;
                    moved = true;
                }
            }
            // feasibility was checked up front, so this draw was just unlucky
            if (!moved)
                throw generation_error("community size draw cannot cover n, retrying");
        }
        if (sizes.empty())
            throw generation_error("community size draw cannot cover n, retrying");
    }
    return sizes;
}

// Community-level hierarchy skeleton: group_of[i][c] is community c's group at
// mixing level i. The final level is always the whole network.
struct HierarchySkeleton {
    int base_count = 0;
    std::vector<std::vector<int>> group_of;  // [level][community]
    std::vector<std::vector<int>> group_span;  // [level][community] -> #base communities in c's group

    int levels() const { return static_cast<int>(group_of.size()); }

    // True when community c meets communities at level i it had not met below.
    bool gains_new_siblings(int c, int i) const {
        int prev = i == 0 ? 1 : group_span[i - 1][c];
        return group_span[i][c] > prev;
    }
};

namespace detail {

inline int uf_find(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

// One merge pass: visit each group once, with probability S merge it into a
// uniformly chosen other group; force one merge if none occurred.
inline std::vector<int> merge_pass(int group_count, double s, std::mt19937_64& rng) {
    std::vector<int> parent(group_count);
    for (int g = 0; g < group_count; ++g) parent[g] = g;
    std::bernoulli_distribution flip(s);
    int merges = 0;
    int roots = group_count;
    for (int g = 0; g < group_count && roots > 1; ++g) {
        if (!flip(rng)) continue;
        int rg = uf_find(parent, g);
        std::uniform_int_distribution<int> pick(0, group_count - 1);
        int t, rt;
        do {
            t = pick(rng);
            rt = uf_find(parent, t);
        } while (rt == rg);
        parent[rg] = rt;
        ++merges;
        --roots;
    }
    if (merges == 0 && group_count > 1) {
        std::uniform_int_distribution<int> pick(0, group_count - 1);
        int a = pick(rng), b;
        do { b = pick(rng); } while (b == a);
        parent[uf_find(parent, a)] = uf_find(parent, b);
    }
    // dense relabel by first appearance
    std::vector<int> label(group_count, -1);
    std::vector<int> out(group_count);
    int next = 0;
    for (int g = 0; g < group_count; ++g) {
        int r = uf_find(parent, g);
        if (label[r] == -1) label[r] = next++;
        out[g] = label[r];
    }
    return out;
}

inline void fill_spans(HierarchySkeleton& sk) {
    sk.group_span.clear();
    for (const auto& level : sk.group_of) {
        int gmax = 0;
        for (int g : level) gmax = std::max(gmax, g + 1);
        std::vector<int> count(gmax, 0);
        for (int g : level) count[g] += 1;
        std::vector<int> span(sk.base_count);
        for (int c = 0; c < sk.base_count; ++c) span[c] = count[level[c]];
        sk.group_span.push_back(std::move(span));
    }
}

}  // namespace detail

// Step 3: sample the L-level grouping chain over the base communities.
inline HierarchySkeleton sample_hierarchy(int base_count, const HierarchyParams& hp,
                                          std::mt19937_64& rng) {
    hp.validate();
    if (hp.levels >= 2 && base_count < 2)
        throw parameter_error("need at least 2 base communities for a multi-level hierarchy");
    if (base_count < hp.levels)
        throw parameter_error("hierarchy depth exceeds community count");

    HierarchySkeleton sk;
    sk.base_count = base_count;

    std::vector<int> current(base_count);
    for (int c = 0; c < base_count; ++c) current[c] = c;
    int current_groups = base_count;

    // intermediate levels 0 .. L-2 come from merge passes
    for (int lvl = 0; lvl < hp.levels - 1; ++lvl) {
        if (current_groups > 1) {
            auto merged = detail::merge_pass(current_groups, hp.merge_prob, rng);
            int next_count = 0;
            std::vector<int> next(base_count);
            for (int c = 0; c < base_count; ++c) {
                next[c] = merged[current[c]];
                next_count = std::max(next_count, next[c] + 1);
            }
            current = std::move(next);
            current_groups = next_count;
        }
        sk.group_of.push_back(current);
    }
    // top level: the entire network
    sk.group_of.emplace_back(base_count, 0);
    detail::fill_spans(sk);
    return sk;
}

// Step 4 (mixing part): sample mu(c, i) wherever community c first meets new
// siblings at level i. Total external fraction per community is capped so the
// internal fraction stays positive.
inline MixingSchedule assign_mixing(const HierarchySkeleton& sk, const HierarchyParams& hp,
                                    std::mt19937_64& rng) {
    constexpr double kMuCap = 0.99;
    MixingSchedule sched;
    sched.levels = hp.levels;
    sched.mu.assign(sk.base_count, std::vector<double>(hp.levels, 0.0));

    for (int c = 0; c < sk.base_count; ++c) {
        for (int i = 0; i < hp.levels; ++i) {
            if (!sk.gains_new_siblings(c, i)) continue;
            double lo = std::max(0.0, hp.mu_levels[i] - hp.delta_levels[i]);
            double hi = std::min(kMuCap, hp.mu_levels[i] + hp.delta_levels[i]);
            if (lo > hi)
                throw parameter_error("empty clamped mixing interval at level " +
                                      std::to_string(i));
            std::uniform_real_distribution<double> u(lo, hi);
            sched.mu[c][i] = u(rng);
        }
        double total = sched.total_external(c);
        if (total > kMuCap) {
            double scale = kMuCap / total;
            for (double& x : sched.mu[c]) x *= scale;
        }
    }
    return sched;
}

// Step 4 (placement part): LFR-style node placement with eviction. Each node
// lands in a community with free capacity whose size can absorb the node's
// internal degree: k_n * (1 - mu_c) < |c| - 1.
inline std::vector<int> assign_nodes(const DegreeSequence& degrees,
                                     const std::vector<int>& sizes,
                                     const MixingSchedule& sched, std::mt19937_64& rng,
                                     int max_sweeps = 100) {
    const int n = static_cast<int>(degrees.size());
    long long size_sum = 0;
    for (int s : sizes) size_sum += s;
    if (size_sum != n) throw parameter_error("community sizes do not sum to n");

    const int cc = static_cast<int>(sizes.size());
    std::vector<double> internal_frac(cc);
    for (int c = 0; c < cc; ++c) internal_frac[c] = sched.internal_fraction(c);

    auto fits = [&](int node, int c) {
        return degrees[node] * internal_frac[c] < sizes[c] - 1;
    };

    std::vector<int> community(n, -1);
    std::vector<int> remaining(sizes.begin(), sizes.end());
    std::vector<std::vector<int>> residents(cc);

    std::vector<int> queue(n);
    std::iota(queue.begin(), queue.end(), 0);
    std::shuffle(queue.begin(), queue.end(), rng);

    long long budget = static_cast<long long>(max_sweeps) * n;
    std::size_t head = 0;
    while (head < queue.size()) {
        if (--budget < 0) {
            int v = queue[head];
            throw generation_error("cannot place node " + std::to_string(v) +
                                   " with degree " + std::to_string(degrees[v]));
        }
        int v = queue[head++];
        std::vector<int> open, feasible;
        for (int c = 0; c < cc; ++c) {
            if (!fits(v, c)) continue;
            feasible.push_back(c);
            if (remaining[c] > 0) open.push_back(c);
        }
        if (feasible.empty()) {
            throw generation_error("node " + std::to_string(v) + " with degree " +
                                   std::to_string(degrees[v]) +
                                   " fits no community");
        }
        int c;
        if (!open.empty()) {
            c = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
        } else {
            // evict a random resident of a feasible (full) community
            c = feasible[std::uniform_int_distribution<std::size_t>(0, feasible.size() - 1)(rng)];
            auto& res = residents[c];
            std::size_t j = std::uniform_int_distribution<std::size_t>(0, res.size() - 1)(rng);
            int evicted = res[j];
            res[j] = res.back();
            res.pop_back();
            community[evicted] = -1;
            remaining[c] += 1;
            queue.push_back(evicted);
        }
        community[v] = c;
        residents[c].push_back(v);
        remaining[c] -= 1;
    }
    return community;
}

}  // namespace hglfr
