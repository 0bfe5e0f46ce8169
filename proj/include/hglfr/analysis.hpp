#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hglfr/graph.hpp"

namespace hglfr {

// Ratio of actual to configuration-model-expected edges between communities.
// Expected within r: K_r^2 / 4m; expected between r and s: K_r K_s / 2m.
struct OmegaMatrix {
    std::vector<std::vector<double>> values;
    int size() const { return static_cast<int>(values.size()); }
};

struct ResolutionWindow {
    double lower = 0;  // max off-diagonal omega
    double upper = 0;  // min diagonal omega
    double distance = 0;  // D = upper - lower
};

// Generalized modularity via community aggregates:
// Q = sum_r [ e_r / m - gamma * (K_r / 2m)^2 ]
inline double modularity(const Graph& g, const Partition& p, double gamma) {
    const double m = static_cast<double>(g.edge_count());
    if (m <= 0) throw validation_error("modularity undefined on an empty graph");
    std::vector<long long> internal(p.community_count(), 0);
    for (const auto& [u, v] : g.edges())
        if (p.community_of(u) == p.community_of(v)) internal[p.community_of(u)] += 1;
    double q = 0;
    const double two_m = 2.0 * m;
    for (int r = 0; r < p.community_count(); ++r) {
        double kr = static_cast<double>(p.community_degrees()[r]);
        q += internal[r] / m - gamma * (kr / two_m) * (kr / two_m);
    }
    return q;
}

inline OmegaMatrix omega_matrix(const Graph& g, const Partition& p) {
    const double m = static_cast<double>(g.edge_count());
    if (m <= 0) throw validation_error("omega undefined on an empty graph");
    for (long long k : p.community_degrees())
        if (k <= 0) throw validation_error("zero-degree community in omega matrix");

    auto counts = inter_community_edge_counts(g, p);
    const int c = p.community_count();
    OmegaMatrix omega;
    omega.values.assign(c, std::vector<double>(c, 0.0));
    for (int r = 0; r < c; ++r) {
        double kr = static_cast<double>(p.community_degrees()[r]);
        for (int s = 0; s < c; ++s) {
            double ks = static_cast<double>(p.community_degrees()[s]);
            double expected = r == s ? kr * kr / (4.0 * m) : kr * ks / (2.0 * m);
            omega.values[r][s] = counts[r][s] / expected;
        }
    }
    return omega;
}

inline ResolutionWindow resolution_window(const OmegaMatrix& omega) {
    const int c = omega.size();
    if (c < 2) throw validation_error("resolution window undefined for a single community");
    ResolutionWindow w;
    w.upper = std::numeric_limits<double>::infinity();
    w.lower = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < c; ++r) {
        w.upper = std::min(w.upper, omega.values[r][r]);
        for (int s = 0; s < c; ++s)
            if (r != s) w.lower = std::max(w.lower, omega.values[r][s]);
    }
    w.distance = w.upper - w.lower;
    return w;
}

// Fraction of edges whose endpoints lie in different communities.
inline double achieved_mu(const Graph& g, const Partition& p) {
    if (g.edge_count() <= 0) throw validation_error("achieved mu undefined on an empty graph");
    long long external = 0;
    for (const auto& [u, v] : g.edges())
        if (p.community_of(u) != p.community_of(v)) ++external;
    return static_cast<double>(external) / g.edge_count();
}

// Per-community external-stub fraction: external degree of c over K_c.
inline std::vector<double> achieved_mu_per_community(const Graph& g, const Partition& p) {
    std::vector<long long> external(p.community_count(), 0);
    for (const auto& [u, v] : g.edges()) {
        int r = p.community_of(u), s = p.community_of(v);
        if (r != s) {
            external[r] += 1;
            external[s] += 1;
        }
    }
    std::vector<double> mu(p.community_count(), 0.0);
    for (int r = 0; r < p.community_count(); ++r)
        if (p.community_degrees()[r] > 0)
            mu[r] = static_cast<double>(external[r]) / p.community_degrees()[r];
    return mu;
}

inline std::vector<double> gamma_grid(double start, double stop, int points, bool log_spaced) {
    if (points < 1 || start <= 0 || stop < start)
        throw validation_error("invalid gamma grid");
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = start;
        return grid;
    }
    for (int i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / (points - 1);
        grid[i] = log_spaced ? start * std::pow(stop / start, t) : start + t * (stop - start);
    }
    return grid;
}

inline std::vector<double> default_gamma_grid() { return gamma_grid(0.05, 20.0, 200, true); }

struct GammaSweepResult {
    std::vector<double> gammas;
    std::vector<std::vector<double>> q;  // [partition][gamma]
    std::vector<int> argmax;             // per gamma; ties go to the coarser partition
    // per partition: [first, last] gamma where it is the envelope, empty if none
    std::vector<std::pair<double, double>> envelope_interval;
    std::vector<bool> has_interval;
};

inline GammaSweepResult gamma_sweep(const Graph& g, const std::vector<Partition>& partitions,
                                    const std::vector<double>& gammas) {
    if (partitions.empty()) throw validation_error("gamma sweep needs at least one partition");
    if (gammas.empty()) throw validation_error("gamma sweep needs a nonempty grid");
    for (const auto& p : partitions)
        if (p.node_count() != g.node_count())
            throw validation_error("sweep partition does not cover the node universe");

    // Q(gamma) is affine in gamma: Q = e_frac - gamma * null_term
    const std::size_t np = partitions.size();
    std::vector<double> intercept(np), slope(np);
    for (std::size_t i = 0; i < np; ++i) {
        intercept[i] = modularity(g, partitions[i], 0.0);
        slope[i] = modularity(g, partitions[i], 1.0) - intercept[i];
    }

    GammaSweepResult res;
    res.gammas = gammas;
    res.q.assign(np, std::vector<double>(gammas.size()));
    res.argmax.assign(gammas.size(), 0);
    for (std::size_t j = 0; j < gammas.size(); ++j) {
        int best = -1;
        for (std::size_t i = 0; i < np; ++i) {
            res.q[i][j] = intercept[i] + gammas[j] * slope[i];
            if (best < 0 || res.q[i][j] > res.q[best][j] ||
                (res.q[i][j] == res.q[best][j] &&
                 partitions[i].community_count() < partitions[best].community_count()))
                best = static_cast<int>(i);
        }
        res.argmax[j] = best;
    }
    res.envelope_interval.assign(np, {0, 0});
    res.has_interval.assign(np, false);
    for (std::size_t j = 0; j < gammas.size(); ++j) {
        int i = res.argmax[j];
        if (!res.has_interval[i]) {
            res.has_interval[i] = true;
            res.envelope_interval[i] = {gammas[j], gammas[j]};
        } else {
            res.envelope_interval[i].second = gammas[j];
        }
    }
    return res;
}

}  // namespace hglfr
