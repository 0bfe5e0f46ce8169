// Command-line driver: network generation, resolution-window analysis,
// detection baselines, gamma sweeps, and full experiment batches.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hglfr/analysis.hpp"
#include "hglfr/detection.hpp"
#include "hglfr/io.hpp"
#include "hglfr/sampling.hpp"
#include "hglfr/wiring.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hglfr;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitValidation = 4;

struct CellSpec {
    std::string name;
    GeneratorParams gp;
    std::optional<HierarchyParams> hp;
};

struct RunConfig {
    std::vector<CellSpec> cells;
    int realizations = 1;
    std::uint64_t base_seed = 1;
    std::vector<std::uint64_t> explicit_seeds;
    fs::path out_dir = "out";
    double glfr_delta = 0.3;
};

Mode parse_mode(const std::string& s) {
    if (s == "LFR") return Mode::LFR;
    if (s == "GLFR") return Mode::GLFR;
    if (s == "HGLFR") return Mode::HGLFR;
    throw parameter_error("config: unknown mode '" + s + "'");
}

HierarchyParams named_parametrization(const std::string& name, double merge_prob) {
    HierarchyParams hp;
    hp.levels = 3;
    hp.merge_prob = merge_prob;
    if (name == "Low") {
        hp.mu_levels = {0.33, 0.03, 0.027};
        hp.delta_levels = {0.03, 0.01, 0.002};
    } else if (name == "Medium") {
        hp.mu_levels = {0.4, 0.2, 0.1};
        hp.delta_levels = {0.1, 0.1, 0.1};
    } else if (name == "High") {
        hp.mu_levels = {0.8, 0.6, 0.3};
        hp.delta_levels = {0.2, 0.2, 0.2};
    } else {
        throw parameter_error("config: unknown parametrization '" + name +
                              "' (expected Low, Medium, or High)");
    }
    return hp;
}

GeneratorParams parse_generator(const json& j) {
    GeneratorParams p;
    try {
        p.mode = parse_mode(j.at("mode").get<std::string>());
        p.n = j.at("n").get<int>();
        p.avg_degree = j.at("avg_degree").get<double>();
        p.k_max = j.at("k_max").get<int>();
        p.tau1 = j.value("tau1", 2.5);
        p.tau2 = j.value("tau2", 1.5);
        p.c_min = j.at("c_min").get<int>();
        p.c_max = j.at("c_max").get<int>();
        p.mu = j.value("mu", 0.1);
        p.delta_mu = j.value("delta_mu", 0.0);
    } catch (const json::exception& e) {
        throw parameter_error(std::string("config: generator: ") + e.what());
    }
    return p;
}

HierarchyParams parse_hierarchy(const json& j) {
    HierarchyParams hp;
    try {
        hp.levels = j.at("levels").get<int>();
        hp.merge_prob = j.value("merge_prob", 0.5);
        hp.mu_levels = j.at("mu_levels").get<std::vector<double>>();
        hp.delta_levels = j.at("delta_levels").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw parameter_error(std::string("config: hierarchy: ") + e.what());
    }
    return hp;
}

std::string mu_tag(double mu) {
    std::ostringstream ss;
    ss << "mu";
    ss.precision(3);
    ss << std::fixed << mu;
    return ss.str();
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("config: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw parameter_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "hglfr-config-v1")
        throw parameter_error("config: schema must be 'hglfr-config-v1'");

    RunConfig cfg;
    cfg.out_dir = j.value("output_dir", std::string("out"));
    cfg.base_seed = j.value("seed", 1ULL);
    if (j.contains("seeds"))
        cfg.explicit_seeds = j["seeds"].get<std::vector<std::uint64_t>>();

    if (!j.contains("generator"))
        throw parameter_error("config: missing 'generator' section");
    GeneratorParams base = parse_generator(j["generator"]);

    std::optional<HierarchyParams> base_hp;
    if (j.contains("hierarchy")) base_hp = parse_hierarchy(j["hierarchy"]);
    if (base.mode == Mode::HGLFR && !base_hp && !j.contains("grid"))
        throw parameter_error("config: mode HGLFR requires a 'hierarchy' section");

    double merge_prob = base_hp ? base_hp->merge_prob : 0.5;
    if (j.contains("grid")) {
        const auto& grid = j["grid"];
        cfg.realizations = grid.value("realizations", 1);
        cfg.glfr_delta = grid.value("glfr_delta", 0.3);
        if (grid.contains("mu_values")) {
            for (double mu : grid["mu_values"].get<std::vector<double>>()) {
                CellSpec cell;
                cell.gp = base;
                cell.gp.mu = mu;
                cell.name = to_string(base.mode) + "_" + mu_tag(mu);
                if (base.mode == Mode::HGLFR)
                    throw parameter_error("config: mu_values grid needs mode LFR or GLFR");
                cfg.cells.push_back(std::move(cell));
            }
        }
        if (grid.contains("parametrizations")) {
            for (const auto& name : grid["parametrizations"].get<std::vector<std::string>>()) {
                CellSpec cell;
                cell.gp = base;
                cell.gp.mode = Mode::HGLFR;
                cell.hp = named_parametrization(name, merge_prob);
                cell.name = "HGLFR_" + name;
                cfg.cells.push_back(std::move(cell));
            }
        }
        if (cfg.cells.empty())
            throw parameter_error("config: grid specifies no cells");
    } else {
        CellSpec cell;
        cell.gp = base;
        cell.hp = base_hp;
        cell.name = to_string(base.mode);
        if (base.mode != Mode::HGLFR) cell.name += "_" + mu_tag(base.mu);
        cfg.cells.push_back(std::move(cell));
        cfg.realizations = j.value("realizations", 1);
    }
    return cfg;
}

std::vector<double> parse_gamma_grid(const std::string& spec) {
    // "start:stop:points:log|lin"
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4)
        throw validation_error("gamma grid must be start:stop:points:log|lin");
    double start = std::stod(parts[0]);
    double stop = std::stod(parts[1]);
    int points = std::stoi(parts[2]);
    bool log_spaced = parts[3] == "log";
    if (!log_spaced && parts[3] != "lin")
        throw validation_error("gamma grid spacing must be 'log' or 'lin'");
    return gamma_grid(start, stop, points, log_spaced);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// paper-style 0.05-width mu bins centered on .05, .10, ..., .95
std::optional<double> mu_bin(double mu) {
    if (mu < 0.025 || mu >= 0.975) return std::nullopt;
    return 0.05 * std::round(mu / 0.05);
}

std::uint64_t seed_for(const RunConfig& cfg, std::size_t cell_index, int realization) {
    std::size_t flat = cell_index * static_cast<std::size_t>(cfg.realizations) + realization;
    if (flat < cfg.explicit_seeds.size()) return cfg.explicit_seeds[flat];
    return cfg.base_seed + 1000003ULL * cell_index + static_cast<std::uint64_t>(realization);
}

struct AnalysisRow {
    std::string network;
    int level = 0;
    int communities = 0;
    double achieved = 0;
    double q1 = 0;
    std::optional<ResolutionWindow> window;
};

void write_analysis_csv(std::ostream& out, const std::vector<AnalysisRow>& rows) {
    out << "network,level,communities,achieved_mu,q_gamma1,omega_lower,omega_upper,distance\n";
    for (const auto& r : rows) {
        out << r.network << "," << r.level << "," << r.communities << "," << r.achieved << ","
            << r.q1 << ",";
        if (r.window)
            out << r.window->lower << "," << r.window->upper << "," << r.window->distance;
        else
            out << "undefined,undefined,undefined";
        out << "\n";
    }
}

void write_omega_csv(const fs::path& path, const OmegaMatrix& omega) {
    std::ofstream out(path);
    for (int c = 0; c < omega.size(); ++c) out << (c ? "," : "") << "c" << c;
    out << "\n";
    for (int r = 0; r < omega.size(); ++r) {
        for (int s = 0; s < omega.size(); ++s) out << (s ? "," : "") << omega.values[r][s];
        out << "\n";
    }
}

std::vector<AnalysisRow> analyze_network(const std::string& name, const Graph& g,
                                         const std::vector<Partition>& levels,
                                         const fs::path& omega_dir) {
    std::vector<AnalysisRow> rows;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        AnalysisRow row;
        row.network = name;
        row.level = static_cast<int>(i);
        row.communities = levels[i].community_count();
        row.achieved = achieved_mu(g, levels[i]);
        row.q1 = modularity(g, levels[i], 1.0);
        if (levels[i].community_count() >= 2) {
            auto omega = omega_matrix(g, levels[i]);
            row.window = resolution_window(omega);
            if (!omega_dir.empty())
                write_omega_csv(omega_dir / ("omega_level_" + std::to_string(i) + ".csv"),
                                omega);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct DetectRow {
    std::string network;
    std::string method;
    double gamma = 0;
    std::uint64_t seed = 0;
    double score = 0;  // nmi vs ground truth
    double q = 0;
};

void write_detect_csv(std::ostream& out, const std::vector<DetectRow>& rows) {
    out << "network_id,method,gamma,seed,nmi,Q\n";
    for (const auto& r : rows)
        out << r.network << "," << r.method << "," << r.gamma << "," << r.seed << ","
            << r.score << "," << r.q << "\n";
}

DetectRow run_detection(const std::string& network, const Graph& g, const Partition& truth,
                        const std::string& method, double gamma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DetectionResult res = method == "lp" ? label_propagation(g, rng)
                                         : maximize_modularity(g, gamma, rng);
    DetectRow row;
    row.network = network;
    row.method = method;
    row.gamma = method == "lp" ? 0.0 : gamma;
    row.seed = seed;
    row.score = nmi(res.partition, truth);
    row.q = res.q;
    return row;
}

// sweep over the non-trivial hierarchy levels (the whole-network level is
// excluded; its Q = 1 - gamma line carries no structure)
GammaSweepResult sweep_network(const Graph& g, const std::vector<Partition>& levels,
                               const std::vector<double>& grid,
                               std::vector<int>& level_ids) {
    std::vector<Partition> parts;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].community_count() < 2) continue;
        parts.push_back(levels[i]);
        level_ids.push_back(static_cast<int>(i));
    }
    if (parts.size() < 2)
        throw validation_error("gamma sweep needs a network with at least 2 hierarchy levels");
    return gamma_sweep(g, parts, grid);
}

void write_sweep_csv(std::ostream& out, const GammaSweepResult& sweep,
                     const std::vector<int>& level_ids) {
    out << "gamma,partition_id,Q,is_argmax\n";
    for (std::size_t j = 0; j < sweep.gammas.size(); ++j)
        for (std::size_t i = 0; i < level_ids.size(); ++i)
            out << sweep.gammas[j] << "," << level_ids[i] << "," << sweep.q[i][j] << ","
                << (sweep.argmax[j] == static_cast<int>(i) ? 1 : 0) << "\n";
}

int cmd_generate(const fs::path& config_path, const std::string& out_override,
                 std::optional<std::uint64_t> seed_override) {
    RunConfig cfg = load_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override) cfg.base_seed = *seed_override;

    int failures = 0;
    for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
        const auto& cell = cfg.cells[ci];
        for (int r = 0; r < cfg.realizations; ++r) {
            std::uint64_t seed = seed_for(cfg, ci, r);
            GeneratorParams gp = cell.gp;
            gp.seed = seed;
            fs::path dir = cfg.out_dir / cell.name /
                           ("r" + std::to_string(r) + "_s" + std::to_string(seed));
            try {
                auto net = generate(gp, cell.hp ? &*cell.hp : nullptr);
                write_network_dir(dir, net, cell.name, seed);
                std::cout << "generated " << dir.string() << " (n=" << net.graph.node_count()
                          << ", m=" << net.graph.edge_count()
                          << ", mu=" << net.meta.achieved_mu << ")\n";
            } catch (const generation_error& e) {
                std::cerr << "generation failed for seed " << seed << ": " << e.what() << "\n";
                ++failures;
            }
        }
    }
    return failures == 0 ? 0 : kExitGeneration;
}

int cmd_analyze(const std::string& network_dir, const std::string& edges_path,
                const std::string& partition_path, const std::string& out_dir) {
    std::vector<AnalysisRow> rows;
    fs::path out = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(out);

    if (!network_dir.empty()) {
        auto disk = read_network_dir(network_dir);
        std::vector<Partition> levels = disk.levels;
        rows = analyze_network(fs::path(network_dir).filename().string(), disk.loaded.graph,
                               levels, out);
    } else {
        auto lg = read_edge_list(edges_path);
        Partition p(read_partition_file(partition_path, lg), lg.graph);
        rows = analyze_network(fs::path(edges_path).stem().string(), lg.graph, {p}, out);
    }
    std::ofstream file(out / "analysis.csv");
    write_analysis_csv(file, rows);
    write_analysis_csv(std::cout, rows);
    return 0;
}

int cmd_detect(const std::string& network_dir, const std::string& methods_arg,
               const std::string& gamma_grid_arg, const std::string& seeds_arg,
               const std::string& out_path) {
    auto disk = read_network_dir(network_dir);
    const auto& truth = disk.levels[0];

    auto methods = split_csv(methods_arg);
    for (const auto& m : methods)
        if (m != "lp" && m != "mod")
            throw validation_error("unknown method '" + m + "' (expected lp or mod)");
    if (methods.empty()) throw validation_error("no methods requested");

    std::vector<double> gammas{1.0};
    if (!gamma_grid_arg.empty()) gammas = parse_gamma_grid(gamma_grid_arg);

    std::vector<std::uint64_t> seeds{1};
    if (!seeds_arg.empty()) {
        seeds.clear();
        for (const auto& s : split_csv(seeds_arg)) seeds.push_back(std::stoull(s));
    }

    std::string name = fs::path(network_dir).filename().string();
    std::vector<DetectRow> rows;
    for (const auto& method : methods) {
        if (method == "lp") {
            for (auto seed : seeds)
                rows.push_back(run_detection(name, disk.loaded.graph, truth, "lp", 0, seed));
        } else {
            for (double gamma : gammas)
                for (auto seed : seeds)
                    rows.push_back(
                        run_detection(name, disk.loaded.graph, truth, "mod", gamma, seed));
        }
    }

    if (out_path.empty()) {
        write_detect_csv(std::cout, rows);
    } else {
        std::ofstream file(out_path);
        write_detect_csv(file, rows);
    }

    // aggregate per (method, gamma)
    std::map<std::pair<std::string, double>, std::vector<double>> agg;
    for (const auto& r : rows) agg[{r.method, r.gamma}].push_back(r.score);
    std::cout << "# summary: method,gamma,mean_nmi,ci95,count\n";
    for (const auto& [key, values] : agg) {
        double mean = 0;
        for (double v : values) mean += v;
        mean /= values.size();
        double var = 0;
        for (double v : values) var += (v - mean) * (v - mean);
        double stderr_ = values.size() > 1
                             ? std::sqrt(var / (values.size() - 1) / values.size())
                             : 0.0;
        std::cout << "# " << key.first << "," << key.second << "," << mean << ","
                  << 1.96 * stderr_ << "," << values.size() << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& network_dir, const std::string& gamma_grid_arg,
              const std::string& out_path) {
    auto disk = read_network_dir(network_dir);
    auto grid = gamma_grid_arg.empty() ? default_gamma_grid() : parse_gamma_grid(gamma_grid_arg);
    std::vector<int> level_ids;
    auto sweep = sweep_network(disk.loaded.graph, disk.levels, grid, level_ids);
    if (out_path.empty()) {
        write_sweep_csv(std::cout, sweep, level_ids);
    } else {
        std::ofstream file(out_path);
        write_sweep_csv(file, sweep, level_ids);
    }
    return 0;
}

struct BatchResult {
    std::string cell;
    int realization = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    // generation stats
    double mean_target = 0, mean_realized = 0, frac_within2 = 0;
    double achieved = 0;
    double min_omega_ii = 0, max_omega_ij = 0, distance = 0;
    bool has_window = false;
    std::vector<DetectRow> detect_rows;
    std::vector<std::pair<int, std::pair<double, double>>> envelope;  // level -> interval
    bool swept = false;
};

int cmd_batch(const fs::path& config_path, const std::string& out_override, int workers) {
    RunConfig cfg = load_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    fs::create_directories(cfg.out_dir);

    struct Job {
        std::size_t cell_index;
        int realization;
    };
    std::vector<Job> jobs;
    for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci)
        for (int r = 0; r < cfg.realizations; ++r) jobs.push_back({ci, r});

    std::vector<BatchResult> results(jobs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const auto& job = jobs[j];
            const auto& cell = cfg.cells[job.cell_index];
            BatchResult& res = results[j];
            res.cell = cell.name;
            res.realization = job.realization;
            res.seed = seed_for(cfg, job.cell_index, job.realization);
            GeneratorParams gp = cell.gp;
            gp.seed = res.seed;
            try {
                auto net = generate(gp, cell.hp ? &*cell.hp : nullptr);
                fs::path dir = cfg.out_dir / cell.name /
                               ("r" + std::to_string(job.realization) + "_s" +
                                std::to_string(res.seed));
                write_network_dir(dir, net, cell.name, res.seed);

                long long tsum = 0, rsum = 0;
                int within = 0;
                for (int v = 0; v < net.graph.node_count(); ++v) {
                    tsum += net.target_degrees[v];
                    rsum += net.graph.degree(v);
                    if (std::abs(net.graph.degree(v) - net.target_degrees[v]) <= 2) ++within;
                }
                res.mean_target = static_cast<double>(tsum) / net.graph.node_count();
                res.mean_realized = static_cast<double>(rsum) / net.graph.node_count();
                res.frac_within2 = static_cast<double>(within) / net.graph.node_count();
                res.achieved = net.meta.achieved_mu;

                const auto& truth = net.hierarchy.level(0);
                if (truth.community_count() >= 2) {
                    auto w = resolution_window(omega_matrix(net.graph, truth));
                    res.min_omega_ii = w.upper;
                    res.max_omega_ij = w.lower;
                    res.distance = w.distance;
                    res.has_window = true;
                }

                std::string name = cell.name + "/r" + std::to_string(job.realization);
                res.detect_rows.push_back(
                    run_detection(name, net.graph, truth, "lp", 0, res.seed));
                res.detect_rows.push_back(
                    run_detection(name, net.graph, truth, "mod", 1.0, res.seed));

                if (net.hierarchy.level_count() >= 3) {
                    std::vector<int> level_ids;
                    std::vector<Partition> levels = net.hierarchy.levels();
                    auto sweep =
                        sweep_network(net.graph, levels, default_gamma_grid(), level_ids);
                    for (std::size_t i = 0; i < level_ids.size(); ++i) {
                        if (sweep.has_interval[i])
                            res.envelope.push_back(
                                {level_ids[i], sweep.envelope_interval[i]});
                        else
                            res.envelope.push_back({level_ids[i], {0.0, -1.0}});
                    }
                    res.swept = true;
                }
            } catch (const std::exception& e) {
                res.failed = true;
                res.error = e.what();
            }
        }
    };

    int thread_count = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // aggregate outputs, deterministic order
    {
        std::ofstream out(cfg.out_dir / "degree_fidelity.csv");
        out << "cell,realization,seed,mean_target_degree,mean_realized_degree,frac_within_2\n";
        for (const auto& r : results) {
            if (r.failed) continue;
            out << r.cell << "," << r.realization << "," << r.seed << "," << r.mean_target
                << "," << r.mean_realized << "," << r.frac_within2 << "\n";
        }
    }
    {
        std::ofstream out(cfg.out_dir / "distance_by_mu.csv");
        out << "cell,realization,seed,achieved_mu,mu_bin,min_omega_ii,max_omega_ij,distance\n";
        for (const auto& r : results) {
            if (r.failed || !r.has_window) continue;
            auto bin = mu_bin(r.achieved);
            out << r.cell << "," << r.realization << "," << r.seed << "," << r.achieved << ",";
            if (bin)
                out << *bin;
            else
                out << "discarded";
            out << "," << r.min_omega_ii << "," << r.max_omega_ij << "," << r.distance << "\n";
        }
    }
    {
        std::ofstream out(cfg.out_dir / "detection_runs.csv");
        out << "network_id,method,gamma,seed,nmi,Q,achieved_mu,mu_bin,distance\n";
        for (const auto& r : results) {
            if (r.failed) continue;
            auto bin = mu_bin(r.achieved);
            for (const auto& d : r.detect_rows) {
                out << d.network << "," << d.method << "," << d.gamma << "," << d.seed << ","
                    << d.score << "," << d.q << "," << r.achieved << ",";
                if (bin)
                    out << *bin;
                else
                    out << "discarded";
                out << "," << (r.has_window ? std::to_string(r.distance) : "undefined") << "\n";
            }
        }
    }
    {
        // per (cell, mu bin, method) summary
        std::map<std::tuple<std::string, double, std::string>, std::vector<double>> agg;
        for (const auto& r : results) {
            if (r.failed) continue;
            auto bin = mu_bin(r.achieved);
            if (!bin) continue;
            for (const auto& d : r.detect_rows)
                agg[{r.cell, *bin, d.method}].push_back(d.score);
        }
        std::ofstream out(cfg.out_dir / "detection_by_mu.csv");
        out << "cell,mu_bin,method,mean_nmi,ci95,count\n";
        for (const auto& [key, values] : agg) {
            double mean = 0;
            for (double v : values) mean += v;
            mean /= values.size();
            double var = 0;
            for (double v : values) var += (v - mean) * (v - mean);
            double stderr_ = values.size() > 1
                                 ? std::sqrt(var / (values.size() - 1) / values.size())
                                 : 0.0;
            out << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key)
                << "," << mean << "," << 1.96 * stderr_ << "," << values.size() << "\n";
        }
    }
    {
        std::ofstream out(cfg.out_dir / "detection_by_distance.csv");
        out << "cell,realization,distance,achieved_mu,method,nmi\n";
        for (const auto& r : results) {
            if (r.failed || !r.has_window) continue;
            for (const auto& d : r.detect_rows)
                out << r.cell << "," << r.realization << "," << r.distance << "," << r.achieved
                    << "," << d.method << "," << d.score << "\n";
        }
    }
    {
        std::ofstream out(cfg.out_dir / "sweep_envelope.csv");
        out << "cell,realization,level,has_interval,gamma_lo,gamma_hi\n";
        for (const auto& r : results) {
            if (r.failed || !r.swept) continue;
            for (const auto& [level, interval] : r.envelope) {
                bool has = interval.second >= interval.first;
                out << r.cell << "," << r.realization << "," << level << "," << (has ? 1 : 0)
                    << ",";
                if (has)
                    out << interval.first << "," << interval.second;
                else
                    out << "none,none";
                out << "\n";
            }
        }
    }

    int failures = 0;
    for (const auto& r : results) {
        if (r.failed) {
            std::cerr << "cell " << r.cell << " realization " << r.realization << " seed "
                      << r.seed << " failed: " << r.error << "\n";
            ++failures;
        }
    }
    std::cout << "batch complete: " << (results.size() - failures) << "/" << results.size()
              << " networks, outputs in " << cfg.out_dir.string() << "\n";
    return failures == 0 ? 0 : kExitGeneration;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HGLFR benchmark generator and analysis toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, network_dir, edges_path, partition_path;
    std::string methods = "lp,mod", gamma_grid_spec, seeds_arg, out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;

    auto* gen = app.add_subcommand("generate", "generate networks from a config file");
    gen->add_option("--config", config_path, "config file (JSON)")->required();
    gen->add_option("--out", out_dir, "output directory override");
    gen->add_option("--seed", seed, "base seed override")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* ana = app.add_subcommand("analyze", "omega matrix, resolution window, achieved mu");
    ana->add_option("--network", network_dir, "generated network directory");
    ana->add_option("--edges", edges_path, "edge list file");
    ana->add_option("--partition", partition_path, "partition file");
    ana->add_option("--out", out_dir, "output directory for CSVs");

    auto* det = app.add_subcommand("detect", "run detection baselines against ground truth");
    det->add_option("--network", network_dir, "generated network directory")->required();
    det->add_option("--methods", methods, "comma list: lp,mod");
    det->add_option("--gamma-grid", gamma_grid_spec, "start:stop:points:log|lin");
    det->add_option("--seeds", seeds_arg, "comma list of detection seeds");
    det->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* swp = app.add_subcommand("sweep", "per-level modularity over a gamma grid");
    swp->add_option("--network", network_dir, "generated network directory")->required();
    swp->add_option("--gamma-grid", gamma_grid_spec, "start:stop:points:log|lin");
    swp->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* bat = app.add_subcommand("batch", "full experiment batch from a config grid");
    bat->add_option("--config", config_path, "config file (JSON)")->required();
    bat->add_option("--out", out_dir, "output directory override");
    bat->add_option("--workers", workers, "concurrent generation workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(config_path, out_dir,
                                seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
        if (ana->parsed()) {
            if (network_dir.empty() && (edges_path.empty() || partition_path.empty())) {
                std::cerr << "analyze needs --network or both --edges and --partition\n";
                return kExitValidation;
            }
            return cmd_analyze(network_dir, edges_path, partition_path, out_dir);
        }
        if (det->parsed())
            return cmd_detect(network_dir, methods, gamma_grid_spec, seeds_arg, out_path);
        if (swp->parsed()) return cmd_sweep(network_dir, gamma_grid_spec, out_path);
        if (bat->parsed()) return cmd_batch(config_path, out_dir, workers);
    } catch (const parameter_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const generation_error& e) {
        std::cerr << "generation error: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
