#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netbid/strategy.hpp"
#include "netbid/topology.hpp"

namespace netbid {

// Experiment parameters, loadable from a flat "key = value" file.
// Recognized keys: topology, nodes, nodes_max, trials, seed, funds,
// coins_min, coins_max, strategy, c, epsilon, max_steps, inject_base,
// inject_funds, inject_points, inject_points_max, out.
struct ExperimentConfig {
    std::vector<Family> families; // `topology`, comma-separated
    int nodes = 0;
    int nodes_max = 0; // 0 -> single node count
    int trials = 0;
    std::uint64_t seed = 0;
    double funds = 0.0;
    int coins_min = 0;
    int coins_max = 0;
    StrategyKind strategy = StrategyKind::fixed_c(2.0);
    double c = 2.0;
    double epsilon = 1.0;
    std::int64_t max_steps = 0; // 0 -> 50 * n per trial
    bool has_injection = false;
    double inject_base = 0.0;
    double inject_funds = 0.0;
    int inject_points = 1;
    int inject_points_max = 0; // 0 -> no injection-point sweep
    std::string out = ".";

    // CLI-only knobs, not part of the file schema.
    bool funds_is_total = false; // interpret `funds` as the network total
    int threads = 0;             // 0 -> hardware concurrency

    void validate() const; // throws ConfigError naming the offending field

    // Node counts covered by a sweep: up to 10 evenly spaced values from
    // nodes to nodes_max inclusive, or just {nodes}.
    std::vector<int> node_grid() const;

    std::int64_t step_cap(int n) const { return max_steps > 0 ? max_steps : 50LL * n; }
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);
std::string config_to_text(const ExperimentConfig& cfg);
void save_config(const ExperimentConfig& cfg, const std::string& path);

} // namespace netbid
