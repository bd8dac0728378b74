#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "netbid/analysis.hpp"
#include "netbid/config.hpp"
#include "netbid/engine.hpp"

namespace netbid {

struct RunMetadata {
    std::uint64_t seed = 0;
    std::string rng = "mt19937_64";
    std::string version;
    std::string command;
};

struct SweepRow {
    std::string family;
    int n = 0;
    int trials = 0;
    double mean_steps = 0.0;
    double median_steps = 0.0;
    double stddev_steps = 0.0;
    std::int64_t max_steps = 0;
    double converged_rate = 0.0;
};

struct SweepDataset {
    std::vector<SweepRow> rows;
    RunMetadata meta;
};

struct BidderRow {
    std::string family; // always klink
    int n = 0;
    int k = 0;
    std::string method; // method1 | method2
    double mean_D = 0.0;
};

struct BidderDataset {
    std::vector<BidderRow> rows;
    RunMetadata meta;
};

struct InjectRow {
    std::string family;
    int n = 0;
    int inject_points = 0;
    double max_funds = 0.0; // mean over trials of per-trial max node funds
    double min_funds = 0.0;
    double steps = 0.0; // mean stabilization steps
};

struct InjectDataset {
    std::vector<InjectRow> rows;
    RunMetadata meta;
};

// Stabilization-time sweep over (family, n) cells. Trial t uses seed
// base_seed + t, so matched-seed comparisons across families come free.
SweepDataset run_sweep(const ExperimentConfig& cfg);

// Bidder-count estimator evaluation on sparse and dense k-link graphs;
// averages the per-step deviation D over all steps of all trials.
BidderDataset run_bidder_eval(const ExperimentConfig& cfg, int k_sparse, int k_dense);

// Estimator hook for the deviation pipeline. Production estimators ignore
// the trailing actual-count vector; tests can use it to force e == a.
using EstimatorFn = std::function<int(const Configuration&, const Topology&,
                                      const std::vector<int>& prev_counts, NodeId h,
                                      const std::vector<int>& actual_counts)>;

// Mean per-step deviation D for one (n, k, estimator) cell; exposed for
// tests and reused by run_bidder_eval.
double mean_deviation_for(const ExperimentConfig& cfg, int n, int k, Estimator estimator);
double mean_deviation_for(const ExperimentConfig& cfg, int n, int k, const EstimatorFn& estimate);

// Fund-injection spread: node-count sweep at a fixed point count, plus an
// injection-point sweep at the standard node count when configured.
InjectDataset run_injection(const ExperimentConfig& cfg);

void emit_csv(const SweepDataset& ds, const std::string& path);
void emit_csv(const BidderDataset& ds, const std::string& path);
void emit_csv(const InjectDataset& ds, const std::string& path);
std::string to_csv(const SweepDataset& ds);
std::string to_csv(const BidderDataset& ds);
std::string to_csv(const InjectDataset& ds);

void emit_summary_json(const SweepDataset& ds, const std::string& path);
void emit_summary_json(const BidderDataset& ds, const std::string& path);
void emit_summary_json(const InjectDataset& ds, const std::string& path);

// Runs all trials of one experiment cell (shared topology, distinct seeds)
// across the worker pool and returns results ordered by trial id.
std::vector<TrialResult> run_cell(const Topology& topo, const ExperimentConfig& cfg,
                                  bool injection, int inject_points);

// gnuplot companion script for the sweep CSVs (no plotting dependency).
std::string gnuplot_script(const std::vector<std::string>& families, const std::string& out_dir);

extern const char* kVersion;

} // namespace netbid
