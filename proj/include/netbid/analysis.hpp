#pragma once

#include <cstdint>
#include <vector>

#include "netbid/engine.hpp"

namespace netbid {

// Price differences between consecutive nodes of a sorted path, evolved on
// the "every other step" clock of the averaging recurrence.
struct GapVector {
    std::vector<double> gaps;
    std::int64_t t = 0;
};

// One recurrence tick: interior gaps average with both neighbors at weights
// 1/4, 1/2, 1/4; the two boundary gaps lose their missing quarter. The gap
// sum therefore drops by exactly (d_1 + d_m)/4 per tick.
GapVector evolve_gaps(const GapVector& g);

double gap_sum(const GapVector& g);

enum class BoundForm { Power, Binomial };

// Left side of the stabilization-time equation for an n = 2m path:
//   Power:     (3/4)^tau * (1/3)^(m+1) * (tau/(m+1))^(m+1)
//   Binomial:  (3/4)^tau * (1/3)^(m+1) * C(tau, m+1)   (generalized C, real tau)
// A root tau with value 1 would certify stabilization within 2*tau steps.
double path_bound_function(double tau, int m, BoundForm form);

struct PathBoundResult {
    int n = 0;
    int m = 0; // n/2
    BoundForm form = BoundForm::Power;
    bool found = false;  // true when the function crosses 1
    double tau = 0.0;    // smallest crossing if found, else the argmax
    double steps = 0.0;  // 2 * tau
    double peak_value = 0.0; // max of the bound function over the scan range
};

// Scan-plus-bisection root search for path_bound_function(tau) = 1. The
// function's maximum sits below 1 for every even n (it decays like
// exp(-0.85*(m+1)) in the power form), so in practice this reports
// no-crossing and tau gives the peak location, which still grows with n.
PathBoundResult solve_path_bound(int n, BoundForm form = BoundForm::Power,
                                 double tau_max = 0.0);

struct StepStats {
    int trials = 0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
    std::int64_t max = 0;
    double converged_rate = 0.0;
};

StepStats stabilization_stats(const std::vector<TrialResult>& results);

// Engine parameters shared by the analysis experiments.
struct EngineParams {
    double funds = 10000.0;
    int coins_min = 50;
    int coins_max = 100;
    double c = 2.0;
    double epsilon = 1.0;
    std::int64_t max_steps = 0; // 0 -> 50 * n
};

struct CycleCorollaryReport {
    int cycle_n = 0;
    int path_n = 0; // floor(3n/4)
    int trials = 0;
    double mean_cycle = 0.0;
    double mean_path = 0.0;
    bool cycle_no_slower = false; // mean_cycle <= mean_path
    std::vector<std::int64_t> cycle_steps; // per-trial audit
    std::vector<std::int64_t> path_steps;
};

// Runs matched-seed trials on cycle(n) and path(floor(3n/4)) and compares
// mean stabilization steps.
CycleCorollaryReport check_cycle_corollary(int n, int trials, std::uint64_t seed,
                                           const EngineParams& params = {});

} // namespace netbid
