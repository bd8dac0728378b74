#include "netbid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netbid {

GapVector evolve_gaps(const GapVector& g) {
    const auto m = g.gaps.size();
    if (m < 2) throw std::invalid_argument("gap vector needs at least 2 entries");
    GapVector out;
    out.t = g.t + 1;
    out.gaps.resize(m);
    out.gaps[0] = 0.5 * g.gaps[0] + 0.25 * g.gaps[1];
    for (std::size_t i = 1; i + 1 < m; ++i)
        out.gaps[i] = 0.25 * g.gaps[i - 1] + 0.5 * g.gaps[i] + 0.25 * g.gaps[i + 1];
    out.gaps[m - 1] = 0.5 * g.gaps[m - 1] + 0.25 * g.gaps[m - 2];
    return out;
}

double gap_sum(const GapVector& g) {
    double s = 0.0;
    for (double d : g.gaps) s += d;
    return s;
}

namespace {

// log of the generalized binomial coefficient C(tau, k) for real tau > 0,
// as the signed product tau (tau-1) ... (tau-k+1) / k!. Returns -inf when
// the product is <= 0 (the bound cannot reach 1 there anyway).
double log_generalized_binomial(double tau, int k) {
    double log_abs = 0.0;
    int sign = 1;
    for (int i = 0; i < k; ++i) {
        const double factor = tau - i;
        if (factor == 0.0) return -HUGE_VAL;
        if (factor < 0.0) sign = -sign;
        log_abs += std::log(std::abs(factor));
    }
    if (sign < 0) return -HUGE_VAL;
    return log_abs - std::lgamma(static_cast<double>(k) + 1.0);
}

double log_path_bound(double tau, int m, BoundForm form) {
    if (tau <= 0.0) return -HUGE_VAL;
    const int k = m + 1;
    const double base = tau * std::log(0.75) + k * std::log(1.0 / 3.0);
    if (form == BoundForm::Power) return base + k * std::log(tau / k);
    return base + log_generalized_binomial(tau, k);
}

} // namespace

double path_bound_function(double tau, int m, BoundForm form) {
    return std::exp(log_path_bound(tau, m, form));
}

PathBoundResult solve_path_bound(int n, BoundForm form, double tau_max) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("path bound needs even n >= 4");
    PathBoundResult r;
    r.n = n;
    r.m = n / 2;
    r.form = form;

    const int k = r.m + 1;
    if (tau_max <= 0.0) tau_max = std::max(200.0, 20.0 * k);

    // Dense scan for a sign change of log g around 0, tracking the peak.
    const int samples = 20000;
    const double dt = tau_max / samples;
    double prev_tau = dt, prev_log = log_path_bound(prev_tau, r.m, form);
    double peak_tau = prev_tau, peak_log = prev_log;
    double cross_lo = 0.0, cross_hi = 0.0;
    bool crossed = false;
    for (int i = 2; i <= samples; ++i) {
        const double tau = i * dt;
        const double lg = log_path_bound(tau, r.m, form);
        if (lg > peak_log) {
            peak_log = lg;
            peak_tau = tau;
        }
        if (!crossed && prev_log < 0.0 && lg >= 0.0) {
            crossed = true;
            cross_lo = prev_tau;
            cross_hi = tau;
        }
        prev_tau = tau;
        prev_log = lg;
    }

    if (crossed) {
        // Bisect the first upward crossing of log g = 0.
        for (int it = 0; it < 200 && cross_hi - cross_lo > 1e-13 * cross_hi; ++it) {
            const double mid = 0.5 * (cross_lo + cross_hi);
            if (log_path_bound(mid, r.m, form) < 0.0)
                cross_lo = mid;
            else
                cross_hi = mid;
        }
        r.found = true;
        r.tau = 0.5 * (cross_lo + cross_hi);
    } else {
        // No crossing: refine the peak by ternary search and report it.
        double lo = std::max(dt, peak_tau - 2.0 * dt), hi = peak_tau + 2.0 * dt;
        for (int it = 0; it < 200; ++it) {
            const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
            if (log_path_bound(a, r.m, form) < log_path_bound(b, r.m, form))
                lo = a;
            else
                hi = b;
        }
        r.found = false;
        r.tau = 0.5 * (lo + hi);
        peak_log = log_path_bound(r.tau, r.m, form);
    }
    r.steps = 2.0 * r.tau;
    r.peak_value = std::exp(std::max(peak_log, log_path_bound(r.tau, r.m, form)));
    return r;
}

StepStats stabilization_stats(const std::vector<TrialResult>& results) {
    if (results.empty()) throw std::invalid_argument("no trial results to summarize");
    StepStats s;
    s.trials = static_cast<int>(results.size());
    std::vector<std::int64_t> steps;
    steps.reserve(results.size());
    int converged = 0;
    double sum = 0.0;
    for (const auto& r : results) {
        steps.push_back(r.steps);
        sum += static_cast<double>(r.steps);
        s.max = std::max(s.max, r.steps);
        if (r.converged) ++converged;
    }
    s.mean = sum / s.trials;
    double sq = 0.0;
    for (auto v : steps) {
        const double d = static_cast<double>(v) - s.mean;
        sq += d * d;
    }
    s.stddev = s.trials > 1 ? std::sqrt(sq / (s.trials - 1)) : 0.0;
    std::sort(steps.begin(), steps.end());
    const auto mid = steps.size() / 2;
    s.median = steps.size() % 2 == 1
                   ? static_cast<double>(steps[mid])
                   : 0.5 * static_cast<double>(steps[mid - 1] + steps[mid]);
    s.converged_rate = static_cast<double>(converged) / s.trials;
    return s;
}

namespace {

std::int64_t run_one(const Topology& topo, const EngineParams& p, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    Configuration cfg = init_uniform(topo, p.funds, p.coins_min, p.coins_max, rng);
    FixedCStrategy strategy(p.c);
    const std::int64_t cap = p.max_steps > 0 ? p.max_steps : 50LL * topo.n;
    return run_to_convergence(std::move(cfg), topo, strategy, p.epsilon, cap).steps;
}

} // namespace

CycleCorollaryReport check_cycle_corollary(int n, int trials, std::uint64_t seed,
                                           const EngineParams& params) {
    if (n < 8) throw std::invalid_argument("cycle comparison needs n >= 8");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    CycleCorollaryReport report;
    report.cycle_n = n;
    report.path_n = 3 * n / 4;
    report.trials = trials;

    const Topology cycle = make_cycle(n);
    const Topology path = make_path(report.path_n);
    double sum_cycle = 0.0, sum_path = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        const auto cs = run_one(cycle, params, s);
        const auto ps = run_one(path, params, s);
        report.cycle_steps.push_back(cs);
        report.path_steps.push_back(ps);
        sum_cycle += static_cast<double>(cs);
        sum_path += static_cast<double>(ps);
    }
    report.mean_cycle = sum_cycle / trials;
    report.mean_path = sum_path / trials;
    report.cycle_no_slower = report.mean_cycle <= report.mean_path;
    return report;
}

} // namespace netbid
