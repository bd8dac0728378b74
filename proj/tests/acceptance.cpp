// Acceptance suite: every release-gating property, one test case per
// criterion, one PASS/FAIL line each on stdout.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "netbid/analysis.hpp"
#include "netbid/config.hpp"
#include "netbid/engine.hpp"
#include "netbid/harness.hpp"
#include "test_support.hpp"

using namespace netbid;

namespace {

struct CriterionListener : doctest::IReporter {
    const doctest::TestCaseData* current = nullptr;

    explicit CriterionListener(const doctest::ContextOptions&) {}

    void report_query(const doctest::QueryData&) override {}
    void test_run_start() override {}
    void test_run_end(const doctest::TestRunStats& stats) override {
        std::printf("[acceptance] %u criteria, %u failed\n", stats.numTestCasesPassingFilters,
                    stats.numTestCasesFailed);
        std::fflush(stdout);
    }
    void test_case_start(const doctest::TestCaseData& data) override { current = &data; }
    void test_case_reenter(const doctest::TestCaseData&) override {}
    void test_case_end(const doctest::CurrentTestCaseStats& stats) override {
        if (current) {
            std::printf("[acceptance] %-58s %s\n", current->m_name,
                        stats.testCaseSuccess ? "PASS" : "FAIL");
            std::fflush(stdout);
        }
    }
    void test_case_exception(const doctest::TestCaseException&) override {}
    void subcase_start(const doctest::SubcaseSignature&) override {}
    void subcase_end() override {}
    void log_assert(const doctest::AssertData&) override {}
    void log_message(const doctest::MessageData&) override {}
    void test_case_skipped(const doctest::TestCaseData&) override {}
};

REGISTER_LISTENER("criteria", 1, CriterionListener);

// Matched-seed mean stabilization steps for one family at fixed n.
double mean_steps_for(Family family, int n, int trials, std::uint64_t base_seed) {
    ExperimentConfig cfg;
    cfg.families = {family};
    cfg.nodes = n;
    cfg.trials = trials;
    cfg.seed = base_seed;
    cfg.funds = 10000.0;
    cfg.coins_min = 50;
    cfg.coins_max = 100;
    cfg.strategy = StrategyKind::fixed_c(2.0);
    cfg.epsilon = 1.0;
    const Topology topo = make_topology(family, n, n / 10, base_seed);
    const auto results = run_cell(topo, cfg, false, 0);
    return stabilization_stats(results).mean;
}

} // namespace

TEST_CASE("criterion 01: worked-example trade exactness") {
    const auto [s, b] = execute_trade(NodeState{20.0, 1000.0}, NodeState{20.0, 2200.0}, 80.0);
    const double x = 20.0 - s.coins;
    CHECK(std::abs(x - 3.75) <= 1e-12);
    CHECK(std::abs(s.funds - 1300.0) <= 1e-12);
    CHECK(std::abs(s.coins - 16.25) <= 1e-12);
    CHECK(std::abs(b.funds - 1900.0) <= 1e-12);
    CHECK(std::abs(b.coins - 23.75) <= 1e-12);
    CHECK(std::abs(s.price() - 80.0) <= 1e-12);
    CHECK(std::abs(b.price() - 80.0) <= 1e-12);
}

TEST_CASE("criterion 02: converged prices equal F/Q on 200 random runs") {
    const double epsilon = 1.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        CAPTURE(i);
        const auto inst = testsupport::random_instance(20000 + i, 100);
        const double eq_start = inst.cfg.equilibrium_price();
        FixedCStrategy strategy(2.0);
        const TrialResult r =
            run_to_convergence(inst.cfg, inst.topo, strategy, epsilon, 50LL * inst.topo.n);
        REQUIRE(r.converged);
        for (const auto& s : r.final_config.states)
            REQUIRE(std::abs(s.price() - eq_start) < epsilon);
        REQUIRE(std::abs(r.final_price - eq_start) <= 1e-9 * eq_start);
    }
}

TEST_CASE("criterion 03: funds and coins conserve at every step") {
    for (std::uint64_t i = 0; i < 60; ++i) {
        CAPTURE(i);
        const auto inst = testsupport::random_instance(30000 + i, 80);
        FixedCStrategy strategy(2.0);
        const TrialResult r =
            run_to_convergence(inst.cfg, inst.topo, strategy, 1.0, 50LL * inst.topo.n);
        const double f0 = r.metrics.front().total_funds;
        const double q0 = r.metrics.front().total_coins;
        for (std::size_t t = 1; t < r.metrics.size(); ++t) {
            REQUIRE(std::abs(r.metrics[t].total_funds - r.metrics[t - 1].total_funds) <=
                    1e-9 * f0);
            REQUIRE(std::abs(r.metrics[t].total_coins - r.metrics[t - 1].total_coins) <=
                    1e-9 * q0);
            REQUIRE(std::abs(r.metrics[t].total_funds - f0) <= 1e-9 * f0);
            REQUIRE(std::abs(r.metrics[t].total_coins - q0) <= 1e-9 * q0);
        }
    }
}

TEST_CASE("criterion 04: monotone spread with conditional strict decrease") {
    int condition_fired = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        CAPTURE(i);
        auto inst = testsupport::random_instance(40000 + i, 80);
        FixedCStrategy strategy(2.0);
        const double eps = 1.0;
        Configuration cfg = std::move(inst.cfg);
        const std::int64_t cap = 50LL * inst.topo.n;
        for (std::int64_t t = 0; t < cap && !is_legitimate(cfg, inst.topo, eps); ++t) {
            const double p_max = cfg.max_price();
            const double p_min = cfg.min_price();

            // Spec condition: every node priced at the maximum has some
            // neighbor at least epsilon cheaper.
            bool every_max_can_trade = true;
            for (NodeId v = 0; v < inst.topo.n; ++v) {
                if (cfg.states[static_cast<std::size_t>(v)].price() <
                    p_max * (1.0 - 1e-12))
                    continue;
                bool has_cheaper = false;
                for (NodeId m : inst.topo.neighbors(v))
                    if (cfg.states[static_cast<std::size_t>(m)].price() <= p_max - eps)
                        has_cheaper = true;
                if (!has_cheaper) {
                    every_max_can_trade = false;
                    break;
                }
            }

            StepResult sr = step(cfg, inst.topo, strategy, eps);
            REQUIRE(sr.metrics.p_max <= p_max);
            REQUIRE(sr.metrics.p_min >= p_min);
            REQUIRE(sr.metrics.diff <= p_max - p_min);
            if (every_max_can_trade) {
                ++condition_fired;
                REQUIRE(sr.metrics.diff < p_max - p_min);
            }
            cfg = std::move(sr.next);
        }
    }
    // The conditional clause must actually exercise, not hold vacuously.
    CHECK(condition_fired > 100);
    MESSAGE("strict-decrease condition fired ", condition_fired, " times");
}

TEST_CASE("criterion 05: 500 random instances all stabilize within 50n") {
    for (std::uint64_t i = 0; i < 500; ++i) {
        CAPTURE(i);
        const auto inst = testsupport::random_instance(50000 + i, 50);
        FixedCStrategy strategy(2.0);
        const TrialResult r =
            run_to_convergence(inst.cfg, inst.topo, strategy, 1.0, 50LL * inst.topo.n);
        REQUIRE(r.converged);
        REQUIRE(r.steps <= 50LL * inst.topo.n);
    }
}

TEST_CASE("criterion 06: strategy bounds, monotonicity, and optimality") {
    Rng rng = make_rng(606060);
    for (int i = 0; i < 10000; ++i) {
        const double reserve = 500.0 * uniform_real(rng);
        double v1 = reserve + 400.0 * uniform_real(rng);
        double v2 = reserve + 400.0 * uniform_real(rng);
        if (v1 > v2) std::swap(v1, v2);
        const int bidders = static_cast<int>(uniform_int(rng, 1, 50));
        const double s1 = bayes_nash_bid(v1, reserve, bidders);
        const double s2 = bayes_nash_bid(v2, reserve, bidders);
        REQUIRE(s1 >= reserve);
        REQUIRE(s1 <= v1);
        REQUIRE(s1 <= s2); // monotone in value
        if (v1 > reserve && bidders >= 2) {
            REQUIRE(s1 > reserve);
            REQUIRE(s1 < v1);
        }
        // Constant bidder count B reproduces the fixed-c bid with c = B.
        const double fixed = compute_bid_fixed_c(v2, reserve, static_cast<double>(bidders));
        if (v2 > reserve) REQUIRE(std::abs(s2 - fixed) <= 1e-12 * std::max(1.0, fixed));
    }

    // Monte-Carlo: the closed form lands within one grid step of the
    // empirical payoff maximizer against B-1 uniform rivals.
    for (int bidders : {2, 3, 5}) {
        CAPTURE(bidders);
        const auto mc = testsupport::mc_best_bid(80.0, 10.0, 100.0, bidders, 100000, 50,
                                                 4242 + static_cast<std::uint64_t>(bidders));
        const double predicted = bayes_nash_bid(80.0, 10.0, bidders);
        REQUIRE(std::abs(mc.best_bid - predicted) <= mc.grid_step + 1e-12);
    }
}

TEST_CASE("criterion 07: topology ordering of mean stabilization times") {
    const int n = 100, trials = 50;
    const std::uint64_t seed = 777;
    std::map<std::string, double> means;
    means["path"] = mean_steps_for(Family::Path, n, trials, seed);
    means["grid"] = mean_steps_for(Family::Grid, n, trials, seed);
    means["klink"] = mean_steps_for(Family::KLink, n, trials, seed);
    means["cycle"] = mean_steps_for(Family::Cycle, n, trials, seed);
    means["complete"] = mean_steps_for(Family::Complete, n, trials, seed);
    for (const auto& [name, mean] : means) MESSAGE(name, " mean steps = ", mean);

    CHECK(means["complete"] <= means["grid"]);
    CHECK(means["grid"] <= means["path"]);
    CHECK(means["complete"] <= means["klink"]);
    CHECK(means["klink"] <= means["cycle"]);
}

TEST_CASE("criterion 08: cycle stabilizes no slower than the 3n/4 path") {
    for (int n : {40, 80}) {
        CAPTURE(n);
        const CycleCorollaryReport r = check_cycle_corollary(n, 100, 808080);
        MESSAGE("n=", n, " cycle mean=", r.mean_cycle, " path(", r.path_n,
                ") mean=", r.mean_path);
        REQUIRE(static_cast<int>(r.cycle_steps.size()) == 100);
        REQUIRE(r.cycle_no_slower);
    }
}

TEST_CASE("criterion 09: gap identity and bound-solver contracts") {
    Rng rng = make_rng(909090);
    for (int i = 0; i < 1000; ++i) {
        const int m = static_cast<int>(uniform_int(rng, 2, 64));
        GapVector g;
        g.gaps.resize(static_cast<std::size_t>(m));
        for (auto& d : g.gaps) d = 50.0 * uniform_real(rng);
        const double before = gap_sum(g);
        const GapVector next = evolve_gaps(g);
        const double expected = before - 0.25 * (g.gaps.front() + g.gaps.back());
        REQUIRE(std::abs(gap_sum(next) - expected) <= 1e-12 * std::max(1.0, before));
    }

    double prev_tau = 0.0;
    for (int n = 10; n <= 100; n += 10) {
        CAPTURE(n);
        const PathBoundResult r = solve_path_bound(n, BoundForm::Power);
        if (r.found)
            REQUIRE(std::abs(path_bound_function(r.tau, r.m, r.form) - 1.0) <= 1e-9);
        else
            REQUIRE(r.peak_value < 1.0);
        REQUIRE(r.tau >= prev_tau);
        prev_tau = r.tau;
    }
}

TEST_CASE("criterion 10: previous-step estimator wins on sparse graphs") {
    ExperimentConfig cfg;
    cfg.families = {Family::KLink};
    cfg.nodes = 300;
    cfg.trials = 50;
    cfg.seed = 101010;
    cfg.funds = 10000.0;
    cfg.coins_min = 50;
    cfg.coins_max = 100;
    cfg.epsilon = 1.0;
    const int k_sparse = 30;  // n/10
    const int k_dense = 250;  // n/1.2

    const double sparse_m1 = mean_deviation_for(cfg, cfg.nodes, k_sparse, Estimator::PrevCount);
    const double sparse_m2 = mean_deviation_for(cfg, cfg.nodes, k_sparse, Estimator::PriceGap);
    const double dense_m1 = mean_deviation_for(cfg, cfg.nodes, k_dense, Estimator::PrevCount);
    const double dense_m2 = mean_deviation_for(cfg, cfg.nodes, k_dense, Estimator::PriceGap);
    MESSAGE("sparse k=30: method1 D=", sparse_m1, " method2 D=", sparse_m2);
    MESSAGE("dense k=250: method1 D=", dense_m1, " method2 D=", dense_m2,
            " (reported, not asserted)");
    CHECK(sparse_m1 < sparse_m2);
}

TEST_CASE("criterion 11: fund injection spreads worst on the path") {
    const int n = 300, trials = 30;
    ExperimentConfig cfg;
    cfg.families = {Family::Path};
    cfg.nodes = n;
    cfg.trials = trials;
    cfg.seed = 111111;
    cfg.funds = 10000.0;
    cfg.coins_min = 50;
    cfg.coins_max = 100;
    cfg.epsilon = 1.0;
    cfg.max_steps = 500LL * n; // the path needs far more than the 50n default here
    cfg.has_injection = true;
    cfg.inject_base = 100.0;
    cfg.inject_funds = 30000.0;
    cfg.inject_points = 1;

    std::map<std::string, double> ratio;
    for (Family family : {Family::Path, Family::Grid, Family::KLink, Family::Complete}) {
        const Topology topo = make_topology(family, n, n / 10, cfg.seed);
        const auto results = run_cell(topo, cfg, true, 1);
        double mean_ratio = 0.0;
        for (const auto& r : results) {
            REQUIRE(r.converged);
            mean_ratio += r.max_funds / r.min_funds;
        }
        ratio[family_name(family)] = mean_ratio / trials;
    }
    for (const auto& [name, value] : ratio) MESSAGE(name, " max/min funds ratio = ", value);
    CHECK(ratio["path"] > ratio["grid"]);
    CHECK(ratio["path"] > ratio["klink"]);
    CHECK(ratio["path"] > ratio["complete"]);
}

TEST_CASE("criterion 12: repeated runs emit byte-identical CSV") {
    ExperimentConfig cfg;
    cfg.families = {Family::Path, Family::KLink};
    cfg.nodes = 24;
    cfg.trials = 8;
    cfg.seed = 121212;
    cfg.funds = 10000.0;
    cfg.coins_min = 50;
    cfg.coins_max = 100;
    cfg.epsilon = 1.0;
    cfg.threads = 4;

    const std::string sweep_a = to_csv(run_sweep(cfg));
    const std::string sweep_b = to_csv(run_sweep(cfg));
    CHECK(sweep_a == sweep_b);

    const std::string bidders_a = to_csv(run_bidder_eval(cfg, 2, 12));
    const std::string bidders_b = to_csv(run_bidder_eval(cfg, 2, 12));
    CHECK(bidders_a == bidders_b);

    cfg.has_injection = true;
    cfg.inject_base = 100.0;
    cfg.inject_funds = 30000.0;
    cfg.inject_points = 1;
    cfg.inject_points_max = 2;
    const std::string inject_a = to_csv(run_injection(cfg));
    const std::string inject_b = to_csv(run_injection(cfg));
    CHECK(inject_a == inject_b);

    // Serial and parallel execution must agree too.
    ExperimentConfig serial = cfg;
    serial.threads = 1;
    CHECK(to_csv(run_injection(serial)) == inject_a);
}

int main(int argc, char** argv) {
    doctest::Context context(argc, argv);
    return context.run();
}
