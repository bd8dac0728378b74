// Experiment CLI: single trials, stabilization sweeps, bidder-estimator
// evaluation, fund-injection spread, and the analytic path bound.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netbid/analysis.hpp"
#include "netbid/config.hpp"
#include "netbid/csv.hpp"
#include "netbid/engine.hpp"
#include "netbid/errors.hpp"
#include "netbid/harness.hpp"

namespace {

using namespace netbid;

struct GlobalOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    bool trace = false;
    bool dump_state = false;
    bool funds_total = false;
    int threads = 0;
};

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.families = {Family::Path};
    cfg.nodes = 50;
    cfg.trials = 1;
    cfg.seed = 1;
    cfg.funds = 10000.0;
    cfg.coins_min = 50;
    cfg.coins_max = 100;
    cfg.strategy = StrategyKind::fixed_c(2.0);
    cfg.c = 2.0;
    cfg.epsilon = 1.0;
    return cfg;
}

ExperimentConfig resolve_config(const GlobalOpts& g) {
    ExperimentConfig cfg = g.config_path.empty() ? default_config() : load_config(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    if (!g.out.empty()) cfg.out = g.out;
    cfg.funds_is_total = g.funds_total;
    cfg.threads = g.threads;
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

int cmd_run(const GlobalOpts& g, const ExperimentConfig& cfg) {
    const Family family = cfg.families.front();
    const Topology topo = make_topology(family, cfg.nodes, cfg.nodes / 10, cfg.seed);
    Rng rng = make_rng(cfg.seed);
    const double per_node = cfg.funds_is_total ? cfg.funds / topo.n : cfg.funds;
    Configuration initial =
        cfg.has_injection
            ? init_injection(topo, cfg.inject_base, cfg.inject_funds, cfg.inject_points,
                             cfg.coins_min, cfg.coins_max, rng)
            : init_uniform(topo, per_node, cfg.coins_min, cfg.coins_max, rng);

    ensure_out_dir(cfg.out);
    std::ofstream state_initial, trace;
    if (g.dump_state) {
        state_initial = open_out(cfg.out + "/state_initial.csv");
        write_state_csv(initial, state_initial);
    }

    auto strategy = make_strategy(cfg.strategy);
    TrialResult result;
    if (g.trace) {
        trace = open_out(cfg.out + "/trace.csv");
        write_trace_csv_header(trace);
        // Manual loop so each step's contracts can stream out.
        Configuration current = initial;
        result.metrics.push_back(StepMetrics{0, current.max_price(), current.min_price(),
                                             current.max_price() - current.min_price(), 0,
                                             current.total_funds(), current.total_coins()});
        std::int64_t taken = 0;
        const auto cap = cfg.step_cap(topo.n);
        while (taken < cap && !is_stabilized(current, cfg.epsilon)) {
            StepResult sr = step(current, topo, *strategy, 0.0);
            for (const auto& c : sr.contracts) write_trace_row(sr.next.step, c, trace);
            current = std::move(sr.next);
            result.metrics.push_back(sr.metrics);
            ++taken;
        }
        result.steps = taken;
        result.converged = is_stabilized(current, cfg.epsilon);
        result.final_price = current.equilibrium_price();
        result.max_funds = current.max_funds();
        result.min_funds = current.min_funds();
        result.final_config = std::move(current);
    } else {
        result = run_to_convergence(std::move(initial), topo, *strategy, cfg.epsilon,
                                    cfg.step_cap(topo.n));
    }

    auto metrics = open_out(cfg.out + "/metrics.csv");
    write_metrics_csv_header(metrics);
    write_metrics_csv(result, metrics);
    if (g.dump_state) {
        auto state_final = open_out(cfg.out + "/state_final.csv");
        write_state_csv(result.final_config, state_final);
    }

    std::cout << "family=" << family_name(family) << " n=" << topo.n << " seed=" << cfg.seed
              << " steps=" << result.steps << " converged=" << (result.converged ? "yes" : "no")
              << " equilibrium_price=" << csv_num(result.final_price) << '\n';
    return result.converged ? 0 : 2;
}

int cmd_sweep(const ExperimentConfig& cfg, bool gnuplot) {
    ensure_out_dir(cfg.out);
    const SweepDataset ds = run_sweep(cfg);
    std::vector<std::string> family_names;
    for (Family f : cfg.families) {
        SweepDataset per_family;
        per_family.meta = ds.meta;
        for (const auto& row : ds.rows)
            if (row.family == family_name(f)) per_family.rows.push_back(row);
        emit_csv(per_family, cfg.out + "/sweep_" + family_name(f) + ".csv");
        family_names.push_back(family_name(f));
    }
    emit_summary_json(ds, cfg.out + "/sweep_summary.json");
    if (gnuplot) {
        auto gp = open_out(cfg.out + "/sweep.gp");
        gp << gnuplot_script(family_names, cfg.out);
    }
    std::cout << to_csv(ds);
    return 0;
}

int cmd_bidders(const ExperimentConfig& cfg, int k_sparse, int k_dense) {
    ensure_out_dir(cfg.out);
    if (k_sparse <= 0) k_sparse = cfg.nodes / 10;
    if (k_dense <= 0) k_dense = static_cast<int>(cfg.nodes / 1.2);
    const BidderDataset ds = run_bidder_eval(cfg, k_sparse, k_dense);
    emit_csv(ds, cfg.out + "/bidders.csv");
    emit_summary_json(ds, cfg.out + "/bidders_summary.json");
    std::cout << to_csv(ds);
    return 0;
}

int cmd_inject(const ExperimentConfig& cfg) {
    ensure_out_dir(cfg.out);
    const InjectDataset ds = run_injection(cfg);
    emit_csv(ds, cfg.out + "/inject.csv");
    emit_summary_json(ds, cfg.out + "/inject_summary.json");
    std::cout << to_csv(ds);
    return 0;
}

int cmd_path_bound(int n, const std::string& form_name, double tau_max) {
    const BoundForm form = form_name == "binomial" ? BoundForm::Binomial : BoundForm::Power;
    const PathBoundResult r = solve_path_bound(n, form, tau_max);
    std::cout << "n,m,tau,steps_2tau,form\n";
    if (!r.found)
        std::cout << "# no crossing: bound peaks at " << csv_num(r.peak_value)
                  << " < 1; tau below is the peak location\n";
    std::cout << r.n << ',' << r.m << ',' << csv_num(r.tau) << ',' << csv_num(r.steps) << ','
              << form_name << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synchronous market simulator: neighborhood auctions iterated to price equilibrium"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "experiment config file (key = value lines)");
    auto* seed_opt = app.add_option("--seed", g.seed, "override the base random seed");
    app.add_option("--out", g.out, "output directory");
    app.add_flag("--trace", g.trace, "write per-contract trace (run subcommand)");
    app.add_flag("--dump-state", g.dump_state, "dump initial/final state snapshots");
    app.add_flag("--funds-total", g.funds_total,
                 "interpret configured funds as the network total, not per node");
    app.add_option("--threads", g.threads, "worker threads for trial batches (0 = auto)");

    std::string topology, strategy;
    int nodes = 0, nodes_max = -1, trials = 0, coins_min = 0, coins_max = 0;
    double funds = 0.0, c = 0.0, epsilon = 0.0;
    std::int64_t max_steps = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--topology", topology, "family list: path,cycle,grid,klink,complete");
        sub->add_option("--nodes", nodes, "node count (sweep start)");
        sub->add_option("--nodes-max", nodes_max, "sweep end node count");
        sub->add_option("--trials", trials, "trials per cell");
        sub->add_option("--funds", funds, "initial funds per node");
        sub->add_option("--coins-min", coins_min, "coin draw lower bound");
        sub->add_option("--coins-max", coins_max, "coin draw upper bound");
        sub->add_option("--strategy", strategy, "fixed-c | bayes-m1 | bayes-m2");
        sub->add_option("--c", c, "bid parameter for fixed-c");
        sub->add_option("--epsilon", epsilon, "legitimacy tolerance");
        sub->add_option("--max-steps", max_steps, "step cap per trial (0 = 50*n)");
    };

    auto* run_cmd = app.add_subcommand("run", "single trial with per-step metrics");
    add_common(run_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "stabilization-time sweep over (family, n)");
    add_common(sweep_cmd);
    bool gnuplot = false;
    sweep_cmd->add_flag("--gnuplot", gnuplot, "also write a gnuplot script for the sweep CSVs");
    auto* bidders_cmd = app.add_subcommand("bidders", "bidder-count estimator evaluation");
    add_common(bidders_cmd);
    int k_sparse = 0, k_dense = 0;
    bidders_cmd->add_option("--k-sparse", k_sparse, "sparse chord count (default n/10)");
    bidders_cmd->add_option("--k-dense", k_dense, "dense chord count (default n/1.2)");
    auto* inject_cmd = app.add_subcommand("inject", "fund-injection spread experiment");
    add_common(inject_cmd);
    double inject_base = 0.0, inject_funds = 0.0;
    int inject_points = 0, inject_points_max = -1;
    inject_cmd->add_option("--inject-base", inject_base, "funds at non-injection nodes");
    inject_cmd->add_option("--inject-funds", inject_funds, "funds at injection nodes");
    inject_cmd->add_option("--inject-points", inject_points, "number of injection nodes");
    inject_cmd->add_option("--inject-points-max", inject_points_max,
                           "sweep injection points up to this count");
    auto* bound_cmd = app.add_subcommand("path-bound", "analytic stabilization bound for a path");
    int bound_n = 0;
    std::string bound_form = "power";
    double tau_max = 0.0;
    bound_cmd->add_option("--n", bound_n, "even path size (>= 4)")->required();
    bound_cmd->add_option("--form", bound_form, "power | binomial")
        ->check(CLI::IsMember({"power", "binomial"}));
    bound_cmd->add_option("--tau-max", tau_max, "scan upper limit (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        g.seed_set = seed_opt->count() > 0;
        if (app.got_subcommand(bound_cmd)) return cmd_path_bound(bound_n, bound_form, tau_max);

        ExperimentConfig cfg = resolve_config(g);
        if (!topology.empty()) {
            cfg.families.clear();
            std::stringstream fams(topology);
            std::string fam;
            while (std::getline(fams, fam, ',')) cfg.families.push_back(family_from_name(fam));
        }
        if (nodes > 0) cfg.nodes = nodes;
        if (nodes_max >= 0) cfg.nodes_max = nodes_max;
        if (trials > 0) cfg.trials = trials;
        if (funds > 0) cfg.funds = funds;
        if (coins_min > 0) cfg.coins_min = coins_min;
        if (coins_max > 0) cfg.coins_max = coins_max;
        if (c > 0) cfg.c = c;
        if (!strategy.empty() || c > 0)
            cfg.strategy = StrategyKind::from_name(
                strategy.empty() ? cfg.strategy.name() : strategy, cfg.c);
        if (epsilon > 0) cfg.epsilon = epsilon;
        if (max_steps >= 0) cfg.max_steps = max_steps;
        if (app.got_subcommand(inject_cmd)) {
            if (inject_base > 0 || inject_funds > 0) {
                cfg.has_injection = true;
                if (inject_base > 0) cfg.inject_base = inject_base;
                if (inject_funds > 0) cfg.inject_funds = inject_funds;
            }
            if (inject_points > 0) cfg.inject_points = inject_points;
            if (inject_points_max >= 0) cfg.inject_points_max = inject_points_max;
        }
        cfg.validate();

        if (app.got_subcommand(run_cmd)) return cmd_run(g, cfg);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(cfg, gnuplot);
        if (app.got_subcommand(bidders_cmd)) return cmd_bidders(cfg, k_sparse, k_dense);
        if (app.got_subcommand(inject_cmd)) return cmd_inject(cfg);
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
