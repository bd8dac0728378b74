#include "netbid/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "netbid/csv.hpp"
#include "netbid/errors.hpp"

namespace netbid {

const char* kVersion = "0.1.0";

namespace {

// Distinct sub-streams per trial: graph structure and initial state must
// not share a generator, or chord picks would correlate with coin draws.
std::uint64_t graph_seed(std::uint64_t trial_seed) {
    return trial_seed ^ 0x9E3779B97F4A7C15ULL;
}

template <class Fn>
void parallel_trials(int trials, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, trials));
    if (threads == 1) {
        for (int i = 0; i < trials; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < trials;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int klink_chords(int n) { return n / 10; }

Configuration make_initial(const Topology& topo, const ExperimentConfig& cfg, bool injection,
                           int inject_points, Rng& rng) {
    const double per_node = cfg.funds_is_total ? cfg.funds / topo.n : cfg.funds;
    if (injection)
        return init_injection(topo, cfg.inject_base, cfg.inject_funds, inject_points,
                              cfg.coins_min, cfg.coins_max, rng);
    return init_uniform(topo, per_node, cfg.coins_min, cfg.coins_max, rng);
}

// Re-assert the engine contracts as rows leave the harness: conservation
// from t=0 and, when converged, final prices at F/Q.
void assert_trial_invariants(const TrialResult& r, const ExperimentConfig& cfg) {
    const auto& first = r.metrics.front();
    const auto& last = r.metrics.back();
    if (std::abs(last.total_funds - first.total_funds) > 1e-9 * first.total_funds ||
        std::abs(last.total_coins - first.total_coins) > 1e-9 * first.total_coins)
        throw InternalError("trial " + std::to_string(r.trial_id) + " drifted conservation");
    if (r.converged) {
        const double eq = r.final_price;
        for (const auto& s : r.final_config.states)
            if (std::abs(s.price() - eq) >= cfg.epsilon)
                throw InternalError("trial " + std::to_string(r.trial_id) +
                                    " converged with a price off F/Q");
    }
}

RunMetadata make_meta(const ExperimentConfig& cfg, const std::string& command) {
    RunMetadata meta;
    meta.seed = cfg.seed;
    meta.version = kVersion;
    meta.command = command;
    return meta;
}

nlohmann::json meta_json(const RunMetadata& meta) {
    const auto now = std::chrono::system_clock::now();
    const auto stamp = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
    return nlohmann::json{{"seed", meta.seed},
                          {"rng", meta.rng},
                          {"version", meta.version},
                          {"command", meta.command},
                          {"timestamp_unix", stamp.count()}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << text;
}

} // namespace

std::vector<TrialResult> run_cell(const Topology& topo, const ExperimentConfig& cfg,
                                  bool injection, int inject_points) {
    std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
        Rng rng = make_rng(seed);

        // KLink draws a fresh chord set per trial; other families share topo.
        Topology local;
        const Topology* graph = &topo;
        if (topo.family == Family::KLink) {
            local = make_klink(topo.n, topo.klink_k, graph_seed(seed));
            graph = &local;
        }

        Configuration initial = make_initial(*graph, cfg, injection, inject_points, rng);
        auto strategy = make_strategy(cfg.strategy);
        TrialResult r = run_to_convergence(std::move(initial), *graph, *strategy, cfg.epsilon,
                                           cfg.step_cap(graph->n));
        r.trial_id = trial;
        r.seed = seed;
        assert_trial_invariants(r, cfg);
        results[static_cast<std::size_t>(trial)] = std::move(r);
    });
    return results;
}

SweepDataset run_sweep(const ExperimentConfig& cfg) {
    SweepDataset ds;
    ds.meta = make_meta(cfg, "sweep");
    for (Family family : cfg.families) {
        for (int n : cfg.node_grid()) {
            const Topology topo = make_topology(family, n, klink_chords(n), graph_seed(cfg.seed));
            const auto results = run_cell(topo, cfg, false, 0);
            const StepStats stats = stabilization_stats(results);
            SweepRow row;
            row.family = family_name(family);
            row.n = n;
            row.trials = stats.trials;
            row.mean_steps = stats.mean;
            row.median_steps = stats.median;
            row.stddev_steps = stats.stddev;
            row.max_steps = stats.max;
            row.converged_rate = stats.converged_rate;
            ds.rows.push_back(std::move(row));
        }
    }
    return ds;
}

double mean_deviation_for(const ExperimentConfig& cfg, int n, int k, const EstimatorFn& estimate) {
    std::vector<double> trial_d(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<std::int64_t> trial_steps(static_cast<std::size_t>(cfg.trials), 0);

    parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
        const Topology topo = make_klink(n, k, graph_seed(seed));
        Rng rng = make_rng(seed);
        Configuration cfg_t = make_initial(topo, cfg, false, 0, rng);
        auto strategy = make_strategy(cfg.strategy);

        std::vector<int> prev_counts; // empty before the first step
        std::vector<int> estimates(static_cast<std::size_t>(n));
        double d_sum = 0.0;
        std::int64_t steps = 0;
        const std::int64_t cap = cfg.step_cap(n);
        while (steps < cap && !is_stabilized(cfg_t, cfg.epsilon)) {
            StepResult sr = step(cfg_t, topo, *strategy, 0.0);
            for (NodeId h = 0; h < n; ++h)
                estimates[static_cast<std::size_t>(h)] =
                    estimate(cfg_t, topo, prev_counts, h, sr.raw_bid_counts);
            d_sum += deviation_D(estimates, sr.raw_bid_counts, topo);
            prev_counts = sr.raw_bid_counts;
            cfg_t = std::move(sr.next);
            ++steps;
        }
        trial_d[static_cast<std::size_t>(trial)] = d_sum;
        trial_steps[static_cast<std::size_t>(trial)] = steps;
    });

    double total_d = 0.0;
    std::int64_t total_steps = 0;
    for (std::size_t i = 0; i < trial_d.size(); ++i) {
        total_d += trial_d[i];
        total_steps += trial_steps[i];
    }
    return total_steps > 0 ? total_d / static_cast<double>(total_steps) : 0.0;
}

double mean_deviation_for(const ExperimentConfig& cfg, int n, int k, Estimator estimator) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.strategy = StrategyKind::bayes_nash(estimator);
    return mean_deviation_for(
        run_cfg, n, k,
        [estimator](const Configuration& c, const Topology& t, const std::vector<int>& prev,
                    NodeId h, const std::vector<int>&) {
            return estimator == Estimator::PrevCount
                       ? estimate_bidders_method1(prev, h, t.degree(h))
                       : estimate_bidders_method2(c, t, h);
        });
}

BidderDataset run_bidder_eval(const ExperimentConfig& cfg, int k_sparse, int k_dense) {
    BidderDataset ds;
    ds.meta = make_meta(cfg, "bidders");
    const int n = cfg.nodes;
    for (int k : {k_sparse, k_dense}) {
        for (Estimator est : {Estimator::PrevCount, Estimator::PriceGap}) {
            BidderRow row;
            row.family = "klink";
            row.n = n;
            row.k = k;
            row.method = est == Estimator::PrevCount ? "method1" : "method2";
            row.mean_D = mean_deviation_for(cfg, n, k, est);
            ds.rows.push_back(std::move(row));
        }
    }
    return ds;
}

InjectDataset run_injection(const ExperimentConfig& cfg) {
    if (!cfg.has_injection)
        throw ConfigError("injection run requires inject_base/inject_funds in the config");
    InjectDataset ds;
    ds.meta = make_meta(cfg, "inject");

    auto add_cell = [&](Family family, int n, int points) {
        const Topology topo = make_topology(family, n, klink_chords(n), graph_seed(cfg.seed));
        const auto results = run_cell(topo, cfg, true, points);
        InjectRow row;
        row.family = family_name(family);
        row.n = n;
        row.inject_points = points;
        double max_f = 0.0, min_f = 0.0, steps = 0.0;
        for (const auto& r : results) {
            max_f += r.max_funds;
            min_f += r.min_funds;
            steps += static_cast<double>(r.steps);
        }
        const auto t = static_cast<double>(results.size());
        row.max_funds = max_f / t;
        row.min_funds = min_f / t;
        row.steps = steps / t;
        ds.rows.push_back(std::move(row));
    };

    for (Family family : cfg.families) {
        for (int n : cfg.node_grid()) add_cell(family, n, cfg.inject_points);
        if (cfg.inject_points_max > cfg.inject_points) {
            // Injection-point sweep runs at the standard size when the config
            // sweeps nodes, else at the single configured size.
            const int n_std = cfg.nodes_max == 0 ? cfg.nodes : 300;
            for (int p = cfg.inject_points; p <= cfg.inject_points_max; ++p)
                add_cell(family, n_std, p);
        }
    }
    return ds;
}

std::string to_csv(const SweepDataset& ds) {
    std::ostringstream out;
    out << "family,n,trials,mean_steps,median_steps,stddev_steps,max_steps,converged_rate\n";
    for (const auto& r : ds.rows)
        out << r.family << ',' << r.n << ',' << r.trials << ',' << csv_num(r.mean_steps) << ','
            << csv_num(r.median_steps) << ',' << csv_num(r.stddev_steps) << ',' << r.max_steps
            << ',' << csv_num(r.converged_rate) << '\n';
    return out.str();
}

std::string to_csv(const BidderDataset& ds) {
    std::ostringstream out;
    out << "family,n,k,method,mean_D\n";
    for (const auto& r : ds.rows)
        out << r.family << ',' << r.n << ',' << r.k << ',' << r.method << ','
            << csv_num(r.mean_D) << '\n';
    return out.str();
}

std::string to_csv(const InjectDataset& ds) {
    std::ostringstream out;
    out << "family,n,inject_points,max_funds,min_funds,steps\n";
    for (const auto& r : ds.rows)
        out << r.family << ',' << r.n << ',' << r.inject_points << ',' << csv_num(r.max_funds)
            << ',' << csv_num(r.min_funds) << ',' << csv_num(r.steps) << '\n';
    return out.str();
}

void emit_csv(const SweepDataset& ds, const std::string& path) { write_text(path, to_csv(ds)); }
void emit_csv(const BidderDataset& ds, const std::string& path) { write_text(path, to_csv(ds)); }
void emit_csv(const InjectDataset& ds, const std::string& path) { write_text(path, to_csv(ds)); }

namespace {

template <class Dataset, class RowToJson>
void emit_json(const Dataset& ds, const std::string& path, const std::string& kind,
               RowToJson&& row_to_json) {
    nlohmann::json doc;
    doc["kind"] = kind;
    doc["metadata"] = meta_json(ds.meta);
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : ds.rows) doc["rows"].push_back(row_to_json(r));
    write_text(path, doc.dump(2) + "\n");
}

} // namespace

void emit_summary_json(const SweepDataset& ds, const std::string& path) {
    emit_json(ds, path, "sweep", [](const SweepRow& r) {
        return nlohmann::json{{"family", r.family},
                              {"n", r.n},
                              {"trials", r.trials},
                              {"mean_steps", r.mean_steps},
                              {"median_steps", r.median_steps},
                              {"stddev_steps", r.stddev_steps},
                              {"max_steps", r.max_steps},
                              {"converged_rate", r.converged_rate}};
    });
}

void emit_summary_json(const BidderDataset& ds, const std::string& path) {
    emit_json(ds, path, "bidders", [](const BidderRow& r) {
        return nlohmann::json{
            {"family", r.family}, {"n", r.n}, {"k", r.k}, {"method", r.method},
            {"mean_D", r.mean_D}};
    });
}

void emit_summary_json(const InjectDataset& ds, const std::string& path) {
    emit_json(ds, path, "inject", [](const InjectRow& r) {
        return nlohmann::json{{"family", r.family},
                              {"n", r.n},
                              {"inject_points", r.inject_points},
                              {"max_funds", r.max_funds},
                              {"min_funds", r.min_funds},
                              {"steps", r.steps}};
    });
}

std::string gnuplot_script(const std::vector<std::string>& families, const std::string& out_dir) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key outside\n"
       << "set xlabel 'nodes'\n"
       << "set ylabel 'mean steps to stabilization'\n"
       << "set term pngcairo size 900,600\n"
       << "set output '" << out_dir << "/sweep.png'\n"
       << "plot ";
    for (std::size_t i = 0; i < families.size(); ++i) {
        if (i) gp << ", \\\n     ";
        gp << "'" << out_dir << "/sweep_" << families[i]
           << ".csv' using 2:4 skip 1 with linespoints title '" << families[i] << "'";
    }
    gp << '\n';
    return gp.str();
}

} // namespace netbid
