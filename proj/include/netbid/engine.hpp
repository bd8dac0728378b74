#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "netbid/market.hpp"
#include "netbid/strategy.hpp"
#include "netbid/topology.hpp"

namespace netbid {

// One sealed bid: buyer offers `price` per coin to a neighboring seller.
struct Bid {
    NodeId buyer = -1;
    NodeId seller = -1;
    double price = 0.0;
};

// A matched trade. quantity moves seller -> buyer at bid_price per coin;
// both parties end the step at pooled_price.
struct Contract {
    NodeId seller = -1;
    NodeId buyer = -1;
    double bid_price = 0.0;
    double quantity = 0.0;
    double pooled_price = 0.0;
};

struct StepMetrics {
    std::int64_t step = 0;
    double p_max = 0.0;
    double p_min = 0.0;
    double diff = 0.0;
    int contracts = 0;
    double total_funds = 0.0;
    double total_coins = 0.0;
};

// Eq-style interpolated bid: p_seller + (p_buyer - p_seller)/c, c >= 1.
// c = 1 bids the buyer's full price; larger c hugs the seller's.
double compute_bid_fixed_c(double p_buyer, double p_seller, double c);

// True when every edge's price difference is below epsilon: exactly then
// collect_bids at threshold epsilon emits nothing.
bool is_legitimate(const Configuration& cfg, const Topology& topo, double epsilon);

// True when the whole network's price spread sits below epsilon. Stronger
// than is_legitimate; this is the convergence target, and it bounds every
// node's distance to the equilibrium price F/Q by epsilon.
bool is_stabilized(const Configuration& cfg, double epsilon);

// Phase A: each node targets its cheapest neighbor (price ties -> lowest id)
// and bids iff the target is strictly cheaper by at least `threshold`.
std::vector<Bid> collect_bids(const Configuration& cfg, const Topology& topo,
                              BiddingStrategy& strategy, double threshold);

// Phase B, sell-over-buy priority: nodes with incoming bids become sellers
// and their own outgoing bids are cancelled; each seller then takes the
// highest surviving bid (ties -> lowest buyer id). Resulting pairs are
// vertex-disjoint by construction.
std::vector<Contract> resolve_contracts(const std::vector<Bid>& bids, const Configuration& cfg);

// Move coins at bid_price per coin until both parties sit at the pooled
// price (f_s + f_b)/(q_s + q_b). Throws InternalError if preconditions or
// positivity break — that is an engine bug, not an input error.
std::pair<NodeState, NodeState> execute_trade(const NodeState& seller, const NodeState& buyer,
                                              double bid_price);

struct StepResult {
    Configuration next;
    StepMetrics metrics;
    std::vector<Contract> contracts;
    std::vector<int> raw_bid_counts; // incoming bids per node, pre-cancellation
};

// One synchronous round: collect, resolve, apply all trades against the
// time-t snapshot. Checks funds/coins conservation at 1e-9 relative.
StepResult step(const Configuration& cfg, const Topology& topo, BiddingStrategy& strategy,
                double threshold);

struct TrialResult {
    int trial_id = 0;
    std::uint64_t seed = 0;
    std::int64_t steps = 0;
    bool converged = false;
    double final_price = 0.0; // F/Q of the final configuration
    double max_funds = 0.0;
    double min_funds = 0.0;
    std::vector<StepMetrics> metrics; // index 0 is the initial state
    Configuration final_config;
};

// Iterate until the price spread drops below epsilon or max_steps runs
// out. Agents bid on any strictly cheaper minimum neighbor (threshold 0);
// epsilon only decides when prices count as equal, so every converged node
// ends within epsilon of F/Q. Non-convergence is reported via the flag,
// never thrown: it signals a protocol-variant bug upstream.
TrialResult run_to_convergence(Configuration cfg, const Topology& topo,
                               BiddingStrategy& strategy, double epsilon,
                               std::int64_t max_steps);

// Per-step metrics stream: "trial,step,p_max,p_min,diff,contracts,total_f,total_q".
void write_metrics_csv_header(std::ostream& out);
void write_metrics_csv(const TrialResult& trial, std::ostream& out);

// Contract trace: "step,seller,buyer,bid,quantity,pooled_price".
void write_trace_csv_header(std::ostream& out);
void write_trace_row(std::int64_t step, const Contract& c, std::ostream& out);

} // namespace netbid
