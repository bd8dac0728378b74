#include "netbid/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "netbid/csv.hpp"
#include "netbid/errors.hpp"

namespace netbid {

namespace {

constexpr double kConservationTol = 1e-9; // relative, per step

// Pooled partners end a trade a few ulps apart; treating that residue as a
// price difference would let one micro-bid re-trigger sell priority at the
// partner forever and starve its real bid. Differences at this scale are
// the same price.
constexpr double kPriceNoise = 1e-12; // relative

StepMetrics metrics_of(const Configuration& cfg, int contracts) {
    StepMetrics m;
    m.step = cfg.step;
    m.p_max = cfg.max_price();
    m.p_min = cfg.min_price();
    m.diff = m.p_max - m.p_min;
    m.contracts = contracts;
    m.total_funds = cfg.total_funds();
    m.total_coins = cfg.total_coins();
    return m;
}

} // namespace

double compute_bid_fixed_c(double p_buyer, double p_seller, double c) {
    if (c < 1.0) throw std::invalid_argument("bid parameter c must be >= 1");
    if (!(p_seller < p_buyer))
        throw std::invalid_argument("buyer price must exceed seller price");
    return p_seller + (p_buyer - p_seller) / c;
}

bool is_legitimate(const Configuration& cfg, const Topology& topo, double epsilon) {
    for (const auto& [u, v] : topo.edges) {
        const double pu = cfg.states[static_cast<std::size_t>(u)].price();
        const double pv = cfg.states[static_cast<std::size_t>(v)].price();
        if (std::abs(pu - pv) >= epsilon) return false;
    }
    return true;
}

bool is_stabilized(const Configuration& cfg, double epsilon) {
    return cfg.max_price() - cfg.min_price() < epsilon;
}

std::vector<Bid> collect_bids(const Configuration& cfg, const Topology& topo,
                              BiddingStrategy& strategy, double threshold) {
    std::vector<Bid> bids;
    for (NodeId i = 0; i < topo.n; ++i) {
        const double p_i = cfg.states[static_cast<std::size_t>(i)].price();

        // Cheapest neighbor; neighbor lists are ascending, so keeping the
        // first strict minimum breaks price ties toward the lowest id.
        NodeId target = -1;
        double p_min = 0.0;
        for (NodeId m : topo.neighbors(i)) {
            const double p_m = cfg.states[static_cast<std::size_t>(m)].price();
            if (target < 0 || p_m < p_min) {
                target = m;
                p_min = p_m;
            }
        }
        if (target < 0 || p_i - p_min <= kPriceNoise * p_i || p_i - p_min < threshold) continue;

        const double b = strategy.bid(i, target, cfg, topo);
        if (!(b >= p_min && b <= p_i))
            throw InternalError("strategy bid " + csv_num(b) + " outside [" + csv_num(p_min) +
                                ", " + csv_num(p_i) + "]");
        bids.push_back(Bid{i, target, b});
    }
    return bids;
}

std::vector<Contract> resolve_contracts(const std::vector<Bid>& bids, const Configuration& cfg) {
    const auto n = static_cast<std::size_t>(cfg.size());
    std::vector<char> is_seller(n, 0);
    for (const auto& b : bids) is_seller[static_cast<std::size_t>(b.seller)] = 1;

    // Highest surviving bid per seller; price ties go to the lowest buyer id.
    std::vector<int> winner(n, -1);
    for (std::size_t idx = 0; idx < bids.size(); ++idx) {
        const auto& b = bids[idx];
        if (is_seller[static_cast<std::size_t>(b.buyer)]) continue; // sell beats buy
        const auto s = static_cast<std::size_t>(b.seller);
        if (winner[s] < 0) {
            winner[s] = static_cast<int>(idx);
            continue;
        }
        const auto& best = bids[static_cast<std::size_t>(winner[s])];
        if (b.price > best.price || (b.price == best.price && b.buyer < best.buyer))
            winner[s] = static_cast<int>(idx);
    }

    std::vector<Contract> contracts;
    for (std::size_t s = 0; s < n; ++s) {
        if (winner[s] < 0) continue;
        const auto& b = bids[static_cast<std::size_t>(winner[s])];
        const auto& seller = cfg.states[s];
        const auto& buyer = cfg.states[static_cast<std::size_t>(b.buyer)];
        const double pooled = (seller.funds + buyer.funds) / (seller.coins + buyer.coins);
        const double quantity = seller.coins * (pooled - seller.price()) / (b.price + pooled);
        contracts.push_back(Contract{static_cast<NodeId>(s), b.buyer, b.price, quantity, pooled});
    }
    return contracts;
}

std::pair<NodeState, NodeState> execute_trade(const NodeState& seller, const NodeState& buyer,
                                              double bid_price) {
    const double p_s = seller.price();
    const double p_b = buyer.price();
    if (!(p_s < p_b))
        throw InternalError("trade with seller price " + csv_num(p_s) +
                            " >= buyer price " + csv_num(p_b));
    if (!(bid_price >= p_s && bid_price <= p_b))
        throw InternalError("contract bid " + csv_num(bid_price) + " outside seller/buyer prices");

    // The unique quantity that lands both parties on the pooled price when
    // coins move at bid_price per coin.
    const double pooled = (seller.funds + buyer.funds) / (seller.coins + buyer.coins);
    const double quantity = seller.coins * (pooled - p_s) / (bid_price + pooled);
    const double payment = bid_price * quantity; // one product: funds conserve bit-exact

    const NodeState new_seller{seller.coins - quantity, seller.funds + payment};
    const NodeState new_buyer{buyer.coins + quantity, buyer.funds - payment};
    if (!(new_seller.coins > 0.0 && new_seller.funds > 0.0 && new_buyer.coins > 0.0 &&
          new_buyer.funds > 0.0))
        throw InternalError("trade exhausted a party's coins or funds");
    return {new_seller, new_buyer};
}

StepResult step(const Configuration& cfg, const Topology& topo, BiddingStrategy& strategy,
                double threshold) {
    StepResult r;
    const std::vector<Bid> bids = collect_bids(cfg, topo, strategy, threshold);

    r.raw_bid_counts.assign(static_cast<std::size_t>(cfg.size()), 0);
    for (const auto& b : bids) ++r.raw_bid_counts[static_cast<std::size_t>(b.seller)];
    strategy.record_bid_counts(r.raw_bid_counts);

    r.contracts = resolve_contracts(bids, cfg);

    // All trades settle against the time-t snapshot; pairs are disjoint.
    r.next = cfg;
    r.next.step = cfg.step + 1;
    for (const auto& c : r.contracts) {
        const auto [s, b] = execute_trade(cfg.states[static_cast<std::size_t>(c.seller)],
                                          cfg.states[static_cast<std::size_t>(c.buyer)],
                                          c.bid_price);
        r.next.states[static_cast<std::size_t>(c.seller)] = s;
        r.next.states[static_cast<std::size_t>(c.buyer)] = b;
    }

    const double f0 = cfg.total_funds();
    const double q0 = cfg.total_coins();
    const double f1 = r.next.total_funds();
    const double q1 = r.next.total_coins();
    if (std::abs(f1 - f0) > kConservationTol * f0 || std::abs(q1 - q0) > kConservationTol * q0)
        throw InternalError("conservation violated at step " + std::to_string(r.next.step) +
                            ": dF=" + csv_num(f1 - f0) + " dQ=" + csv_num(q1 - q0));

    r.metrics = metrics_of(r.next, static_cast<int>(r.contracts.size()));
    return r;
}

TrialResult run_to_convergence(Configuration cfg, const Topology& topo,
                               BiddingStrategy& strategy, double epsilon,
                               std::int64_t max_steps) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    TrialResult result;
    result.metrics.push_back(metrics_of(cfg, 0));

    // Bids fire on any strictly positive gap; epsilon only declares the
    // remaining spread negligible.
    std::int64_t taken = 0;
    bool done = is_stabilized(cfg, epsilon);
    while (!done && taken < max_steps) {
        StepResult sr = step(cfg, topo, strategy, 0.0);
        cfg = std::move(sr.next);
        result.metrics.push_back(sr.metrics);
        ++taken;
        done = is_stabilized(cfg, epsilon);
    }

    result.steps = taken;
    result.converged = done;
    result.final_price = cfg.equilibrium_price();
    result.max_funds = cfg.max_funds();
    result.min_funds = cfg.min_funds();
    result.final_config = std::move(cfg);
    return result;
}

void write_metrics_csv_header(std::ostream& out) {
    out << "trial,step,p_max,p_min,diff,contracts,total_f,total_q\n";
}

void write_metrics_csv(const TrialResult& trial, std::ostream& out) {
    for (const auto& m : trial.metrics) {
        out << trial.trial_id << ',' << m.step << ',' << csv_num(m.p_max) << ','
            << csv_num(m.p_min) << ',' << csv_num(m.diff) << ',' << m.contracts << ','
            << csv_num(m.total_funds) << ',' << csv_num(m.total_coins) << '\n';
    }
}

void write_trace_csv_header(std::ostream& out) {
    out << "step,seller,buyer,bid,quantity,pooled_price\n";
}

void write_trace_row(std::int64_t step, const Contract& c, std::ostream& out) {
    out << step << ',' << c.seller << ',' << c.buyer << ',' << csv_num(c.bid_price) << ','
        << csv_num(c.quantity) << ',' << csv_num(c.pooled_price) << '\n';
}

} // namespace netbid
