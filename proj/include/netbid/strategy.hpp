#pragma once

#include <memory>
#include <string>
#include <vector>

#include "netbid/market.hpp"
#include "netbid/topology.hpp"

namespace netbid {

// Symmetric sealed-bid best response against `bidders - 1` rivals whose
// values are i.i.d. uniform above the reserve: S(v) = v - (v - alpha)/B.
// bidders == 1 collapses to the reserve price.
double bayes_nash_bid(double value, double reserve, int bidders);

// Bidder-count estimate from the previous step's observed bid counts.
// No history yet -> fallback (the node's degree: maximal competition).
// With history, the count is clamped up to 1 so the bid formula stays valid.
int estimate_bidders_method1(const std::vector<int>& prev_counts, NodeId h, int fallback);

// Price-gap heuristic: share of the neighborhood price span sitting above
// node h, scaled by h's degree and rounded half-up, clamped to >= 1.
int estimate_bidders_method2(const Configuration& cfg, const Topology& topo, NodeId h);

// Sum over nodes of squared, degree-normalized estimation error.
// Zero iff estimates match actuals everywhere; at most |V| in practice.
double deviation_D(const std::vector<int>& estimates, const std::vector<int>& actuals,
                   const Topology& topo);

enum class Estimator { PrevCount, PriceGap }; // method 1, method 2

// Bid-price policy plugged into the engine. Stateless apart from the
// previous-step bid counts that the PrevCount estimator feeds on; that
// history is owned per trial, so trials never share mutable state.
class BiddingStrategy {
public:
    virtual ~BiddingStrategy() = default;

    // Price the buyer offers the seller. Caller guarantees
    // price(seller) < price(buyer); the result must lie between them.
    virtual double bid(NodeId buyer, NodeId seller, const Configuration& cfg,
                       const Topology& topo) = 0;

    // Raw incoming bid counts of the step just collected (before the
    // sell-over-buy cancellation). Called once per step by the engine.
    virtual void record_bid_counts(const std::vector<int>& counts) { (void)counts; }

    virtual void reset() {}
    virtual std::string name() const = 0;
};

// Fixed interpolation between seller and buyer price: b = p_s + (p_b - p_s)/c.
class FixedCStrategy final : public BiddingStrategy {
public:
    explicit FixedCStrategy(double c);
    double bid(NodeId buyer, NodeId seller, const Configuration& cfg,
               const Topology& topo) override;
    std::string name() const override { return "fixed-c"; }
    double c() const { return c_; }

private:
    double c_;
};

// Bayes-Nash bid with the bidder count supplied by one of the estimators.
class BayesNashStrategy final : public BiddingStrategy {
public:
    explicit BayesNashStrategy(Estimator estimator);
    double bid(NodeId buyer, NodeId seller, const Configuration& cfg,
               const Topology& topo) override;
    void record_bid_counts(const std::vector<int>& counts) override;
    void reset() override;
    std::string name() const override;

    const std::vector<int>& prev_counts() const { return prev_counts_; }

private:
    Estimator estimator_;
    std::vector<int> prev_counts_; // empty until the first step completes
};

struct StrategyKind {
    enum class Kind { FixedC, BayesNash } kind = Kind::FixedC;
    double c = 2.0;                               // FixedC
    Estimator estimator = Estimator::PrevCount;   // BayesNash

    static StrategyKind fixed_c(double c);
    static StrategyKind bayes_nash(Estimator e);
    static StrategyKind from_name(const std::string& name, double c);
    std::string name() const;
};

std::unique_ptr<BiddingStrategy> make_strategy(const StrategyKind& kind);

} // namespace netbid
