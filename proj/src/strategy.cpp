#include "netbid/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netbid/errors.hpp"

namespace netbid {

double bayes_nash_bid(double value, double reserve, int bidders) {
    if (bidders < 1) throw std::invalid_argument("bidder count must be >= 1");
    if (value < reserve) throw std::invalid_argument("value below reserve price");
    return value - (value - reserve) / static_cast<double>(bidders);
}

int estimate_bidders_method1(const std::vector<int>& prev_counts, NodeId h, int fallback) {
    if (prev_counts.empty()) return std::max(fallback, 1);
    return std::max(prev_counts[static_cast<std::size_t>(h)], 1);
}

int estimate_bidders_method2(const Configuration& cfg, const Topology& topo, NodeId h) {
    const double p_h = cfg.states[static_cast<std::size_t>(h)].price();
    double hi = p_h, lo = p_h;
    for (NodeId m : topo.neighbors(h)) {
        const double p = cfg.states[static_cast<std::size_t>(m)].price();
        hi = std::max(hi, p);
        lo = std::min(lo, p);
    }
    const double gap = hi - lo;
    const double above = hi - p_h;
    const double raw = above / std::max(gap, 1.0) * topo.degree(h);
    const int rounded = static_cast<int>(std::floor(raw + 0.5)); // round half-up
    return std::max(rounded, 1);
}

double deviation_D(const std::vector<int>& estimates, const std::vector<int>& actuals,
                   const Topology& topo) {
    if (estimates.size() != actuals.size() ||
        estimates.size() != static_cast<std::size_t>(topo.n))
        throw std::invalid_argument("estimate/actual vectors must have one entry per node");
    double total = 0.0;
    for (NodeId i = 0; i < topo.n; ++i) {
        const double err = estimates[static_cast<std::size_t>(i)] -
                           actuals[static_cast<std::size_t>(i)];
        const double unit = err / topo.degree(i);
        total += unit * unit;
    }
    return total;
}

FixedCStrategy::FixedCStrategy(double c) : c_(c) {
    if (c < 1.0) throw std::invalid_argument("bid parameter c must be >= 1");
}

double FixedCStrategy::bid(NodeId buyer, NodeId seller, const Configuration& cfg,
                           const Topology& topo) {
    (void)topo;
    const double p_b = cfg.states[static_cast<std::size_t>(buyer)].price();
    const double p_s = cfg.states[static_cast<std::size_t>(seller)].price();
    return p_s + (p_b - p_s) / c_;
}

BayesNashStrategy::BayesNashStrategy(Estimator estimator) : estimator_(estimator) {}

double BayesNashStrategy::bid(NodeId buyer, NodeId seller, const Configuration& cfg,
                              const Topology& topo) {
    const double value = cfg.states[static_cast<std::size_t>(buyer)].price();
    const double reserve = cfg.states[static_cast<std::size_t>(seller)].price();
    const int bidders = estimator_ == Estimator::PrevCount
                            ? estimate_bidders_method1(prev_counts_, seller, topo.degree(seller))
                            : estimate_bidders_method2(cfg, topo, seller);
    return bayes_nash_bid(value, reserve, bidders);
}

void BayesNashStrategy::record_bid_counts(const std::vector<int>& counts) {
    prev_counts_ = counts;
}

void BayesNashStrategy::reset() {
    prev_counts_.clear();
}

std::string BayesNashStrategy::name() const {
    return estimator_ == Estimator::PrevCount ? "bayes-m1" : "bayes-m2";
}

StrategyKind StrategyKind::fixed_c(double c) {
    StrategyKind k;
    k.kind = Kind::FixedC;
    k.c = c;
    return k;
}

StrategyKind StrategyKind::bayes_nash(Estimator e) {
    StrategyKind k;
    k.kind = Kind::BayesNash;
    k.estimator = e;
    return k;
}

StrategyKind StrategyKind::from_name(const std::string& name, double c) {
    if (name == "fixed-c") return fixed_c(c);
    if (name == "bayes-m1") return bayes_nash(Estimator::PrevCount);
    if (name == "bayes-m2") return bayes_nash(Estimator::PriceGap);
    throw ConfigError("unknown strategy '" + name + "' (expected fixed-c|bayes-m1|bayes-m2)");
}

std::string StrategyKind::name() const {
    if (kind == Kind::FixedC) return "fixed-c";
    return estimator == Estimator::PrevCount ? "bayes-m1" : "bayes-m2";
}

std::unique_ptr<BiddingStrategy> make_strategy(const StrategyKind& kind) {
    if (kind.kind == StrategyKind::Kind::FixedC)
        return std::make_unique<FixedCStrategy>(kind.c);
    return std::make_unique<BayesNashStrategy>(kind.estimator);
}

} // namespace netbid
