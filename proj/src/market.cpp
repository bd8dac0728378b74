#include "netbid/market.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "netbid/csv.hpp"

namespace netbid {

namespace {

// Kahan-compensated sum; keeps conservation checks honest for large n.
template <class Get>
double compensated_sum(const std::vector<NodeState>& states, Get get) {
    double sum = 0.0, carry = 0.0;
    for (const auto& s : states) {
        const double y = get(s) - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

double Configuration::total_funds() const {
    return compensated_sum(states, [](const NodeState& s) { return s.funds; });
}

double Configuration::total_coins() const {
    return compensated_sum(states, [](const NodeState& s) { return s.coins; });
}

double Configuration::equilibrium_price() const {
    return total_funds() / total_coins();
}

double Configuration::max_price() const {
    double m = states.front().price();
    for (const auto& s : states) m = std::max(m, s.price());
    return m;
}

double Configuration::min_price() const {
    double m = states.front().price();
    for (const auto& s : states) m = std::min(m, s.price());
    return m;
}

double Configuration::max_funds() const {
    double m = states.front().funds;
    for (const auto& s : states) m = std::max(m, s.funds);
    return m;
}

double Configuration::min_funds() const {
    double m = states.front().funds;
    for (const auto& s : states) m = std::min(m, s.funds);
    return m;
}

Configuration init_uniform(const Topology& topo, double funds_per_node,
                           int coins_lo, int coins_hi, Rng& rng) {
    if (coins_lo <= 0 || coins_lo > coins_hi)
        throw std::invalid_argument("coin range must satisfy 0 < lo <= hi");
    if (funds_per_node <= 0.0)
        throw std::invalid_argument("funds per node must be positive");
    Configuration cfg;
    cfg.step = 0;
    cfg.states.resize(static_cast<std::size_t>(topo.n));
    for (auto& s : cfg.states) {
        s.funds = funds_per_node;
        s.coins = static_cast<double>(uniform_int(rng, coins_lo, coins_hi));
    }
    return cfg;
}

Configuration init_injection(const Topology& topo, double base_funds, double inject_funds,
                             int inject_count, int coins_lo, int coins_hi, Rng& rng) {
    if (inject_count < 1 || inject_count > topo.n)
        throw std::invalid_argument("injection count must be in [1, n]");
    if (base_funds <= 0.0 || inject_funds <= 0.0)
        throw std::invalid_argument("funds must be positive");
    Configuration cfg = init_uniform(topo, base_funds, coins_lo, coins_hi, rng);

    // Distinct injection nodes via partial Fisher-Yates over 0..n-1.
    std::vector<NodeId> ids(static_cast<std::size_t>(topo.n));
    for (int i = 0; i < topo.n; ++i) ids[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < inject_count; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       uniform_index(rng, ids.size() - static_cast<std::size_t>(i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
        cfg.states[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].funds = inject_funds;
    }
    return cfg;
}

void write_state_csv(const Configuration& cfg, std::ostream& out) {
    out << "node,q,f,price\n";
    for (int i = 0; i < cfg.size(); ++i) {
        const auto& s = cfg.states[static_cast<std::size_t>(i)];
        out << i << ',' << csv_num(s.coins) << ',' << csv_num(s.funds) << ','
            << csv_num(s.price()) << '\n';
    }
}

} // namespace netbid
