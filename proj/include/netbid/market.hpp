#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "netbid/rng.hpp"
#include "netbid/topology.hpp"

namespace netbid {

// Per-node economic state. Price is always derived as funds/coins, never
// cached: both quantities stay strictly positive through every trade.
struct NodeState {
    double coins = 0.0;
    double funds = 0.0;

    double price() const { return funds / coins; }
};

inline double price(const NodeState& s) { return s.price(); }

// Snapshot of all node states at one synchronous time step.
struct Configuration {
    std::vector<NodeState> states;
    std::int64_t step = 0;

    int size() const { return static_cast<int>(states.size()); }
    double total_funds() const;
    double total_coins() const;

    // F/Q: the one price every node holds once the network is legitimate.
    double equilibrium_price() const;

    double max_price() const;
    double min_price() const;
    double max_funds() const;
    double min_funds() const;
};

// Every node gets the same funds; coins drawn as uniform integers in
// [coins_lo, coins_hi] (stored as reals since trades move fractions).
Configuration init_uniform(const Topology& topo, double funds_per_node,
                           int coins_lo, int coins_hi, Rng& rng);

// Like init_uniform, but inject_count distinct nodes (chosen uniformly)
// start with inject_funds instead of base_funds.
Configuration init_injection(const Topology& topo, double base_funds, double inject_funds,
                             int inject_count, int coins_lo, int coins_hi, Rng& rng);

// Snapshot CSV: "node,q,f,price" rows.
void write_state_csv(const Configuration& cfg, std::ostream& out);

} // namespace netbid
