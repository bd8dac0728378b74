// Shared oracles and generators for the test binaries. Everything here is
// independent of the engine's own computation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "netbid/market.hpp"
#include "netbid/rng.hpp"
#include "netbid/strategy.hpp"
#include "netbid/topology.hpp"

namespace testsupport {

using namespace netbid;

// Empirical best-response check for the sealed-bid strategy: against
// `bidders - 1` rivals with values i.i.d. uniform on [reserve, value_hi]
// bidding the same strategy, the payoff-maximizing bid on a candidate grid
// should land within one grid step of S(value). Common random numbers keep
// the argmax stable.
struct McResult {
    double best_bid = 0.0;
    double grid_step = 0.0;
};

inline McResult mc_best_bid(double value, double reserve, double value_hi, int bidders,
                            int samples, int grid_points, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<double> rival_best(static_cast<std::size_t>(samples), reserve);
    for (auto& rb : rival_best) {
        double top_value = reserve;
        for (int r = 0; r + 1 < bidders; ++r) {
            const double v = reserve + (value_hi - reserve) * uniform_real(rng);
            top_value = std::max(top_value, v);
        }
        rb = bidders > 1 ? bayes_nash_bid(top_value, reserve, bidders) : reserve;
    }

    McResult out;
    out.grid_step = (value - reserve) / grid_points;
    double best_payoff = -1.0;
    for (int g = 0; g <= grid_points; ++g) {
        const double bid = reserve + g * out.grid_step;
        int wins = 0;
        for (double rb : rival_best)
            if (bidders == 1 || rb < bid) ++wins;
        const double payoff = (value - bid) * wins / samples;
        if (payoff > best_payoff) {
            best_payoff = payoff;
            out.best_bid = bid;
        }
    }
    return out;
}

// Random connected instance over the five families, sized by the generator.
struct RandomInstance {
    Topology topo;
    Configuration cfg;
};

inline RandomInstance random_instance(std::uint64_t seed, int n_max = 100) {
    Rng rng = make_rng(seed);
    const int pick = static_cast<int>(uniform_index(rng, 5));
    int n = static_cast<int>(uniform_int(rng, 4, n_max));
    Topology topo;
    switch (pick) {
        case 0: topo = make_path(n); break;
        case 1: topo = make_cycle(n); break;
        case 2: {
            // Grids need a factorable size; even n >= 4 always works.
            if (n % 2 == 1) ++n;
            topo = make_grid(n);
            break;
        }
        case 3: topo = make_klink(n, n / 10, rng()); break;
        default: topo = make_complete(std::min(n, 60)); break;
    }
    Configuration cfg = init_uniform(topo, 10000.0, 50, 100, rng);
    return {std::move(topo), std::move(cfg)};
}

} // namespace testsupport
