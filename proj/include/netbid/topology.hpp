#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "netbid/rng.hpp"

namespace netbid {

using NodeId = int;

enum class Family { Path, Cycle, Grid, KLink, Complete };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Immutable undirected connected graph. Node ids are dense 0..n-1 and
// neighbor lists are sorted ascending so every "arbitrary" choice in the
// protocol resolves to the lowest id.
struct Topology {
    int n = 0;
    Family family = Family::Path;
    std::vector<std::pair<NodeId, NodeId>> edges; // canonical u < v, sorted
    int grid_rows = 0;       // Grid only
    int grid_cols = 0;       // Grid only
    int klink_k = 0;         // KLink only
    std::uint64_t seed = 0;  // KLink only: chord sampling seed

    const std::vector<NodeId>& neighbors(NodeId i) const;
    int degree(NodeId i) const;
    std::size_t edge_count() const { return edges.size(); }
    bool has_edge(NodeId u, NodeId v) const;
    bool is_connected() const;

    // Edge-list dump: header "# family n k seed", then one "u v" per line.
    void dump_edge_list(std::ostream& out) const;

private:
    friend Topology finalize_topology(Topology t);
    std::vector<std::vector<NodeId>> adj_;
};

Topology make_path(int n);
Topology make_cycle(int n);
Topology make_grid(int n);
Topology make_klink(int n, int k, std::uint64_t seed);
Topology make_klink(int n, int k, Rng& rng);
Topology make_complete(int n);

// Dispatch on family with that family's default shape rules. For KLink the
// chord count is k; other families ignore k and seed.
Topology make_topology(Family f, int n, int k = 0, std::uint64_t seed = 0);

} // namespace netbid
