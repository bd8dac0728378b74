#include "netbid/topology.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace netbid {

std::string family_name(Family f) {
    switch (f) {
        case Family::Path: return "path";
        case Family::Cycle: return "cycle";
        case Family::Grid: return "grid";
        case Family::KLink: return "klink";
        case Family::Complete: return "complete";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "path") return Family::Path;
    if (name == "cycle") return Family::Cycle;
    if (name == "grid") return Family::Grid;
    if (name == "klink") return Family::KLink;
    if (name == "complete") return Family::Complete;
    throw std::invalid_argument("unknown topology family: '" + name + "'");
}

const std::vector<NodeId>& Topology::neighbors(NodeId i) const {
    if (i < 0 || i >= n) throw std::out_of_range("node id out of range: " + std::to_string(i));
    return adj_[static_cast<std::size_t>(i)];
}

int Topology::degree(NodeId i) const {
    return static_cast<int>(neighbors(i).size());
}

bool Topology::has_edge(NodeId u, NodeId v) const {
    const auto& nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

bool Topology::is_connected() const {
    if (n == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : adj_[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n;
}

void Topology::dump_edge_list(std::ostream& out) const {
    out << "# " << family_name(family) << ' ' << n << ' ' << klink_k << ' ' << seed << '\n';
    for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
}

// Sorts edges canonically, builds sorted adjacency, rejects self-loops and
// duplicates. Every generator funnels through here.
Topology finalize_topology(Topology t) {
    for (auto& [u, v] : t.edges) {
        if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(t.edges.begin(), t.edges.end());
    if (std::adjacent_find(t.edges.begin(), t.edges.end()) != t.edges.end())
        throw std::invalid_argument("duplicate edge in topology");
    t.adj_.assign(static_cast<std::size_t>(t.n), {});
    for (const auto& [u, v] : t.edges) {
        t.adj_[static_cast<std::size_t>(u)].push_back(v);
        t.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());
    return t;
}

Topology make_path(int n) {
    if (n < 2) throw std::invalid_argument("path needs n >= 2, got " + std::to_string(n));
    Topology t;
    t.n = n;
    t.family = Family::Path;
    t.edges.reserve(static_cast<std::size_t>(n - 1));
    for (NodeId i = 0; i + 1 < n; ++i) t.edges.emplace_back(i, i + 1);
    return finalize_topology(std::move(t));
}

Topology make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs n >= 3, got " + std::to_string(n));
    Topology t;
    t.n = n;
    t.family = Family::Cycle;
    t.edges.reserve(static_cast<std::size_t>(n));
    for (NodeId i = 0; i + 1 < n; ++i) t.edges.emplace_back(i, i + 1);
    t.edges.emplace_back(n - 1, 0);
    return finalize_topology(std::move(t));
}

namespace {

// Largest divisor of n that is <= sqrt(n). Returns 1 when n is prime.
int near_square_rows(int n) {
    int best = 1;
    for (int r = 1; static_cast<long long>(r) * r <= n; ++r)
        if (n % r == 0) best = r;
    return best;
}

} // namespace

Topology make_grid(int n) {
    if (n < 4) throw std::invalid_argument("grid needs n >= 4, got " + std::to_string(n));
    const int rows = near_square_rows(n);
    if (rows < 2) {
        // No r x c factorization with r,c >= 2 exists; point at usable sizes.
        int lo = n - 1, hi = n + 1;
        while (lo >= 4 && near_square_rows(lo) < 2) --lo;
        while (near_square_rows(hi) < 2) ++hi;
        throw std::invalid_argument("grid size " + std::to_string(n) +
                                    " has no r x c factorization with r,c >= 2; nearest usable sizes: " +
                                    std::to_string(lo) + ", " + std::to_string(hi));
    }
    const int cols = n / rows;
    Topology t;
    t.n = n;
    t.family = Family::Grid;
    t.grid_rows = rows;
    t.grid_cols = cols;
    t.edges.reserve(static_cast<std::size_t>(rows * (cols - 1) + cols * (rows - 1)));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const NodeId id = r * cols + c;
            if (c + 1 < cols) t.edges.emplace_back(id, id + 1);
            if (r + 1 < rows) t.edges.emplace_back(id, id + cols);
        }
    }
    return finalize_topology(std::move(t));
}

Topology make_klink(int n, int k, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    Topology t = make_klink(n, k, rng);
    t.seed = seed;
    return t;
}

Topology make_klink(int n, int k, Rng& rng) {
    if (n < 3) throw std::invalid_argument("klink needs n >= 3, got " + std::to_string(n));
    const long long max_chords = static_cast<long long>(n) * (n - 1) / 2 - n;
    if (k < 0 || k > max_chords)
        throw std::invalid_argument("klink chord count " + std::to_string(k) + " outside [0, " +
                                    std::to_string(max_chords) + "] for n = " + std::to_string(n));

    Topology t = make_cycle(n);
    t.family = Family::KLink;
    t.klink_k = k;

    // Candidate chords are all non-cycle pairs; draw k of them without
    // replacement by partial Fisher-Yates so |E| = n + k exactly.
    std::vector<std::pair<NodeId, NodeId>> candidates;
    candidates.reserve(static_cast<std::size_t>(max_chords));
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            const bool cycle_edge = (v == u + 1) || (u == 0 && v == n - 1);
            if (!cycle_edge) candidates.emplace_back(u, v);
        }
    }
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       uniform_index(rng, candidates.size() - static_cast<std::size_t>(i));
        std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
        t.edges.push_back(candidates[static_cast<std::size_t>(i)]);
    }
    return finalize_topology(std::move(t));
}

Topology make_complete(int n) {
    if (n < 2) throw std::invalid_argument("complete graph needs n >= 2, got " + std::to_string(n));
    Topology t;
    t.n = n;
    t.family = Family::Complete;
    t.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) t.edges.emplace_back(u, v);
    return finalize_topology(std::move(t));
}

Topology make_topology(Family f, int n, int k, std::uint64_t seed) {
    switch (f) {
        case Family::Path: return make_path(n);
        case Family::Cycle: return make_cycle(n);
        case Family::Grid: return make_grid(n);
        case Family::KLink: return make_klink(n, k, seed);
        case Family::Complete: return make_complete(n);
    }
    throw std::invalid_argument("bad family");
}

} // namespace netbid
