#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "netbid/topology.hpp"

using namespace netbid;

namespace {

std::set<std::pair<NodeId, NodeId>> edge_set(const Topology& t) {
    return {t.edges.begin(), t.edges.end()};
}

} // namespace

TEST_CASE("path generator") {
    const Topology t = make_path(6);
    CHECK(t.n == 6);
    CHECK(edge_set(t) ==
          std::set<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    CHECK(t.is_connected());

    const Topology two = make_path(2);
    CHECK(edge_set(two) == std::set<std::pair<NodeId, NodeId>>{{0, 1}});

    const Topology four = make_path(4);
    CHECK(four.neighbors(0) == std::vector<NodeId>{1});
    CHECK(four.neighbors(1) == std::vector<NodeId>{0, 2});
    CHECK(four.neighbors(2) == std::vector<NodeId>{1, 3});
    CHECK(four.neighbors(3) == std::vector<NodeId>{2});

    CHECK_THROWS_AS(make_path(1), std::invalid_argument);
}

TEST_CASE("cycle generator") {
    const Topology tri = make_cycle(3);
    CHECK(tri.edge_count() == 3);
    for (NodeId i = 0; i < 3; ++i) CHECK(tri.degree(i) == 2);

    const Topology six = make_cycle(6);
    auto expected = edge_set(make_path(6));
    expected.insert({0, 5});
    CHECK(edge_set(six) == expected);

    const Topology big = make_cycle(100);
    CHECK(big.edge_count() == 100);
    CHECK(big.is_connected());

    CHECK_THROWS_AS(make_cycle(2), std::invalid_argument);
}

TEST_CASE("grid generator") {
    const Topology g4 = make_grid(4);
    CHECK(g4.grid_rows == 2);
    CHECK(g4.grid_cols == 2);
    CHECK(g4.edge_count() == 4);

    SUBCASE("near-square factorization picks the largest divisor under sqrt") {
        // Oracle: enumerate divisors of 300 and apply the rule directly.
        int expect_rows = 1;
        for (int r = 1; r * r <= 300; ++r)
            if (300 % r == 0) expect_rows = r;
        CHECK(expect_rows == 15);
        const Topology g = make_grid(300);
        CHECK(g.grid_rows == 15);
        CHECK(g.grid_cols == 20);
        CHECK(g.edge_count() == 15 * 19 + 20 * 14);
        CHECK(g.is_connected());
    }

    SUBCASE("3x3 degrees") {
        const Topology g9 = make_grid(9);
        CHECK(g9.degree(4) == 4); // center
        CHECK(g9.degree(0) == 2); // corner
        CHECK(g9.degree(8) == 2);
        CHECK(g9.edge_count() == 3 * 2 + 3 * 2);
    }

    SUBCASE("primes are rejected with a usable suggestion") {
        CHECK_THROWS_WITH_AS(make_grid(13), doctest::Contains("nearest usable"),
                             std::invalid_argument);
        CHECK_THROWS_AS(make_grid(3), std::invalid_argument);
    }
}

TEST_CASE("klink generator") {
    SUBCASE("k=0 equals the cycle") {
        CHECK(edge_set(make_klink(9, 0, 42)) == edge_set(make_cycle(9)));
    }

    SUBCASE("edge count is exactly n+k") {
        const Topology t = make_klink(50, 5, 7);
        CHECK(t.edge_count() == 55);
        CHECK(t.is_connected());
    }

    SUBCASE("saturation equals the complete graph") {
        const int n = 12;
        const int k_max = n * (n - 1) / 2 - n;
        CHECK(edge_set(make_klink(n, k_max, 3)) == edge_set(make_complete(n)));
    }

    SUBCASE("reproducible for a fixed seed, different across seeds") {
        const Topology a = make_klink(40, 8, 123);
        const Topology b = make_klink(40, 8, 123);
        const Topology c = make_klink(40, 8, 124);
        CHECK(edge_set(a) == edge_set(b));
        CHECK(edge_set(a) != edge_set(c));
    }

    CHECK_THROWS_AS(make_klink(10, 36, 1), std::invalid_argument); // max is 35
}

TEST_CASE("complete generator") {
    CHECK(edge_set(make_complete(3)) == edge_set(make_cycle(3)));
    CHECK(make_complete(5).edge_count() == 10);
    CHECK(make_complete(500).edge_count() == 124750);
    CHECK_THROWS_AS(make_complete(1), std::invalid_argument);
}

TEST_CASE("neighbors are sorted ascending and bounds-checked") {
    CHECK(make_path(4).neighbors(0) == std::vector<NodeId>{1});
    CHECK(make_cycle(5).neighbors(0) == std::vector<NodeId>{1, 4});
    CHECK(make_complete(4).neighbors(2) == std::vector<NodeId>{0, 1, 3});
    CHECK_THROWS_AS(make_path(4).neighbors(4), std::out_of_range);
    CHECK_THROWS_AS(make_path(4).neighbors(-1), std::out_of_range);
}

TEST_CASE("every family is connected with the exact edge-count formula") {
    for (int n : {4, 9, 16, 50, 100}) {
        CAPTURE(n);
        CHECK(make_path(n).edge_count() == static_cast<std::size_t>(n - 1));
        CHECK(make_path(n).is_connected());
        CHECK(make_cycle(n).edge_count() == static_cast<std::size_t>(n));
        CHECK(make_cycle(n).is_connected());
        const Topology g = make_grid(n);
        CHECK(g.edge_count() == static_cast<std::size_t>(g.grid_rows * (g.grid_cols - 1) +
                                                         g.grid_cols * (g.grid_rows - 1)));
        CHECK(g.is_connected());
        const Topology kl = make_klink(n, n / 10, 99);
        CHECK(kl.edge_count() == static_cast<std::size_t>(n + n / 10));
        CHECK(kl.is_connected());
        CHECK(make_complete(n).edge_count() == static_cast<std::size_t>(n) * (n - 1) / 2);
    }
}

TEST_CASE("edge-list dump carries the family header") {
    const Topology t = make_klink(5, 1, 77);
    std::ostringstream out;
    t.dump_edge_list(out);
    const std::string text = out.str();
    CHECK(text.rfind("# klink 5 1 77\n", 0) == 0);
    // header + n + k edge lines
    int lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 6);
}
