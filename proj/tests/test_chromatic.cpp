#include <doctest.h>

#include <bit>
#include <random>

#include "hypchrom/chromatic.hpp"

using namespace hypchrom;

namespace {

// Exhaustive k-colorability by enumerating all k^n assignments.
bool brute_colorable(const AdjacencyGraph& g, int k) {
    if (g.n == 0) return true;
    std::vector<int> col(static_cast<std::size_t>(g.n), 0);
    for (;;) {
        if (verify_coloring(g, col, k)) return true;
        int i = 0;
        while (i < g.n && ++col[static_cast<std::size_t>(i)] == k) col[static_cast<std::size_t>(i++)] = 0;
        if (i == g.n) return false;
    }
}

AdjacencyGraph random_graph(std::mt19937& rng, int n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) e.emplace_back(i, j);
    return AdjacencyGraph::from_edges(n, e);
}

AdjacencyGraph moser_spindle() {
    return AdjacencyGraph::from_edges(
        7, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {0, 5}, {4, 5}, {4, 6}, {5, 6}, {3, 6}});
}

}  // namespace

TEST_CASE("adjacency construction") {
    auto g = AdjacencyGraph::from_edges(4, {{0, 1}, {1, 0}, {2, 3}});
    CHECK(g.edge_count() == 2);
    CHECK(g.neighbors[1] == std::vector<int>{0});
    CHECK_THROWS_AS(AdjacencyGraph::from_edges(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(AdjacencyGraph::from_edges(3, {{0, 3}}), std::invalid_argument);
    auto p = moser_spindle().prefix(4);
    CHECK(p.n == 4);
    CHECK(p.edge_count() == 5);
}

TEST_CASE("assign_propagate") {
    SUBCASE("isolated vertex") {
        auto g = AdjacencyGraph::from_edges(1, {});
        ColorSearchState s(g, 3);
        CHECK(s.assign_propagate(0, 2));
        CHECK(s.color(0) == 2);
        CHECK(s.forced_assignments() == 0);
    }
    SUBCASE("triangle forces the last color") {
        auto g = AdjacencyGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
        ColorSearchState s(g, 3);
        CHECK(s.assign_propagate(0, 0));
        CHECK(s.assign_propagate(1, 1));
        CHECK(s.color(2) == 2);
        CHECK(s.forced_assignments() == 1);
    }
    SUBCASE("spindle with three colors hits a conflict") {
        auto g = moser_spindle();
        ColorSearchState s(g, 3);
        REQUIRE(s.assign_propagate(0, 0));
        REQUIRE(s.assign_propagate(1, 1));
        // 2 and 3 are forced; 3 = 0, then 4, 5 and 6 cannot all fit.
        CHECK(s.color(2) == 2);
        CHECK(s.color(3) == 0);
        CHECK_FALSE(s.assign_propagate(4, 1));
    }
    SUBCASE("precondition violations") {
        auto g = AdjacencyGraph::from_edges(2, {{0, 1}});
        ColorSearchState s(g, 2);
        REQUIRE(s.assign_propagate(0, 0));
        CHECK_THROWS_AS(s.assign_propagate(0, 1), std::logic_error);
        CHECK_THROWS_AS(s.assign_propagate(1, 0), std::logic_error);
        CHECK_THROWS_AS(ColorSearchState(g, 0), std::invalid_argument);
        CHECK_THROWS_AS(ColorSearchState(g, 33), std::invalid_argument);
    }
}

TEST_CASE("rollback is exact") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_graph(rng, 12, 0.4);
        const int k = 3 + trial % 3;
        ColorSearchState s(g, k);
        std::vector<std::pair<ColorSearchState::Mark, ColorSearchState>> snapshots;
        std::uniform_int_distribution<int> vert(0, g.n - 1);
        for (int step = 0; step < 8; ++step) {
            const int v = vert(rng);
            if (s.is_colored(v) || s.feasible(v) == 0) continue;
            snapshots.emplace_back(s.mark(), s);
            const int c = std::countr_zero(s.feasible(v));
            if (!s.assign_propagate(v, c)) break;
        }
        while (!snapshots.empty()) {
            s.rollback(snapshots.back().first);
            CHECK(s == snapshots.back().second);
            snapshots.pop_back();
        }
        CHECK(s == ColorSearchState(g, k));
    }
}

TEST_CASE("oracle equivalence with exhaustive enumeration") {
    std::mt19937 rng(777);
    const double probs[] = {0.3, 0.5, 0.7};
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> size(1, 10);
        auto g = random_graph(rng, size(rng), probs[trial % 3]);
        for (int k = 2; k <= 4; ++k) {
            const bool truth = brute_colorable(g, k);
            for (int variant = 0; variant < 4; ++variant) {
                SearchOptions opt;
                opt.symmetry_break = variant & 1;
                opt.greedy_probe = variant & 2;
                SearchResult r = search_k_coloring(g, k, opt);
                CHECK((r.verdict == Verdict::Colorable) == truth);
                CHECK(r.verdict != Verdict::Aborted);
                if (r.coloring) CHECK(verify_coloring(g, *r.coloring, k));
                CHECK(r.stats.max_depth <= g.n);
            }
        }
    }
}

TEST_CASE("verify_coloring") {
    auto g = moser_spindle();
    SearchResult r = search_k_coloring(g, 4);
    REQUIRE(r.coloring);
    CHECK(verify_coloring(g, *r.coloring, 4));
    Coloring bad = *r.coloring;
    bad[1] = bad[0];
    CHECK_FALSE(verify_coloring(g, bad));
    CHECK_FALSE(verify_coloring(g, Coloring(3, 0)));
    CHECK_FALSE(verify_coloring(g, *r.coloring, 2));
}

TEST_CASE("chromatic numbers") {
    auto spindle = moser_spindle();
    auto res = chromatic_number(spindle, 10);
    REQUIRE(res.value);
    CHECK(*res.value == 4);
    CHECK(brute_colorable(spindle, 4));
    CHECK_FALSE(brute_colorable(spindle, 3));
    CHECK(*chromatic_number(AdjacencyGraph::from_edges(5, {}), 3).value == 1);
    CHECK(*chromatic_number(AdjacencyGraph::from_edges(0, {}), 3).value == 0);
    CHECK_FALSE(chromatic_number(spindle, 3).value.has_value());
    CHECK(search_k_coloring(AdjacencyGraph::from_edges(1, {}), 1).verdict == Verdict::Colorable);
}

TEST_CASE("minimal prefix") {
    // A path whose last vertex closes an odd cycle.
    auto cycle = AdjacencyGraph::from_edges(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 0}});
    PrefixResult p = minimal_non_colorable_prefix(cycle, 2);
    CHECK(p.prefix == 7);
    CHECK(verify_coloring(cycle.prefix(6), p.witness, 2));
    CHECK_THROWS_AS(minimal_non_colorable_prefix(cycle, 3), std::invalid_argument);

    // Binary search agrees with a linear scan.
    std::mt19937 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_graph(rng, 14, 0.45);
        const int k = 3;
        if (search_k_coloring(g, k).verdict == Verdict::Colorable) continue;
        int linear = 0;
        for (int m = 1; m <= g.n; ++m)
            if (search_k_coloring(g.prefix(m), k).verdict == Verdict::NotColorable) {
                linear = m;
                break;
            }
        CHECK(minimal_non_colorable_prefix(g, k).prefix == linear);
    }
}

TEST_CASE("greedy probe") {
    auto spindle = moser_spindle();
    CHECK_FALSE(greedy_dsatur(spindle, 3).has_value());
    auto four = greedy_dsatur(spindle, 4);
    REQUIRE(four);
    CHECK(verify_coloring(spindle, *four, 4));
    SearchResult r = search_k_coloring(spindle, 4);
    CHECK(r.stats.greedy_witness);
    SearchOptions plain;
    plain.greedy_probe = false;
    r = search_k_coloring(spindle, 4, plain);
    CHECK_FALSE(r.stats.greedy_witness);
    CHECK(r.verdict == Verdict::Colorable);
    // Greedy failure does not decide anything; the search still finds a coloring.
    auto cycle6 = AdjacencyGraph::from_edges(6, {{0, 3}, {3, 1}, {1, 4}, {4, 2}, {2, 5}, {5, 0}});
    CHECK(search_k_coloring(cycle6, 2).verdict == Verdict::Colorable);
}

TEST_CASE("time limit aborts") {
    // The limit is checked every 1024 nodes, so the search may still finish.
    std::mt19937 rng(5);
    auto g = random_graph(rng, 60, 0.5);
    SearchOptions opt;
    opt.time_limit = std::chrono::duration<double>(1e-9);
    opt.greedy_probe = false;
    SearchResult r = search_k_coloring(g, 8, opt);
    if (r.verdict == Verdict::Colorable) CHECK(verify_coloring(g, *r.coloring, 8));
    CHECK_FALSE((r.verdict == Verdict::Aborted && r.coloring.has_value()));
}
