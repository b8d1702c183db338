#include "doctest.h"

#include "subforge/graph.hpp"
#include "subforge/graph_io.hpp"
#include "subforge/patterns.hpp"
#include "subforge/rng.hpp"

#include <sstream>

using namespace subforge;

namespace {

/// Independent oracle: maximum cut by enumeration of all 2^n partitions.
long long max_cut_exhaustive(const HostGraph &g) {
    int n = g.vertex_count();
    REQUIRE(n <= 20);
    long long best = 0;
    auto edges = g.edges();
    for (std::uint32_t bits = 0; bits < (1U << n); ++bits) {
        long long cut = 0;
        for (auto [u, v] : edges)
            if (((bits >> u) & 1) != ((bits >> v) & 1))
                ++cut;
        best = std::max(best, cut);
    }
    return best;
}

} // namespace

TEST_CASE("stats on small graphs") {
    auto p3 = make_path(3);
    auto st = stats(p3);
    CHECK(st.avg == Rational(4, 3));
    CHECK(st.min == 1);
    CHECK(st.max == 2);

    auto k4 = make_clique(4);
    st = stats(k4);
    CHECK(st.avg == Rational(3));
    CHECK(st.min == 3);
    CHECK(st.max == 3);

    auto c5 = make_cycle(5);
    st = stats(c5);
    CHECK(st.avg == Rational(2));
    CHECK(st.min == 2);
    CHECK(st.max == 2);

    CHECK_THROWS_AS(stats(HostGraph(0, {})), std::invalid_argument);
}

TEST_CASE("stats equals 2e/n exactly on random graphs") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto g = make_erdos_renyi(17, 0.3, seed);
        CHECK(stats(g).avg == Rational(2 * g.edge_count(), g.vertex_count()));
    }
}

TEST_CASE("pair_density") {
    auto k23 = make_complete_bipartite(2, 3);
    VertexSet a({0, 1}), b({2, 3, 4});
    CHECK(pair_density(k23, a, b) == Rational(1));
    CHECK(pair_density(k23, b, a) == Rational(1)); // symmetric

    HostGraph edgeless(5, {});
    CHECK(pair_density(edgeless, a, b) == Rational(0));

    auto c4 = make_cycle(4);
    CHECK(pair_density(c4, VertexSet({0, 2}), VertexSet({1, 3})) == Rational(1));

    CHECK_THROWS_AS(pair_density(c4, VertexSet({0, 1}), VertexSet({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(pair_density(c4, VertexSet(), b), std::invalid_argument);
}

TEST_CASE("codegree") {
    auto k4 = make_clique(4);
    CHECK(codegree(k4, 0, 1) == 2);
    CHECK(codegree(k4, 2, 3) == 2);

    auto c5 = make_cycle(5);
    CHECK(codegree(c5, 0, 1) == 0); // girth 5

    auto k33 = make_complete_bipartite(3, 3);
    CHECK(codegree(k33, 0, 1) == 3);

    CHECK_THROWS_AS(codegree(k4, 2, 2), std::invalid_argument);
}

TEST_CASE("ball and layers") {
    auto c8 = make_cycle(8);
    CHECK(ball(c8, VertexSet::single(0), 0) == VertexSet::single(0));
    CHECK(ball(c8, VertexSet::single(0), 2) == VertexSet({0, 1, 2, 6, 7}));

    auto grid = make_grid(3, 3);
    CHECK(ball(grid, VertexSet::single(0), 4) == VertexSet::full(9)); // radius = diameter

    // Monotone and layer-partition properties.
    auto g = make_erdos_renyi(20, 0.15, 5);
    for (int r = 0; r + 1 <= 5; ++r) {
        VertexSet smaller = ball(g, VertexSet::single(0), r);
        VertexSet larger = ball(g, VertexSet::single(0), r + 1);
        CHECK(smaller.minus(larger).empty());
    }
    auto layered = ball_layers(g, VertexSet::single(0), 4);
    int total = 0;
    for (std::size_t i = 0; i < layered.layers.size(); ++i) {
        total += layered.layers[i].size();
        for (std::size_t j = i + 1; j < layered.layers.size(); ++j)
            CHECK(layered.layers[i].disjoint_from(layered.layers[j]));
    }
    CHECK(total == layered.ball.size());
}

TEST_CASE("max_cut_bipartite meets the exhaustive oracle bound") {
    auto c5 = make_cycle(5);
    auto cut5 = max_cut_bipartite(c5);
    CHECK(max_cut_exhaustive(c5) == 4);
    CHECK(cut5.edge_count() == 4);
    CHECK(cut5.has_bipartition());

    auto k4 = make_clique(4);
    auto cut4 = max_cut_bipartite(k4);
    CHECK(max_cut_exhaustive(k4) == 4);
    CHECK(cut4.edge_count() == 4);
    CHECK(Rational(2 * cut4.edge_count(), cut4.vertex_count()) >= Rational(3, 2));

    // Already-bipartite input keeps every edge.
    auto grid = make_grid(3, 4);
    CHECK(max_cut_bipartite(grid).edge_count() == grid.edge_count());
    HostGraph even_cycle_unlabeled(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
    CHECK(max_cut_bipartite(even_cycle_unlabeled).edge_count() == 6);

    // At least half the edges, on a small random corpus.
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto g = make_erdos_renyi(14, 0.35, seed);
        auto cut = max_cut_bipartite(g);
        CHECK(2 * cut.edge_count() >= g.edge_count());
        for (auto [u, v] : cut.edges())
            CHECK(cut.side(u) != cut.side(v));
    }
}

TEST_CASE("edge-list round trip and strict parsing") {
    auto g = make_grid(2, 3);
    std::string text = write_edge_list(g);
    std::istringstream in(text);
    auto back = read_edge_list(in);
    CHECK(back.vertex_count() == g.vertex_count());
    CHECK(back.edges() == g.edges());
    CHECK(back.has_bipartition());
    CHECK(write_edge_list(back) == text);

    auto reject = [](const std::string &s) {
        std::istringstream bad(s);
        CHECK_THROWS_AS(read_edge_list(bad), ParseError);
    };
    reject("2 1\n0 0\n");          // loop
    reject("3 2\n0 1\n0 1\n");     // duplicate
    reject("3 1\n1 0\n");          // u >= v
    reject("3 1\n0 5\n");          // out of range
    reject("3 2\n0 1\n");          // truncated
    reject("2 1 bogus\n0 1\n");    // bad token
    reject("2 1 bipartite\n0 0\n0 1\n"); // edge inside a side
}

TEST_CASE("host graph invariants") {
    CHECK_THROWS_AS(HostGraph(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(HostGraph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(HostGraph(2, {{0, 5}}), std::invalid_argument);

    auto g = make_complete_bipartite(2, 2);
    auto sub = g.induced(VertexSet({0, 2, 3}));
    CHECK(sub.vertex_count() == 3);
    CHECK(sub.edge_count() == 2);
    CHECK(sub.origin_of(0) == 0);
    CHECK(sub.origin_of(1) == 2);
    CHECK(sub.origin_of(2) == 3);
}

TEST_CASE("rational arithmetic basics") {
    CHECK(Rational(4, 6) == Rational(2, 3));
    CHECK(Rational(-4, -6) == Rational(2, 3));
    CHECK(Rational(4, -6) == Rational(-2, 3));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(5, 2) * Rational(2, 5) == Rational(1));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(7, 2).str() == "7/2");
    CHECK(Rational(8, 2).str() == "4");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::invalid_argument);
}

TEST_CASE("rng streams are deterministic and sampling is valid") {
    Rng a(42, "tag"), b(42, "tag"), c(42, "other");
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() == b.next_u64());
    Rng a2(42, "tag");
    CHECK(a2.next_u64() != c.next_u64()); // different op-tags diverge
    Rng s(7, "sample");
    for (int trial = 0; trial < 20; ++trial) {
        auto pick = s.sample_without_replacement(10, 4);
        CHECK(pick.size() == 4);
        for (std::size_t i = 0; i + 1 < pick.size(); ++i)
            CHECK(pick[i] < pick[i + 1]); // sorted, distinct
        CHECK(pick.back() < 10);
    }
}

TEST_CASE("empty graph round trip") {
    HostGraph g(0, {});
    std::string text = write_edge_list(g);
    std::istringstream in(text);
    auto back = read_edge_list(in);
    CHECK(back.vertex_count() == 0);
    CHECK(back.edge_count() == 0);
}
