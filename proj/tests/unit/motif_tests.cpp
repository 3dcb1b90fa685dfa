#include <doctest.h>

#include "fixtures.hpp"
#include "heisttrace/error.hpp"
#include "heisttrace/motifs.hpp"
#include "oracles.hpp"

using namespace heisttrace;
using namespace heisttrace::testing;

namespace {

FlowGraph graph_of(std::uint32_t n,
                   std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    return FlowGraph::from_edge_list(n, edges);
}

std::uint64_t choose3(std::uint64_t n) { return n * (n - 1) * (n - 2) / 6; }

}  // namespace

TEST_CASE("single edge: one M1, no triads") {
    auto census = motif_census(graph_of(2, {{0, 1}}));
    CHECK(census.counts[1] == 1);
    CHECK(census.counts[2] == 0);
    CHECK(census.connected_triads == 0);
    CHECK(census.counts[16] == 0);
    CHECK(census.fractions[1] == doctest::Approx(1.0));
}

TEST_CASE("out-star is one 021D instance") {
    auto census = motif_census(graph_of(3, {{0, 1}, {0, 2}}));
    CHECK(census.counts[10] == 1);  // M10 = 021D
    CHECK(census.connected_triads == 1);
    for (int m = 3; m <= 15; ++m)
        if (m != 10) CHECK(census.counts[m] == 0);
}

TEST_CASE("in-star and path classify as 021U and 021C") {
    CHECK(motif_census(graph_of(3, {{0, 2}, {1, 2}})).counts[12] == 1);  // M12 = 021U
    CHECK(motif_census(graph_of(3, {{0, 1}, {1, 2}})).counts[11] == 1);  // M11 = 021C
}

TEST_CASE("cycle and transitive triangles split 030C vs 030T") {
    CHECK(motif_census(graph_of(3, {{0, 1}, {1, 2}, {2, 0}})).counts[4] == 1);  // 030C
    CHECK(motif_census(graph_of(3, {{0, 1}, {1, 2}, {0, 2}})).counts[3] == 1);  // 030T
}

TEST_CASE("complete mutual triangle is 300") {
    auto census =
        motif_census(graph_of(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}));
    CHECK(census.counts[9] == 1);
    CHECK(census.counts[2] == 3);
}

TEST_CASE("bi-fan counting honors ordering and disjointness") {
    // two sources each pointing at the same two sinks
    auto census = motif_census(graph_of(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
    CHECK(census.counts[16] == 1);

    // a third source adds C(3,2) bi-fans
    auto census2 =
        motif_census(graph_of(5, {{0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}));
    CHECK(census2.counts[16] == 3);

    // overlapping source/sink sets do not count
    auto census3 = motif_census(graph_of(3, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK(census3.counts[16] == 0);
}

TEST_CASE("self-loops are invisible to the census") {
    auto with_loops = graph_of(3, {{0, 0}, {0, 1}, {1, 1}, {0, 2}});
    auto without = graph_of(3, {{0, 1}, {0, 2}});
    auto a = motif_census(with_loops);
    auto b = motif_census(without);
    CHECK(a.counts == b.counts);
}

TEST_CASE("random graphs match exhaustive enumeration") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto n = static_cast<std::uint32_t>(4 + seed % 22);  // up to 25
        auto g = random_simple_digraph(seed, n, 3 * n);
        auto got = motif_census(g);
        auto want = naive_motif_census(g);
        CAPTURE(seed);
        for (int m = 1; m <= 16; ++m) {
            CAPTURE(m);
            CHECK(got.counts[m] == want.counts[m]);
        }
        // triad completeness against the oracle's disconnected count
        CHECK(got.connected_triads + want.disconnected_triads == choose3(n));
    }
}

TEST_CASE("census is invariant under node relabeling") {
    auto g = random_simple_digraph(55, 20, 70);
    auto base = motif_census(g);
    std::vector<std::uint32_t> perm(20);
    for (std::uint32_t i = 0; i < 20; ++i) perm[i] = (i * 7 + 3) % 20;  // bijection
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& e : g.multi_edges()) edges.emplace_back(perm[e.from], perm[e.to]);
    auto relabeled = motif_census(graph_of(20, edges));
    CHECK(base.counts == relabeled.counts);
}

TEST_CASE("triad fractions sum to one when triads exist") {
    auto g = random_simple_digraph(9, 15, 45);
    auto census = motif_census(g);
    REQUIRE(census.connected_triads > 0);
    double sum = 0;
    for (int m = 3; m <= 15; ++m) sum += census.fractions[m];
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("census results agree across thread counts") {
    auto g = random_simple_digraph(31, 40, 200);
    MotifCensusOptions one, four;
    four.threads = 4;
    CHECK(motif_census(g, one).counts == motif_census(g, four).counts);
}

TEST_CASE("work caps refuse hub-heavy graphs") {
    // a star with 2000 spokes: triad work ~ C(2000,2)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 1; i <= 2000; ++i) edges.emplace_back(0, i);
    auto g = graph_of(2001, edges);
    MotifCensusOptions opts;
    opts.max_triad_work = 100'000;
    CHECK_THROWS_AS(motif_census(g, opts), Error);
    MotifCensusOptions bifan_opts;
    bifan_opts.max_bifan_work = 100'000;
    CHECK_THROWS_AS(motif_census(g, bifan_opts), Error);
}

TEST_CASE("walkthrough transactions produce a stable census") {
    auto fx = make_walkthrough();
    auto g = FlowGraph::from_transactions(fx.store.all(), GraphMode::EtherOnly);
    auto got = motif_census(g);
    auto want = naive_motif_census(g);
    for (int m = 1; m <= 16; ++m) CHECK(got.counts[m] == want.counts[m]);
}
