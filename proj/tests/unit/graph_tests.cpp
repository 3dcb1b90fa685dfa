#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "heisttrace/graph_stats.hpp"
#include "oracles.hpp"

using namespace heisttrace;
using namespace heisttrace::testing;

namespace {

bool approx_opt(const std::optional<double>& a, const std::optional<double>& b,
                double eps = 1e-9) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return std::abs(*a - *b) <= eps;
}

FlowGraph graph_of(std::uint32_t n,
                   std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    return FlowGraph::from_edge_list(n, edges);
}

}  // namespace

TEST_CASE("build_graph filters by transaction kind") {
    auto fx = make_walkthrough();
    SUBCASE("empty set gives an empty graph") {
        auto g = FlowGraph::from_transactions({}, GraphMode::All);
        CHECK(g.node_count() == 0);
        CHECK(g.multi_edges().empty());
    }
    SUBCASE("ether-only keeps external and internal rows") {
        std::vector<Transaction> txs = {
            mk_eth_tx(1, mk_addr(1), mk_addr(2), "1.0", 100, 1),
            mk_token_tx(2, mk_addr(1), mk_addr(3), mk_addr(50), "5.0", 200, 2),
        };
        auto g = FlowGraph::from_transactions(txs, GraphMode::EtherOnly);
        CHECK(g.multi_edges().size() == 1);
        CHECK(g.node_count() == 2);
        auto t = FlowGraph::from_transactions(txs, GraphMode::TokenOnly);
        CHECK(t.multi_edges().size() == 1);
    }
    SUBCASE("all mode drops nothing") {
        auto g = FlowGraph::from_transactions(fx.store.all(), GraphMode::All);
        CHECK(g.multi_edges().size() == fx.store.size());
    }
}

TEST_CASE("directed triangle: forced stats values") {
    auto g = graph_of(3, {{0, 1}, {1, 2}, {2, 0}});
    auto stats = global_stats(g);
    CHECK(stats.reciprocity == doctest::Approx(0.0));
    CHECK(stats.global_clustering == doctest::Approx(1.0));
    CHECK(stats.avg_path_length == doctest::Approx(1.0));
    CHECK(stats.self_loop_ratio == doctest::Approx(0.0));
    CHECK(stats.density_simple_undirected == doctest::Approx(1.0));
}

TEST_CASE("mutual dyad has reciprocity one") {
    auto g = graph_of(2, {{0, 1}, {1, 0}});
    auto stats = global_stats(g);
    CHECK(stats.reciprocity == doctest::Approx(1.0));
}

TEST_CASE("mirrored graphs always have reciprocity exactly one") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        std::uint32_t n = 6 + trial;
        for (int i = 0; i < 20; ++i) {
            auto u = static_cast<std::uint32_t>(rng() % n);
            auto v = static_cast<std::uint32_t>(rng() % n);
            if (u == v) continue;
            edges.emplace_back(u, v);
            edges.emplace_back(v, u);
        }
        if (edges.empty()) continue;
        auto stats = global_stats(graph_of(n, edges));
        CHECK(*stats.reciprocity == 1.0);
    }
}

TEST_CASE("degenerate graphs flag stats undefined, not zero") {
    auto empty = graph_of(0, {});
    auto stats = global_stats(empty);
    CHECK_FALSE(stats.self_loop_ratio.has_value());
    CHECK_FALSE(stats.density_simple_undirected.has_value());
    CHECK_FALSE(stats.avg_path_length.has_value());

    auto lonely = graph_of(1, {{0, 0}});
    auto s1 = global_stats(lonely);
    CHECK(s1.self_loop_ratio == doctest::Approx(1.0));  // defined: edges exist
    CHECK_FALSE(s1.density_simple_undirected.has_value());
    CHECK_FALSE(s1.global_clustering.has_value());
}

TEST_CASE("random graphs match the naive oracle on all six stats") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto n = static_cast<std::uint32_t>(5 + seed % 26);  // up to 30
        const std::size_t edges = 2 * n;
        auto g = random_multidigraph(seed, n, edges);
        auto got = global_stats(g);
        auto want = naive_global_stats(g);
        CAPTURE(seed);
        CHECK(approx_opt(got.self_loop_ratio, want.self_loop_ratio));
        CHECK(approx_opt(got.reciprocity, want.reciprocity));
        CHECK(approx_opt(got.density_simple_undirected, want.density_simple_undirected));
        CHECK(approx_opt(got.density_multidigraph, want.density_multidigraph));
        CHECK(approx_opt(got.global_clustering, want.global_clustering));
        CHECK(approx_opt(got.avg_path_length, want.avg_path_length));
    }
}

TEST_CASE("stats are invariant under node relabeling") {
    auto g = random_multidigraph(77, 24, 60);
    auto base = global_stats(g);

    std::mt19937_64 rng(99);
    std::vector<std::uint32_t> perm(24);
    for (std::uint32_t i = 0; i < 24; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& e : g.multi_edges()) edges.emplace_back(perm[e.from], perm[e.to]);
    auto relabeled = global_stats(graph_of(24, edges));

    CHECK(approx_opt(base.reciprocity, relabeled.reciprocity, 1e-12));
    CHECK(approx_opt(base.global_clustering, relabeled.global_clustering, 1e-12));
    CHECK(approx_opt(base.avg_path_length, relabeled.avg_path_length, 1e-12));
    CHECK(approx_opt(base.density_simple_undirected, relabeled.density_simple_undirected,
                     1e-12));
}

TEST_CASE("multidigraph density dominates the simple directed density") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto g = random_multidigraph(seed, 12, 50);
        auto stats = global_stats(g);
        const auto& simple = g.simple();
        const double n = double(g.node_count());
        const double simple_density = double(simple.edge_count) / (n * (n - 1));
        CHECK(*stats.density_multidigraph >= simple_density - 1e-12);
    }
}

TEST_CASE("stats agree across thread counts") {
    auto g = random_multidigraph(7, 30, 90);
    GraphStatsOptions one, four;
    four.threads = 4;
    auto a = global_stats(g, one);
    auto b = global_stats(g, four);
    CHECK(approx_opt(a.global_clustering, b.global_clustering, 0.0));
    CHECK(approx_opt(a.avg_path_length, b.avg_path_length, 0.0));
}

TEST_CASE("sampled path length records its sample size") {
    // force sampling with a tiny cap
    auto g = random_simple_digraph(5, 200, 700);
    GraphStatsOptions opts;
    opts.exact_path_cap = 50;
    opts.path_sample_sources = 1000;  // clamped to the component size
    auto stats = global_stats(g, opts);
    CHECK_FALSE(stats.path_length_exact);
    REQUIRE(stats.path_length_sample_size.has_value());
    CHECK(*stats.path_length_sample_size >= std::min<std::size_t>(stats.lwcc_size, 1000));
    // estimate should still be close to the exact value on this small graph
    GraphStatsOptions exact;
    auto truth = global_stats(g, exact);
    CHECK(*stats.avg_path_length ==
          doctest::Approx(*truth.avg_path_length).epsilon(0.05));
}
