#include "heisttrace/graph_stats.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "heisttrace/parallel.hpp"
#include "heisttrace/rng.hpp"

namespace heisttrace {

namespace {

// Largest weakly connected component via BFS over the undirected projection.
std::vector<std::uint32_t> largest_wcc(const FlowGraph::Undirected& und, std::size_t n) {
    std::vector<std::int32_t> comp(n, -1);
    std::int32_t comps = 0;
    std::vector<std::uint32_t> queue;
    std::size_t best_size = 0;
    std::int32_t best = -1;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::size_t size = 0;
        queue.clear();
        queue.push_back(s);
        comp[s] = comps;
        while (!queue.empty()) {
            auto u = queue.back();
            queue.pop_back();
            ++size;
            for (auto v : und.adj[u]) {
                if (comp[v] < 0) {
                    comp[v] = comps;
                    queue.push_back(v);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best = comps;
        }
        ++comps;
    }
    std::vector<std::uint32_t> members;
    members.reserve(best_size);
    for (std::uint32_t v = 0; v < n; ++v)
        if (comp[v] == best) members.push_back(v);
    return members;
}

// Sum of BFS distances from source to all other reachable nodes.
std::pair<std::uint64_t, std::uint64_t> bfs_distance_sum(const FlowGraph::Undirected& und,
                                                         std::uint32_t source,
                                                         std::vector<std::uint32_t>& dist_buf) {
    constexpr std::uint32_t kUnvisited = UINT32_MAX;
    std::fill(dist_buf.begin(), dist_buf.end(), kUnvisited);
    std::deque<std::uint32_t> queue;
    dist_buf[source] = 0;
    queue.push_back(source);
    std::uint64_t sum = 0, reached = 0;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto v : und.adj[u]) {
            if (dist_buf[v] != kUnvisited) continue;
            dist_buf[v] = dist_buf[u] + 1;
            sum += dist_buf[v];
            ++reached;
            queue.push_back(v);
        }
    }
    return {sum, reached};
}

}  // namespace

GraphStats global_stats(const FlowGraph& g, const GraphStatsOptions& opts) {
    GraphStats stats;
    const std::size_t n = g.node_count();
    stats.node_count = n;
    stats.multi_edge_count = g.multi_edges().size();

    if (stats.multi_edge_count > 0) {
        stats.self_loop_ratio = static_cast<double>(g.self_loop_multi_count()) /
                                static_cast<double>(stats.multi_edge_count);
    }
    if (n < 2) return stats;  // remaining properties undefined on degenerate graphs

    const auto& simple = g.simple();
    const auto& und = g.undirected();

    if (simple.edge_count > 0) {
        std::uint64_t mutual = 0;
        for (std::uint32_t u = 0; u < n; ++u)
            for (auto v : simple.out[u])
                if (simple.has_edge(v, u)) ++mutual;
        stats.reciprocity =
            static_cast<double>(mutual) / static_cast<double>(simple.edge_count);
    } else {
        stats.reciprocity = 0.0;
    }

    const double ordered_pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    stats.density_simple_undirected =
        2.0 * static_cast<double>(und.edge_count) / ordered_pairs;
    std::uint64_t non_loop_multi = stats.multi_edge_count - g.self_loop_multi_count();
    stats.density_multidigraph = static_cast<double>(non_loop_multi) / ordered_pairs;

    // Mean local clustering over every node; degree < 2 contributes zero.
    {
        std::vector<double> partial(n, 0.0);
        parallel_for(n, opts.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                const auto& nbrs = und.adj[u];
                const std::size_t d = nbrs.size();
                if (d < 2) continue;
                std::uint64_t links = 0;
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = i + 1; j < d; ++j)
                        if (und.has_edge(nbrs[i], nbrs[j])) ++links;
                partial[u] = 2.0 * static_cast<double>(links) /
                             (static_cast<double>(d) * static_cast<double>(d - 1));
            }
        });
        double sum = 0;
        for (double x : partial) sum += x;
        stats.global_clustering = sum / static_cast<double>(n);
    }

    // Average shortest path over ordered reachable pairs in the largest WCC.
    auto members = largest_wcc(und, n);
    stats.lwcc_size = members.size();
    if (members.size() >= 2) {
        std::vector<std::uint32_t> sources;
        if (members.size() <= opts.exact_path_cap) {
            sources = members;
            stats.path_length_exact = true;
        } else {
            stats.path_length_exact = false;
            std::size_t want = std::min(members.size(),
                                        std::max<std::size_t>(opts.path_sample_sources, 1000));
            std::mt19937_64 rng(opts.seed);
            std::vector<std::uint32_t> pool = members;
            for (std::size_t i = 0; i < want; ++i) {
                std::size_t j = i + uniform_index(rng, pool.size() - i);
                std::swap(pool[i], pool[j]);
                sources.push_back(pool[i]);
            }
            stats.path_length_sample_size = want;
        }
        std::vector<std::uint64_t> sums(sources.size(), 0);
        std::vector<std::uint64_t> counts(sources.size(), 0);
        parallel_for(sources.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
            std::vector<std::uint32_t> dist_buf(n);
            for (std::size_t i = begin; i < end; ++i) {
                auto [sum, reached] = bfs_distance_sum(und, sources[i], dist_buf);
                sums[i] = sum;
                counts[i] = reached;
            }
        });
        std::uint64_t total = 0, pairs = 0;
        for (std::size_t i = 0; i < sources.size(); ++i) {
            total += sums[i];
            pairs += counts[i];
        }
        if (pairs > 0)
            stats.avg_path_length = static_cast<double>(total) / static_cast<double>(pairs);
    }
    return stats;
}

}  // namespace heisttrace
