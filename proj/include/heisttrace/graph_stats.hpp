#pragma once

#include <cstdint>
#include <optional>

#include "heisttrace/flow_graph.hpp"

namespace heisttrace {

// Global network properties. Fields are empty where the graph is too
// degenerate to define them — never silently zero. Self-loops stay in the
// self-loop ratio's denominator but are excluded from reciprocity and both
// densities.
struct GraphStats {
    std::optional<double> self_loop_ratio;
    std::optional<double> reciprocity;
    std::optional<double> density_simple_undirected;
    std::optional<double> density_multidigraph;
    std::optional<double> global_clustering;  // mean local coefficient
    std::optional<double> avg_path_length;    // undirected, largest WCC

    std::size_t node_count = 0;
    std::uint64_t multi_edge_count = 0;
    std::size_t lwcc_size = 0;
    bool path_length_exact = true;
    std::optional<std::size_t> path_length_sample_size;  // set when estimated
};

struct GraphStatsOptions {
    // Path length is exact up to this many LWCC nodes, sampled beyond it.
    std::size_t exact_path_cap = 10000;
    std::size_t path_sample_sources = 1000;
    std::uint64_t seed = 42;
    unsigned threads = 1;
};

GraphStats global_stats(const FlowGraph& g, const GraphStatsOptions& opts = {});

}  // namespace heisttrace
