#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "heisttrace/types.hpp"

namespace heisttrace {

enum class GraphMode { EtherOnly, TokenOnly, All };

std::string_view graph_mode_name(GraphMode m);
std::optional<GraphMode> graph_mode_from(std::string_view s);

// Directed multigraph over addresses. Node ids are indices into the sorted
// address table, so isomorphic inputs under relabeling produce the same
// structure up to permutation. Derived simple views are cached and always
// recomputable from the multi-edge list.
class FlowGraph {
public:
    struct MultiEdge {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        AssetKey asset{};
        Decimal amount;
        std::int64_t timestamp = 0;
    };

    // Simple directed view; parallel edges collapsed, self-loops dropped.
    struct SimpleDigraph {
        std::vector<std::vector<std::uint32_t>> out;  // sorted
        std::vector<std::vector<std::uint32_t>> in;   // sorted
        std::uint64_t edge_count = 0;
        bool has_edge(std::uint32_t u, std::uint32_t v) const;
    };

    // Simple undirected projection, self-loops dropped.
    struct Undirected {
        std::vector<std::vector<std::uint32_t>> adj;  // sorted
        std::uint64_t edge_count = 0;
        bool has_edge(std::uint32_t u, std::uint32_t v) const;
    };

    FlowGraph() = default;

    // EtherOnly keeps external+internal rows, TokenOnly keeps token rows.
    static FlowGraph from_transactions(std::span<const Transaction> txs, GraphMode mode);
    // Synthetic construction for generated topologies; addresses are derived
    // from node indices.
    static FlowGraph from_edge_list(std::uint32_t node_count,
                                    std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<Address>& nodes() const { return nodes_; }
    const Address& node(std::uint32_t id) const { return nodes_[id]; }
    const std::vector<MultiEdge>& multi_edges() const { return multi_edges_; }

    std::uint64_t self_loop_multi_count() const;

    const SimpleDigraph& simple() const;
    const Undirected& undirected() const;

private:
    struct Caches {
        std::mutex mu;
        std::unique_ptr<SimpleDigraph> simple;
        std::unique_ptr<Undirected> undirected;
    };

    std::vector<Address> nodes_;
    std::vector<MultiEdge> multi_edges_;
    mutable std::unique_ptr<Caches> caches_ = std::make_unique<Caches>();
};

}  // namespace heisttrace
