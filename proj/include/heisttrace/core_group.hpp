#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "heisttrace/types.hpp"

namespace heisttrace {

enum class EdgeWeighting { Unit, LogTxCount, Zero };

std::string_view edge_weighting_name(EdgeWeighting w);
std::optional<EdgeWeighting> edge_weighting_from(std::string_view s);

// Sender x recipient transfer graph. An address active on both sides
// appears as two distinct nodes. Node ids: 0..m-1 are senders in address
// order, m..m+n-1 recipients in address order — also the canonical
// tie-break order for peeling.
class BipartiteGraph {
public:
    struct Edge {
        std::uint32_t u = 0;  // sender id
        std::uint32_t v = 0;  // recipient id, offset by m
        double weight = 1.0;
        std::uint32_t tx_count = 1;
    };

    BipartiteGraph() = default;
    BipartiteGraph(std::vector<Address> senders, std::vector<Address> recipients,
                   std::vector<Edge> edges, std::vector<double> node_susp);

    // Distinct (from, to) pairs become edges; node suspiciousness is alpha
    // for Heist-labeled addresses, zero otherwise.
    static BipartiteGraph from_transactions(std::span<const Transaction> txs,
                                            const LabelLibrary& lib, double alpha = 49.0,
                                            EdgeWeighting weighting = EdgeWeighting::Unit);

    std::size_t sender_count() const { return senders_.size(); }
    std::size_t recipient_count() const { return recipients_.size(); }
    std::size_t total_nodes() const { return senders_.size() + recipients_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& node_susp() const { return node_susp_; }

    bool is_sender(std::uint32_t id) const { return id < senders_.size(); }
    const Address& node_address(std::uint32_t id) const {
        return is_sender(id) ? senders_[id] : recipients_[id - senders_.size()];
    }

private:
    std::vector<Address> senders_;
    std::vector<Address> recipients_;
    std::vector<Edge> edges_;
    std::vector<double> node_susp_;
};

// Average suspiciousness g(S) = (sum of node scores + sum of inside-edge
// scores) / |S|. Node ids must be unique; the empty set is an error.
double suspiciousness(std::span<const std::uint32_t> subset, const BipartiteGraph& g);

struct PeelStep {
    std::uint32_t removed = 0;
    std::optional<double> g_after;  // empty once the remainder is empty
};

struct PeelStats {
    std::uint64_t heap_pops = 0;
    std::uint64_t key_updates = 0;
};

struct CoreSubgraph {
    std::vector<Address> kept_senders;
    std::vector<Address> kept_recipients;
    double score = 0.0;
    double initial_g = 0.0;  // g of the full graph, before any removal
    std::vector<PeelStep> peel_trace;
    PeelStats stats;
};

// Greedy density peeling: removes the node of least marginal contribution
// (node score plus incident surviving edge weight) until the graph is
// empty, then returns the visited state with the greatest g. Ties on the
// marginal key break toward the smaller node id; equal-g states keep the
// earliest (largest) one. A min-indexed heap makes each removal
// O(log(m+n)) plus a key update per surviving neighbor.
CoreSubgraph extract_core(const BipartiteGraph& g);

}  // namespace heisttrace
