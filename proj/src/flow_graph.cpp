#include "heisttrace/flow_graph.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "heisttrace/error.hpp"

namespace heisttrace {

std::string_view graph_mode_name(GraphMode m) {
    switch (m) {
        case GraphMode::EtherOnly: return "ether";
        case GraphMode::TokenOnly: return "token";
        case GraphMode::All: return "all";
    }
    return "all";
}

std::optional<GraphMode> graph_mode_from(std::string_view s) {
    if (s == "ether") return GraphMode::EtherOnly;
    if (s == "token") return GraphMode::TokenOnly;
    if (s == "all") return GraphMode::All;
    return std::nullopt;
}

bool FlowGraph::SimpleDigraph::has_edge(std::uint32_t u, std::uint32_t v) const {
    const auto& o = out[u];
    return std::binary_search(o.begin(), o.end(), v);
}

bool FlowGraph::Undirected::has_edge(std::uint32_t u, std::uint32_t v) const {
    const auto& o = adj[u];
    return std::binary_search(o.begin(), o.end(), v);
}

FlowGraph FlowGraph::from_transactions(std::span<const Transaction> txs, GraphMode mode) {
    auto keep = [mode](const Transaction& t) {
        switch (mode) {
            case GraphMode::EtherOnly:
                return t.kind == TxKind::External || t.kind == TxKind::Internal;
            case GraphMode::TokenOnly:
                return t.kind == TxKind::TokenTransfer;
            case GraphMode::All:
                return true;
        }
        return true;
    };

    std::set<Address> node_set;
    for (const auto& t : txs) {
        if (!keep(t)) continue;
        node_set.insert(t.from);
        node_set.insert(t.to);
    }

    FlowGraph g;
    g.nodes_.assign(node_set.begin(), node_set.end());
    std::map<Address, std::uint32_t> index;
    for (std::uint32_t i = 0; i < g.nodes_.size(); ++i) index[g.nodes_[i]] = i;

    for (const auto& t : txs) {
        if (!keep(t)) continue;
        MultiEdge e;
        e.from = index.at(t.from);
        e.to = index.at(t.to);
        e.asset = t.asset.key();
        e.amount = t.amount;
        e.timestamp = t.timestamp;
        g.multi_edges_.push_back(std::move(e));
    }
    return g;
}

FlowGraph FlowGraph::from_edge_list(
    std::uint32_t node_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    FlowGraph g;
    g.nodes_.resize(node_count);
    for (std::uint32_t i = 0; i < node_count; ++i) {
        // synthetic address: big-endian index in the low bytes
        for (int b = 0; b < 4; ++b)
            g.nodes_[i].bytes[19 - b] = static_cast<std::uint8_t>((i >> (8 * b)) & 0xff);
    }
    g.multi_edges_.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) throw Error("edge endpoint out of range");
        MultiEdge e;
        e.from = u;
        e.to = v;
        e.amount = Decimal(1);
        g.multi_edges_.push_back(std::move(e));
    }
    return g;
}

std::uint64_t FlowGraph::self_loop_multi_count() const {
    std::uint64_t n = 0;
    for (const auto& e : multi_edges_)
        if (e.from == e.to) ++n;
    return n;
}

const FlowGraph::SimpleDigraph& FlowGraph::simple() const {
    std::lock_guard<std::mutex> lock(caches_->mu);
    if (!caches_->simple) {
        auto s = std::make_unique<SimpleDigraph>();
        s->out.resize(nodes_.size());
        s->in.resize(nodes_.size());
        for (const auto& e : multi_edges_) {
            if (e.from == e.to) continue;
            s->out[e.from].push_back(e.to);
            s->in[e.to].push_back(e.from);
        }
        for (auto& v : s->out) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            s->edge_count += v.size();
        }
        for (auto& v : s->in) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        caches_->simple = std::move(s);
    }
    return *caches_->simple;
}

const FlowGraph::Undirected& FlowGraph::undirected() const {
    const auto& s = simple();  // builds under its own lock
    std::lock_guard<std::mutex> lock(caches_->mu);
    if (!caches_->undirected) {
        auto u = std::make_unique<Undirected>();
        u->adj.resize(nodes_.size());
        for (std::uint32_t a = 0; a < nodes_.size(); ++a) {
            auto& adj = u->adj[a];
            adj.reserve(s.out[a].size() + s.in[a].size());
            std::merge(s.out[a].begin(), s.out[a].end(), s.in[a].begin(), s.in[a].end(),
                       std::back_inserter(adj));
            adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
            u->edge_count += adj.size();
        }
        u->edge_count /= 2;
        caches_->undirected = std::move(u);
    }
    return *caches_->undirected;
}

}  // namespace heisttrace
