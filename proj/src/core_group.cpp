#include "heisttrace/core_group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "heisttrace/error.hpp"

namespace heisttrace {

namespace {

// Binary min-heap over node ids with positional index for key updates.
// Ordering is (key, id) so equal keys resolve to the canonical node order.
class IndexedMinHeap {
public:
    IndexedMinHeap(const std::vector<double>& keys) : keys_(keys) {
        heap_.resize(keys.size());
        pos_.resize(keys.size());
        for (std::uint32_t i = 0; i < keys.size(); ++i) {
            heap_[i] = i;
            pos_[i] = i;
        }
        for (std::size_t i = keys.size(); i-- > 0;) sift_down(i);
    }

    bool empty() const { return heap_.empty(); }

    std::uint32_t pop_min() {
        std::uint32_t top = heap_[0];
        swap_at(0, heap_.size() - 1);
        heap_.pop_back();
        pos_[top] = UINT32_MAX;
        if (!heap_.empty()) sift_down(0);
        return top;
    }

    bool contains(std::uint32_t id) const { return pos_[id] != UINT32_MAX; }

    // Key changed externally; restore heap order at the node's position.
    void update(std::uint32_t id) {
        std::size_t i = pos_[id];
        sift_up(i);
        sift_down(pos_[id]);
    }

private:
    bool less(std::uint32_t a, std::uint32_t b) const {
        if (keys_[a] != keys_[b]) return keys_[a] < keys_[b];
        return a < b;
    }
    void swap_at(std::size_t i, std::size_t j) {
        std::swap(heap_[i], heap_[j]);
        pos_[heap_[i]] = static_cast<std::uint32_t>(i);
        pos_[heap_[j]] = static_cast<std::uint32_t>(j);
    }
    void sift_up(std::size_t i) {
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (!less(heap_[i], heap_[parent])) break;
            swap_at(i, parent);
            i = parent;
        }
    }
    void sift_down(std::size_t i) {
        const std::size_t n = heap_.size();
        while (true) {
            std::size_t l = 2 * i + 1, r = l + 1, best = i;
            if (l < n && less(heap_[l], heap_[best])) best = l;
            if (r < n && less(heap_[r], heap_[best])) best = r;
            if (best == i) return;
            swap_at(i, best);
            i = best;
        }
    }

    const std::vector<double>& keys_;
    std::vector<std::uint32_t> heap_;
    std::vector<std::uint32_t> pos_;
};

}  // namespace

std::string_view edge_weighting_name(EdgeWeighting w) {
    switch (w) {
        case EdgeWeighting::Unit: return "unit";
        case EdgeWeighting::LogTxCount: return "logcount";
        case EdgeWeighting::Zero: return "zero";
    }
    return "unit";
}

std::optional<EdgeWeighting> edge_weighting_from(std::string_view s) {
    if (s == "unit") return EdgeWeighting::Unit;
    if (s == "logcount") return EdgeWeighting::LogTxCount;
    if (s == "zero") return EdgeWeighting::Zero;
    return std::nullopt;
}

BipartiteGraph::BipartiteGraph(std::vector<Address> senders, std::vector<Address> recipients,
                               std::vector<Edge> edges, std::vector<double> node_susp)
    : senders_(std::move(senders)),
      recipients_(std::move(recipients)),
      edges_(std::move(edges)),
      node_susp_(std::move(node_susp)) {
    if (node_susp_.size() != total_nodes())
        throw Error("bipartite graph: node suspiciousness size mismatch");
    for (const auto& e : edges_) {
        if (e.u >= senders_.size() || e.v < senders_.size() || e.v >= total_nodes())
            throw Error("bipartite graph: edge endpoints out of side ranges");
        if (e.weight < 0) throw Error("bipartite graph: negative edge weight");
    }
}

BipartiteGraph BipartiteGraph::from_transactions(std::span<const Transaction> txs,
                                                 const LabelLibrary& lib, double alpha,
                                                 EdgeWeighting weighting) {
    std::set<Address> sender_set, recipient_set;
    for (const auto& t : txs) {
        sender_set.insert(t.from);
        recipient_set.insert(t.to);
    }
    std::vector<Address> senders(sender_set.begin(), sender_set.end());
    std::vector<Address> recipients(recipient_set.begin(), recipient_set.end());

    std::map<Address, std::uint32_t> u_index, v_index;
    for (std::uint32_t i = 0; i < senders.size(); ++i) u_index[senders[i]] = i;
    for (std::uint32_t i = 0; i < recipients.size(); ++i)
        v_index[recipients[i]] = static_cast<std::uint32_t>(senders.size()) + i;

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_counts;
    for (const auto& t : txs) ++pair_counts[{u_index.at(t.from), v_index.at(t.to)}];

    std::vector<Edge> edges;
    edges.reserve(pair_counts.size());
    for (const auto& [uv, count] : pair_counts) {
        Edge e;
        e.u = uv.first;
        e.v = uv.second;
        e.tx_count = count;
        switch (weighting) {
            case EdgeWeighting::Unit: e.weight = 1.0; break;
            case EdgeWeighting::LogTxCount: e.weight = std::log(1.0 + count); break;
            case EdgeWeighting::Zero: e.weight = 0.0; break;
        }
        edges.push_back(e);
    }

    std::vector<double> susp;
    susp.reserve(senders.size() + recipients.size());
    for (const auto& a : senders)
        susp.push_back(lib.category(a) == LabelCategory::Heist ? alpha : 0.0);
    for (const auto& a : recipients)
        susp.push_back(lib.category(a) == LabelCategory::Heist ? alpha : 0.0);

    return BipartiteGraph(std::move(senders), std::move(recipients), std::move(edges),
                          std::move(susp));
}

double suspiciousness(std::span<const std::uint32_t> subset, const BipartiteGraph& g) {
    if (subset.empty()) throw Error("suspiciousness: empty node subset");
    std::vector<char> in(g.total_nodes(), 0);
    for (auto id : subset) {
        if (id >= g.total_nodes()) throw Error("suspiciousness: node id out of range");
        if (in[id]) throw Error("suspiciousness: duplicate node id");
        in[id] = 1;
    }
    double f = 0.0;
    for (auto id : subset) f += g.node_susp()[id];
    for (const auto& e : g.edges())
        if (in[e.u] && in[e.v]) f += e.weight;
    return f / static_cast<double>(subset.size());
}

CoreSubgraph extract_core(const BipartiteGraph& g) {
    const std::size_t n = g.total_nodes();
    if (n == 0) throw Error("extract_core: graph has no nodes");

    // CSR adjacency over the collapsed edges.
    std::vector<std::uint32_t> degree(n, 0);
    for (const auto& e : g.edges()) {
        ++degree[e.u];
        ++degree[e.v];
    }
    std::vector<std::size_t> offset(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + degree[i];
    std::vector<std::uint32_t> nbr(offset[n]);
    std::vector<double> nbr_weight(offset[n]);
    {
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (const auto& e : g.edges()) {
            nbr[fill[e.u]] = e.v;
            nbr_weight[fill[e.u]++] = e.weight;
            nbr[fill[e.v]] = e.u;
            nbr_weight[fill[e.v]++] = e.weight;
        }
    }

    // Marginal contribution of each node to f; f removes exactly this much
    // when the node goes.
    std::vector<double> key(g.node_susp().begin(), g.node_susp().end());
    double f = 0.0;
    for (const auto& e : g.edges()) {
        key[e.u] += e.weight;
        key[e.v] += e.weight;
        f += e.weight;
    }
    for (double s : g.node_susp()) f += s;

    CoreSubgraph core;
    core.initial_g = f / static_cast<double>(n);
    core.peel_trace.reserve(n);

    IndexedMinHeap heap(key);
    double best_g = core.initial_g;
    std::size_t best_t = 0;  // number of removals in the best state

    std::size_t alive = n;
    while (!heap.empty()) {
        std::uint32_t victim = heap.pop_min();
        ++core.stats.heap_pops;
        f -= key[victim];
        --alive;
        for (std::size_t i = offset[victim]; i < offset[victim + 1]; ++i) {
            std::uint32_t other = nbr[i];
            if (!heap.contains(other)) continue;
            key[other] -= nbr_weight[i];
            heap.update(other);
            ++core.stats.key_updates;
        }
        PeelStep step;
        step.removed = victim;
        if (alive > 0) {
            double gv = f / static_cast<double>(alive);
            step.g_after = gv;
            if (gv > best_g) {
                best_g = gv;
                best_t = n - alive;
            }
        }
        core.peel_trace.push_back(step);
    }

    core.score = best_g;
    std::vector<char> removed(n, 0);
    for (std::size_t t = 0; t < best_t; ++t) removed[core.peel_trace[t].removed] = 1;
    for (std::uint32_t id = 0; id < n; ++id) {
        if (removed[id]) continue;
        if (g.is_sender(id))
            core.kept_senders.push_back(g.node_address(id));
        else
            core.kept_recipients.push_back(g.node_address(id));
    }
    return core;
}

}  // namespace heisttrace
