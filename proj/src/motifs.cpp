#include "heisttrace/motifs.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_map>
#include <vector>

#include "heisttrace/error.hpp"
#include "heisttrace/parallel.hpp"

namespace heisttrace {

namespace {

// Triad edge mask bits for ordered nodes (a, b, c):
//   1: a->b   2: b->a   4: a->c   8: c->a   16: b->c   32: c->b

// Representative masks, one per isomorphism class, indexed by motif number
// (3..15). Classes follow the standard directed-triad codes.
struct TriadRep {
    int motif;
    const char* code;
    unsigned mask;
};

constexpr TriadRep kTriadReps[] = {
    {3, "030T", 1 | 32 | 4},        // a->b, c->b, a->c
    {4, "030C", 2 | 32 | 4},        // b->a, c->b, a->c (cycle)
    {5, "120D", 2 | 16 | 4 | 8},    // b->a, b->c, a<->c
    {6, "120U", 1 | 32 | 4 | 8},    // a->b, c->b, a<->c
    {7, "120C", 1 | 16 | 4 | 8},    // a->b, b->c, a<->c
    {8, "210", 1 | 16 | 32 | 4 | 8},  // a->b, b<->c, a<->c
    {9, "300", 63},
    {10, "021D", 2 | 16},           // b->a, b->c (out-star at b)
    {11, "021C", 1 | 16},           // a->b, b->c (path)
    {12, "021U", 1 | 32},           // a->b, c->b (in-star at b)
    {13, "111D", 1 | 2 | 32},       // a<->b, c->b
    {14, "111U", 1 | 2 | 16},       // a<->b, b->c
    {15, "201", 1 | 2 | 16 | 32},   // a<->b, b<->c
};

// Remap a mask under a permutation of (a,b,c). perm[i] = where position i
// moves to.
unsigned permute_mask(unsigned mask, const std::array<int, 3>& perm) {
    // edge list as (from,to) position pairs for each bit
    static constexpr std::pair<int, int> kBitEdges[6] = {
        {0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}};
    unsigned out = 0;
    for (int bit = 0; bit < 6; ++bit) {
        if (!(mask & (1u << bit))) continue;
        int f = perm[kBitEdges[bit].first];
        int t = perm[kBitEdges[bit].second];
        for (int b2 = 0; b2 < 6; ++b2) {
            if (kBitEdges[b2].first == f && kBitEdges[b2].second == t) {
                out |= 1u << b2;
                break;
            }
        }
    }
    return out;
}

unsigned canonical_mask(unsigned mask) {
    static constexpr std::array<int, 3> kPerms[6] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                     {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    unsigned best = 63;
    for (const auto& p : kPerms) best = std::min(best, permute_mask(mask, p));
    return best;
}

// mask -> motif number (3..15), 0 for disconnected classes (003/012/102).
const std::array<int, 64>& triad_table() {
    static const std::array<int, 64> table = [] {
        std::array<int, 64> t{};
        std::unordered_map<unsigned, int> canon_to_motif;
        for (const auto& rep : kTriadReps) canon_to_motif[canonical_mask(rep.mask)] = rep.motif;
        for (unsigned mask = 0; mask < 64; ++mask) {
            auto it = canon_to_motif.find(canonical_mask(mask));
            t[mask] = it == canon_to_motif.end() ? 0 : it->second;
        }
        return t;
    }();
    return table;
}

}  // namespace

std::string_view motif_triad_code(int motif_index) {
    for (const auto& rep : kTriadReps)
        if (rep.motif == motif_index) return rep.code;
    return "";
}

MotifCensus motif_census(const FlowGraph& g, const MotifCensusOptions& opts) {
    const auto& simple = g.simple();
    const auto& und = g.undirected();
    const std::size_t n = g.node_count();
    MotifCensus census;

    // Work estimates up front; refuse graphs that would blow past the caps.
    std::uint64_t triad_work = 0, bifan_work = 0;
    for (std::size_t u = 0; u < n; ++u) {
        auto d = static_cast<std::uint64_t>(und.adj[u].size());
        auto od = static_cast<std::uint64_t>(simple.out[u].size());
        triad_work += d * (d - 1) / 2;
        bifan_work += od * (od - 1) / 2;
    }
    if (triad_work > opts.max_triad_work)
        throw Error("motif census: triad work " + std::to_string(triad_work) +
                    " exceeds cap; graph too hub-heavy for exact counting");
    if (bifan_work > opts.max_bifan_work)
        throw Error("motif census: bi-fan work " + std::to_string(bifan_work) +
                    " exceeds cap; graph too hub-heavy for exact counting");
    census.bifan_candidates_work = bifan_work;

    // Dyads on the simple digraph.
    for (std::uint32_t u = 0; u < n; ++u) {
        for (auto v : simple.out[u]) {
            const bool mutual = simple.has_edge(v, u);
            if (u < v) {
                if (mutual) ++census.counts[2];
                else ++census.counts[1];
            } else if (!mutual) {
                ++census.counts[1];
            }
        }
    }

    // Connected triads. Every connected triple has at least one node
    // adjacent to both others (a center). A triple is counted at its
    // smallest center: the center w of a path counts it unconditionally;
    // in a triangle every node is a center, so the smallest id counts it.
    const auto& table = triad_table();
    auto mask_of = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) -> unsigned {
        unsigned m = 0;
        if (simple.has_edge(a, b)) m |= 1;
        if (simple.has_edge(b, a)) m |= 2;
        if (simple.has_edge(a, c)) m |= 4;
        if (simple.has_edge(c, a)) m |= 8;
        if (simple.has_edge(b, c)) m |= 16;
        if (simple.has_edge(c, b)) m |= 32;
        return m;
    };

    const unsigned threads = std::max(1u, opts.threads);
    std::vector<std::array<std::uint64_t, 17>> partial(threads);
    {
        std::atomic<unsigned> next_worker{0};
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            auto& local = partial[next_worker.fetch_add(1)];
            for (std::size_t wi = begin; wi < end; ++wi) {
                auto w = static_cast<std::uint32_t>(wi);
                const auto& nbrs = und.adj[w];
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                        std::uint32_t u = nbrs[i], v = nbrs[j];
                        const bool linked_uv = und.has_edge(u, v);
                        // in a triangle all three are centers; count once
                        if (linked_uv && (w > u || w > v)) continue;
                        int motif = table[mask_of(u, v, w)];
                        if (motif) ++local[motif];
                    }
                }
            }
        });
    }
    for (const auto& local : partial)
        for (int m = 3; m <= 15; ++m) census.counts[m] += local[m];

    // Bi-fans: for every sink pair (w1<w2), the number of common sources s
    // gives C(s,2) bi-fans. Sources can never coincide with sinks because
    // self-loops are absent from the simple view.
    {
        std::unordered_map<std::uint64_t, std::uint32_t> pair_counts;
        pair_counts.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(bifan_work, 1u << 22)));
        for (std::uint32_t u = 0; u < n; ++u) {
            const auto& outs = simple.out[u];
            for (std::size_t i = 0; i < outs.size(); ++i)
                for (std::size_t j = i + 1; j < outs.size(); ++j) {
                    std::uint64_t key =
                        (static_cast<std::uint64_t>(outs[i]) << 32) | outs[j];
                    ++pair_counts[key];
                }
        }
        for (const auto& [key, cnt] : pair_counts)
            census.counts[16] += static_cast<std::uint64_t>(cnt) * (cnt - 1) / 2;
    }

    census.connected_dyads = census.counts[1] + census.counts[2];
    for (int m = 3; m <= 15; ++m) census.connected_triads += census.counts[m];

    // Fractions use per-arity denominators: dyads within dyads, triads
    // within triads, the bi-fan on its own.
    if (census.connected_dyads) {
        census.fractions[1] =
            static_cast<double>(census.counts[1]) / static_cast<double>(census.connected_dyads);
        census.fractions[2] =
            static_cast<double>(census.counts[2]) / static_cast<double>(census.connected_dyads);
    }
    if (census.connected_triads) {
        for (int m = 3; m <= 15; ++m)
            census.fractions[m] = static_cast<double>(census.counts[m]) /
                                  static_cast<double>(census.connected_triads);
    }
    census.fractions[16] = census.counts[16] > 0 ? 1.0 : 0.0;
    return census;
}

}  // namespace heisttrace
