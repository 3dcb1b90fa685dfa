#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "heisttrace/core_group.hpp"
#include "heisttrace/flow_graph.hpp"
#include "heisttrace/ledger_store.hpp"
#include "heisttrace/types.hpp"

namespace heisttrace::testing {

// Synthetic identifiers: index in the low 4 bytes so canonical address
// order equals index order.
Address mk_addr(std::uint32_t i);
TxHash mk_hash(std::uint32_t i);

Transaction mk_eth_tx(std::uint32_t hash_id, const Address& from, const Address& to,
                      const std::string& amount, std::int64_t ts, std::int64_t block);

Transaction mk_token_tx(std::uint32_t hash_id, const Address& from, const Address& to,
                        const Address& contract, const std::string& amount, std::int64_t ts,
                        std::int64_t block);

// ---------------------------------------------------------------------------
// Hand-executed walkthrough case: 12 addresses, 20 transfers, every tracer
// branch (threshold skip, service classification, window filter, labeled
// exit, layer-size termination).
// ---------------------------------------------------------------------------
struct WalkthroughFixture {
    CaseSpec spec;
    LedgerStore store;
    LabelLibrary lib;

    Address p0, a1, a2, b1, c1, c2, c3, c4, d1, e, svc1, svc2;

    // frozen expectations, derived by hand
    std::set<Address> expect_layering;
    std::set<Address> expect_integration;
    std::set<std::uint32_t> expect_tx_ids;  // hash indices kept in T
    std::map<Address, int> expect_depths;   // over P, L, I
    std::map<Address, int> expect_frontier;
};

WalkthroughFixture make_walkthrough();

// ---------------------------------------------------------------------------
// Randomized planted laundering topology: 3-8 layers with splits and merges,
// one unlabeled exchange node busier than the service threshold, one labeled
// service exit, dust distractors below the dirty threshold, and clean
// background flow.
// ---------------------------------------------------------------------------
struct PlantedCase {
    CaseSpec spec;
    LedgerStore store;
    LabelLibrary lib;
    std::set<Address> expect_layering;
    std::set<Address> expect_integration;
};

PlantedCase make_planted_case(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Random graphs
// ---------------------------------------------------------------------------

// Directed multigraph: `edges` rows sampled uniformly over ordered pairs,
// duplicates and self-loops included, so multidigraph paths get exercised.
FlowGraph random_multidigraph(std::uint64_t seed, std::uint32_t nodes, std::size_t edges);

// Simple digraph without self-loops (deduplicated).
FlowGraph random_simple_digraph(std::uint64_t seed, std::uint32_t nodes, std::size_t edges);

// Random bipartite instance with small-integer edge weights and optional
// heist-alpha node scores; exact in doubles so heap and re-scan peels agree
// bitwise.
BipartiteGraph random_bipartite(std::uint64_t seed, std::uint32_t senders,
                                std::uint32_t recipients, double edge_prob, double alpha);

// Planted-block instance: an a x b complete unit-weight block plus `extras`
// background nodes; optionally one pendant edge into the block and alpha
// scores on block nodes.
BipartiteGraph planted_block(std::uint32_t a, std::uint32_t b, std::uint32_t extras,
                             bool pendant, double alpha);

// Degree sample from a floored Pareto tail with the given exponent.
std::vector<std::int64_t> power_law_sample(std::uint64_t seed, std::size_t n, double alpha);

}  // namespace heisttrace::testing
