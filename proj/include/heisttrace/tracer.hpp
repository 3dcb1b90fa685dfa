#pragma once

#include <map>
#include <set>
#include <unordered_set>
#include <vector>

#include "heisttrace/ledger_store.hpp"
#include "heisttrace/types.hpp"

namespace heisttrace {

using AddressSet = std::unordered_set<Address, AddressHash>;

// Per-asset sum of `owner`'s incoming amounts whose sender is tainted. The
// record alone does not identify its owner, so the owner is explicit.
std::map<AssetKey, Decimal> dirty_amount(const Address& owner,
                                         const std::vector<Transaction>& txs,
                                         const AddressSet& tainted);

// Forward taint expansion from the placement set.
//
// Layer semantics, fixed here so results are reproducible under any
// parallel schedule:
//  - The tainted set used by a layer is the snapshot of every address ever
//    admitted up to and including that layer; admissions are monotone and
//    in-layer reclassifications never shrink it.
//  - Placement (layer 0) is dirty by definition and skips the threshold
//    test; its funds arrive from the victim, which is not tainted.
//  - An address whose dirty amount stays at or below the threshold is
//    dropped: none of its transactions are kept and it never reaches the
//    layering set.
//  - A dirty address with more transactions than the service threshold is
//    classified as an unknown service: it moves to the integration set and
//    only its transactions with tainted counterparties inside the service
//    window (anchored at its first tainted-counterparty transfer) are kept.
//  - Otherwise the address stays in its layer, its whole record is kept,
//    and its outgoing transfers admit unlabeled recipients to the next
//    layer; recipients with service labels become integration exits.
//  - A layer that reaches the size cap (or lies beyond the depth cap) is
//    never processed; its members are reported as metadata frontier, not as
//    layering.
//
// Addresses within a layer are decided in canonical address order; provider
// queries may be issued concurrently (fetch_threads > 1).
TraceResult trace(const CaseSpec& spec, TxProvider& provider, const LabelLibrary& lib,
                  unsigned fetch_threads = 1);

struct PrecisionPoint {
    int depth = 0;
    double precision = 0.0;
    std::size_t count = 0;  // flagged layering addresses at depth <= this
};

// Precision of flagged layering addresses against a ground-truth set,
// cumulative by depth (or a single overall row when by_depth is false).
// Empty layering yields an empty list.
std::vector<PrecisionPoint> evaluate_precision(const TraceResult& result,
                                               const std::set<Address>& ground_truth,
                                               bool by_depth = true);

}  // namespace heisttrace
