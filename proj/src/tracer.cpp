#include "heisttrace/tracer.hpp"

#include <algorithm>
#include <optional>

#include "heisttrace/error.hpp"
#include "heisttrace/parallel.hpp"

namespace heisttrace {

namespace {

// Threshold for one asset, honoring per-asset overrides.
const Decimal& threshold_for(const TraceParams& params, const AssetKey& asset) {
    auto it = params.dirty_threshold_per_asset.find(asset);
    return it == params.dirty_threshold_per_asset.end() ? params.dirty_threshold : it->second;
}

bool passes_dirty_test(const std::map<AssetKey, Decimal>& dirty, const TraceParams& params) {
    if (params.dirty_predicate == DirtyPredicate::AnyAssetExceeds) {
        for (const auto& [asset, sum] : dirty)
            if (sum > threshold_for(params, asset)) return true;
        return false;
    }
    Decimal total;
    for (const auto& [asset, sum] : dirty) total += sum;
    return total > params.dirty_threshold;
}

// First transfer timestamp between owner and any tainted counterparty;
// nullopt when the record has none.
std::optional<std::int64_t> first_tainted_contact(const Address& owner,
                                                  const std::vector<Transaction>& txs,
                                                  const AddressSet& tainted) {
    std::optional<std::int64_t> anchor;
    for (const auto& t : txs) {
        const Address& counterparty = t.from == owner ? t.to : t.from;
        if (!tainted.count(counterparty)) continue;
        if (!anchor || t.timestamp < *anchor) anchor = t.timestamp;
    }
    return anchor;
}

// Keep a service's transfers with tainted counterparties inside the window
// that opens at its first tainted contact.
std::vector<Transaction> filter_service_window(const Address& owner,
                                               const std::vector<Transaction>& txs,
                                               const AddressSet& tainted,
                                               std::int64_t window_seconds) {
    std::vector<Transaction> kept;
    auto anchor = first_tainted_contact(owner, txs, tainted);
    if (!anchor) return kept;
    for (const auto& t : txs) {
        const Address& counterparty = t.from == owner ? t.to : t.from;
        if (!tainted.count(counterparty)) continue;
        if (t.timestamp < *anchor || t.timestamp > *anchor + window_seconds) continue;
        kept.push_back(t);
    }
    return kept;
}

// First tainted inflow timestamp, the causality gate for following outflows.
std::optional<std::int64_t> first_tainted_inflow(const Address& owner,
                                                 const std::vector<Transaction>& txs,
                                                 const AddressSet& tainted) {
    std::optional<std::int64_t> anchor;
    for (const auto& t : txs) {
        if (t.to != owner || !tainted.count(t.from)) continue;
        if (!anchor || t.timestamp < *anchor) anchor = t.timestamp;
    }
    return anchor;
}

}  // namespace

std::map<AssetKey, Decimal> dirty_amount(const Address& owner,
                                         const std::vector<Transaction>& txs,
                                         const AddressSet& tainted) {
    std::map<AssetKey, Decimal> sums;
    for (const auto& t : txs) {
        if (t.to != owner) continue;
        if (!tainted.count(t.from)) continue;
        sums[t.asset.key()] += t.amount;
    }
    return sums;
}

TraceResult trace(const CaseSpec& spec, TxProvider& provider, const LabelLibrary& lib,
                  unsigned fetch_threads) {
    spec.validate();
    if (spec.placement.empty()) throw Error("case '" + spec.name + "': placement is empty");
    const TraceParams& params = spec.params;

    TraceResult result;
    result.metadata.temporal_causality = params.temporal_causality;
    result.metadata.dirty_predicate = params.dirty_predicate;
    result.placement.insert(spec.placement.begin(), spec.placement.end());

    AddressSet seen;  // every address ever admitted to a layer; never shrinks
    std::vector<Address> current(result.placement.begin(), result.placement.end());
    for (const auto& a : current) {
        seen.insert(a);
        result.depth_of[a] = 0;
    }
    result.metadata.layer_sizes.push_back(current.size());

    std::set<Transaction, decltype(&Transaction::ledger_less)> kept_txs(
        &Transaction::ledger_less);

    // Admit a recipient carrying a service label into the integration set.
    auto admit_service = [&](const Address& r, int depth) {
        if (result.placement.count(r)) return;
        if (result.integration.insert(r).second) result.depth_of[r] = depth;
    };

    int k = 0;
    while (k <= params.max_depth && !current.empty() &&
           current.size() < params.max_layer_size) {
        // Phase 1: fetch records, possibly concurrently; order is by index so
        // the outcome is schedule-independent.
        std::vector<std::vector<Transaction>> records(current.size());
        parallel_for(current.size(), fetch_threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    records[i] = provider.query_txns(current[i]);
                } catch (const std::exception& e) {
                    throw Error("provider failed for " + current[i].str() + ": " + e.what());
                }
            }
        });
        result.metadata.provider_calls += current.size();

        // Phase 2: classify sequentially in canonical order against the
        // layer-start tainted snapshot.
        const AddressSet tainted = seen;
        std::set<Address> next_layer;
        for (std::size_t i = 0; i < current.size(); ++i) {
            const Address& a = current[i];
            const auto& record = records[i];
            auto dirty = dirty_amount(a, record, tainted);

            if (k > 0 && !passes_dirty_test(dirty, params)) continue;  // dropped

            if (k > 0 && record.size() > params.service_tx_threshold) {
                // Unknown service: reclassify and keep only the windowed
                // transfers with tainted counterparties.
                result.integration.insert(a);
                result.taint_received[a] = std::move(dirty);
                auto kept =
                    filter_service_window(a, record, tainted, params.service_window_seconds);
                kept_txs.insert(kept.begin(), kept.end());
                continue;
            }

            if (k > 0) {
                result.layering.insert(a);
                result.taint_received[a] = std::move(dirty);
            }

            std::optional<std::int64_t> causal_floor;
            if (params.temporal_causality)
                causal_floor = first_tainted_inflow(a, record, tainted);
            for (const auto& t : record) {
                if (t.from != a || t.to == a) continue;
                if (causal_floor && t.timestamp < *causal_floor) continue;
                const Address& r = t.to;
                LabelCategory cat = lib.category(r);
                if (is_service_category(cat)) {
                    admit_service(r, k + 1);
                } else if (cat == LabelCategory::TokenContract) {
                    // Native sends into a token contract are an exit; token
                    // rows already name the economic recipient, so a token
                    // transfer "to" a contract stays unexpanded.
                    if (t.kind != TxKind::TokenTransfer) admit_service(r, k + 1);
                } else if (cat == LabelCategory::Unknown) {
                    if (!seen.count(r)) {
                        seen.insert(r);
                        next_layer.insert(r);
                        result.depth_of[r] = k + 1;
                    }
                }
                // Heist-labeled recipients are familiar but not services:
                // neither expanded nor treated as exits.
            }
            kept_txs.insert(record.begin(), record.end());
        }

        current.assign(next_layer.begin(), next_layer.end());
        if (!current.empty()) result.metadata.layer_sizes.push_back(current.size());
        result.metadata.layers_processed = k;
        ++k;
    }

    // Termination: a non-empty unprocessed layer is frontier, never layering.
    if (current.empty()) {
        result.metadata.termination = TraceTermination::Exhausted;
    } else {
        result.metadata.termination = current.size() >= params.max_layer_size
                                          ? TraceTermination::LayerExplosion
                                          : TraceTermination::DepthLimit;
        for (const auto& a : current) {
            if (result.placement.count(a)) continue;  // oversized placement layer
            result.metadata.frontier[a] = result.depth_of.at(a);
            result.depth_of.erase(a);
            result.taint_received.erase(a);
        }
    }
    // Drop admitted-but-dropped addresses (below threshold) from depth_of.
    for (auto it = result.depth_of.begin(); it != result.depth_of.end();) {
        const Address& a = it->first;
        if (result.placement.count(a) || result.layering.count(a) ||
            result.integration.count(a)) {
            ++it;
        } else {
            it = result.depth_of.erase(it);
        }
    }

    result.transactions.assign(kept_txs.begin(), kept_txs.end());

    // Taint received by labeled services, reconstructed from kept transfers
    // out of placement/layering (their own records were never queried;
    // services classified through the transaction-count test already carry
    // the sums computed at classification).
    std::set<Address> label_services;
    for (const auto& s : result.integration)
        if (!result.taint_received.count(s)) label_services.insert(s);
    for (const auto& t : result.transactions) {
        if (!label_services.count(t.to)) continue;
        if (!result.placement.count(t.from) && !result.layering.count(t.from)) continue;
        result.taint_received[t.to][t.asset.key()] += t.amount;
    }

    result.validate(params.max_depth);
    return result;
}

std::vector<PrecisionPoint> evaluate_precision(const TraceResult& result,
                                               const std::set<Address>& ground_truth,
                                               bool by_depth) {
    if (ground_truth.empty()) throw Error("evaluate_precision: ground truth is empty");
    if (result.layering.empty()) return {};

    int max_depth = 0;
    for (const auto& a : result.layering) max_depth = std::max(max_depth, result.depth_of.at(a));

    std::vector<PrecisionPoint> out;
    auto point_at = [&](int d) {
        PrecisionPoint p;
        p.depth = d;
        std::size_t hits = 0;
        for (const auto& a : result.layering) {
            if (result.depth_of.at(a) > d) continue;
            ++p.count;
            if (ground_truth.count(a)) ++hits;
        }
        p.precision = p.count == 0 ? 0.0 : static_cast<double>(hits) / p.count;
        return p;
    };
    if (by_depth) {
        for (int d = 1; d <= max_depth; ++d) out.push_back(point_at(d));
    } else {
        out.push_back(point_at(max_depth));
    }
    return out;
}

}  // namespace heisttrace
