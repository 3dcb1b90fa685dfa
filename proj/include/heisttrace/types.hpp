#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "heisttrace/decimal.hpp"

namespace heisttrace {

// ---------------------------------------------------------------------------
// Addresses and hashes
// ---------------------------------------------------------------------------

// 20-byte account identifier. Canonical text form is "0x" + 40 lowercase hex
// digits; parsing is case-insensitive, storage and ordering are on raw bytes.
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;

    std::string str() const;
    static Address parse(std::string_view text);
    static std::optional<Address> try_parse(std::string_view text);
};

struct AddressHash {
    std::size_t operator()(const Address& a) const {
        // FNV-1a over the 20 bytes
        std::size_t h = 14695981039346656037ull;
        for (auto b : a.bytes) h = (h ^ b) * 1099511628211ull;
        return h;
    }
};

// 32-byte transaction identifier.
struct TxHash {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const TxHash&) const = default;

    std::string str() const;
    static TxHash parse(std::string_view text);
    static std::optional<TxHash> try_parse(std::string_view text);
};

// ---------------------------------------------------------------------------
// Assets
// ---------------------------------------------------------------------------

enum class AssetKind { NativeEther, Erc20Token, Erc721Token };

std::string_view asset_kind_name(AssetKind k);
std::optional<AssetKind> asset_kind_from(std::string_view s);

// Identity of an asset: kind plus contract (all-zero for native ether).
// Symbol and decimals are metadata and never take part in identity.
struct AssetKey {
    AssetKind kind = AssetKind::NativeEther;
    Address contract{};

    auto operator<=>(const AssetKey&) const = default;

    // "ETH", "erc20:0x…", "erc721:0x…" — used as deterministic map keys in
    // exports.
    std::string display() const;
};

struct AssetRef {
    AssetKind kind = AssetKind::NativeEther;
    std::optional<Address> contract;      // required unless NativeEther
    std::optional<std::string> symbol;
    std::optional<std::uint32_t> decimals;  // <= 36

    static AssetRef ether();
    static AssetRef erc20(Address contract, std::optional<std::string> symbol = {},
                          std::optional<std::uint32_t> decimals = {});
    static AssetRef erc721(Address contract, std::optional<std::string> symbol = {});

    AssetKey key() const;
    void validate() const;  // throws Error on contract/decimals violations
};

// ---------------------------------------------------------------------------
// Transactions
// ---------------------------------------------------------------------------

enum class TxKind { External, Internal, TokenTransfer };

std::string_view tx_kind_name(TxKind k);
std::optional<TxKind> tx_kind_from(std::string_view s);

struct Transaction {
    TxHash tx_hash{};
    TxKind kind = TxKind::External;
    Address from{};
    Address to{};
    AssetRef asset{};
    Decimal amount{};
    std::int64_t timestamp = 0;
    std::int64_t block = 0;
    std::optional<Decimal> gas_cost;

    void validate() const;  // amount >= 0; External/Internal imply native ether

    // Total deterministic ledger order: timestamp, block, hash, then the
    // remaining identity fields so equal-keyed rows still sort stably.
    static bool ledger_less(const Transaction& a, const Transaction& b);

    // Identity for deduplication and equality; asset compared by key, not by
    // symbol/decimals metadata.
    using DedupKey = std::tuple<TxHash, TxKind, Address, Address, AssetKey, Decimal>;
    DedupKey dedup_key() const { return {tx_hash, kind, from, to, asset.key(), amount}; }

    bool operator==(const Transaction& o) const;
};

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

enum class LabelCategory {
    CEX,
    DEX,
    CrossChain,
    Lending,
    Mixing,
    TokenContract,
    OtherService,
    Heist,
    Unknown,
};

std::string_view label_category_name(LabelCategory c);
// Exact names, matched case-insensitively. Anything else is not an error at
// this level; the label loader maps it to OtherService with a warning.
std::optional<LabelCategory> label_category_from(std::string_view s);

// Service categories terminate tracing as integration exits.
bool is_service_category(LabelCategory c);

struct LabelEntry {
    std::string name;
    LabelCategory category = LabelCategory::Unknown;
};

class LabelLibrary {
public:
    LabelLibrary() = default;

    void add(const Address& a, LabelEntry entry) { entries_[a] = std::move(entry); }

    // Absent addresses yield Unknown, never an error.
    const LabelEntry& lookup(const Address& a) const;
    LabelCategory category(const Address& a) const { return lookup(a).category; }
    bool contains(const Address& a) const { return entries_.count(a) != 0; }

    std::size_t size() const { return entries_.size(); }
    const std::map<Address, LabelEntry>& entries() const { return entries_; }

private:
    std::map<Address, LabelEntry> entries_;
};

// ---------------------------------------------------------------------------
// Case definition & tracing parameters
// ---------------------------------------------------------------------------

enum class CaseType { CexHack, DefiExploit, Scam, Other };

std::string_view case_type_name(CaseType t);
std::optional<CaseType> case_type_from(std::string_view s);

// How the dirty-amount map is reduced against the threshold: either any
// single asset must exceed it, or the raw sum across assets (unit-blind).
enum class DirtyPredicate { AnyAssetExceeds, SumAcrossAssets };

struct TraceParams {
    int max_depth = 20;                    // K
    std::size_t max_layer_size = 10000;    // Psi
    Decimal dirty_threshold = Decimal::parse("0.01");  // beta
    std::size_t service_tx_threshold = 1000;           // Omega
    std::int64_t service_window_seconds = 7 * 86400;
    DirtyPredicate dirty_predicate = DirtyPredicate::AnyAssetExceeds;
    // When set, overrides dirty_threshold for the given asset.
    std::map<AssetKey, Decimal> dirty_threshold_per_asset;
    // Follow only outgoing transfers at or after the first tainted inflow.
    // Disable for strict line-by-line replication of the untimed rule.
    bool temporal_causality = true;

    void validate() const;
};

struct CaseSpec {
    std::string name;
    CaseType case_type = CaseType::Other;
    int year = 0;
    std::vector<Address> placement;  // pairwise distinct, non-empty for trace()
    TraceParams params;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Trace result
// ---------------------------------------------------------------------------

enum class TraceTermination {
    Exhausted,       // a layer came up empty
    DepthLimit,      // k exceeded K with a non-empty frontier
    LayerExplosion,  // a layer reached Psi before being processed
};

std::string_view trace_termination_name(TraceTermination t);

struct TraceMetadata {
    int layers_processed = -1;  // highest layer index actually processed
    TraceTermination termination = TraceTermination::Exhausted;
    // Addresses admitted to a layer that was never processed, with depths.
    std::map<Address, int> frontier;
    std::vector<std::size_t> layer_sizes;  // admitted count per layer, from 0
    std::size_t provider_calls = 0;
    bool temporal_causality = true;
    DirtyPredicate dirty_predicate = DirtyPredicate::AnyAssetExceeds;
};

struct TraceResult {
    std::set<Address> placement;
    std::set<Address> layering;
    std::set<Address> integration;
    std::vector<Transaction> transactions;  // canonical ledger order, unique
    std::map<Address, int> depth_of;        // layer of first taint, P at 0
    std::map<Address, std::map<AssetKey, Decimal>> taint_received;
    TraceMetadata metadata;

    // Enforces the structural invariants: P/L/I pairwise disjoint, layering
    // depths within [1, K], every transaction touching P ∪ L ∪ I.
    void validate(int max_depth) const;
};

}  // namespace heisttrace
