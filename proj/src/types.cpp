#include "heisttrace/types.hpp"

#include <algorithm>
#include <cctype>

#include "heisttrace/error.hpp"

namespace heisttrace {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

template <std::size_t N>
std::optional<std::array<std::uint8_t, N>> parse_hex(std::string_view text) {
    if (text.size() != 2 + 2 * N) return std::nullopt;
    if (text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        int hi = hex_value(text[2 + 2 * i]);
        int lo = hex_value(text[3 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

template <std::size_t N>
std::string render_hex(const std::array<std::uint8_t, N>& bytes) {
    std::string s;
    s.reserve(2 + 2 * N);
    s += "0x";
    for (auto b : bytes) {
        s += kHexDigits[b >> 4];
        s += kHexDigits[b & 0xf];
    }
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace

// ----------------------------- Address / TxHash -----------------------------

std::string Address::str() const { return render_hex(bytes); }

std::optional<Address> Address::try_parse(std::string_view text) {
    auto b = parse_hex<20>(text);
    if (!b) return std::nullopt;
    return Address{*b};
}

Address Address::parse(std::string_view text) {
    auto a = try_parse(text);
    if (!a) throw Error("malformed address '" + std::string(text) + "'");
    return *a;
}

std::string TxHash::str() const { return render_hex(bytes); }

std::optional<TxHash> TxHash::try_parse(std::string_view text) {
    auto b = parse_hex<32>(text);
    if (!b) return std::nullopt;
    return TxHash{*b};
}

TxHash TxHash::parse(std::string_view text) {
    auto h = try_parse(text);
    if (!h) throw Error("malformed transaction hash '" + std::string(text) + "'");
    return *h;
}

// --------------------------------- Assets ----------------------------------

std::string_view asset_kind_name(AssetKind k) {
    switch (k) {
        case AssetKind::NativeEther: return "eth";
        case AssetKind::Erc20Token: return "erc20";
        case AssetKind::Erc721Token: return "erc721";
    }
    return "eth";
}

std::optional<AssetKind> asset_kind_from(std::string_view s) {
    if (iequals(s, "eth")) return AssetKind::NativeEther;
    if (iequals(s, "erc20")) return AssetKind::Erc20Token;
    if (iequals(s, "erc721")) return AssetKind::Erc721Token;
    return std::nullopt;
}

std::string AssetKey::display() const {
    if (kind == AssetKind::NativeEther) return "ETH";
    return std::string(asset_kind_name(kind)) + ":" + contract.str();
}

AssetRef AssetRef::ether() {
    AssetRef a;
    a.kind = AssetKind::NativeEther;
    a.decimals = 18;
    return a;
}

AssetRef AssetRef::erc20(Address contract, std::optional<std::string> symbol,
                         std::optional<std::uint32_t> decimals) {
    AssetRef a;
    a.kind = AssetKind::Erc20Token;
    a.contract = contract;
    a.symbol = std::move(symbol);
    a.decimals = decimals;
    a.validate();
    return a;
}

AssetRef AssetRef::erc721(Address contract, std::optional<std::string> symbol) {
    AssetRef a;
    a.kind = AssetKind::Erc721Token;
    a.contract = contract;
    a.symbol = std::move(symbol);
    a.decimals = 0;
    return a;
}

AssetKey AssetRef::key() const {
    AssetKey k;
    k.kind = kind;
    if (contract) k.contract = *contract;
    return k;
}

void AssetRef::validate() const {
    if (kind == AssetKind::NativeEther) {
        if (contract) throw Error("native ether carries no contract address");
    } else if (!contract) {
        throw Error("token asset requires a contract address");
    }
    if (decimals && *decimals > 36) throw Error("asset decimals exceed 36");
}

// ------------------------------- Transactions -------------------------------

std::string_view tx_kind_name(TxKind k) {
    switch (k) {
        case TxKind::External: return "external";
        case TxKind::Internal: return "internal";
        case TxKind::TokenTransfer: return "token";
    }
    return "external";
}

std::optional<TxKind> tx_kind_from(std::string_view s) {
    if (iequals(s, "external")) return TxKind::External;
    if (iequals(s, "internal")) return TxKind::Internal;
    if (iequals(s, "token")) return TxKind::TokenTransfer;
    return std::nullopt;
}

void Transaction::validate() const {
    asset.validate();
    if (amount.is_negative()) throw Error("transaction amount must be non-negative");
    if (gas_cost && gas_cost->is_negative()) throw Error("gas cost must be non-negative");
    if (block < 0) throw Error("block number must be non-negative");
    if ((kind == TxKind::External || kind == TxKind::Internal) &&
        asset.kind != AssetKind::NativeEther) {
        throw Error("external/internal transactions must move native ether");
    }
    if (kind == TxKind::TokenTransfer && asset.kind == AssetKind::NativeEther) {
        throw Error("token transfers must reference a token asset");
    }
}

bool Transaction::ledger_less(const Transaction& a, const Transaction& b) {
    auto ka = std::tuple(a.timestamp, a.block, a.tx_hash, a.kind, a.from, a.to,
                         a.asset.key(), a.amount);
    auto kb = std::tuple(b.timestamp, b.block, b.tx_hash, b.kind, b.from, b.to,
                         b.asset.key(), b.amount);
    return ka < kb;
}

bool Transaction::operator==(const Transaction& o) const {
    return dedup_key() == o.dedup_key() && timestamp == o.timestamp && block == o.block &&
           gas_cost == o.gas_cost;
}

// --------------------------------- Labels -----------------------------------

std::string_view label_category_name(LabelCategory c) {
    switch (c) {
        case LabelCategory::CEX: return "CEX";
        case LabelCategory::DEX: return "DEX";
        case LabelCategory::CrossChain: return "CrossChain";
        case LabelCategory::Lending: return "Lending";
        case LabelCategory::Mixing: return "Mixing";
        case LabelCategory::TokenContract: return "TokenContract";
        case LabelCategory::OtherService: return "OtherService";
        case LabelCategory::Heist: return "Heist";
        case LabelCategory::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<LabelCategory> label_category_from(std::string_view s) {
    for (auto c : {LabelCategory::CEX, LabelCategory::DEX, LabelCategory::CrossChain,
                   LabelCategory::Lending, LabelCategory::Mixing, LabelCategory::TokenContract,
                   LabelCategory::OtherService, LabelCategory::Heist, LabelCategory::Unknown}) {
        if (iequals(s, label_category_name(c))) return c;
    }
    return std::nullopt;
}

bool is_service_category(LabelCategory c) {
    switch (c) {
        case LabelCategory::CEX:
        case LabelCategory::DEX:
        case LabelCategory::CrossChain:
        case LabelCategory::Lending:
        case LabelCategory::Mixing:
        case LabelCategory::OtherService:
            return true;
        default:
            return false;
    }
}

const LabelEntry& LabelLibrary::lookup(const Address& a) const {
    static const LabelEntry kUnknown{"", LabelCategory::Unknown};
    auto it = entries_.find(a);
    return it == entries_.end() ? kUnknown : it->second;
}

// ------------------------------ Case & params -------------------------------

std::string_view case_type_name(CaseType t) {
    switch (t) {
        case CaseType::CexHack: return "CexHack";
        case CaseType::DefiExploit: return "DefiExploit";
        case CaseType::Scam: return "Scam";
        case CaseType::Other: return "Other";
    }
    return "Other";
}

std::optional<CaseType> case_type_from(std::string_view s) {
    for (auto t : {CaseType::CexHack, CaseType::DefiExploit, CaseType::Scam, CaseType::Other})
        if (iequals(s, case_type_name(t))) return t;
    return std::nullopt;
}

void TraceParams::validate() const {
    if (max_depth < 1) throw Error("max_depth must be >= 1");
    if (max_layer_size < 1) throw Error("max_layer_size must be >= 1");
    if (dirty_threshold.is_negative()) throw Error("dirty_threshold must be non-negative");
    if (service_tx_threshold < 1) throw Error("service_tx_threshold must be >= 1");
    if (service_window_seconds < 0) throw Error("service_window must be non-negative");
}

void CaseSpec::validate() const {
    params.validate();
    std::set<Address> uniq(placement.begin(), placement.end());
    if (uniq.size() != placement.size())
        throw Error("case '" + name + "': placement addresses must be pairwise distinct");
}

// -------------------------------- TraceResult -------------------------------

std::string_view trace_termination_name(TraceTermination t) {
    switch (t) {
        case TraceTermination::Exhausted: return "exhausted";
        case TraceTermination::DepthLimit: return "depth_limit";
        case TraceTermination::LayerExplosion: return "layer_explosion";
    }
    return "exhausted";
}

void TraceResult::validate(int max_depth) const {
    for (const auto& a : layering) {
        if (placement.count(a)) throw Error("trace result: layering overlaps placement");
        if (integration.count(a)) throw Error("trace result: layering overlaps integration");
        auto it = depth_of.find(a);
        if (it == depth_of.end() || it->second < 1 || it->second > max_depth)
            throw Error("trace result: layering depth outside [1, K] for " + a.str());
    }
    for (const auto& a : integration)
        if (placement.count(a)) throw Error("trace result: integration overlaps placement");
    for (const auto& t : transactions) {
        bool touches = placement.count(t.from) || placement.count(t.to) ||
                       layering.count(t.from) || layering.count(t.to) ||
                       integration.count(t.from) || integration.count(t.to);
        if (!touches)
            throw Error("trace result: transaction " + t.tx_hash.str() +
                        " touches no traced address");
    }
}

}  // namespace heisttrace
