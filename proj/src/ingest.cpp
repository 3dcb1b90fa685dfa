#include "heisttrace/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>

#include "heisttrace/csv.hpp"
#include "heisttrace/error.hpp"

namespace heisttrace {

namespace {

std::ifstream open_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return in;
}

std::int64_t parse_int64(std::string_view s, const char* what, std::size_t line) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'", line);
    return v;
}

// Display-vs-base-unit rule: a '.' means display units as written; a bare
// integer is base units and needs a scale — the decimals column, or 18 for
// native ether. Token rows with bare integers and no decimals are an error
// (the contract's scale is unknown).
Decimal parse_amount(std::string_view text, std::optional<std::uint32_t> decimals,
                     const AssetRef& asset, std::size_t line) {
    auto d = Decimal::try_parse(text);
    if (!d) throw ParseError("malformed amount '" + std::string(text) + "'", line);
    if (text.find('.') != std::string_view::npos) return *d;
    std::optional<std::uint32_t> scale = decimals;
    if (!scale && asset.kind == AssetKind::NativeEther) scale = 18;
    if (!scale) {
        throw ParseError("integer base-unit amount for " + asset.key().display() +
                             " needs a decimals column (unknown asset contract decimals)",
                         line);
    }
    return Decimal::from_units(d->units(), *scale);
}

Transaction row_to_tx(const TxHash& hash, std::string_view kind_s, std::string_view from_s,
                      std::string_view to_s, std::string_view asset_kind_s,
                      std::optional<std::string_view> contract_s, std::string_view amount_s,
                      std::optional<std::string_view> decimals_s, std::string_view ts_s,
                      std::string_view block_s, std::optional<std::string_view> gas_s,
                      std::size_t line) {
    Transaction t;
    t.tx_hash = hash;
    auto kind = tx_kind_from(kind_s);
    if (!kind) throw ParseError("unknown transaction kind '" + std::string(kind_s) + "'", line);
    t.kind = *kind;
    auto from = Address::try_parse(from_s);
    auto to = Address::try_parse(to_s);
    if (!from) throw ParseError("malformed from address '" + std::string(from_s) + "'", line);
    if (!to) throw ParseError("malformed to address '" + std::string(to_s) + "'", line);
    t.from = *from;
    t.to = *to;

    auto akind = asset_kind_from(asset_kind_s);
    if (!akind)
        throw ParseError("unknown asset kind '" + std::string(asset_kind_s) + "'", line);
    std::optional<std::uint32_t> decimals;
    if (decimals_s) {
        auto v = parse_int64(*decimals_s, "decimals", line);
        if (v < 0 || v > 36) throw ParseError("decimals out of range", line);
        decimals = static_cast<std::uint32_t>(v);
    }
    if (*akind == AssetKind::NativeEther) {
        t.asset = AssetRef::ether();
    } else {
        if (!contract_s)
            throw ParseError("token row missing contract address", line);
        auto contract = Address::try_parse(*contract_s);
        if (!contract)
            throw ParseError("malformed contract address '" + std::string(*contract_s) + "'",
                             line);
        t.asset = *akind == AssetKind::Erc20Token
                      ? AssetRef::erc20(*contract, std::nullopt, decimals)
                      : AssetRef::erc721(*contract);
    }

    t.amount = parse_amount(amount_s, decimals, t.asset, line);
    t.timestamp = parse_int64(ts_s, "timestamp", line);
    t.block = parse_int64(block_s, "block", line);
    if (gas_s) t.gas_cost = parse_amount(*gas_s, 18, AssetRef::ether(), line);
    try {
        t.validate();
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
    return t;
}

std::vector<Transaction> read_csv_rows(std::istream& in, const std::string& source) {
    CsvReader reader(in, source);
    std::vector<Transaction> rows;
    while (reader.next()) {
        auto hash_s = reader.get("tx_hash");
        auto hash = TxHash::try_parse(hash_s);
        if (!hash)
            throw ParseError("malformed tx_hash '" + std::string(hash_s) + "'",
                             reader.line_no());
        rows.push_back(row_to_tx(*hash, reader.get("kind"), reader.get("from"),
                                 reader.get("to"), reader.get("asset_kind"),
                                 reader.get_optional("contract"), reader.get("amount"),
                                 reader.get_optional("decimals"), reader.get("timestamp"),
                                 reader.get("block"), reader.get_optional("gas_cost"),
                                 reader.line_no()));
    }
    return rows;
}

std::vector<Transaction> read_jsonl_rows(std::istream& in, const std::string& source) {
    std::vector<Transaction> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source + ": " + e.what(), line_no);
        }
        auto str_of = [&](const char* key) -> std::string {
            if (!j.contains(key) || !j[key].is_string())
                throw ParseError(std::string("missing or non-string field '") + key + "'",
                                 line_no);
            return j[key].get<std::string>();
        };
        auto opt_str = [&](const char* key) -> std::optional<std::string> {
            if (!j.contains(key) || j[key].is_null()) return std::nullopt;
            if (j[key].is_string()) return j[key].get<std::string>();
            throw ParseError(std::string("field '") + key + "' must be a string", line_no);
        };
        auto int_field = [&](const char* key) -> std::string {
            if (!j.contains(key) || !j[key].is_number_integer())
                throw ParseError(std::string("missing or non-integer field '") + key + "'",
                                 line_no);
            return std::to_string(j[key].get<std::int64_t>());
        };
        std::optional<std::string> decimals;
        if (j.contains("decimals") && !j["decimals"].is_null()) {
            if (!j["decimals"].is_number_integer())
                throw ParseError("field 'decimals' must be an integer", line_no);
            decimals = std::to_string(j["decimals"].get<std::int64_t>());
        }
        auto hash_str = str_of("tx_hash");
        auto hash = TxHash::try_parse(hash_str);
        if (!hash) throw ParseError("malformed tx_hash '" + hash_str + "'", line_no);
        auto contract = opt_str("contract");
        auto gas = opt_str("gas_cost");
        auto to_view = [](const std::optional<std::string>& s) {
            return s ? std::optional<std::string_view>(*s) : std::nullopt;
        };
        rows.push_back(row_to_tx(*hash, str_of("kind"), str_of("from"), str_of("to"),
                                 str_of("asset_kind"), to_view(contract), str_of("amount"),
                                 to_view(decimals), int_field("timestamp"), int_field("block"),
                                 to_view(gas), line_no));
    }
    return rows;
}

}  // namespace

std::optional<double> PriceSeries::price_at(std::int64_t ts) const {
    auto it = std::upper_bound(points.begin(), points.end(), ts,
                               [](std::int64_t t, const auto& p) { return t < p.first; });
    if (it == points.begin()) return std::nullopt;
    return std::prev(it)->second;
}

LedgerStore load_transactions(std::istream& in, LedgerFormat format,
                              const std::string& source_name) {
    auto rows = format == LedgerFormat::CsvV1 ? read_csv_rows(in, source_name)
                                              : read_jsonl_rows(in, source_name);
    return LedgerStore::build(std::move(rows));
}

LedgerStore load_transactions(const std::filesystem::path& path, LedgerFormat format) {
    auto in = open_file(path);
    return load_transactions(in, format, path.filename().string());
}

void export_transactions_csv(const std::vector<Transaction>& txs, std::ostream& out) {
    CsvWriter w(out);
    w.write_row({"tx_hash", "kind", "from", "to", "asset_kind", "contract", "amount",
                 "decimals", "timestamp", "block", "gas_cost"});
    for (const auto& t : txs) {
        std::string contract = t.asset.contract ? t.asset.contract->str() : "";
        std::string decimals = t.asset.decimals ? std::to_string(*t.asset.decimals) : "";
        std::string gas = t.gas_cost ? t.gas_cost->to_csv_string() : "";
        w.write_row({t.tx_hash.str(), std::string(tx_kind_name(t.kind)), t.from.str(),
                     t.to.str(), std::string(asset_kind_name(t.asset.kind)), contract,
                     t.amount.to_csv_string(), decimals, std::to_string(t.timestamp),
                     std::to_string(t.block), gas});
    }
}

void export_transactions_csv(const LedgerStore& store, std::ostream& out) {
    export_transactions_csv(store.all(), out);
}

void export_transactions_csv(const LedgerStore& store, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    export_transactions_csv(store, out);
}

LabelLoadResult load_labels(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    LabelLoadResult result;
    while (reader.next()) {
        auto addr_s = reader.get("address");
        auto addr = Address::try_parse(addr_s);
        if (!addr)
            throw ParseError("malformed address '" + std::string(addr_s) + "'",
                             reader.line_no());
        LabelEntry entry;
        entry.name = std::string(reader.get("name"));
        auto cat_s = reader.get("category");
        auto cat = label_category_from(cat_s);
        if (!cat) {
            result.warnings.push_back("unrecognized category '" + std::string(cat_s) +
                                      "' for " + addr->str() + ", mapped to OtherService");
            cat = LabelCategory::OtherService;
        }
        entry.category = *cat;
        result.library.add(*addr, std::move(entry));
    }
    return result;
}

LabelLoadResult load_labels(const std::filesystem::path& path) {
    auto in = open_file(path);
    return load_labels(in, path.filename().string());
}

PriceSeries load_price_series(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    std::map<std::int64_t, double> by_ts;  // last row wins per timestamp
    while (reader.next()) {
        auto ts = parse_int64(reader.get("timestamp"), "timestamp", reader.line_no());
        auto price_s = reader.get("price");
        double price = 0;
        try {
            price = std::stod(std::string(price_s));
        } catch (const std::exception&) {
            throw ParseError("malformed price '" + std::string(price_s) + "'",
                             reader.line_no());
        }
        if (price < 0) throw ParseError("negative price", reader.line_no());
        by_ts[ts] = price;
    }
    PriceSeries series;
    series.asset = AssetKey{};  // native ether by default
    series.points.assign(by_ts.begin(), by_ts.end());
    return series;
}

PriceSeries load_price_series(const std::filesystem::path& path) {
    auto in = open_file(path);
    return load_price_series(in, path.filename().string());
}

std::set<Address> load_counterfeit_list(std::istream& in, const std::string& source_name) {
    std::set<Address> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // trim surrounding spaces
        auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t");
        auto text = line.substr(b, e - b + 1);
        auto addr = Address::try_parse(text);
        if (!addr)
            throw ParseError(source_name + ": malformed address '" + text + "'", line_no);
        out.insert(*addr);
    }
    return out;
}

std::set<Address> load_counterfeit_list(const std::filesystem::path& path) {
    auto in = open_file(path);
    return load_counterfeit_list(in, path.filename().string());
}

}  // namespace heisttrace
