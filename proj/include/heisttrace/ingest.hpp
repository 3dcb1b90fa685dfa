#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "heisttrace/ledger_store.hpp"
#include "heisttrace/types.hpp"

namespace heisttrace {

enum class LedgerFormat { CsvV1, JsonLines };

// Fiat price curve for one asset; timestamps strictly increasing.
struct PriceSeries {
    AssetKey asset;
    std::vector<std::pair<std::int64_t, double>> points;

    // Latest price at or before ts; nullopt before the first point.
    std::optional<double> price_at(std::int64_t ts) const;
};

// CsvV1 columns, in order:
//   tx_hash,kind,from,to,asset_kind,contract,amount,decimals,timestamp,block,gas_cost
// Amounts containing a '.' are display units; bare integers are base units
// scaled by the decimals column (native ether defaults to 18). JsonLines
// carries the same fields as one object per line.
LedgerStore load_transactions(const std::filesystem::path& path, LedgerFormat format);
LedgerStore load_transactions(std::istream& in, LedgerFormat format,
                              const std::string& source_name);

// Writes every transaction of the store in ledger order; reloading the file
// yields an identical store.
void export_transactions_csv(const LedgerStore& store, std::ostream& out);
void export_transactions_csv(const std::vector<Transaction>& txs, std::ostream& out);
void export_transactions_csv(const LedgerStore& store, const std::filesystem::path& path);

struct LabelLoadResult {
    LabelLibrary library;
    std::vector<std::string> warnings;  // one per unrecognized category string
};

// CSV columns: address,name,category. Unknown category strings map to
// OtherService with a warning.
LabelLoadResult load_labels(const std::filesystem::path& path);
LabelLoadResult load_labels(std::istream& in, const std::string& source_name);

// CSV columns: timestamp,price. Duplicated timestamps keep the last row;
// output is sorted strictly increasing. Negative prices are an error.
PriceSeries load_price_series(const std::filesystem::path& path);
PriceSeries load_price_series(std::istream& in, const std::string& source_name);

// One address per line; blank lines skipped; result deduplicated.
std::set<Address> load_counterfeit_list(const std::filesystem::path& path);
std::set<Address> load_counterfeit_list(std::istream& in, const std::string& source_name);

}  // namespace heisttrace
