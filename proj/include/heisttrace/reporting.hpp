#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "heisttrace/ingest.hpp"
#include "heisttrace/types.hpp"

namespace heisttrace {

enum class Bucketing { Year, Month };

std::string_view bucketing_name(Bucketing b);
std::optional<Bucketing> bucketing_from(std::string_view s);

// One bucket/category cell of the exit volume table. Shares are per bucket
// over ether volume; token exits keep native units in separate rows rather
// than inventing exchange rates.
struct ExitRow {
    std::string bucket;  // "2021" or "2021-03" (UTC)
    LabelCategory category = LabelCategory::OtherService;
    double share = 0.0;
    Decimal eth_volume;
};

struct TokenExitRow {
    std::string bucket;
    LabelCategory category = LabelCategory::OtherService;
    AssetKey asset{};
    Decimal volume;  // native units
};

struct ExitBreakdown {
    std::vector<ExitRow> rows;             // sorted by (bucket, category)
    std::vector<TokenExitRow> token_rows;  // sorted by (bucket, category, asset)
    Decimal total_eth_volume;
};

// Volume of transfers out of placement/layering into integration, bucketed
// at the transfer timestamp. Every integration address categorizes through
// the library; non-service labels (Unknown, TokenContract, Heist) report as
// OtherService.
ExitBreakdown exit_breakdown(const std::vector<TraceResult>& results, const LabelLibrary& lib,
                             Bucketing bucketing);

struct CashoutBucket {
    std::int64_t start = 0;
    double volume = 0.0;  // ETH out of P/L into I
    double price = 0.0;   // at bucket end
};

struct CashoutCorrelation {
    std::vector<CashoutBucket> buckets;
    double pearson_r = 0.0;
    int lag = 1;
};

// Correlates per-bucket cash-out volume with the forward price change over
// `lag` buckets. Requires at least three non-empty buckets, price coverage
// at every bucket end, and non-degenerate variance on both sides.
CashoutCorrelation cashout_price_correlation(const TraceResult& result,
                                             const PriceSeries& prices,
                                             std::int64_t bucket_seconds, int lag = 1);

struct CounterfeitFlag {
    Address address{};  // the sender moving the counterfeit asset
    Address contract{};
    TxHash tx_hash{};
};

// Pure filter: every token transfer in the trace whose contract is on the
// counterfeit list, in ledger order.
std::vector<CounterfeitFlag> counterfeit_flags(const TraceResult& result,
                                               const std::set<Address>& counterfeits);

}  // namespace heisttrace
