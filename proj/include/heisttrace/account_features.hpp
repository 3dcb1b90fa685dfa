#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heisttrace/ledger_store.hpp"
#include "heisttrace/types.hpp"

namespace heisttrace {

// Per-account trading profile. Ether columns cover external + internal
// transfers only; token movement is tallied separately per asset.
struct AccountFeatures {
    Address address{};
    bool present = true;           // false -> zero row for an unseen address
    std::int64_t lifespan = 0;     // seconds between first and last transfer
    std::size_t degree = 0;        // distinct counterparties, per direction
    std::size_t tx_count = 0;
    double frequency = 0.0;        // transfers per day; tx_count when lifespan is 0
    Decimal inflow;                // ETH
    Decimal outflow;               // ETH
    Decimal net;                   // inflow - outflow
    double avg_in = 0.0;           // ETH per incoming transfer
    double avg_out = 0.0;
    std::map<AssetKey, Decimal> token_inflow;
    std::map<AssetKey, Decimal> token_outflow;
    bool excluded_from_aggregates = false;  // tx_count above the cohort filter
};

// One row per address, in the order given. When max_tx_filter is set
// (default 1000), rows with tx_count above it are marked excluded so cohort
// aggregation can skip high-churn service accounts.
std::vector<AccountFeatures> compute_features(const std::vector<Address>& addresses,
                                              const LedgerStore& store,
                                              std::optional<std::size_t> max_tx_filter = 1000,
                                              unsigned threads = 1);

// Least-squares slope of the log-log complementary cumulative histogram over
// log-spaced degree bins >= 1; returns the distribution exponent alpha.
// Throws on fewer than 10 nonzero degrees or degenerate (near-constant)
// support.
double fit_power_law(const std::vector<std::int64_t>& degrees);

struct FeatureSummary {
    double median_a = 0, mean_a = 0;
    double median_b = 0, mean_b = 0;
    std::vector<double> bin_edges;     // shared log-spaced edges
    std::vector<std::size_t> hist_a;   // per bin; index 0 counts values <= 0
    std::vector<std::size_t> hist_b;
};

struct CohortComparison {
    // keyed by feature name: lifespan, degree, tx_count, frequency, inflow,
    // outflow, net, avg_in, avg_out
    std::map<std::string, FeatureSummary> features;
    std::size_t size_a = 0, size_b = 0;  // rows aggregated after filtering
};

// Deterministic side-by-side cohort summary. Rows marked excluded (or
// absent) are skipped; both histograms share bin edges.
CohortComparison cohort_compare(const std::vector<AccountFeatures>& a,
                                const std::vector<AccountFeatures>& b);

// Uniform reference-cohort sample from the store's addresses, excluding the
// given set; deterministic for a fixed seed.
std::vector<Address> sample_reference_cohort(const LedgerStore& store,
                                             const std::set<Address>& exclude,
                                             std::size_t count, std::uint64_t seed);

}  // namespace heisttrace
