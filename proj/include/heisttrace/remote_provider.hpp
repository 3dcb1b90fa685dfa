#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "heisttrace/error.hpp"
#include "heisttrace/ledger_store.hpp"

namespace heisttrace {

// One page of a paged account-history response.
struct TxPage {
    std::vector<Transaction> txs;
    std::optional<std::string> next_cursor;  // absent on the last page
};

// Transient throttle signal from a fetch backend; the provider backs off and
// retries.
struct ThrottledError : Error {
    ThrottledError() : Error("throttled") {}
};

// Backend contract: fetch one page of an address's history. Implementations
// must be deterministic for a fixed dataset.
class PageFetcher {
public:
    virtual ~PageFetcher() = default;
    virtual TxPage fetch(const Address& a, const std::optional<std::string>& cursor) = 0;
};

// Offline backend replaying pre-recorded pages; `throttle_script` makes the
// n-th fetch call (0-based) fail with ThrottledError.
class ReplayPageFetcher : public PageFetcher {
public:
    void add_page(const Address& a, TxPage page) { pages_[a].push_back(std::move(page)); }
    void throttle_on_calls(std::vector<std::size_t> calls) { throttle_script_ = std::move(calls); }
    std::size_t calls() const { return calls_; }

    TxPage fetch(const Address& a, const std::optional<std::string>& cursor) override;

private:
    std::map<Address, std::vector<TxPage>> pages_;
    std::vector<std::size_t> throttle_script_;
    std::size_t calls_ = 0;
};

struct RemoteProviderConfig {
    double max_calls_per_sec = 5.0;
    int max_retries = 6;
    std::int64_t initial_backoff_ms = 100;  // doubles per retry
};

// Paged remote adapter with a per-call rate budget and exponential backoff on
// throttling. Pages are merged by (block, tx_hash) and deduplicated, so
// overlapping pages are safe. Clock and sleep are injectable so tests run on
// a virtual timeline. Thread-safe.
class RemoteProvider : public TxProvider {
public:
    using ClockFn = std::function<std::int64_t()>;  // milliseconds
    using SleepFn = std::function<void(std::int64_t)>;

    RemoteProvider(std::shared_ptr<PageFetcher> fetcher, RemoteProviderConfig config);
    RemoteProvider(std::shared_ptr<PageFetcher> fetcher, RemoteProviderConfig config,
                   ClockFn clock, SleepFn sleep);

    std::vector<Transaction> query_txns(const Address& a) override;

    std::size_t total_calls() const { return total_calls_; }
    const std::vector<std::int64_t>& sleeps() const { return sleeps_; }

private:
    TxPage fetch_with_retry(const Address& a, const std::optional<std::string>& cursor);
    void rate_limit();

    std::shared_ptr<PageFetcher> fetcher_;
    RemoteProviderConfig config_;
    ClockFn clock_;
    SleepFn sleep_;
    std::mutex mu_;
    std::int64_t next_allowed_ms_ = 0;
    std::size_t total_calls_ = 0;
    std::vector<std::int64_t> sleeps_;
};

}  // namespace heisttrace
