#include "heisttrace/remote_provider.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <thread>

namespace heisttrace {

TxPage ReplayPageFetcher::fetch(const Address& a, const std::optional<std::string>& cursor) {
    std::size_t call = calls_++;
    if (std::find(throttle_script_.begin(), throttle_script_.end(), call) !=
        throttle_script_.end())
        throw ThrottledError();
    auto it = pages_.find(a);
    if (it == pages_.end()) return {};
    std::size_t index = 0;
    if (cursor) index = std::stoul(*cursor);
    if (index >= it->second.size()) return {};
    TxPage page = it->second[index];
    if (index + 1 < it->second.size() && !page.next_cursor)
        page.next_cursor = std::to_string(index + 1);
    return page;
}

RemoteProvider::RemoteProvider(std::shared_ptr<PageFetcher> fetcher,
                               RemoteProviderConfig config)
    : RemoteProvider(
          std::move(fetcher), config,
          [] {
              return std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now().time_since_epoch())
                  .count();
          },
          [](std::int64_t ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); }) {}

RemoteProvider::RemoteProvider(std::shared_ptr<PageFetcher> fetcher,
                               RemoteProviderConfig config, ClockFn clock, SleepFn sleep)
    : fetcher_(std::move(fetcher)),
      config_(config),
      clock_(std::move(clock)),
      sleep_(std::move(sleep)) {}

void RemoteProvider::rate_limit() {
    if (config_.max_calls_per_sec <= 0) return;
    const auto interval = static_cast<std::int64_t>(1000.0 / config_.max_calls_per_sec);
    std::int64_t now = clock_();
    if (now < next_allowed_ms_) {
        sleeps_.push_back(next_allowed_ms_ - now);
        sleep_(next_allowed_ms_ - now);
        now = next_allowed_ms_;
    }
    next_allowed_ms_ = now + interval;
}

TxPage RemoteProvider::fetch_with_retry(const Address& a,
                                        const std::optional<std::string>& cursor) {
    std::int64_t backoff = config_.initial_backoff_ms;
    for (int attempt = 0;; ++attempt) {
        rate_limit();
        ++total_calls_;
        try {
            return fetcher_->fetch(a, cursor);
        } catch (const ThrottledError&) {
            if (attempt >= config_.max_retries)
                throw Error("remote provider: retries exhausted for " + a.str());
            sleeps_.push_back(backoff);
            sleep_(backoff);
            backoff *= 2;
        }
    }
}

std::vector<Transaction> RemoteProvider::query_txns(const Address& a) {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<Transaction> merged;
    std::optional<std::string> cursor;
    while (true) {
        TxPage page = fetch_with_retry(a, cursor);
        merged.insert(merged.end(), page.txs.begin(), page.txs.end());
        if (!page.next_cursor) break;
        cursor = page.next_cursor;
    }
    // merge pages by block then hash; drop duplicates from page overlap
    std::sort(merged.begin(), merged.end(), [](const Transaction& x, const Transaction& y) {
        return std::tuple(x.block, x.tx_hash, x.dedup_key()) <
               std::tuple(y.block, y.tx_hash, y.dedup_key());
    });
    std::set<Transaction::DedupKey> seen;
    std::vector<Transaction> out;
    out.reserve(merged.size());
    for (auto& t : merged)
        if (seen.insert(t.dedup_key()).second) out.push_back(std::move(t));
    return out;
}

}  // namespace heisttrace
