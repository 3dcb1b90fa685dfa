#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "heisttrace/types.hpp"

namespace heisttrace {

// In-memory transaction index. Immutable after build; every transaction is
// reachable under both its from and to address, in total deterministic
// ledger order (timestamp, block, hash, ...).
class LedgerStore {
public:
    LedgerStore() = default;

    // Deduplicates rows on (hash, kind, from, to, asset, amount); first
    // occurrence wins. Sorts each per-address list canonically.
    static LedgerStore build(std::vector<Transaction> rows);

    const std::vector<Transaction>& transactions_of(const Address& a) const;
    bool has_address(const Address& a) const { return by_address_.count(a) != 0; }

    // All unique transactions in ledger order.
    const std::vector<Transaction>& all() const { return all_; }
    const std::set<AssetKey>& assets() const { return assets_; }
    std::vector<Address> addresses() const;  // sorted
    std::size_t size() const { return all_.size(); }

    bool operator==(const LedgerStore& o) const {
        return by_address_ == o.by_address_;
    }

private:
    std::map<Address, std::vector<Transaction>> by_address_;
    std::vector<Transaction> all_;
    std::set<AssetKey> assets_;
};

// Contract for transaction lookup during tracing. Implementations must be
// deterministic for a fixed underlying dataset and safe for concurrent
// query_txns calls.
class TxProvider {
public:
    virtual ~TxProvider() = default;
    virtual std::vector<Transaction> query_txns(const Address& a) = 0;
};

// Required provider: serves straight from an immutable LedgerStore.
class LocalStoreProvider : public TxProvider {
public:
    explicit LocalStoreProvider(const LedgerStore& store) : store_(store) {}
    std::vector<Transaction> query_txns(const Address& a) override {
        return store_.transactions_of(a);
    }

private:
    const LedgerStore& store_;
};

}  // namespace heisttrace
