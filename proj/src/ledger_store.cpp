#include "heisttrace/ledger_store.hpp"

#include <algorithm>
#include <set>

namespace heisttrace {

LedgerStore LedgerStore::build(std::vector<Transaction> rows) {
    LedgerStore store;
    std::set<Transaction::DedupKey> seen;
    store.all_.reserve(rows.size());
    for (auto& t : rows) {
        if (!seen.insert(t.dedup_key()).second) continue;
        store.assets_.insert(t.asset.key());
        store.all_.push_back(std::move(t));
    }
    std::sort(store.all_.begin(), store.all_.end(), Transaction::ledger_less);
    for (const auto& t : store.all_) {
        store.by_address_[t.from].push_back(t);
        if (t.to != t.from) store.by_address_[t.to].push_back(t);
    }
    // per-address lists inherit the global sort; self-loops appear once
    return store;
}

const std::vector<Transaction>& LedgerStore::transactions_of(const Address& a) const {
    static const std::vector<Transaction> kEmpty;
    auto it = by_address_.find(a);
    return it == by_address_.end() ? kEmpty : it->second;
}

std::vector<Address> LedgerStore::addresses() const {
    std::vector<Address> out;
    out.reserve(by_address_.size());
    for (const auto& [a, _] : by_address_) out.push_back(a);
    return out;
}

}  // namespace heisttrace
