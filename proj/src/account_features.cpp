#include "heisttrace/account_features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heisttrace/error.hpp"
#include "heisttrace/parallel.hpp"
#include "heisttrace/rng.hpp"

namespace heisttrace {

namespace {

AccountFeatures features_of(const Address& a, const LedgerStore& store,
                            std::optional<std::size_t> max_tx_filter) {
    AccountFeatures f;
    f.address = a;
    const auto& txs = store.transactions_of(a);
    if (txs.empty()) {
        f.present = store.has_address(a);
        return f;
    }
    f.tx_count = txs.size();
    f.lifespan = txs.back().timestamp - txs.front().timestamp;
    f.frequency = f.lifespan == 0
                      ? static_cast<double>(f.tx_count)
                      : static_cast<double>(f.tx_count) / (f.lifespan / 86400.0);

    std::set<Address> in_peers, out_peers;
    std::size_t eth_in = 0, eth_out = 0;
    for (const auto& t : txs) {
        if (t.to == a) in_peers.insert(t.from);
        if (t.from == a) out_peers.insert(t.to);
        const bool ether = t.asset.kind == AssetKind::NativeEther;
        if (t.to == a) {
            if (ether) {
                f.inflow += t.amount;
                ++eth_in;
            } else {
                f.token_inflow[t.asset.key()] += t.amount;
            }
        }
        if (t.from == a) {
            if (ether) {
                f.outflow += t.amount;
                ++eth_out;
            } else {
                f.token_outflow[t.asset.key()] += t.amount;
            }
        }
    }
    f.degree = in_peers.size() + out_peers.size();
    f.net = f.inflow - f.outflow;
    if (eth_in) f.avg_in = f.inflow.to_double() / static_cast<double>(eth_in);
    if (eth_out) f.avg_out = f.outflow.to_double() / static_cast<double>(eth_out);
    if (max_tx_filter && f.tx_count > *max_tx_filter) f.excluded_from_aggregates = true;
    return f;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<AccountFeatures> compute_features(const std::vector<Address>& addresses,
                                              const LedgerStore& store,
                                              std::optional<std::size_t> max_tx_filter,
                                              unsigned threads) {
    std::vector<AccountFeatures> rows(addresses.size());
    parallel_for(addresses.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            rows[i] = features_of(addresses[i], store, max_tx_filter);
    });
    return rows;
}

double fit_power_law(const std::vector<std::int64_t>& degrees) {
    std::vector<std::int64_t> values;
    for (auto d : degrees)
        if (d >= 1) values.push_back(d);
    if (values.size() < 10) throw Error("fit_power_law: need at least 10 nonzero degrees");
    std::sort(values.begin(), values.end());
    if (values.front() == values.back())
        throw Error("fit_power_law: degenerate support (constant degrees)");

    // Complementary cumulative counts at log-spaced integer edges. For a
    // power-law tail p(x) ~ x^-alpha the CCDF falls as x^-(alpha-1), so the
    // fitted slope recovers alpha = 1 - slope.
    const double ratio = std::pow(10.0, 1.0 / 8.0);
    std::vector<double> log_x, log_y;
    const auto n = static_cast<double>(values.size());
    // edges below require enough tail mass; sparse tails are too noisy to
    // weigh equally in the regression
    const std::size_t min_tail = 5;
    double edge = 1.0;
    std::int64_t last_int_edge = 0;
    while (edge <= static_cast<double>(values.back())) {
        auto int_edge = static_cast<std::int64_t>(std::ceil(edge));
        if (int_edge > last_int_edge) {
            last_int_edge = int_edge;
            auto it = std::lower_bound(values.begin(), values.end(), int_edge);
            std::size_t tail = static_cast<std::size_t>(values.end() - it);
            if (tail >= min_tail) {
                log_x.push_back(std::log(static_cast<double>(int_edge)));
                log_y.push_back(std::log(static_cast<double>(tail) / n));
            }
        }
        edge *= ratio;
    }
    if (log_x.size() < 3) throw Error("fit_power_law: degenerate support");

    const double mx = mean_of(log_x), my = mean_of(log_y);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_x.size(); ++i) {
        sxx += (log_x[i] - mx) * (log_x[i] - mx);
        sxy += (log_x[i] - mx) * (log_y[i] - my);
    }
    if (sxx == 0) throw Error("fit_power_law: degenerate support");
    const double slope = sxy / sxx;
    return 1.0 - slope;
}

CohortComparison cohort_compare(const std::vector<AccountFeatures>& a,
                                const std::vector<AccountFeatures>& b) {
    if (a.empty() || b.empty()) throw Error("cohort_compare: cohorts must be non-empty");

    struct Extract {
        const char* name;
        double (*get)(const AccountFeatures&);
    };
    static const Extract kFeatures[] = {
        {"lifespan", [](const AccountFeatures& f) { return static_cast<double>(f.lifespan); }},
        {"degree", [](const AccountFeatures& f) { return static_cast<double>(f.degree); }},
        {"tx_count", [](const AccountFeatures& f) { return static_cast<double>(f.tx_count); }},
        {"frequency", [](const AccountFeatures& f) { return f.frequency; }},
        {"inflow", [](const AccountFeatures& f) { return f.inflow.to_double(); }},
        {"outflow", [](const AccountFeatures& f) { return f.outflow.to_double(); }},
        {"net", [](const AccountFeatures& f) { return f.net.to_double(); }},
        {"avg_in", [](const AccountFeatures& f) { return f.avg_in; }},
        {"avg_out", [](const AccountFeatures& f) { return f.avg_out; }},
    };

    auto usable = [](const AccountFeatures& f) { return f.present && !f.excluded_from_aggregates; };

    CohortComparison cmp;
    for (const auto& f : a)
        if (usable(f)) ++cmp.size_a;
    for (const auto& f : b)
        if (usable(f)) ++cmp.size_b;

    for (const auto& ex : kFeatures) {
        std::vector<double> va, vb;
        for (const auto& f : a)
            if (usable(f)) va.push_back(ex.get(f));
        for (const auto& f : b)
            if (usable(f)) vb.push_back(ex.get(f));

        FeatureSummary s;
        s.median_a = median_of(va);
        s.mean_a = mean_of(va);
        s.median_b = median_of(vb);
        s.mean_b = mean_of(vb);

        // Shared log-spaced bins over the positive range; bin 0 holds values
        // at or below zero so negative nets are not lost.
        double max_pos = 0, min_pos = 0;
        for (const auto& v : {std::cref(va), std::cref(vb)})
            for (double x : v.get())
                if (x > 0) {
                    max_pos = std::max(max_pos, x);
                    min_pos = min_pos == 0 ? x : std::min(min_pos, x);
                }
        if (max_pos > 0) {
            const int bins = 24;
            double lo = std::log10(min_pos), hi = std::log10(max_pos);
            if (hi <= lo) hi = lo + 1e-9;
            for (int i = 0; i <= bins; ++i)
                s.bin_edges.push_back(std::pow(10.0, lo + (hi - lo) * i / bins));
        }
        auto fill = [&](const std::vector<double>& v, std::vector<std::size_t>& hist) {
            hist.assign(s.bin_edges.empty() ? 1 : s.bin_edges.size(), 0);
            for (double x : v) {
                if (x <= 0 || s.bin_edges.empty()) {
                    ++hist[0];
                    continue;
                }
                auto it = std::upper_bound(s.bin_edges.begin(), s.bin_edges.end(), x);
                std::size_t idx = static_cast<std::size_t>(it - s.bin_edges.begin());
                ++hist[std::min(idx, hist.size() - 1)];
            }
        };
        fill(va, s.hist_a);
        fill(vb, s.hist_b);
        cmp.features[ex.name] = std::move(s);
    }
    return cmp;
}

std::vector<Address> sample_reference_cohort(const LedgerStore& store,
                                             const std::set<Address>& exclude,
                                             std::size_t count, std::uint64_t seed) {
    std::vector<Address> pool;
    for (const auto& a : store.addresses())
        if (!exclude.count(a)) pool.push_back(a);
    std::mt19937_64 rng(seed);
    std::vector<Address> out;
    count = std::min(count, pool.size());
    // partial Fisher-Yates over the sorted pool
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

}  // namespace heisttrace
