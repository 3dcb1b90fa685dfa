#include "heisttrace/reporting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "heisttrace/error.hpp"

namespace heisttrace {

namespace {

std::string bucket_key(std::int64_t ts, Bucketing bucketing) {
    using namespace std::chrono;
    const auto days_point = floor<days>(sys_seconds(seconds(ts)));
    const year_month_day ymd(days_point);
    char buf[16];
    if (bucketing == Bucketing::Year) {
        std::snprintf(buf, sizeof buf, "%04d", static_cast<int>(ymd.year()));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()));
    }
    return buf;
}

LabelCategory exit_category(const LabelLibrary& lib, const Address& a) {
    LabelCategory c = lib.category(a);
    return is_service_category(c) ? c : LabelCategory::OtherService;
}

bool is_exit_transfer(const TraceResult& r, const Transaction& t) {
    return r.integration.count(t.to) &&
           (r.placement.count(t.from) || r.layering.count(t.from));
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::string_view bucketing_name(Bucketing b) {
    return b == Bucketing::Year ? "year" : "month";
}

std::optional<Bucketing> bucketing_from(std::string_view s) {
    if (s == "year") return Bucketing::Year;
    if (s == "month") return Bucketing::Month;
    return std::nullopt;
}

ExitBreakdown exit_breakdown(const std::vector<TraceResult>& results, const LabelLibrary& lib,
                             Bucketing bucketing) {
    std::map<std::pair<std::string, LabelCategory>, Decimal> eth;
    std::map<std::tuple<std::string, LabelCategory, AssetKey>, Decimal> tokens;

    ExitBreakdown out;
    for (const auto& r : results) {
        for (const auto& t : r.transactions) {
            if (!is_exit_transfer(r, t)) continue;
            const auto bucket = bucket_key(t.timestamp, bucketing);
            const auto cat = exit_category(lib, t.to);
            if (t.asset.kind == AssetKind::NativeEther) {
                eth[{bucket, cat}] += t.amount;
                out.total_eth_volume += t.amount;
            } else {
                tokens[{bucket, cat, t.asset.key()}] += t.amount;
            }
        }
    }

    std::map<std::string, Decimal> bucket_totals;
    for (const auto& [key, volume] : eth) bucket_totals[key.first] += volume;

    for (const auto& [key, volume] : eth) {
        ExitRow row;
        row.bucket = key.first;
        row.category = key.second;
        row.eth_volume = volume;
        const Decimal& total = bucket_totals[key.first];
        row.share = total.is_zero() ? 0.0 : volume.to_double() / total.to_double();
        out.rows.push_back(std::move(row));
    }
    for (const auto& [key, volume] : tokens) {
        TokenExitRow row;
        row.bucket = std::get<0>(key);
        row.category = std::get<1>(key);
        row.asset = std::get<2>(key);
        row.volume = volume;
        out.token_rows.push_back(std::move(row));
    }
    return out;
}

CashoutCorrelation cashout_price_correlation(const TraceResult& result,
                                             const PriceSeries& prices,
                                             std::int64_t bucket_seconds, int lag) {
    if (bucket_seconds <= 0) throw Error("cashout correlation: bucket must be positive");
    if (lag < 1) throw Error("cashout correlation: lag must be >= 1");

    std::vector<const Transaction*> exits;
    for (const auto& t : result.transactions)
        if (is_exit_transfer(result, t) && t.asset.kind == AssetKind::NativeEther)
            exits.push_back(&t);
    if (exits.empty()) throw Error("cashout correlation: no ether exit transfers");

    const std::int64_t first = exits.front()->timestamp;
    const std::int64_t last = exits.back()->timestamp;
    const std::int64_t t0 = first - ((first % bucket_seconds) + bucket_seconds) % bucket_seconds;
    const auto bucket_count = static_cast<std::size_t>((last - t0) / bucket_seconds + 1);

    std::vector<Decimal> volumes(bucket_count);
    for (const auto* t : exits)
        volumes[static_cast<std::size_t>((t->timestamp - t0) / bucket_seconds)] += t->amount;

    CashoutCorrelation out;
    out.lag = lag;
    std::size_t non_empty = 0;
    for (std::size_t i = 0; i < bucket_count; ++i) {
        CashoutBucket b;
        b.start = t0 + static_cast<std::int64_t>(i) * bucket_seconds;
        b.volume = volumes[i].to_double();
        auto price = prices.price_at(b.start + bucket_seconds);
        if (!price)
            throw Error("cashout correlation: price series does not cover bucket ending at " +
                        std::to_string(b.start + bucket_seconds));
        b.price = *price;
        if (!volumes[i].is_zero()) ++non_empty;
        out.buckets.push_back(b);
    }
    if (non_empty < 3) throw Error("cashout correlation: needs at least 3 non-empty buckets");

    std::vector<double> x, y;
    for (std::size_t i = 0; i + lag < out.buckets.size(); ++i) {
        x.push_back(out.buckets[i].volume);
        y.push_back(out.buckets[i + lag].price - out.buckets[i].price);
    }
    if (x.size() < 2) throw Error("cashout correlation: insufficient buckets for lag");

    const double mx = mean(x), my = mean(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0)
        throw Error("cashout correlation: zero variance, correlation undefined");
    out.pearson_r = sxy / std::sqrt(sxx * syy);
    return out;
}

std::vector<CounterfeitFlag> counterfeit_flags(const TraceResult& result,
                                               const std::set<Address>& counterfeits) {
    std::vector<CounterfeitFlag> out;
    for (const auto& t : result.transactions) {
        if (t.kind != TxKind::TokenTransfer || !t.asset.contract) continue;
        if (!counterfeits.count(*t.asset.contract)) continue;
        out.push_back({t.from, *t.asset.contract, t.tx_hash});
    }
    return out;
}

}  // namespace heisttrace
