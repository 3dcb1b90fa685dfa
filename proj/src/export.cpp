#include "heisttrace/export.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "heisttrace/csv.hpp"
#include "heisttrace/error.hpp"
#include "heisttrace/ingest.hpp"

namespace heisttrace {

namespace {

json address_list(const std::set<Address>& addrs) {
    json arr = json::array();
    for (const auto& a : addrs) arr.push_back(a.str());
    return arr;
}

json depth_map(const std::map<Address, int>& m) {
    json obj = json::object();
    for (const auto& [a, d] : m) obj[a.str()] = d;
    return obj;
}

std::set<Address> address_set_from(const json& arr, const char* what) {
    std::set<Address> out;
    if (!arr.is_array()) throw Error(std::string("trace json: ") + what + " must be an array");
    for (const auto& item : arr) out.insert(Address::parse(item.get<std::string>()));
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

json trace_result_to_json(const CaseSpec& spec, const TraceResult& result) {
    json j;
    j["case"] = {{"name", spec.name},
                 {"type", std::string(case_type_name(spec.case_type))},
                 {"year", spec.year}};
    j["params"] = {
        {"max_depth", spec.params.max_depth},
        {"max_layer_size", spec.params.max_layer_size},
        {"dirty_threshold", spec.params.dirty_threshold.to_string()},
        {"service_tx_threshold", spec.params.service_tx_threshold},
        {"service_window_seconds", spec.params.service_window_seconds},
        {"temporal_causality", spec.params.temporal_causality},
        {"dirty_predicate", spec.params.dirty_predicate == DirtyPredicate::AnyAssetExceeds
                                ? "any_asset"
                                : "sum_across_assets"},
    };
    j["placement"] = address_list(result.placement);
    j["layering"] = address_list(result.layering);
    j["integration"] = address_list(result.integration);
    j["depth_of"] = depth_map(result.depth_of);

    json taint = json::object();
    for (const auto& [a, per_asset] : result.taint_received) {
        json row = json::object();
        for (const auto& [asset, amount] : per_asset) row[asset.display()] = amount.to_string();
        taint[a.str()] = std::move(row);
    }
    j["taint_received"] = std::move(taint);

    const auto& meta = result.metadata;
    j["metadata"] = {
        {"layers_processed", meta.layers_processed},
        {"termination", std::string(trace_termination_name(meta.termination))},
        {"frontier", depth_map(meta.frontier)},
        {"layer_sizes", meta.layer_sizes},
        {"provider_calls", meta.provider_calls},
        {"temporal_causality", meta.temporal_causality},
        {"transaction_count", result.transactions.size()},
    };
    return j;
}

void write_trace_result(const std::filesystem::path& dir, const CaseSpec& spec,
                        const TraceResult& result) {
    std::filesystem::create_directories(dir);
    write_json(trace_result_to_json(spec, result), dir / "trace.json");
    auto out = open_out(dir / "transactions.csv");
    export_transactions_csv(result.transactions, out);
}

LoadedTrace load_trace_result(const std::filesystem::path& dir) {
    LoadedTrace loaded;
    json j = read_json(dir / "trace.json");

    loaded.spec.name = j.at("case").at("name").get<std::string>();
    if (auto t = case_type_from(j.at("case").at("type").get<std::string>()))
        loaded.spec.case_type = *t;
    loaded.spec.year = j.at("case").at("year").get<int>();

    const auto& p = j.at("params");
    loaded.spec.params.max_depth = p.at("max_depth").get<int>();
    loaded.spec.params.max_layer_size = p.at("max_layer_size").get<std::size_t>();
    loaded.spec.params.dirty_threshold =
        Decimal::parse(p.at("dirty_threshold").get<std::string>());
    loaded.spec.params.service_tx_threshold = p.at("service_tx_threshold").get<std::size_t>();
    loaded.spec.params.service_window_seconds =
        p.at("service_window_seconds").get<std::int64_t>();
    loaded.spec.params.temporal_causality = p.at("temporal_causality").get<bool>();

    auto& r = loaded.result;
    r.placement = address_set_from(j.at("placement"), "placement");
    r.layering = address_set_from(j.at("layering"), "layering");
    r.integration = address_set_from(j.at("integration"), "integration");
    for (const auto& [key, value] : j.at("depth_of").items())
        r.depth_of[Address::parse(key)] = value.get<int>();
    loaded.spec.placement.assign(r.placement.begin(), r.placement.end());

    const auto& meta = j.at("metadata");
    r.metadata.layers_processed = meta.at("layers_processed").get<int>();
    r.metadata.provider_calls = meta.at("provider_calls").get<std::size_t>();
    r.metadata.temporal_causality = meta.at("temporal_causality").get<bool>();
    r.metadata.layer_sizes = meta.at("layer_sizes").get<std::vector<std::size_t>>();
    for (const auto& [key, value] : meta.at("frontier").items())
        r.metadata.frontier[Address::parse(key)] = value.get<int>();

    auto store = load_transactions(dir / "transactions.csv", LedgerFormat::CsvV1);
    r.transactions = store.all();
    r.validate(loaded.spec.params.max_depth);
    return loaded;
}

CaseSpec case_spec_from_json(const json& j) {
    CaseSpec spec;
    spec.name = j.at("name").get<std::string>();
    if (j.contains("case_type")) {
        auto t = case_type_from(j.at("case_type").get<std::string>());
        if (!t) throw Error("case spec: unknown case_type");
        spec.case_type = *t;
    }
    if (j.contains("year")) spec.year = j.at("year").get<int>();
    for (const auto& item : j.at("placement"))
        spec.placement.push_back(Address::parse(item.get<std::string>()));
    if (j.contains("params")) {
        const auto& p = j.at("params");
        auto& params = spec.params;
        if (p.contains("max_depth")) params.max_depth = p.at("max_depth").get<int>();
        if (p.contains("max_layer_size"))
            params.max_layer_size = p.at("max_layer_size").get<std::size_t>();
        if (p.contains("dirty_threshold")) {
            const auto& v = p.at("dirty_threshold");
            params.dirty_threshold = v.is_string() ? Decimal::parse(v.get<std::string>())
                                                   : Decimal::parse(v.dump());
        }
        if (p.contains("service_tx_threshold"))
            params.service_tx_threshold = p.at("service_tx_threshold").get<std::size_t>();
        if (p.contains("service_window_seconds"))
            params.service_window_seconds = p.at("service_window_seconds").get<std::int64_t>();
        if (p.contains("temporal_causality"))
            params.temporal_causality = p.at("temporal_causality").get<bool>();
        if (p.contains("dirty_predicate")) {
            auto s = p.at("dirty_predicate").get<std::string>();
            if (s == "any_asset")
                params.dirty_predicate = DirtyPredicate::AnyAssetExceeds;
            else if (s == "sum_across_assets")
                params.dirty_predicate = DirtyPredicate::SumAcrossAssets;
            else
                throw Error("case spec: unknown dirty_predicate '" + s + "'");
        }
    }
    spec.validate();
    return spec;
}

CaseSpec load_case_spec(const std::filesystem::path& path) {
    return case_spec_from_json(read_json(path));
}

void write_features_csv(const std::vector<AccountFeatures>& rows,
                        const std::filesystem::path& path) {
    auto out = open_out(path);
    CsvWriter w(out);
    w.write_row({"address", "present", "lifespan", "degree", "tx_count", "frequency",
                 "inflow", "outflow", "net", "avg_in", "avg_out", "token_assets",
                 "excluded_from_aggregates"});
    auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(12);
        os << v;
        return os.str();
    };
    for (const auto& f : rows) {
        std::set<AssetKey> assets;
        for (const auto& [k, _] : f.token_inflow) assets.insert(k);
        for (const auto& [k, _] : f.token_outflow) assets.insert(k);
        w.write_row({f.address.str(), f.present ? "1" : "0", std::to_string(f.lifespan),
                     std::to_string(f.degree), std::to_string(f.tx_count), fmt(f.frequency),
                     f.inflow.to_csv_string(), f.outflow.to_csv_string(), f.net.to_csv_string(),
                     fmt(f.avg_in), fmt(f.avg_out), std::to_string(assets.size()),
                     f.excluded_from_aggregates ? "1" : "0"});
    }
}

json cohort_comparison_to_json(const CohortComparison& cmp) {
    json j;
    j["cohort_a_size"] = cmp.size_a;
    j["cohort_b_size"] = cmp.size_b;
    json feats = json::object();
    for (const auto& [name, s] : cmp.features) {
        feats[name] = {
            {"median_a", s.median_a}, {"mean_a", s.mean_a},   {"median_b", s.median_b},
            {"mean_b", s.mean_b},     {"bin_edges", s.bin_edges},
            {"hist_a", s.hist_a},     {"hist_b", s.hist_b},
        };
    }
    j["features"] = std::move(feats);
    return j;
}

json graph_stats_to_json(const GraphStats& stats) {
    json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    put("self_loop_ratio", stats.self_loop_ratio);
    put("reciprocity", stats.reciprocity);
    put("density_simple_undirected", stats.density_simple_undirected);
    put("density_multidigraph", stats.density_multidigraph);
    put("global_clustering", stats.global_clustering);
    put("avg_path_length", stats.avg_path_length);
    j["node_count"] = stats.node_count;
    j["multi_edge_count"] = stats.multi_edge_count;
    j["lwcc_size"] = stats.lwcc_size;
    j["path_length_exact"] = stats.path_length_exact;
    j["path_length_sample_size"] =
        stats.path_length_sample_size ? json(*stats.path_length_sample_size) : json(nullptr);
    j["self_loops_excluded_from_densities"] = true;
    return j;
}

json motif_census_to_json(const MotifCensus& census) {
    json counts = json::object(), fractions = json::object();
    for (int m = 1; m <= 16; ++m) {
        std::string key = "M" + std::to_string(m);
        if (m >= 3 && m <= 15) key += "_" + std::string(motif_triad_code(m));
        counts[key] = census.counts[m];
        fractions[key] = census.fractions[m];
    }
    json j;
    j["counts"] = std::move(counts);
    j["fractions"] = std::move(fractions);
    j["connected_dyads"] = census.connected_dyads;
    j["connected_triads"] = census.connected_triads;
    return j;
}

json core_subgraph_to_json(const CoreSubgraph& core, std::size_t max_trace_points) {
    json j;
    j["score"] = core.score;
    j["initial_g"] = core.initial_g;
    j["kept_sender_count"] = core.kept_senders.size();
    j["kept_recipient_count"] = core.kept_recipients.size();
    json us = json::array(), vs = json::array();
    for (const auto& a : core.kept_senders) us.push_back(a.str());
    for (const auto& a : core.kept_recipients) vs.push_back(a.str());
    j["kept_senders"] = std::move(us);
    j["kept_recipients"] = std::move(vs);

    // downsample the trace for plotting; keep first/last points stable
    const auto total = core.peel_trace.size();
    const std::size_t stride = total <= max_trace_points ? 1 : (total + max_trace_points - 1) / max_trace_points;
    json trace = json::array();
    for (std::size_t t = 0; t < total; t += stride) {
        const auto& step = core.peel_trace[t];
        trace.push_back({{"t", t + 1},
                         {"removed", step.removed},
                         {"g", step.g_after ? json(*step.g_after) : json(nullptr)}});
    }
    j["peel_trace"] = std::move(trace);
    j["peel_steps"] = total;
    return j;
}

void write_core_edges_csv(const BipartiteGraph& g, const CoreSubgraph& core,
                          const std::filesystem::path& path) {
    std::set<Address> u_kept(core.kept_senders.begin(), core.kept_senders.end());
    std::set<Address> v_kept(core.kept_recipients.begin(), core.kept_recipients.end());
    auto out = open_out(path);
    CsvWriter w(out);
    w.write_row({"from", "to", "weight", "tx_count"});
    for (const auto& e : g.edges()) {
        const Address& from = g.node_address(e.u);
        const Address& to = g.node_address(e.v);
        if (!u_kept.count(from) || !v_kept.count(to)) continue;
        std::ostringstream weight;
        weight.precision(12);
        weight << e.weight;
        w.write_row({from.str(), to.str(), weight.str(), std::to_string(e.tx_count)});
    }
}

json exit_breakdown_to_json(const ExitBreakdown& breakdown) {
    json rows = json::array();
    for (const auto& r : breakdown.rows) {
        rows.push_back({{"bucket", r.bucket},
                        {"category", std::string(label_category_name(r.category))},
                        {"share", r.share},
                        {"eth_volume", r.eth_volume.to_string()}});
    }
    json token_rows = json::array();
    for (const auto& r : breakdown.token_rows) {
        token_rows.push_back({{"bucket", r.bucket},
                              {"category", std::string(label_category_name(r.category))},
                              {"asset", r.asset.display()},
                              {"volume", r.volume.to_string()}});
    }
    json j;
    j["rows"] = std::move(rows);
    j["token_rows"] = std::move(token_rows);
    j["total_eth_volume"] = breakdown.total_eth_volume.to_string();
    return j;
}

json cashout_correlation_to_json(const CashoutCorrelation& corr) {
    json buckets = json::array();
    for (const auto& b : corr.buckets)
        buckets.push_back({{"start", b.start}, {"volume", b.volume}, {"price", b.price}});
    json j;
    j["buckets"] = std::move(buckets);
    j["pearson_r"] = corr.pearson_r;
    j["lag"] = corr.lag;
    return j;
}

json counterfeit_flags_to_json(const std::vector<CounterfeitFlag>& flags) {
    json arr = json::array();
    for (const auto& f : flags)
        arr.push_back({{"address", f.address.str()},
                       {"contract", f.contract.str()},
                       {"tx_hash", f.tx_hash.str()}});
    json j;
    j["flags"] = std::move(arr);
    j["count"] = flags.size();
    return j;
}

void write_dot(const FlowGraph& g, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "digraph flow {\n";
    for (std::uint32_t u = 0; u < g.node_count(); ++u)
        out << "  \"" << g.node(u).str() << "\";\n";
    const auto& simple = g.simple();
    for (std::uint32_t u = 0; u < g.node_count(); ++u)
        for (auto v : simple.out[u])
            out << "  \"" << g.node(u).str() << "\" -> \"" << g.node(v).str() << "\";\n";
    out << "}\n";
}

void write_json(const json& j, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string sha256_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for hashing");

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256 init failed");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        const auto got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got)) != 1) {
            EVP_MD_CTX_free(ctx);
            throw Error("sha256 update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256 final failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

void write_manifest(const std::filesystem::path& dir,
                    const std::vector<std::string>& relative_paths, std::uint64_t seed) {
    std::vector<std::string> sorted = relative_paths;
    std::sort(sorted.begin(), sorted.end());
    json artifacts = json::array();
    for (const auto& rel : sorted) {
        const auto full = dir / rel;
        artifacts.push_back({{"path", rel},
                             {"bytes", std::filesystem::file_size(full)},
                             {"sha256", sha256_hex(full)}});
    }
    json j;
    j["artifacts"] = std::move(artifacts);
    j["seed"] = seed;
    j["tool"] = {{"name", "heisttrace"}, {"version", "0.1.0"}};
    write_json(j, dir / "manifest.json");
}

}  // namespace heisttrace
