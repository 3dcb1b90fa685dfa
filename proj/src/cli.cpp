#include "heisttrace/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "heisttrace/csv.hpp"
#include "heisttrace/error.hpp"
#include "heisttrace/export.hpp"
#include "heisttrace/ingest.hpp"
#include "heisttrace/parallel.hpp"

namespace heisttrace {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    unsigned threads = default_thread_count();
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->configurable(true);  // reachable from --config files via [section]
    cmd->add_option("--out", opts.out_dir, "Output directory")->envname("HEISTTRACE_OUT");
    cmd->add_option("--seed", opts.seed, "Seed for any sampling")->envname("HEISTTRACE_SEED");
    cmd->add_option("--threads", opts.threads, "Worker thread cap")
        ->envname("HEISTTRACE_THREADS");
    cmd->add_option("--format", opts.format, "Extra export format: csv or dot")
        ->check(CLI::IsMember({"json", "csv", "dot"}));
}

LedgerStore load_ledger(const std::string& path, const std::string& format) {
    return load_transactions(fs::path(path),
                             format == "jsonl" ? LedgerFormat::JsonLines : LedgerFormat::CsvV1);
}

LabelLibrary load_label_file(const std::string& path, bool warn_to_stderr = true) {
    auto result = load_labels(fs::path(path));
    if (warn_to_stderr)
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    return std::move(result.library);
}

std::set<Address> traced_address_union(const TraceResult& r) {
    std::set<Address> all;
    all.insert(r.placement.begin(), r.placement.end());
    all.insert(r.layering.begin(), r.layering.end());
    all.insert(r.integration.begin(), r.integration.end());
    return all;
}

// ---------------------------- subcommand bodies ----------------------------

struct TraceArgs {
    std::string case_path, ledger_path, labels_path;
    std::string ledger_format = "csv";
    CommonOpts common;
};

int cmd_trace(const TraceArgs& a, std::vector<std::string>* artifacts = nullptr,
              fs::path* out_dir = nullptr) {
    auto spec = load_case_spec(a.case_path);
    auto store = load_ledger(a.ledger_path, a.ledger_format);
    auto lib = load_label_file(a.labels_path);
    LocalStoreProvider provider(store);
    auto result = trace(spec, provider, lib, a.common.threads);
    const fs::path dir = a.common.out_dir;
    write_trace_result(dir, spec, result);
    std::cout << "trace: " << result.layering.size() << " layering, "
              << result.integration.size() << " integration, " << result.transactions.size()
              << " transactions -> " << (dir / "trace.json").string() << '\n';
    if (artifacts) {
        artifacts->push_back("trace.json");
        artifacts->push_back("transactions.csv");
    }
    if (out_dir) *out_dir = dir;
    return 0;
}

struct FeaturesArgs {
    std::string case_result, ledger_path, reference_path;
    std::string ledger_format = "csv";
    std::size_t max_tx_filter = 1000;
    bool no_filter = false;
    CommonOpts common;
};

int cmd_features(const FeaturesArgs& a, std::vector<std::string>* artifacts = nullptr) {
    auto loaded = load_trace_result(a.case_result);
    auto store = load_ledger(a.ledger_path, a.ledger_format);

    std::vector<Address> laundering(loaded.result.layering.begin(),
                                    loaded.result.layering.end());
    if (laundering.empty())
        laundering.assign(loaded.result.placement.begin(), loaded.result.placement.end());

    std::vector<Address> reference;
    if (!a.reference_path.empty()) {
        std::ifstream in(a.reference_path);
        if (!in) throw Error("cannot open '" + a.reference_path + "'");
        for (auto addr : load_counterfeit_list(in, a.reference_path))  // same one-per-line shape
            reference.push_back(addr);
    } else {
        reference = sample_reference_cohort(store, traced_address_union(loaded.result),
                                            laundering.size(), a.common.seed);
    }

    std::optional<std::size_t> filter;
    if (!a.no_filter) filter = a.max_tx_filter;
    auto rows = compute_features(laundering, store, filter, a.common.threads);
    auto ref_rows = compute_features(reference, store, filter, a.common.threads);

    const fs::path dir = a.common.out_dir;
    fs::create_directories(dir);
    write_features_csv(rows, dir / "features.csv");
    write_features_csv(ref_rows, dir / "reference_features.csv");

    json cohort;
    if (!rows.empty() && !ref_rows.empty())
        cohort = cohort_comparison_to_json(cohort_compare(rows, ref_rows));
    else
        cohort = json::object();
    auto alpha_of = [](const std::vector<AccountFeatures>& v) -> json {
        std::vector<std::int64_t> degrees;
        for (const auto& f : v)
            if (f.present && !f.excluded_from_aggregates)
                degrees.push_back(static_cast<std::int64_t>(f.degree));
        try {
            return fit_power_law(degrees);
        } catch (const Error&) {
            return nullptr;
        }
    };
    cohort["power_law_alpha"] = alpha_of(rows);
    cohort["power_law_alpha_reference"] = alpha_of(ref_rows);
    write_json(cohort, dir / "cohort.json");

    std::cout << "features: " << rows.size() << " traced rows, " << ref_rows.size()
              << " reference rows -> " << (dir / "features.csv").string() << '\n';
    if (artifacts) {
        artifacts->push_back("features.csv");
        artifacts->push_back("reference_features.csv");
        artifacts->push_back("cohort.json");
    }
    return 0;
}

struct GraphArgs {
    std::string case_result;
    std::string mode = "ether";
    CommonOpts common;
};

FlowGraph build_mode_graph(const LoadedTrace& loaded, const std::string& mode) {
    auto m = graph_mode_from(mode);
    if (!m) throw Error("unknown graph mode '" + mode + "'");
    return FlowGraph::from_transactions(loaded.result.transactions, *m);
}

int cmd_netstats(const GraphArgs& a, std::vector<std::string>* artifacts = nullptr) {
    auto loaded = load_trace_result(a.case_result);
    auto g = build_mode_graph(loaded, a.mode);
    GraphStatsOptions opts;
    opts.seed = a.common.seed;
    opts.threads = a.common.threads;
    auto stats = global_stats(g, opts);
    const fs::path dir = a.common.out_dir;
    fs::create_directories(dir);
    const std::string stem = "netstats_" + a.mode;
    write_json(graph_stats_to_json(stats), dir / (stem + ".json"));
    if (artifacts) artifacts->push_back(stem + ".json");
    if (a.common.format == "csv") {
        std::ofstream out(dir / (stem + ".csv"));
        CsvWriter w(out);
        auto cell = [](const std::optional<double>& v) {
            return v ? std::to_string(*v) : std::string();
        };
        w.write_row({"self_loop_ratio", "reciprocity", "density_simple_undirected",
                     "density_multidigraph", "global_clustering", "avg_path_length"});
        w.write_row({cell(stats.self_loop_ratio), cell(stats.reciprocity),
                     cell(stats.density_simple_undirected), cell(stats.density_multidigraph),
                     cell(stats.global_clustering), cell(stats.avg_path_length)});
        if (artifacts) artifacts->push_back(stem + ".csv");
    }
    if (a.common.format == "dot") {
        write_dot(g, dir / ("graph_" + a.mode + ".dot"));
        if (artifacts) artifacts->push_back("graph_" + a.mode + ".dot");
    }
    std::cout << "netstats(" << a.mode << "): " << stats.node_count << " nodes, "
              << stats.multi_edge_count << " multi-edges -> "
              << (dir / (stem + ".json")).string() << '\n';
    return 0;
}

int cmd_motifs(const GraphArgs& a, std::vector<std::string>* artifacts = nullptr) {
    auto loaded = load_trace_result(a.case_result);
    auto g = build_mode_graph(loaded, a.mode);
    MotifCensusOptions opts;
    opts.threads = a.common.threads;
    auto census = motif_census(g, opts);
    const fs::path dir = a.common.out_dir;
    fs::create_directories(dir);
    const std::string stem = "motifs_" + a.mode;
    write_json(motif_census_to_json(census), dir / (stem + ".json"));
    if (artifacts) artifacts->push_back(stem + ".json");
    if (a.common.format == "csv") {
        std::ofstream out(dir / (stem + ".csv"));
        CsvWriter w(out);
        w.write_row({"motif", "class", "count", "fraction"});
        for (int m = 1; m <= 16; ++m) {
            std::ostringstream frac;
            frac.precision(12);
            frac << census.fractions[m];
            w.write_row({"M" + std::to_string(m), std::string(motif_triad_code(m)),
                         std::to_string(census.counts[m]), frac.str()});
        }
        if (artifacts) artifacts->push_back(stem + ".csv");
    }
    std::cout << "motifs(" << a.mode << "): " << census.connected_triads
              << " connected triads -> " << (dir / (stem + ".json")).string() << '\n';
    return 0;
}

struct CoreArgs {
    std::string case_result, labels_path;
    double alpha = 49.0;
    std::string edge_weight = "unit";
    bool traced_as_heist = true;
    CommonOpts common;
};

int cmd_coregroup(const CoreArgs& a, std::vector<std::string>* artifacts = nullptr) {
    auto loaded = load_trace_result(a.case_result);
    LabelLibrary lib;
    if (!a.labels_path.empty()) lib = load_label_file(a.labels_path);
    if (a.traced_as_heist) {
        for (const auto& addr : loaded.result.placement)
            lib.add(addr, {"traced", LabelCategory::Heist});
        for (const auto& addr : loaded.result.layering)
            lib.add(addr, {"traced", LabelCategory::Heist});
    }
    auto weighting = edge_weighting_from(a.edge_weight);
    if (!weighting) throw Error("unknown edge weighting '" + a.edge_weight + "'");
    auto g = BipartiteGraph::from_transactions(loaded.result.transactions, lib, a.alpha,
                                               *weighting);
    auto core = extract_core(g);
    const fs::path dir = a.common.out_dir;
    fs::create_directories(dir);
    write_json(core_subgraph_to_json(core), dir / "coregroup.json");
    write_core_edges_csv(g, core, dir / "core_edges.csv");
    std::cout << "coregroup: kept " << core.kept_senders.size() << " x "
              << core.kept_recipients.size() << ", score " << core.score << " -> "
              << (dir / "coregroup.json").string() << '\n';
    if (artifacts) {
        artifacts->push_back("coregroup.json");
        artifacts->push_back("core_edges.csv");
    }
    return 0;
}

struct ReportArgs {
    std::vector<std::string> case_results;
    std::string labels_path, prices_path, counterfeits_path;
    std::string bucket = "year";
    std::int64_t corr_bucket_seconds = 86400;
    int corr_lag = 1;
    CommonOpts common;
};

int cmd_report(const ReportArgs& a, std::vector<std::string>* artifacts = nullptr) {
    std::vector<LoadedTrace> loaded;
    for (const auto& dir : a.case_results) loaded.push_back(load_trace_result(dir));
    LabelLibrary lib;
    if (!a.labels_path.empty()) lib = load_label_file(a.labels_path);

    auto bucketing = bucketing_from(a.bucket);
    if (!bucketing) throw Error("unknown bucketing '" + a.bucket + "'");
    std::vector<TraceResult> results;
    for (auto& l : loaded) results.push_back(l.result);

    json report;
    report["cases"] = json::array();
    for (const auto& l : loaded) report["cases"].push_back(l.spec.name);
    report["exit_breakdown"] = exit_breakdown_to_json(exit_breakdown(results, lib, *bucketing));
    json per_case = json::object();
    for (const auto& l : loaded)
        per_case[l.spec.name] =
            exit_breakdown_to_json(exit_breakdown({l.result}, lib, *bucketing));
    report["exit_breakdown_by_case"] = std::move(per_case);

    if (!a.prices_path.empty()) {
        auto prices = load_price_series(fs::path(a.prices_path));
        json correlations = json::object();
        for (const auto& l : loaded) {
            try {
                correlations[l.spec.name] = cashout_correlation_to_json(
                    cashout_price_correlation(l.result, prices, a.corr_bucket_seconds,
                                              a.corr_lag));
            } catch (const Error& e) {
                correlations[l.spec.name] = {{"error", e.what()}};
            }
        }
        report["cashout_correlation"] = std::move(correlations);
    } else {
        report["cashout_correlation"] = nullptr;
    }

    if (!a.counterfeits_path.empty()) {
        auto counterfeits = load_counterfeit_list(fs::path(a.counterfeits_path));
        json flags = json::object();
        for (const auto& l : loaded)
            flags[l.spec.name] = counterfeit_flags_to_json(
                counterfeit_flags(l.result, counterfeits));
        report["counterfeit"] = std::move(flags);
    } else {
        report["counterfeit"] = nullptr;
    }

    const fs::path dir = a.common.out_dir;
    fs::create_directories(dir);
    write_json(report, dir / "report.json");
    if (a.common.format == "csv") {
        auto combined = exit_breakdown(results, lib, *bucketing);
        std::ofstream out(dir / "exit_breakdown.csv");
        CsvWriter w(out);
        w.write_row({"bucket", "category", "share", "eth_volume", "asset"});
        auto fmt = [](double v) {
            std::ostringstream os;
            os.precision(12);
            os << v;
            return os.str();
        };
        for (const auto& row : combined.rows)
            w.write_row({row.bucket, std::string(label_category_name(row.category)),
                         fmt(row.share), row.eth_volume.to_csv_string(), "ETH"});
        for (const auto& row : combined.token_rows)
            w.write_row({row.bucket, std::string(label_category_name(row.category)), "",
                         row.volume.to_csv_string(), row.asset.display()});
        if (artifacts) artifacts->push_back("exit_breakdown.csv");
    }
    std::cout << "report: " << loaded.size() << " case(s) -> "
              << (dir / "report.json").string() << '\n';
    if (artifacts) artifacts->push_back("report.json");
    return 0;
}

struct AllArgs {
    std::string case_path, ledger_path, labels_path, prices_path, counterfeits_path;
    std::string ledger_format = "csv";
    CommonOpts common;
};

int cmd_all(const AllArgs& a) {
    std::vector<std::string> artifacts;
    const fs::path dir = a.common.out_dir;

    TraceArgs trace_args{a.case_path, a.ledger_path, a.labels_path, a.ledger_format, a.common};
    cmd_trace(trace_args, &artifacts);

    FeaturesArgs feat;
    feat.case_result = dir.string();
    feat.ledger_path = a.ledger_path;
    feat.ledger_format = a.ledger_format;
    feat.common = a.common;
    cmd_features(feat, &artifacts);

    for (const std::string mode : {"ether", "token"}) {
        GraphArgs g;
        g.case_result = dir.string();
        g.mode = mode;
        g.common = a.common;
        cmd_netstats(g, &artifacts);
        cmd_motifs(g, &artifacts);
    }

    CoreArgs core;
    core.case_result = dir.string();
    core.labels_path = a.labels_path;
    core.common = a.common;
    cmd_coregroup(core, &artifacts);

    ReportArgs rep;
    rep.case_results = {dir.string()};
    rep.labels_path = a.labels_path;
    rep.prices_path = a.prices_path;
    rep.counterfeits_path = a.counterfeits_path;
    rep.common = a.common;
    cmd_report(rep, &artifacts);

    write_manifest(dir, artifacts, a.common.seed);
    std::cout << "all: manifest with " << artifacts.size() << " artifacts -> "
              << (dir / "manifest.json").string() << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"heisttrace — ledger forensics: taint tracing, laundering analytics, "
                 "core-group extraction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML config file");
    app.set_version_flag("--version", "heisttrace 0.1.0");

    TraceArgs trace_args;
    auto* t = app.add_subcommand("trace", "Expand placement seeds into a laundering trace");
    t->add_option("--case", trace_args.case_path, "Case spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    t->add_option("--ledger", trace_args.ledger_path, "Transaction ledger file")
        ->required()
        ->check(CLI::ExistingFile);
    t->add_option("--labels", trace_args.labels_path, "Label library CSV")
        ->required()
        ->check(CLI::ExistingFile);
    t->add_option("--ledger-format", trace_args.ledger_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    add_common(t, trace_args.common);

    FeaturesArgs feat_args;
    auto* f = app.add_subcommand("features", "Per-account trading features and cohort compare");
    f->add_option("--case-result", feat_args.case_result, "Directory written by trace")
        ->required()
        ->check(CLI::ExistingDirectory);
    f->add_option("--ledger", feat_args.ledger_path, "Transaction ledger file")
        ->required()
        ->check(CLI::ExistingFile);
    f->add_option("--ledger-format", feat_args.ledger_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    f->add_option("--reference", feat_args.reference_path,
                  "Reference cohort file (one address per line); sampled when omitted")
        ->check(CLI::ExistingFile);
    f->add_option("--max-tx-filter", feat_args.max_tx_filter,
                  "Exclude rows above this tx count from aggregates");
    f->add_flag("--no-filter", feat_args.no_filter, "Disable the tx-count filter");
    add_common(f, feat_args.common);

    GraphArgs net_args;
    auto* n = app.add_subcommand("netstats", "Global network properties of the traced flows");
    n->add_option("--case-result", net_args.case_result, "Directory written by trace")
        ->required()
        ->check(CLI::ExistingDirectory);
    n->add_option("--graph", net_args.mode, "ether, token, or all")
        ->check(CLI::IsMember({"ether", "token", "all"}));
    add_common(n, net_args.common);

    GraphArgs motif_args;
    auto* m = app.add_subcommand("motifs", "Directed 2/3-node motif census plus bi-fans");
    m->add_option("--case-result", motif_args.case_result, "Directory written by trace")
        ->required()
        ->check(CLI::ExistingDirectory);
    m->add_option("--graph", motif_args.mode, "ether, token, or all")
        ->check(CLI::IsMember({"ether", "token", "all"}));
    add_common(m, motif_args.common);

    CoreArgs core_args;
    auto* c = app.add_subcommand("coregroup",
                                 "Greedy suspiciousness-density core extraction");
    c->add_option("--case-result", core_args.case_result, "Directory written by trace")
        ->required()
        ->check(CLI::ExistingDirectory);
    c->add_option("--labels", core_args.labels_path, "Label library CSV")
        ->check(CLI::ExistingFile);
    c->add_option("--alpha", core_args.alpha, "Node suspiciousness for heist labels");
    c->add_option("--edge-weight", core_args.edge_weight, "unit, logcount, or zero")
        ->check(CLI::IsMember({"unit", "logcount", "zero"}));
    c->add_flag("!--no-traced-as-heist", core_args.traced_as_heist,
                "Do not mark traced placement/layering addresses as heist");
    add_common(c, core_args.common);

    ReportArgs report_args;
    auto* r = app.add_subcommand("report", "Exit-category, price, and counterfeit analytics");
    r->add_option("--case-result", report_args.case_results,
                  "Trace output directory (repeatable)")
        ->required()
        ->check(CLI::ExistingDirectory);
    r->add_option("--labels", report_args.labels_path, "Label library CSV")
        ->check(CLI::ExistingFile);
    r->add_option("--prices", report_args.prices_path, "Price series CSV")
        ->check(CLI::ExistingFile);
    r->add_option("--counterfeits", report_args.counterfeits_path, "Counterfeit token list")
        ->check(CLI::ExistingFile);
    r->add_option("--bucket", report_args.bucket, "year or month")
        ->check(CLI::IsMember({"year", "month"}));
    r->add_option("--corr-bucket-seconds", report_args.corr_bucket_seconds,
                  "Cash-out correlation bucket width");
    r->add_option("--corr-lag", report_args.corr_lag, "Forward price-change lag in buckets");
    add_common(r, report_args.common);

    AllArgs all_args;
    auto* al = app.add_subcommand("all", "Run the whole pipeline and write a manifest");
    al->add_option("--case", all_args.case_path, "Case spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    al->add_option("--ledger", all_args.ledger_path, "Transaction ledger file")
        ->required()
        ->check(CLI::ExistingFile);
    al->add_option("--labels", all_args.labels_path, "Label library CSV")
        ->required()
        ->check(CLI::ExistingFile);
    al->add_option("--prices", all_args.prices_path, "Price series CSV")
        ->check(CLI::ExistingFile);
    al->add_option("--counterfeits", all_args.counterfeits_path, "Counterfeit token list")
        ->check(CLI::ExistingFile);
    al->add_option("--ledger-format", all_args.ledger_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    add_common(al, all_args.common);

    std::vector<const char*> ptrs;
    ptrs.push_back("heisttrace");
    for (const auto& s : args) ptrs.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << "heisttrace 0.1.0\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (t->parsed()) return cmd_trace(trace_args);
        if (f->parsed()) return cmd_features(feat_args);
        if (n->parsed()) return cmd_netstats(net_args);
        if (m->parsed()) return cmd_motifs(motif_args);
        if (c->parsed()) return cmd_coregroup(core_args);
        if (r->parsed()) return cmd_report(report_args);
        if (al->parsed()) return cmd_all(all_args);
        std::cerr << app.help();
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace heisttrace
