#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "heisttrace/account_features.hpp"
#include "heisttrace/core_group.hpp"
#include "heisttrace/graph_stats.hpp"
#include "heisttrace/motifs.hpp"
#include "heisttrace/reporting.hpp"
#include "heisttrace/tracer.hpp"

namespace heisttrace {

// All JSON exports use alphabetically ordered keys (nlohmann's default
// object ordering), so identical inputs serialize byte-identically.
using json = nlohmann::json;

json trace_result_to_json(const CaseSpec& spec, const TraceResult& result);
// Writes <dir>/trace.json and <dir>/transactions.csv.
void write_trace_result(const std::filesystem::path& dir, const CaseSpec& spec,
                        const TraceResult& result);

struct LoadedTrace {
    CaseSpec spec;
    TraceResult result;
};
// Reads a directory produced by write_trace_result.
LoadedTrace load_trace_result(const std::filesystem::path& dir);

CaseSpec case_spec_from_json(const json& j);
CaseSpec load_case_spec(const std::filesystem::path& path);

void write_features_csv(const std::vector<AccountFeatures>& rows,
                        const std::filesystem::path& path);
json cohort_comparison_to_json(const CohortComparison& cmp);
json graph_stats_to_json(const GraphStats& stats);
json motif_census_to_json(const MotifCensus& census);
json core_subgraph_to_json(const CoreSubgraph& core, std::size_t max_trace_points = 10000);
void write_core_edges_csv(const BipartiteGraph& g, const CoreSubgraph& core,
                          const std::filesystem::path& path);
json exit_breakdown_to_json(const ExitBreakdown& breakdown);
json cashout_correlation_to_json(const CashoutCorrelation& corr);
json counterfeit_flags_to_json(const std::vector<CounterfeitFlag>& flags);

// DOT rendering of the simple directed view, nodes labeled by address.
void write_dot(const FlowGraph& g, const std::filesystem::path& path);

void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

std::string sha256_hex(const std::filesystem::path& path);

// manifest.json: every artifact with size and content hash, sorted by
// path. Contains nothing run-dependent, so reruns with identical inputs
// are byte-identical.
void write_manifest(const std::filesystem::path& dir,
                    const std::vector<std::string>& relative_paths, std::uint64_t seed);

}  // namespace heisttrace
