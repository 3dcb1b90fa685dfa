#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "heisttrace/flow_graph.hpp"

namespace heisttrace {

// Motif numbering, centralized so a different figure ordering is a one-line
// change:
//   M1  single directed edge          M2  reciprocal dyad
//   M3..M9   triangle-containing triads {030T, 030C, 120D, 120U, 120C, 210, 300}
//   M10 021D out-star  M11 021C path  M12 021U in-star
//   M13..M15 open triads with a mutual dyad {111D, 111U, 201}
//   M16 bi-fan: (u1,u2)x(w1,w2), u1<u2, w1<w2, disjoint, all four edges
// The census runs on the simple directed graph without self-loops.
struct MotifCensus {
    std::array<std::uint64_t, 17> counts{};    // index 1..16; [0] unused
    std::array<double, 17> fractions{};        // per-arity denominators
    std::uint64_t connected_triads = 0;        // sum of M3..M15
    std::uint64_t connected_dyads = 0;         // M1 + M2
    std::uint64_t bifan_candidates_work = 0;   // out-pair increments performed
};

// Triad-class code ("030T" etc.) for motif index 3..15.
std::string_view motif_triad_code(int motif_index);

struct MotifCensusOptions {
    // Work estimates (neighbor-pair counts) beyond these caps abort instead
    // of exhausting memory/time on hub-heavy graphs.
    std::uint64_t max_triad_work = 2'000'000'000ull;
    std::uint64_t max_bifan_work = 500'000'000ull;
    unsigned threads = 1;
};

MotifCensus motif_census(const FlowGraph& g, const MotifCensusOptions& opts = {});

}  // namespace heisttrace
