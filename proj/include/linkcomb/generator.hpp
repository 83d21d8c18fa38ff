#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "linkcomb/structures.hpp"

namespace linkcomb {

struct GenOptions {
    int p = 5;
    int q = 4;
    int chords = 0; // number of quad diagonals to add
    uint64_t seed = 0;
    std::vector<int> outer_pad_rails; // 1-based rail columns carrying an outer pad tree
    std::vector<int> inner_pad_rails;
    int pad_len = 1;
};

struct GenResult {
    PlaneGraph graph;
    std::vector<std::vector<VertexId>> cycles;      // innermost first
    std::vector<std::vector<VertexId>> rails;       // rail j at index j-1
    std::map<int, std::vector<VertexId>> outer_pads; // rail -> chain, attachment side first
    std::map<int, std::vector<VertexId>> inner_pads;
};

/// Concentric p-cycle x q-rail annular grid, optionally with random
/// planarity-preserving quad diagonals and terminal-pad trees hanging
/// off the boundary cycles. Deterministic in the seed.
GenResult gen_annular_grid(const GenOptions& opt);

/// Rail columns used when planting k paths with scattering radius r.
std::vector<int> planted_rails(int q, int k, int r);

/// Plants k vertex-disjoint pad-to-pad paths down k rails spaced at
/// least r+1 apart, optionally with a small detour kink per path. The
/// GenResult must carry pads on the planted rails.
std::vector<std::vector<VertexId>> plant_linkage(const GenResult& gen, int k, int r,
                                                 bool kinks, uint64_t seed);

/// Rail pairs used when planting k U-turn paths with radius r.
std::vector<std::pair<int, int>> uturn_rails(int q, int k, int r);

/// Plants k disjoint U-turn paths: outer pad down to C_1, one sector
/// across, back up to the neighbouring outer pad. Terminals stay
/// outside the annulus disk, so these instances suit the nested-disk
/// properties.
std::vector<std::vector<VertexId>> plant_uturn_linkage(const GenResult& gen, int k, int r);

} // namespace linkcomb
