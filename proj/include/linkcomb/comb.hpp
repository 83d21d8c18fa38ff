#pragma once

#include "linkcomb/witness.hpp"

namespace linkcomb {

struct GridRoutingProblem {
    int cols = 0; // k
    int rows = 0; // k'
    int d = 0;
    int r = 0;
    std::vector<int> up_cols;   // top-row terminal columns, ascending, 1-based
    std::vector<int> down_cols; // bottom-row terminal columns, ascending
};

using GridPoint = std::pair<int, int>; // (col, row), 1-based
using GridPath = std::vector<GridPoint>;

/// d vertex-disjoint, pairwise r-scattered paths joining the i-th top
/// terminal to the i-th bottom terminal.
std::vector<GridPath> route_grid(const GridRoutingProblem& p, long long budget = 1'000'000);

/// r-scattered linkage of d rail-to-rail crossings, (s,I)-confined:
/// K_i runs from the inner crossing of rail b+(i-1)(r+1)+1 to the outer
/// one, riding a rail of I through the middle.
Linkage route_confined(const PlaneGraph& g, const RailedAnnulus& a, int s, int b, int d, int r,
                       const std::set<int>& rails, long long budget = 1'000'000);

struct CombParams {
    int r = 0;
    int s = 1;
    std::set<int> rails; // I
    int m = 2;
    long long budget = 1'000'000;
};

struct RiverTrace {
    int target_rail = 0;
    VertexId x_down = -1, x_up = -1;
    std::vector<VertexId> z, q_down, q_up, y_down, y_up, x_path_down, x_path_up, k_path, conn;
};

struct CombGeometry {
    int m = 0;       // evenized threshold
    int b = 0;       // 3m/2
    int b_q = 0;     // rail-side offset actually used
    int depth = 0;   // nested-disk depth of the reference region
    int spacing = 0; // cycle spacing of the attachment levels
    int w = 0, w2 = 0, rows = 0;
    int d = 0;
    bool outside_guarantee = false;
};

struct CombResult {
    Linkage combed;
    std::set<int> rails_used;
    bool fast_path = false;
    CombGeometry geo;
    Linkage l_prime;  // after nested minimisation
    Linkage l_second; // after parallel minimisation
    std::vector<RiverTrace> trace;
};

/// The full combing pipeline: minimise, order the rivers, build the
/// escort paths, route the middle through the chosen rails, splice.
/// Every guarantee is re-verified before returning.
CombResult comb(const PlaneGraph& g, const RailedAnnulus& a, const Linkage& l,
                const CombParams& prm);

struct CombAudit {
    bool equivalent = false;
    bool scattered = false;
    bool confined = false;
    bool outside_contained = false; // combed \ annulus within original \ annulus
    bool ok() const { return equivalent && scattered && confined && outside_contained; }
};
CombAudit audit_comb(const PlaneGraph& g, const RailedAnnulus& a, const Linkage& original,
                     const Linkage& combed, int r, const ConfinementSpec& spec);

/// Shortcuts every component of the linkage inside the nested disks
/// onto a distinct cycle so the isolated vertex v is avoided.
Linkage reroute_few_bridges(const PlaneGraph& g, const CycleSequence& nested, VertexId v,
                            const Linkage& l, int r, long long budget = 200'000);

} // namespace linkcomb
