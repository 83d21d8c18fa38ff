#pragma once

#include <cstdint>
#include <optional>

#include "linkcomb/decomp.hpp"

namespace linkcomb {

/// Undirected graph on at most 64 vertices, bitmask adjacency.
struct SmallGraph {
    std::vector<VertexId> verts; // sorted original ids
    std::vector<uint64_t> adj;

    int n() const { return static_cast<int>(verts.size()); }
    int index_of(VertexId v) const;
    static SmallGraph from_edges(const std::vector<std::pair<VertexId, VertexId>>& edges);
};

SmallGraph union_graph(const PlaneGraph& g, const Linkage& l, const std::set<EdgeId>& background);

struct TwOptions {
    int cap = 20;                  // vertex cap for the exact routine
    long long budget = 4'000'000; // branch-and-bound nodes
};

/// Exact treewidth by branch-and-bound over elimination sets.
int treewidth_exact(const SmallGraph& g, const TwOptions& opt = {});
int treewidth_upper_bound(const SmallGraph& g); // greedy min-fill
int treewidth_lower_bound(const SmallGraph& g); // degeneracy

struct TwInterval {
    int lo = 0;
    int hi = 0;
    bool exact = false;
};
TwInterval treewidth_interval(const SmallGraph& g, const TwOptions& opt = {});

/// cae(L,B) = |E(L) \ E(B)|; B must have maximum degree 2.
int cae(const PlaneGraph& g, const Linkage& l, const std::set<EdgeId>& background);

/// Background subgraph of a cycle sequence outside a protected region.
std::set<EdgeId> background_edges(const PlaneGraph& g, const CycleSequence& seq, const Region& d);

struct BrambleWitness {
    std::vector<std::vector<VertexId>> elements;
    int order = 0;
    std::vector<VertexId> hitting_set;
};

struct StreamBrambleInput {
    std::vector<std::vector<VertexId>> b_paths; // truncated cycles B_1..B_r
    std::vector<std::vector<VertexId>> z_paths; // truncated streams Z'_1..Z'_r
};

/// Truncates cycles and streams as the stream-bramble construction
/// requires: first r = min(p,d) cycles, streams clipped to them, cycles
/// cut outside the reference sector.
StreamBrambleInput build_stream_bramble_input(const PlaneGraph& g, const CycleSequence& seq,
                                              const std::vector<Stream>& zs, const Region& d);

/// The bramble X^{(i,j)} = (B_i u Z'_j) \ V(C) plus the three corner
/// elements, with its exact order.
BrambleWitness stream_bramble(const PlaneGraph& g, const StreamBrambleInput& in);

std::vector<VertexId> minimum_hitting_set(const std::vector<std::vector<VertexId>>& elements);

struct SearchOptions {
    long long budget = 1'000'000;
};

struct MinimalLinkageResult {
    Linkage linkage;
    int cae_value = 0;
    bool optimal = false;
};

/// Equivalent linkage inside L u (UC \ D) minimising cae against the
/// background, subject to r-scattering; exhaustive within the budget,
/// greedy-improved best otherwise.
MinimalLinkageResult minimal_linkage(const PlaneGraph& g, const CycleSequence& seq,
                                     const Region& d, const Linkage& l, int r,
                                     const SearchOptions& opt = {});

/// One improvement step of an LB-pair: when tw(L u B) exceeds m, search
/// L u B for an equivalent r-scattered linkage of strictly smaller cae.
std::optional<Linkage> improve_once(const PlaneGraph& g, const Linkage& l,
                                    const std::set<EdgeId>& background, int m, int r,
                                    const SearchOptions& opt = {}, const TwOptions& twopt = {});

/// The flattening rewrite: replace every excursion of the mountain
/// above its blocking level by the cycle arc inside the pocket.
/// Returns nothing when the rewrite breaks the linkage or scattering.
std::optional<Linkage> flatten_mountain(const PlaneGraph& g, const Linkage& l,
                                        const CycleSequence& seq, const MountainValley& m, int r);

} // namespace linkcomb
