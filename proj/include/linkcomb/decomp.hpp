#pragma once

#include "linkcomb/linkage.hpp"

namespace linkcomb {

/// A minimal annulus-crossing subpath of a linkage path: touches each
/// boundary cycle in exactly one endpoint.
struct Stream {
    int path_index = -1;
    int from = -1, to = -1; // positions within the linkage path, inclusive
    std::vector<VertexId> path;
    int enter_cycle = 0; // boundary index (1 or p) at `from`
    bool is_river = false;
};

struct MountainValley {
    enum class Kind { Mountain, Valley };
    Kind kind = Kind::Mountain;
    int path_index = -1;
    int from = -1, to = -1;
    std::vector<VertexId> path;
    int base_index = 0;
    int dehe = 0;
    FaceSet pocket;                     // faces of disk(P)
    std::vector<VertexId> pocket_cycle; // boundary of disk(P)
};

struct CrossRecord {
    int path_index = -1;
    int cycle_index = 0;
    std::vector<VertexId> subpath; // the run [v_q..v_r]
};

struct BridgeRecord {
    int path_index = -1;
    int from = -1, to = -1;
    std::vector<VertexId> subpath;
};

/// Maximal subpaths of the linkage inside the closed region spanned by
/// cycles [1..p] of a parallel sequence; building block for rivers.
struct AnnulusComponent {
    int path_index;
    int from, to;
    int side_from; // 0 none, 1 = C_1, 2 = C_p (boundary the component starts on)
    int side_to;
};
std::vector<AnnulusComponent> annulus_components(const PlaneGraph& g, const Linkage& l,
                                                 const CycleSequence& seq);

/// Disjoint canonical streams, one minimal crossing subpath per annulus
/// traversal (first-entry to first-exit scan).
std::vector<Stream> streams(const PlaneGraph& g, const Linkage& l, const CycleSequence& seq);

/// Streams lying on fully-crossing components, directed with them;
/// pairwise vertex-disjoint.
std::vector<Stream> rivers(const PlaneGraph& g, const Linkage& l, const CycleSequence& seq);

/// The counter-clockwise cyclic order of disjoint streams around the
/// annulus, rotated so the gap after the last stream holds D. Returns
/// indices into `zs`.
std::vector<int> d_ordering(const PlaneGraph& g, const CycleSequence& seq,
                            const std::vector<Stream>& zs, const Region& d);

/// All inclusion-maximal mountains and valleys of the linkage against
/// the sequence, with their pockets; D is the protected region.
std::vector<MountainValley> mountains_valleys(const PlaneGraph& g, const Linkage& l,
                                              const CycleSequence& seq, const Region& d);

/// Tightness: a laminar tower of same-base mountains/valleys with
/// heights j*(r+1)+2 ending at `m`, searched among `all`.
bool is_tight(const PlaneGraph& g, const MountainValley& m,
              const std::vector<MountainValley>& all, int r);

/// Terminal-free components of the linkage outside the open disk.
std::vector<BridgeRecord> bridges(const PlaneGraph& g, const Linkage& l, const Region& open_disk);

/// Calibrated traversals: maximal runs on a cycle whose flanking edges
/// lie on opposite sides.
std::vector<CrossRecord> crossings(const PlaneGraph& g, const Linkage& l,
                                   const CycleSequence& seq);

} // namespace linkcomb
