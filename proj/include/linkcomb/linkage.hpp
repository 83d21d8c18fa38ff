#pragma once

#include <set>
#include <vector>

#include "linkcomb/structures.hpp"

namespace linkcomb {

/// A region of the plane given by its faces; `closed` controls whether
/// boundary points count as inside.
struct Region {
    FaceSet faces;
    bool closed = true;
    std::vector<VertexId> extra_vertices; // boundary vertices of degenerate regions
    std::vector<EdgeId> extra_edges;

    static Region closed_of(FaceSet f) { return Region{std::move(f), true, {}, {}}; }
    static Region open_of(FaceSet f) { return Region{std::move(f), false, {}, {}}; }
    static Region of_annulus(const AnnulusRegion& a, bool closed);
    static Region of_disk(const DiskRegion& d, bool closed);
    static Region empty(const PlaneGraph& g) { return Region{g.empty_face_set(), true, {}, {}}; }

    bool contains_vertex(const PlaneGraph& g, VertexId v) const;
    /// Whether the edge's point set meets the region.
    bool meets_edge(const PlaneGraph& g, EdgeId e) const;
    bool is_empty() const { return !faces.any() && extra_vertices.empty(); }
};

/// Vertex-disjoint nontrivial paths in a host graph.
class Linkage {
public:
    Linkage() = default;
    static Linkage build(const PlaneGraph& g, std::vector<std::vector<VertexId>> paths);

    int size() const { return static_cast<int>(paths_.size()); } // number of paths
    const std::vector<std::vector<VertexId>>& paths() const { return paths_; }
    const std::vector<VertexId>& path(int i) const { return paths_[i]; }

    std::vector<VertexId> terminals() const;          // sorted
    std::vector<VertexId> vertices() const;           // sorted
    std::vector<EdgeId> edge_ids(const PlaneGraph& g) const; // sorted
    bool has_vertex(VertexId v) const;

private:
    std::vector<std::vector<VertexId>> paths_; // canonical: ends ordered, paths sorted
};

using Pattern = std::set<std::pair<VertexId, VertexId>>;

Pattern pattern(const Linkage& l);
bool equivalent(const Linkage& a, const Linkage& b);

/// No vertex of one path within host distance r of another path.
bool is_r_scattered(const PlaneGraph& g, const Linkage& l, int r);

bool is_region_avoiding(const PlaneGraph& g, const Linkage& l, const Region& d);
bool is_region_free(const PlaneGraph& g, const Linkage& l, const Region& d);

struct ConfinementSpec {
    int s = 1;          // odd window height
    std::set<int> rails; // I
};

/// The central window ann(C, t+1-t', t+1+t') of the annulus.
AnnulusRegion confinement_window(const PlaneGraph& g, const RailedAnnulus& a, int s);

/// Inside the central window the linkage may only use rails indexed by I.
bool is_confined(const PlaneGraph& g, const Linkage& l, const RailedAnnulus& a,
                 const ConfinementSpec& spec);

} // namespace linkcomb
