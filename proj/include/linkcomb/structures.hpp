#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "linkcomb/plane_graph.hpp"

namespace linkcomb {

enum class SeqKind { Parallel, Nested };

/// Region between two cycles of a sequence, boundaries included.
struct AnnulusRegion {
    int lo = 0; // 1-based cycle indices
    int hi = 0;
    FaceSet faces;                   // faces strictly between the boundary cycles
    std::vector<VertexId> vertices;  // closed membership, sorted
    std::vector<EdgeId> edges;       // edges contained in the closed region, sorted
    std::vector<VertexId> boundary_vertices;
    std::vector<EdgeId> boundary_edges;

    bool has_vertex(VertexId v) const;
    bool has_edge(EdgeId e) const;
};

/// An ordered family of vertex-disjoint nesting cycles. Parallel
/// sequences index inside-out (C_1 innermost); nested sequences index
/// outside-in (C_1 outermost), matching how each is consumed.
class CycleSequence {
public:
    static CycleSequence build(const PlaneGraph& g, SeqKind kind,
                               std::vector<std::vector<VertexId>> cycles);

    SeqKind kind() const { return kind_; }
    int size() const { return static_cast<int>(cycles_.size()); }
    const std::vector<VertexId>& cycle(int i) const; // 1-based, ccw-oriented
    const DiskRegion& region(int i) const;           // disk of cycle i
    const std::vector<std::vector<VertexId>>& cycles() const { return cycles_; }

    bool on_cycle(int i, VertexId v) const;
    int cycle_of_vertex(VertexId v) const; // 0 when on none, else 1-based index
    bool is_cycle_edge(EdgeId e) const;

    /// Faces of the region strictly between cycles lo and hi (lo <= hi).
    FaceSet faces_between(int lo, int hi) const;
    AnnulusRegion annulus_region(const PlaneGraph& g, int lo, int hi) const;

    /// Union of all cycles minus the closed region `avoid` (may be empty):
    /// the background subgraph for cae-minimisation.
    std::set<EdgeId> background_edges(const PlaneGraph& g, const FaceSet& avoid) const;

private:
    SeqKind kind_ = SeqKind::Parallel;
    std::vector<std::vector<VertexId>> cycles_;
    std::vector<DiskRegion> regions_;
    std::map<VertexId, int> vertex_cycle_;
    std::set<EdgeId> cycle_edges_;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(std::string what) {
        ok = false;
        violations.push_back(std::move(what));
    }
};

/// A (p,q)-railed annulus: p parallel cycles crossed by q disjoint rails,
/// every crossing a non-empty path.
class RailedAnnulus {
public:
    static RailedAnnulus build(const PlaneGraph& g,
                               std::vector<std::vector<VertexId>> cycles,
                               std::vector<std::vector<VertexId>> rails);

    int p() const { return seq_.size(); }
    int q() const { return static_cast<int>(rails_.size()); }
    const CycleSequence& seq() const { return seq_; }
    const std::vector<VertexId>& cycle(int i) const { return seq_.cycle(i); }
    const std::vector<VertexId>& rail(int j) const; // 1-based, oriented C_1 -> C_p
    const std::vector<VertexId>& crossing(int i, int j) const; // P_{i,j}, along-rail order

    AnnulusRegion annulus_region(const PlaneGraph& g, int i, int j) const;
    FaceSet annulus_faces() const { return seq_.faces_between(1, p()); }

    int rail_of_vertex(VertexId v) const; // 0 when on none
    bool is_rail_edge(EdgeId e) const;
    int rail_of_edge(EdgeId e) const; // 0 when on none

    const PlaneGraph& graph() const { return *g_; }

private:
    const PlaneGraph* g_ = nullptr;
    CycleSequence seq_;
    std::vector<std::vector<VertexId>> rails_;
    std::vector<std::vector<std::vector<VertexId>>> cross_; // [i-1][j-1]
    std::map<VertexId, int> vertex_rail_;
    std::map<EdgeId, int> edge_rail_;
};

/// Invariant checks for a candidate railed annulus; names the first
/// offending (i,j) pair instead of throwing.
ValidationReport validate_railed_annulus(const PlaneGraph& g,
                                         const std::vector<std::vector<VertexId>>& cycles,
                                         const std::vector<std::vector<VertexId>>& rails);

/// The derived apparatus of a railed annulus: the cut F_A, the
/// cycle-arc (L) and rail-segment (R) shortest connectors, rectangle
/// disks, and the nested sequence they generate.
class DerivedDisks {
public:
    static DerivedDisks build(const PlaneGraph& g, const RailedAnnulus& a);

    const std::set<EdgeId>& f_edges() const { return f_edges_; }

    /// Shortest arc of C_i from crossing (i,j) to crossing (i,j'), F_A-free.
    std::vector<VertexId> l_path(int i, int j, int j2) const;
    /// Rail-j segment from crossing (i,j) to crossing (i2,j).
    std::vector<VertexId> r_path(int i, int i2, int j) const;
    /// The closed disk bounded by the rectangle over cycles [i,i2] and rails [j,j2].
    DiskRegion rect_disk(int i, int i2, int j, int j2) const;

    int z() const { return z_; }
    const CycleSequence& nested() const { return nested_; }
    const DiskRegion& nested_disk(int i) const; // D'_i, 1-based

private:
    const PlaneGraph* g_ = nullptr;
    const RailedAnnulus* a_ = nullptr;
    std::set<EdgeId> f_edges_;
    std::vector<std::vector<VertexId>> f_arcs_; // F^(i) as vertex path, per cycle
    int z_ = 0;
    CycleSequence nested_;
    std::vector<DiskRegion> nested_disks_;
};

} // namespace linkcomb
