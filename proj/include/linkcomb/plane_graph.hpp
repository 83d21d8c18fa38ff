#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkcomb/error.hpp"

namespace linkcomb {

using VertexId = int;
using EdgeId = int; // index into PlaneGraph::edges()
using Dart = int;   // directed edge side: 2*edge + s (s=0: lo->hi, s=1: hi->lo)
using FaceId = int;

struct Edge {
    VertexId u; // u < v
    VertexId v;
};

/// A set of faces of a fixed PlaneGraph. Regions of the plane (disks,
/// annuli, pockets) are represented by the set of faces they contain;
/// vertex/edge membership is derived from face incidence.
class FaceSet {
public:
    FaceSet() = default;
    explicit FaceSet(int nfaces) : n_(nfaces), w_((nfaces + 63) / 64, 0) {}

    int size() const { return n_; }
    bool test(FaceId f) const { return (w_[f >> 6] >> (f & 63)) & 1; }
    void set(FaceId f) { w_[f >> 6] |= uint64_t(1) << (f & 63); }
    void reset(FaceId f) { w_[f >> 6] &= ~(uint64_t(1) << (f & 63)); }

    int count() const;
    bool any() const;
    bool intersects(const FaceSet& o) const;

    FaceSet operator&(const FaceSet& o) const;
    FaceSet operator|(const FaceSet& o) const;
    FaceSet minus(const FaceSet& o) const;

    bool operator==(const FaceSet& o) const { return n_ == o.n_ && w_ == o.w_; }

    std::vector<FaceId> to_vector() const;

private:
    int n_ = 0;
    std::vector<uint64_t> w_;
};

struct Face {
    std::vector<Dart> boundary_walk; // cyclic, in trace order
};

struct DiskRegion {
    std::vector<VertexId> bounding_cycle;
    FaceSet interior_faces;
    std::vector<VertexId> interior_vertices; // sorted
    std::vector<EdgeId> interior_edges;      // edges meeting the open disk
};

/// Where the outer (unbounded) face sits relative to a directed edge.
struct OuterFaceSpec {
    VertexId u = -1;
    VertexId v = -1;
    bool left = true; // outer face lies left of the dart u->v
};

/// An embedded plane graph: a rotation system (counter-clockwise edge
/// order around each vertex) plus a designated outer face. Immutable
/// after construction; all queries are pure.
class PlaneGraph {
public:
    /// `rotation[i]` lists, for vertices()[i], the indices into `edges`
    /// of its incident edges in counter-clockwise order.
    static PlaneGraph build(std::vector<VertexId> vertices,
                            std::vector<std::pair<VertexId, VertexId>> edges,
                            std::vector<std::vector<EdgeId>> rotation,
                            OuterFaceSpec outer);

    // --- basic accessors ---
    int num_vertices() const { return static_cast<int>(verts_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }

    const std::vector<VertexId>& vertices() const { return verts_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }

    bool has_vertex(VertexId v) const { return index_of(v) >= 0; }
    int degree(VertexId v) const;
    std::optional<EdgeId> edge_between(VertexId a, VertexId b) const;
    bool adjacent(VertexId a, VertexId b) const { return edge_between(a, b).has_value(); }

    /// Incident edges of v in counter-clockwise order.
    std::vector<EdgeId> rotation_of(VertexId v) const;

    VertexId dart_tail(Dart d) const;
    VertexId dart_head(Dart d) const;
    Dart dart(VertexId tail, VertexId head) const;
    /// Face containing dart d in its boundary walk: the face on d's RIGHT.
    FaceId face_of_dart(Dart d) const { return dart_face_[d]; }
    FaceId face_left_of(VertexId tail, VertexId head) const { return dart_face_[dart(head, tail)]; }
    FaceId face_right_of(VertexId tail, VertexId head) const { return dart_face_[dart(tail, head)]; }

    FaceId outer_face() const { return outer_face_; }
    const OuterFaceSpec& outer_spec() const { return outer_spec_; }

    int component_of(VertexId v) const;
    int num_components() const { return num_components_; }

    // --- region membership calculus ---
    bool vertex_in_open(const FaceSet& f, VertexId v) const;   // all corners of v in f
    bool vertex_in_closed(const FaceSet& f, VertexId v) const; // some corner of v in f
    bool edge_meets_open(const FaceSet& f, EdgeId e) const;    // both sides of e in f
    bool edge_in_closed(const FaceSet& f, EdgeId e) const;     // some side of e in f

    FaceSet empty_face_set() const { return FaceSet(num_faces()); }
    FaceSet full_face_set() const;

    /// Faces incident to v, one per corner in rotation order.
    std::vector<FaceId> corner_faces(VertexId v) const;

    // --- disk predicate ---
    /// The side of cycle `c` not containing the outer face. `c` must lie
    /// in the component that carries the outer face designation.
    DiskRegion disk_region(const std::vector<VertexId>& cycle) const;

    /// Orients `cycle` so that the disk-region side lies to the left of
    /// each dart (counter-clockwise in a standard drawing).
    std::vector<VertexId> orient_ccw(const std::vector<VertexId>& cycle) const;

    // --- metrics ---
    int distance(VertexId u, VertexId v) const; // hops; -1 when disconnected
    /// Distance from `sources` to every vertex (indexed like vertices()); -1 unreachable.
    std::vector<int> bfs_distances(const std::vector<VertexId>& sources) const;
    std::vector<VertexId> r_neighborhood(const std::vector<VertexId>& s, int r) const;

    int index_of(VertexId v) const; // -1 when absent
    VertexId vertex_at(int idx) const { return verts_[idx]; }

    /// Validates that `seq` is a path in the graph (distinct vertices,
    /// consecutive pairs adjacent).
    bool is_path(const std::vector<VertexId>& seq) const;
    bool is_cycle(const std::vector<VertexId>& seq) const;

private:
    std::vector<VertexId> verts_; // sorted ascending
    std::vector<Edge> edges_;
    std::vector<std::vector<Dart>> rot_; // outgoing darts, ccw, per vertex index
    std::vector<int> dart_pos_;          // position of dart in rot_ of its tail
    std::vector<Face> faces_;
    std::vector<FaceId> dart_face_;
    std::vector<int> comp_;
    int num_components_ = 0;
    FaceId outer_face_ = -1;
    OuterFaceSpec outer_spec_;

    Dart next_in_face(Dart d) const;
    void trace_faces();
    void check_euler() const;
};

} // namespace linkcomb
