#include "linkcomb/plane_graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <set>

namespace linkcomb {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonPlanarEmbedding: return "NonPlanarEmbedding";
        case ErrorCode::NotACycle: return "NotACycle";
        case ErrorCode::CycleBoundsOuterFace: return "CycleBoundsOuterFace";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::BadSpec: return "BadSpec";
        case ErrorCode::StreamsNotDisjoint: return "StreamsNotDisjoint";
        case ErrorCode::DegreeViolation: return "DegreeViolation";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::PipelineInfeasible: return "PipelineInfeasible";
        case ErrorCode::TooManyBridges: return "TooManyBridges";
        case ErrorCode::NoValidAssignment: return "NoValidAssignment";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Error";
}

// --- FaceSet ---

int FaceSet::count() const {
    int c = 0;
    for (uint64_t x : w_) c += std::popcount(x);
    return c;
}

bool FaceSet::any() const {
    for (uint64_t x : w_)
        if (x) return true;
    return false;
}

bool FaceSet::intersects(const FaceSet& o) const {
    size_t m = std::min(w_.size(), o.w_.size());
    for (size_t i = 0; i < m; ++i)
        if (w_[i] & o.w_[i]) return true;
    return false;
}

FaceSet FaceSet::operator&(const FaceSet& o) const {
    FaceSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
}

FaceSet FaceSet::operator|(const FaceSet& o) const {
    FaceSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
}

FaceSet FaceSet::minus(const FaceSet& o) const {
    FaceSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & ~o.w_[i];
    return r;
}

std::vector<FaceId> FaceSet::to_vector() const {
    std::vector<FaceId> out;
    for (int f = 0; f < n_; ++f)
        if (test(f)) out.push_back(f);
    return out;
}

// --- construction ---

PlaneGraph PlaneGraph::build(std::vector<VertexId> vertices,
                             std::vector<std::pair<VertexId, VertexId>> edges,
                             std::vector<std::vector<EdgeId>> rotation,
                             OuterFaceSpec outer) {
    PlaneGraph g;
    g.verts_ = std::move(vertices);
    std::sort(g.verts_.begin(), g.verts_.end());
    if (std::adjacent_find(g.verts_.begin(), g.verts_.end()) != g.verts_.end())
        throw Error(ErrorCode::MalformedInput, "duplicate vertex id");
    if (!g.verts_.empty() && g.verts_.front() < 0)
        throw Error(ErrorCode::MalformedInput, "vertex ids must be nonnegative");

    // rotation arrives indexed like the ORIGINAL vertex list order; re-key it.
    if (rotation.size() != g.verts_.size())
        throw Error(ErrorCode::MalformedInput, "rotation must cover every vertex");

    std::set<std::pair<VertexId, VertexId>> seen;
    g.edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a == b) throw Error(ErrorCode::MalformedInput, "loop edge");
        if (g.index_of(a) < 0 || g.index_of(b) < 0)
            throw Error(ErrorCode::UnknownVertex, "edge endpoint not a vertex");
        Edge e{std::min(a, b), std::max(a, b)};
        if (!seen.insert({e.u, e.v}).second)
            throw Error(ErrorCode::MalformedInput, "multi-edge");
        g.edges_.push_back(e);
    }

    g.rot_.assign(g.verts_.size(), {});
    for (size_t i = 0; i < g.verts_.size(); ++i) {
        VertexId v = g.verts_[i];
        std::set<EdgeId> listed;
        for (EdgeId e : rotation[i]) {
            if (e < 0 || e >= static_cast<EdgeId>(g.edges_.size()))
                throw Error(ErrorCode::MalformedInput, "rotation references unknown edge");
            const Edge& ed = g.edges_[e];
            if (ed.u != v && ed.v != v)
                throw Error(ErrorCode::MalformedInput, "rotation lists non-incident edge");
            if (!listed.insert(e).second)
                throw Error(ErrorCode::MalformedInput, "rotation repeats an edge");
            g.rot_[i].push_back(2 * e + (ed.u == v ? 0 : 1));
        }
        int deg = 0;
        for (const Edge& ed : g.edges_)
            if (ed.u == v || ed.v == v) ++deg;
        if (deg != static_cast<int>(g.rot_[i].size()))
            throw Error(ErrorCode::MalformedInput, "rotation misses an incident edge");
    }

    g.dart_pos_.assign(2 * g.edges_.size(), -1);
    for (size_t i = 0; i < g.rot_.size(); ++i)
        for (size_t p = 0; p < g.rot_[i].size(); ++p) g.dart_pos_[g.rot_[i][p]] = static_cast<int>(p);

    // components
    g.comp_.assign(g.verts_.size(), -1);
    int nc = 0;
    for (size_t s = 0; s < g.verts_.size(); ++s) {
        if (g.comp_[s] >= 0) continue;
        g.comp_[s] = nc;
        std::queue<int> q;
        q.push(static_cast<int>(s));
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (Dart d : g.rot_[x]) {
                int y = g.index_of(g.dart_head(d));
                if (g.comp_[y] < 0) {
                    g.comp_[y] = nc;
                    q.push(y);
                }
            }
        }
        ++nc;
    }
    g.num_components_ = nc;

    g.trace_faces();
    g.check_euler();

    if (outer.u >= 0) {
        if (g.index_of(outer.u) < 0 || g.index_of(outer.v) < 0)
            throw Error(ErrorCode::UnknownVertex, "outer face edge endpoint unknown");
        // the trace rule walks each face along its right side, so the
        // face containing dart d lies to the RIGHT of d
        Dart d = g.dart(outer.u, outer.v);
        g.outer_face_ = outer.left ? g.dart_face_[d ^ 1] : g.dart_face_[d];
        g.outer_spec_ = outer;
    } else if (g.num_faces() > 0) {
        g.outer_face_ = 0;
    }
    return g;
}

int PlaneGraph::index_of(VertexId v) const {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
    if (it == verts_.end() || *it != v) return -1;
    return static_cast<int>(it - verts_.begin());
}

int PlaneGraph::degree(VertexId v) const {
    int i = index_of(v);
    if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    return static_cast<int>(rot_[i].size());
}

std::optional<EdgeId> PlaneGraph::edge_between(VertexId a, VertexId b) const {
    int i = index_of(a);
    if (i < 0 || index_of(b) < 0) throw Error(ErrorCode::UnknownVertex, "edge_between");
    for (Dart d : rot_[i])
        if (dart_head(d) == b) return d / 2;
    return std::nullopt;
}

std::vector<EdgeId> PlaneGraph::rotation_of(VertexId v) const {
    int i = index_of(v);
    if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    std::vector<EdgeId> out;
    out.reserve(rot_[i].size());
    for (Dart d : rot_[i]) out.push_back(d / 2);
    return out;
}

VertexId PlaneGraph::dart_tail(Dart d) const {
    const Edge& e = edges_[d / 2];
    return (d & 1) ? e.v : e.u;
}

VertexId PlaneGraph::dart_head(Dart d) const {
    const Edge& e = edges_[d / 2];
    return (d & 1) ? e.u : e.v;
}

Dart PlaneGraph::dart(VertexId tail, VertexId head) const {
    auto e = edge_between(tail, head);
    if (!e) throw Error(ErrorCode::MalformedInput, "no such edge");
    return 2 * *e + (edges_[*e].u == tail ? 0 : 1);
}

int PlaneGraph::component_of(VertexId v) const {
    int i = index_of(v);
    if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    return comp_[i];
}

// The trace rule: the successor of dart u->v is the dart leaving v just
// after v->u in the counter-clockwise rotation at v. With ccw rotations
// this walks every face with its interior on the left.
Dart PlaneGraph::next_in_face(Dart d) const {
    Dart rev = d ^ 1;
    int v = index_of(dart_tail(rev));
    const auto& r = rot_[v];
    int pos = dart_pos_[rev];
    return r[(pos + 1) % r.size()];
}

void PlaneGraph::trace_faces() {
    dart_face_.assign(2 * edges_.size(), -1);
    faces_.clear();
    for (Dart start = 0; start < static_cast<Dart>(dart_face_.size()); ++start) {
        if (dart_face_[start] >= 0) continue;
        Face f;
        Dart d = start;
        do {
            dart_face_[d] = static_cast<FaceId>(faces_.size());
            f.boundary_walk.push_back(d);
            d = next_in_face(d);
        } while (d != start);
        faces_.push_back(std::move(f));
    }
}

void PlaneGraph::check_euler() const {
    // V - E + F = 2 per connected component, counting a lone face for
    // isolated vertices.
    std::vector<int> vcnt(num_components_, 0), ecnt(num_components_, 0), fcnt(num_components_, 0);
    for (size_t i = 0; i < verts_.size(); ++i) ++vcnt[comp_[i]];
    for (const Edge& e : edges_) ++ecnt[comp_[index_of(e.u)]];
    for (const Face& f : faces_) ++fcnt[comp_[index_of(dart_tail(f.boundary_walk[0]))]];
    for (int c = 0; c < num_components_; ++c) {
        if (ecnt[c] == 0 && fcnt[c] == 0) fcnt[c] = 1;
        if (vcnt[c] - ecnt[c] + fcnt[c] != 2)
            throw Error(ErrorCode::NonPlanarEmbedding,
                        "Euler check failed on component " + std::to_string(c));
    }
}

// --- region calculus ---

std::vector<FaceId> PlaneGraph::corner_faces(VertexId v) const {
    int i = index_of(v);
    if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    std::vector<FaceId> out;
    out.reserve(rot_[i].size());
    for (Dart d : rot_[i]) out.push_back(dart_face_[d]);
    return out;
}

bool PlaneGraph::vertex_in_open(const FaceSet& f, VertexId v) const {
    int i = index_of(v);
    if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    if (rot_[i].empty()) return false;
    for (Dart d : rot_[i])
        if (!f.test(dart_face_[d])) return false;
    return true;
}

bool PlaneGraph::vertex_in_closed(const FaceSet& f, VertexId v) const {
    int i = index_of(v);
    if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    for (Dart d : rot_[i])
        if (f.test(dart_face_[d])) return true;
    return false;
}

bool PlaneGraph::edge_meets_open(const FaceSet& f, EdgeId e) const {
    return f.test(dart_face_[2 * e]) && f.test(dart_face_[2 * e + 1]);
}

bool PlaneGraph::edge_in_closed(const FaceSet& f, EdgeId e) const {
    return f.test(dart_face_[2 * e]) || f.test(dart_face_[2 * e + 1]);
}

FaceSet PlaneGraph::full_face_set() const {
    FaceSet f(num_faces());
    for (int i = 0; i < num_faces(); ++i) f.set(i);
    return f;
}

// --- disk predicate ---

bool PlaneGraph::is_path(const std::vector<VertexId>& seq) const {
    if (seq.empty()) return false;
    std::set<VertexId> s(seq.begin(), seq.end());
    if (s.size() != seq.size()) return false;
    for (VertexId v : seq)
        if (index_of(v) < 0) return false;
    for (size_t i = 0; i + 1 < seq.size(); ++i)
        if (!adjacent(seq[i], seq[i + 1])) return false;
    return true;
}

bool PlaneGraph::is_cycle(const std::vector<VertexId>& seq) const {
    return seq.size() >= 3 && is_path(seq) && adjacent(seq.back(), seq.front());
}

DiskRegion PlaneGraph::disk_region(const std::vector<VertexId>& cycle) const {
    if (!is_cycle(cycle)) throw Error(ErrorCode::NotACycle, "disk_region");

    std::set<EdgeId> cyc_edges;
    for (size_t i = 0; i < cycle.size(); ++i)
        cyc_edges.insert(*edge_between(cycle[i], cycle[(i + 1) % cycle.size()]));

    if (outer_face_ < 0)
        throw Error(ErrorCode::CycleBoundsOuterFace, "no outer face designated");
    int outer_comp = comp_[index_of(dart_tail(faces_[outer_face_].boundary_walk[0]))];
    if (component_of(cycle[0]) != outer_comp)
        throw Error(ErrorCode::CycleBoundsOuterFace,
                    "cycle lies in a component without the outer face designation");

    // Dual BFS from the outer face, never crossing a cycle edge.
    std::vector<char> outside(num_faces(), 0);
    std::queue<FaceId> q;
    outside[outer_face_] = 1;
    q.push(outer_face_);
    while (!q.empty()) {
        FaceId f = q.front();
        q.pop();
        for (Dart d : faces_[f].boundary_walk) {
            if (cyc_edges.count(d / 2)) continue;
            FaceId g2 = dart_face_[d ^ 1];
            if (!outside[g2]) {
                outside[g2] = 1;
                q.push(g2);
            }
        }
    }

    DiskRegion r;
    r.bounding_cycle = cycle;
    r.interior_faces = FaceSet(num_faces());
    int cyc_comp = component_of(cycle[0]);
    for (FaceId f = 0; f < num_faces(); ++f) {
        if (outside[f]) continue;
        int fc = comp_[index_of(dart_tail(faces_[f].boundary_walk[0]))];
        if (fc == cyc_comp) r.interior_faces.set(f);
    }
    for (VertexId v : verts_)
        if (vertex_in_open(r.interior_faces, v)) r.interior_vertices.push_back(v);
    for (EdgeId e = 0; e < num_edges(); ++e)
        if (edge_meets_open(r.interior_faces, e)) r.interior_edges.push_back(e);
    return r;
}

std::vector<VertexId> PlaneGraph::orient_ccw(const std::vector<VertexId>& cycle) const {
    DiskRegion r = disk_region(cycle);
    FaceId left = face_left_of(cycle[0], cycle[1]);
    if (r.interior_faces.test(left)) return cycle;
    std::vector<VertexId> rev(cycle.rbegin(), cycle.rend());
    return rev;
}

// --- metrics ---

std::vector<int> PlaneGraph::bfs_distances(const std::vector<VertexId>& sources) const {
    std::vector<int> dist(verts_.size(), -1);
    std::queue<int> q;
    for (VertexId s : sources) {
        int i = index_of(s);
        if (i < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(s));
        if (dist[i] < 0) {
            dist[i] = 0;
            q.push(i);
        }
    }
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (Dart d : rot_[x]) {
            int y = index_of(dart_head(d));
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                q.push(y);
            }
        }
    }
    return dist;
}

int PlaneGraph::distance(VertexId u, VertexId v) const {
    auto dist = bfs_distances({u});
    int j = index_of(v);
    if (j < 0) throw Error(ErrorCode::UnknownVertex, std::to_string(v));
    return dist[j];
}

std::vector<VertexId> PlaneGraph::r_neighborhood(const std::vector<VertexId>& s, int r) const {
    auto dist = bfs_distances(s);
    std::vector<VertexId> out;
    for (size_t i = 0; i < verts_.size(); ++i)
        if (dist[i] >= 0 && dist[i] <= r) out.push_back(verts_[i]);
    return out;
}

} // namespace linkcomb
