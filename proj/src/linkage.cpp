#include "linkcomb/linkage.hpp"

#include <algorithm>

namespace linkcomb {

// --- Region ---

Region Region::of_annulus(const AnnulusRegion& a, bool closed) {
    Region r;
    r.faces = a.faces;
    r.closed = closed;
    if (closed) {
        r.extra_vertices = a.boundary_vertices;
        r.extra_edges = a.boundary_edges;
    }
    return r;
}

Region Region::of_disk(const DiskRegion& d, bool closed) {
    Region r;
    r.faces = d.interior_faces;
    r.closed = closed;
    if (closed) {
        r.extra_vertices = d.bounding_cycle;
        std::sort(r.extra_vertices.begin(), r.extra_vertices.end());
    }
    return r;
}

bool Region::contains_vertex(const PlaneGraph& g, VertexId v) const {
    if (closed) {
        if (std::binary_search(extra_vertices.begin(), extra_vertices.end(), v)) return true;
        return g.vertex_in_closed(faces, v);
    }
    return g.vertex_in_open(faces, v);
}

bool Region::meets_edge(const PlaneGraph& g, EdgeId e) const {
    if (closed) {
        const Edge& ed = g.edges()[e];
        return contains_vertex(g, ed.u) || contains_vertex(g, ed.v) ||
               g.edge_in_closed(faces, e);
    }
    return g.edge_meets_open(faces, e);
}

// --- Linkage ---

Linkage Linkage::build(const PlaneGraph& g, std::vector<std::vector<VertexId>> paths) {
    std::set<VertexId> seen;
    for (auto& p : paths) {
        if (p.size() < 2)
            throw Error(ErrorCode::MalformedInput, "linkage paths must be non-trivial");
        if (!g.is_path(p)) throw Error(ErrorCode::MalformedInput, "linkage member is not a path");
        for (VertexId v : p)
            if (!seen.insert(v).second)
                throw Error(ErrorCode::MalformedInput,
                            "linkage paths share vertex " + std::to_string(v));
        if (p.back() < p.front()) std::reverse(p.begin(), p.end());
    }
    std::sort(paths.begin(), paths.end());
    Linkage l;
    l.paths_ = std::move(paths);
    return l;
}

std::vector<VertexId> Linkage::terminals() const {
    std::vector<VertexId> t;
    for (const auto& p : paths_) {
        t.push_back(p.front());
        t.push_back(p.back());
    }
    std::sort(t.begin(), t.end());
    return t;
}

std::vector<VertexId> Linkage::vertices() const {
    std::vector<VertexId> v;
    for (const auto& p : paths_) v.insert(v.end(), p.begin(), p.end());
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<EdgeId> Linkage::edge_ids(const PlaneGraph& g) const {
    std::vector<EdgeId> out;
    for (const auto& p : paths_)
        for (size_t i = 0; i + 1 < p.size(); ++i) out.push_back(*g.edge_between(p[i], p[i + 1]));
    std::sort(out.begin(), out.end());
    return out;
}

bool Linkage::has_vertex(VertexId v) const {
    for (const auto& p : paths_)
        if (std::find(p.begin(), p.end(), v) != p.end()) return true;
    return false;
}

// --- predicates ---

Pattern pattern(const Linkage& l) {
    Pattern out;
    for (const auto& p : l.paths()) {
        VertexId a = p.front(), b = p.back();
        out.insert({std::min(a, b), std::max(a, b)});
    }
    return out;
}

bool equivalent(const Linkage& a, const Linkage& b) { return pattern(a) == pattern(b); }

bool is_r_scattered(const PlaneGraph& g, const Linkage& l, int r) {
    if (r == 0 || l.size() <= 1) return true;
    for (int i = 0; i < l.size(); ++i) {
        auto dist = g.bfs_distances(l.path(i));
        for (int j = 0; j < l.size(); ++j) {
            if (j == i) continue;
            for (VertexId v : l.path(j)) {
                int d = dist[g.index_of(v)];
                if (d >= 0 && d <= r) return false;
            }
        }
    }
    return true;
}

bool is_region_avoiding(const PlaneGraph& g, const Linkage& l, const Region& d) {
    for (VertexId t : l.terminals())
        if (d.contains_vertex(g, t)) return false;
    return true;
}

bool is_region_free(const PlaneGraph& g, const Linkage& l, const Region& d) {
    for (VertexId v : l.vertices())
        if (d.contains_vertex(g, v)) return false;
    for (EdgeId e : l.edge_ids(g))
        if (d.meets_edge(g, e)) return false;
    return true;
}

AnnulusRegion confinement_window(const PlaneGraph& g, const RailedAnnulus& a, int s) {
    int p = a.p();
    if (s < 1 || s % 2 == 0 || s > p) throw Error(ErrorCode::BadSpec, "s must be odd, 1 <= s <= p");
    int t = p / 2, t2 = s / 2;
    return a.annulus_region(g, t + 1 - t2, t + 1 + t2);
}

bool is_confined(const PlaneGraph& g, const Linkage& l, const RailedAnnulus& a,
                 const ConfinementSpec& spec) {
    if (spec.rails.empty()) throw Error(ErrorCode::BadSpec, "I must be non-empty");
    for (int j : spec.rails)
        if (j < 1 || j > a.q()) throw Error(ErrorCode::BadSpec, "rail index out of range");
    AnnulusRegion w = confinement_window(g, a, spec.s);
    for (VertexId v : l.vertices()) {
        if (!w.has_vertex(v)) continue;
        int rail = a.rail_of_vertex(v);
        if (rail == 0 || !spec.rails.count(rail)) return false;
    }
    for (EdgeId e : l.edge_ids(g)) {
        if (!w.has_edge(e)) continue;
        int rail = a.rail_of_edge(e);
        if (rail == 0 || !spec.rails.count(rail)) return false;
    }
    return true;
}

} // namespace linkcomb
