#include "linkcomb/structures.hpp"

#include <algorithm>
#include <queue>

namespace linkcomb {

namespace {

// Rotate + orient a cycle into canonical form: starts at its minimum
// vertex, counter-clockwise (disk side on the left).
std::vector<VertexId> canonical_cycle(const PlaneGraph& g, std::vector<VertexId> c) {
    c = g.orient_ccw(c);
    auto mn = std::min_element(c.begin(), c.end());
    std::rotate(c.begin(), mn, c.end());
    return c;
}

// Positions (indices) of the vertices of `sub` within `seq`.
std::vector<int> positions_in(const std::vector<VertexId>& seq, const std::set<VertexId>& sub) {
    std::vector<int> pos;
    for (size_t i = 0; i < seq.size(); ++i)
        if (sub.count(seq[i])) pos.push_back(static_cast<int>(i));
    return pos;
}

bool contiguous_linear(const std::vector<int>& pos) {
    for (size_t i = 0; i + 1 < pos.size(); ++i)
        if (pos[i + 1] != pos[i] + 1) return false;
    return true;
}

// Contiguity on a cyclic sequence of length n; returns the start index
// of the run, or -1.
int cyclic_run_start(const std::vector<int>& pos, int n) {
    if (pos.empty()) return -1;
    int k = static_cast<int>(pos.size());
    if (k == n) return pos[0];
    std::vector<char> mark(n, 0);
    for (int p : pos) mark[p] = 1;
    int start = -1;
    for (int p : pos)
        if (!mark[(p + n - 1) % n]) {
            if (start >= 0) return -1; // two runs
            start = p;
        }
    if (start < 0) return -1;
    for (int i = 0; i < k; ++i)
        if (!mark[(start + i) % n]) return -1;
    return start;
}

} // namespace

// --- AnnulusRegion ---

bool AnnulusRegion::has_vertex(VertexId v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

bool AnnulusRegion::has_edge(EdgeId e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
}

// --- CycleSequence ---

CycleSequence CycleSequence::build(const PlaneGraph& g, SeqKind kind,
                                   std::vector<std::vector<VertexId>> cycles) {
    if (cycles.empty()) throw Error(ErrorCode::MalformedInput, "empty cycle sequence");
    CycleSequence s;
    s.kind_ = kind;
    for (auto& c : cycles) {
        if (!g.is_cycle(c)) throw Error(ErrorCode::NotACycle, "cycle sequence member");
        s.cycles_.push_back(canonical_cycle(g, c));
    }
    // pairwise vertex-disjoint
    std::set<VertexId> seen;
    for (size_t i = 0; i < s.cycles_.size(); ++i)
        for (VertexId v : s.cycles_[i]) {
            if (!seen.insert(v).second)
                throw Error(ErrorCode::MalformedInput, "cycles share a vertex");
            s.vertex_cycle_[v] = static_cast<int>(i) + 1;
        }
    for (auto& c : s.cycles_) s.regions_.push_back(g.disk_region(c));

    // Normalize order so region face-sets grow for parallel sequences
    // (C_1 innermost) and shrink for nested ones (C_1 outermost).
    auto grows = [&](int i) {
        return s.regions_[i + 1].interior_faces.minus(s.regions_[i].interior_faces).any() &&
               !s.regions_[i].interior_faces.minus(s.regions_[i + 1].interior_faces).any();
    };
    if (s.cycles_.size() >= 2) {
        bool asc = grows(0);
        if ((kind == SeqKind::Parallel && !asc) || (kind == SeqKind::Nested && asc)) {
            std::reverse(s.cycles_.begin(), s.cycles_.end());
            std::reverse(s.regions_.begin(), s.regions_.end());
            for (auto& [v, i] : s.vertex_cycle_) i = static_cast<int>(s.cycles_.size()) - i + 1;
        }
        for (size_t i = 0; i + 1 < s.cycles_.size(); ++i) {
            bool ok = (kind == SeqKind::Parallel) ? grows(static_cast<int>(i))
                                                  : !grows(static_cast<int>(i));
            if (!ok) throw Error(ErrorCode::MalformedInput, "cycles are not nested in order");
        }
    }
    for (auto& c : s.cycles_)
        for (size_t i = 0; i < c.size(); ++i)
            s.cycle_edges_.insert(*g.edge_between(c[i], c[(i + 1) % c.size()]));
    return s;
}

const std::vector<VertexId>& CycleSequence::cycle(int i) const {
    if (i < 1 || i > size()) throw Error(ErrorCode::IndexOutOfRange, "cycle " + std::to_string(i));
    return cycles_[i - 1];
}

const DiskRegion& CycleSequence::region(int i) const {
    if (i < 1 || i > size()) throw Error(ErrorCode::IndexOutOfRange, "region " + std::to_string(i));
    return regions_[i - 1];
}

bool CycleSequence::on_cycle(int i, VertexId v) const {
    auto it = vertex_cycle_.find(v);
    return it != vertex_cycle_.end() && it->second == i;
}

int CycleSequence::cycle_of_vertex(VertexId v) const {
    auto it = vertex_cycle_.find(v);
    return it == vertex_cycle_.end() ? 0 : it->second;
}

bool CycleSequence::is_cycle_edge(EdgeId e) const { return cycle_edges_.count(e) > 0; }

FaceSet CycleSequence::faces_between(int lo, int hi) const {
    if (lo < 1 || hi > size() || lo > hi)
        throw Error(ErrorCode::IndexOutOfRange, "faces_between");
    if (kind_ == SeqKind::Parallel)
        return regions_[hi - 1].interior_faces.minus(regions_[lo - 1].interior_faces);
    return regions_[lo - 1].interior_faces.minus(regions_[hi - 1].interior_faces);
}

AnnulusRegion CycleSequence::annulus_region(const PlaneGraph& g, int lo, int hi) const {
    AnnulusRegion r;
    r.lo = lo;
    r.hi = hi;
    r.faces = faces_between(lo, hi);
    std::set<VertexId> bv(cycle(lo).begin(), cycle(lo).end());
    bv.insert(cycle(hi).begin(), cycle(hi).end());
    std::set<EdgeId> be;
    for (int i : {lo, hi}) {
        const auto& c = cycle(i);
        for (size_t k = 0; k < c.size(); ++k)
            be.insert(*g.edge_between(c[k], c[(k + 1) % c.size()]));
    }
    r.boundary_vertices.assign(bv.begin(), bv.end());
    r.boundary_edges.assign(be.begin(), be.end());

    std::set<VertexId> vs(bv.begin(), bv.end());
    for (VertexId v : g.vertices())
        if (g.vertex_in_closed(r.faces, v)) vs.insert(v);
    std::set<EdgeId> es(be.begin(), be.end());
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (g.edge_in_closed(r.faces, e)) es.insert(e);
    r.vertices.assign(vs.begin(), vs.end());
    r.edges.assign(es.begin(), es.end());
    return r;
}

std::set<EdgeId> CycleSequence::background_edges(const PlaneGraph& g, const FaceSet& avoid) const {
    std::set<EdgeId> out;
    for (EdgeId e : cycle_edges_) {
        const Edge& ed = g.edges()[e];
        if (avoid.any() &&
            (g.vertex_in_closed(avoid, ed.u) || g.vertex_in_closed(avoid, ed.v)))
            continue;
        out.insert(e);
    }
    return out;
}

// --- RailedAnnulus ---

ValidationReport validate_railed_annulus(const PlaneGraph& g,
                                         const std::vector<std::vector<VertexId>>& cycles,
                                         const std::vector<std::vector<VertexId>>& rails) {
    ValidationReport rep;
    int p = static_cast<int>(cycles.size());
    int q = static_cast<int>(rails.size());
    if (p < 3 || p % 2 == 0) rep.fail("p must be odd and >= 3, got " + std::to_string(p));
    if (q < 3) rep.fail("q must be >= 3, got " + std::to_string(q));
    for (int i = 0; i < p; ++i)
        if (!g.is_cycle(cycles[i])) rep.fail("cycle " + std::to_string(i + 1) + " is not a cycle");
    for (int j = 0; j < q; ++j)
        if (!g.is_path(rails[j])) rep.fail("rail " + std::to_string(j + 1) + " is not a path");
    if (!rep.ok) return rep;

    CycleSequence seq = [&]() -> CycleSequence {
        try {
            return CycleSequence::build(g, SeqKind::Parallel, cycles);
        } catch (const Error& e) {
            rep.fail(e.what());
            return CycleSequence::build(g, SeqKind::Parallel, {cycles[0]});
        }
    }();
    if (!rep.ok) return rep;

    // rails pairwise disjoint, contained in the annulus
    std::set<VertexId> seen;
    for (int j = 0; j < q; ++j)
        for (VertexId v : rails[j])
            if (!seen.insert(v).second)
                rep.fail("rails share vertex " + std::to_string(v) + " at rail " +
                         std::to_string(j + 1));
    AnnulusRegion ann = seq.annulus_region(g, 1, seq.size());
    for (int j = 0; j < q; ++j) {
        for (VertexId v : rails[j])
            if (!ann.has_vertex(v)) {
                rep.fail("rail " + std::to_string(j + 1) + " leaves the annulus at vertex " +
                         std::to_string(v));
                break;
            }
        for (size_t k = 0; k + 1 < rails[j].size(); ++k) {
            EdgeId e = *g.edge_between(rails[j][k], rails[j][k + 1]);
            if (!ann.has_edge(e)) {
                rep.fail("rail " + std::to_string(j + 1) + " edge leaves the annulus");
                break;
            }
        }
    }

    // every crossing a non-empty path, contiguous on both the rail and the cycle
    for (int i = 1; i <= seq.size(); ++i) {
        std::set<VertexId> cy(seq.cycle(i).begin(), seq.cycle(i).end());
        for (int j = 0; j < q; ++j) {
            auto pos = positions_in(rails[j], cy);
            if (pos.empty()) {
                rep.fail("crossing (" + std::to_string(i) + "," + std::to_string(j + 1) +
                         ") is empty");
                continue;
            }
            if (!contiguous_linear(pos)) {
                rep.fail("crossing (" + std::to_string(i) + "," + std::to_string(j + 1) +
                         ") is not a path along the rail");
                continue;
            }
            std::set<VertexId> rv(rails[j].begin(), rails[j].end());
            auto cpos = positions_in(seq.cycle(i), rv);
            if (cyclic_run_start(cpos, static_cast<int>(seq.cycle(i).size())) < 0)
                rep.fail("crossing (" + std::to_string(i) + "," + std::to_string(j + 1) +
                         ") is not a path along the cycle");
        }
    }
    return rep;
}

RailedAnnulus RailedAnnulus::build(const PlaneGraph& g,
                                   std::vector<std::vector<VertexId>> cycles,
                                   std::vector<std::vector<VertexId>> rails) {
    ValidationReport rep = validate_railed_annulus(g, cycles, rails);
    if (!rep.ok) throw Error(ErrorCode::MalformedInput, rep.violations.front());

    RailedAnnulus a;
    a.g_ = &g;
    a.seq_ = CycleSequence::build(g, SeqKind::Parallel, std::move(cycles));
    int p = a.seq_.size();
    int q = static_cast<int>(rails.size());

    // Orient every rail from its C_1 crossing toward its C_p crossing.
    for (auto& r : rails) {
        int first1 = -1, firstp = -1;
        for (size_t k = 0; k < r.size(); ++k) {
            int c = a.seq_.cycle_of_vertex(r[k]);
            if (c == 1 && first1 < 0) first1 = static_cast<int>(k);
            if (c == p && firstp < 0) firstp = static_cast<int>(k);
        }
        if (first1 > firstp) std::reverse(r.begin(), r.end());
    }

    // Rail 1 carries the smallest rail-crossing vertex of C_1; the rest
    // follow counter-clockwise around C_1.
    const auto& c1 = a.seq_.cycle(1);
    std::map<VertexId, int> rail_at; // C_1 vertex -> rail index (input order)
    for (int j = 0; j < q; ++j)
        for (VertexId v : rails[j])
            if (a.seq_.on_cycle(1, v)) rail_at[v] = j;
    VertexId anchor = -1;
    for (auto& [v, j] : rail_at)
        if (anchor < 0 || v < anchor) anchor = v;
    if (anchor < 0) throw Error(ErrorCode::MalformedInput, "no rail meets C_1");
    int anchor_pos = -1;
    for (size_t k = 0; k < c1.size(); ++k)
        if (c1[k] == anchor) anchor_pos = static_cast<int>(k);
    std::vector<int> order;
    std::set<int> taken;
    for (size_t off = 0; off < c1.size(); ++off) {
        VertexId v = c1[(anchor_pos + off) % c1.size()];
        auto it = rail_at.find(v);
        if (it != rail_at.end() && taken.insert(it->second).second) order.push_back(it->second);
    }
    if (static_cast<int>(order.size()) != q)
        throw Error(ErrorCode::MalformedInput, "rail ordering on C_1 incomplete");
    for (int j : order) a.rails_.push_back(std::move(rails[j]));

    // crossings + membership maps
    a.cross_.assign(p, std::vector<std::vector<VertexId>>(q));
    for (int j = 0; j < q; ++j) {
        const auto& r = a.rails_[j];
        for (size_t k = 0; k < r.size(); ++k) {
            a.vertex_rail_[r[k]] = j + 1;
            if (k + 1 < r.size()) a.edge_rail_[*g.edge_between(r[k], r[k + 1])] = j + 1;
        }
        for (int i = 1; i <= p; ++i) {
            std::set<VertexId> cy(a.seq_.cycle(i).begin(), a.seq_.cycle(i).end());
            for (VertexId v : r)
                if (cy.count(v)) a.cross_[i - 1][j].push_back(v);
        }
    }
    return a;
}

const std::vector<VertexId>& RailedAnnulus::rail(int j) const {
    if (j < 1 || j > q()) throw Error(ErrorCode::IndexOutOfRange, "rail " + std::to_string(j));
    return rails_[j - 1];
}

const std::vector<VertexId>& RailedAnnulus::crossing(int i, int j) const {
    if (i < 1 || i > p() || j < 1 || j > q())
        throw Error(ErrorCode::IndexOutOfRange, "crossing");
    return cross_[i - 1][j - 1];
}

AnnulusRegion RailedAnnulus::annulus_region(const PlaneGraph& g, int i, int j) const {
    if (i < 1 || j > p() || i > j) throw Error(ErrorCode::IndexOutOfRange, "annulus_region");
    return seq_.annulus_region(g, i, j);
}

int RailedAnnulus::rail_of_vertex(VertexId v) const {
    auto it = vertex_rail_.find(v);
    return it == vertex_rail_.end() ? 0 : it->second;
}

bool RailedAnnulus::is_rail_edge(EdgeId e) const { return edge_rail_.count(e) > 0; }

int RailedAnnulus::rail_of_edge(EdgeId e) const {
    auto it = edge_rail_.find(e);
    return it == edge_rail_.end() ? 0 : it->second;
}

// --- DerivedDisks ---

DerivedDisks DerivedDisks::build(const PlaneGraph& g, const RailedAnnulus& a) {
    if (a.p() < 5 || a.q() < 5)
        throw Error(ErrorCode::TooSmall, "derive_disks needs p,q >= 5");
    DerivedDisks d;
    d.g_ = &g;
    d.a_ = &a;
    int p = a.p(), q = a.q();

    // F^(i): the (P_{i,q}, P_{i,1})-path on C_i dodging rail 2.
    d.f_arcs_.resize(p);
    for (int i = 1; i <= p; ++i) {
        const auto& cyc = a.cycle(i);
        int n = static_cast<int>(cyc.size());
        std::set<VertexId> runq(a.crossing(i, q).begin(), a.crossing(i, q).end());
        std::set<VertexId> run1(a.crossing(i, 1).begin(), a.crossing(i, 1).end());
        std::set<VertexId> rail2(a.rail(2).begin(), a.rail(2).end());
        std::vector<VertexId> best;
        for (int s = 0; s < n && best.empty(); ++s) {
            if (!runq.count(cyc[s])) continue;
            for (int dir : {1, -1}) {
                // start must be the run edge-end in this direction
                if (runq.count(cyc[(s + dir + n) % n])) continue;
                std::vector<VertexId> walk{cyc[s]};
                bool ok = true;
                for (int t = 1; t < n; ++t) {
                    VertexId v = cyc[(s + dir * t + n) % n];
                    walk.push_back(v);
                    if (run1.count(v)) break;
                    if (rail2.count(v) || runq.count(v)) {
                        ok = false;
                        break;
                    }
                }
                if (ok && run1.count(walk.back())) {
                    // extend over the full end runs
                    std::vector<VertexId> full;
                    int s2 = s;
                    while (runq.count(cyc[(s2 - dir + n) % n]) &&
                           static_cast<int>(full.size()) < n)
                        s2 = (s2 - dir + n) % n;
                    for (int t = 0;; ++t) {
                        VertexId v = cyc[(s2 + dir * t + n) % n];
                        full.push_back(v);
                        if (run1.count(v) && !run1.count(cyc[(s2 + dir * (t + 1) + n) % n]))
                            break;
                        if (t > 2 * n) {
                            full.clear();
                            break;
                        }
                    }
                    best = full;
                    break;
                }
            }
        }
        if (best.empty())
            throw Error(ErrorCode::MalformedInput,
                        "F-arc not found on cycle " + std::to_string(i));
        d.f_arcs_[i - 1] = best;
        for (size_t k = 0; k + 1 < best.size(); ++k)
            d.f_edges_.insert(*g.edge_between(best[k], best[k + 1]));
    }

    d.z_ = std::min(p, q) / 2;
    std::vector<std::vector<VertexId>> nested_cycles;
    for (int i = 1; i <= d.z_; ++i) {
        DiskRegion r = d.rect_disk(i, p - i + 1, i, q - i + 1);
        nested_cycles.push_back(r.bounding_cycle);
        d.nested_disks_.push_back(std::move(r));
    }
    d.nested_ = CycleSequence::build(g, SeqKind::Nested, nested_cycles);
    // keep the disks aligned with the (possibly re-canonicalised) order
    d.nested_disks_.clear();
    for (int i = 1; i <= d.z_; ++i) d.nested_disks_.push_back(g.disk_region(d.nested_.cycle(i)));
    return d;
}

std::vector<VertexId> DerivedDisks::l_path(int i, int j, int j2) const {
    const PlaneGraph& g = *g_;
    const RailedAnnulus& a = *a_;
    if (j == j2) throw Error(ErrorCode::IndexOutOfRange, "l_path needs j != j'");
    const auto& cyc = a.cycle(i);
    int n = static_cast<int>(cyc.size());
    // Arc A: the cycle minus the F-arc edges, walked from the F-arc's
    // last vertex around to its first.
    const auto& farc = f_arcs_[i - 1];
    std::map<VertexId, int> pos;
    for (int k = 0; k < n; ++k) pos[cyc[k]] = k;
    int fa = pos.at(farc.front());
    int fb = pos.at(farc.back());
    int dir = (cyc[(fa + 1) % n] == (farc.size() > 1 ? farc[1] : farc.front())) ? 1 : -1;
    std::vector<VertexId> arc;
    for (int t = 0;; ++t) {
        VertexId v = cyc[(fb + dir * t + n) % n];
        arc.push_back(v);
        if (v == cyc[fa]) break;
        if (t > 2 * n) throw Error(ErrorCode::MalformedInput, "arc walk failed");
    }
    std::set<VertexId> cj(a.crossing(i, j).begin(), a.crossing(i, j).end());
    std::set<VertexId> cj2(a.crossing(i, j2).begin(), a.crossing(i, j2).end());
    auto pj = positions_in(arc, cj);
    auto pj2 = positions_in(arc, cj2);
    if (pj.empty() || pj2.empty())
        throw Error(ErrorCode::MalformedInput, "crossing not reachable off F");
    // contiguous runs on the arc; take the nearest facing ends
    int from, to;
    if (pj.back() < pj2.front()) {
        from = pj.back();
        to = pj2.front();
    } else if (pj2.back() < pj.front()) {
        from = pj.front();
        to = pj2.back();
    } else {
        throw Error(ErrorCode::MalformedInput, "crossings interleave on arc");
    }
    std::vector<VertexId> out;
    int step = from <= to ? 1 : -1;
    for (int k = from;; k += step) {
        out.push_back(arc[k]);
        if (k == to) break;
    }
    (void)g;
    return out;
}

std::vector<VertexId> DerivedDisks::r_path(int i, int i2, int j) const {
    const RailedAnnulus& a = *a_;
    if (i == i2) return a.crossing(i, j);
    const auto& r = a.rail(j);
    std::set<VertexId> ci(a.crossing(i, j).begin(), a.crossing(i, j).end());
    std::set<VertexId> ci2(a.crossing(i2, j).begin(), a.crossing(i2, j).end());
    auto pi = positions_in(r, ci);
    auto pi2 = positions_in(r, ci2);
    int from, to;
    if (pi.back() < pi2.front()) {
        from = pi.back();
        to = pi2.front();
    } else {
        from = pi.front();
        to = pi2.back();
    }
    std::vector<VertexId> out;
    int step = from <= to ? 1 : -1;
    for (int k = from;; k += step) {
        out.push_back(r[k]);
        if (k == to) break;
    }
    return out;
}

DiskRegion DerivedDisks::rect_disk(int i, int i2, int j, int j2) const {
    const PlaneGraph& g = *g_;
    const RailedAnnulus& a = *a_;
    if (!(i < i2 && j < j2)) throw Error(ErrorCode::IndexOutOfRange, "rect_disk indices");

    auto add_path = [&](std::map<VertexId, std::set<VertexId>>& adj,
                        const std::vector<VertexId>& pth) {
        for (size_t k = 0; k + 1 < pth.size(); ++k) {
            adj[pth[k]].insert(pth[k + 1]);
            adj[pth[k + 1]].insert(pth[k]);
        }
        if (!pth.empty()) adj.try_emplace(pth.front());
    };
    std::map<VertexId, std::set<VertexId>> adj;
    add_path(adj, a.crossing(i, j));
    add_path(adj, l_path(i, j, j2));
    add_path(adj, a.crossing(i, j2));
    add_path(adj, r_path(i, i2, j2));
    add_path(adj, a.crossing(i2, j2));
    add_path(adj, l_path(i2, j2, j));
    add_path(adj, a.crossing(i2, j));
    add_path(adj, r_path(i2, i, j));

    // strip hair, leaving the unique cycle
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = adj.begin(); it != adj.end();) {
            if (it->second.size() <= 1) {
                for (VertexId u : it->second) adj[u].erase(it->first);
                it = adj.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    if (adj.empty()) throw Error(ErrorCode::MalformedInput, "rectangle boundary degenerate");
    for (auto& [v, nb] : adj)
        if (nb.size() != 2)
            throw Error(ErrorCode::MalformedInput, "rectangle boundary is not a single cycle");
    std::vector<VertexId> cyc{adj.begin()->first};
    VertexId prev = -1;
    while (true) {
        VertexId cur = cyc.back();
        VertexId nxt = -1;
        for (VertexId u : adj[cur])
            if (u != prev) {
                nxt = u;
                break;
            }
        if (nxt == cyc.front()) break;
        cyc.push_back(nxt);
        prev = cur;
    }
    if (cyc.size() != adj.size())
        throw Error(ErrorCode::MalformedInput, "rectangle boundary disconnected");
    return g.disk_region(cyc);
}

const DiskRegion& DerivedDisks::nested_disk(int i) const {
    if (i < 1 || i > z_) throw Error(ErrorCode::IndexOutOfRange, "nested_disk");
    return nested_disks_[i - 1];
}

} // namespace linkcomb
