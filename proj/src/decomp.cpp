#include "linkcomb/decomp.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace linkcomb {

namespace {

int boundary_side(const CycleSequence& seq, VertexId v) {
    int c = seq.cycle_of_vertex(v);
    if (c == 1) return 1;
    if (c == seq.size()) return 2;
    return 0;
}

std::vector<VertexId> slice(const std::vector<VertexId>& p, int a, int b) {
    return std::vector<VertexId>(p.begin() + a, p.begin() + b + 1);
}

std::set<EdgeId> edges_of_cycle(const PlaneGraph& g, const std::vector<VertexId>& c) {
    std::set<EdgeId> out;
    for (size_t i = 0; i < c.size(); ++i)
        out.insert(*g.edge_between(c[i], c[(i + 1) % c.size()]));
    return out;
}

// Maximal runs of positions in [lo,hi] whose vertices lie on `base`,
// consecutive only across edges of that cycle (a chord between two
// cycle vertices separates runs, matching the point-set intersection).
std::vector<std::pair<int, int>> cycle_runs(const PlaneGraph& g, const CycleSequence& seq,
                                            const std::set<EdgeId>& base_edges, int base,
                                            const std::vector<VertexId>& path, int lo, int hi) {
    std::vector<std::pair<int, int>> runs;
    int bs = -1;
    for (int t = lo; t <= hi + 1; ++t) {
        bool on = t <= hi && seq.on_cycle(base, path[t]);
        if (!on) {
            if (bs >= 0) runs.push_back({bs, t - 1});
            bs = -1;
            continue;
        }
        if (bs < 0) {
            bs = t;
            continue;
        }
        if (!base_edges.count(*g.edge_between(path[t - 1], path[t]))) {
            runs.push_back({bs, t - 1});
            bs = t;
        }
    }
    return runs;
}

} // namespace

std::vector<AnnulusComponent> annulus_components(const PlaneGraph& g, const Linkage& l,
                                                 const CycleSequence& seq) {
    AnnulusRegion ann = seq.annulus_region(g, 1, seq.size());
    std::vector<AnnulusComponent> out;
    for (int pi = 0; pi < l.size(); ++pi) {
        const auto& path = l.path(pi);
        int n = static_cast<int>(path.size());
        int start = -1;
        for (int t = 0; t <= n; ++t) {
            bool in = t < n && ann.has_vertex(path[t]);
            if (in && start >= 0 &&
                !ann.has_edge(*g.edge_between(path[t - 1], path[t]))) {
                out.push_back({pi, start, t - 1, boundary_side(seq, path[start]),
                               boundary_side(seq, path[t - 1])});
                start = t;
                continue;
            }
            if (in && start < 0) start = t;
            if (!in && start >= 0) {
                out.push_back({pi, start, t - 1, boundary_side(seq, path[start]),
                               boundary_side(seq, path[t - 1])});
                start = -1;
            }
        }
    }
    return out;
}

std::vector<Stream> streams(const PlaneGraph& g, const Linkage& l, const CycleSequence& seq) {
    if (seq.kind() != SeqKind::Parallel)
        throw Error(ErrorCode::BadSpec, "streams need a parallel sequence");
    AnnulusRegion ann = seq.annulus_region(g, 1, seq.size());
    std::vector<Stream> out;
    for (int pi = 0; pi < l.size(); ++pi) {
        const auto& path = l.path(pi);
        int n = static_cast<int>(path.size());
        int anchor = -1, anchor_side = 0;
        for (int t = 0; t < n; ++t) {
            if (t > 0 && anchor >= 0 &&
                !ann.has_edge(*g.edge_between(path[t - 1], path[t])))
                anchor = -1;
            if (!ann.has_vertex(path[t])) {
                anchor = -1;
                continue;
            }
            int side = boundary_side(seq, path[t]);
            if (side == 0) continue;
            if (anchor >= 0 && anchor_side != side) {
                Stream z;
                z.path_index = pi;
                z.from = anchor;
                z.to = t;
                z.path = slice(path, anchor, t);
                z.enter_cycle = anchor_side == 1 ? 1 : seq.size();
                out.push_back(std::move(z));
                anchor = -1; // next stream must start strictly later
            } else {
                anchor = t;
                anchor_side = side;
            }
        }
    }
    return out;
}

std::vector<Stream> rivers(const PlaneGraph& g, const Linkage& l, const CycleSequence& seq) {
    auto zs = streams(g, l, seq);
    auto comps = annulus_components(g, l, seq);
    std::vector<Stream> out;
    for (auto& z : zs) {
        for (const auto& c : comps) {
            if (c.path_index != z.path_index || z.from < c.from || z.to > c.to) continue;
            bool crossing = c.side_from != 0 && c.side_to != 0 && c.side_from != c.side_to;
            int comp_enter = c.side_from == 1 ? 1 : seq.size();
            if (crossing && z.enter_cycle == comp_enter) {
                z.is_river = true;
                out.push_back(z);
            }
            break;
        }
    }
    return out;
}

std::vector<int> d_ordering(const PlaneGraph& g, const CycleSequence& seq,
                            const std::vector<Stream>& zs, const Region& d) {
    int nz = static_cast<int>(zs.size());
    if (nz == 0) return {};
    std::set<VertexId> seen;
    std::set<EdgeId> stream_edges;
    for (const auto& z : zs)
        for (size_t i = 0; i < z.path.size(); ++i) {
            if (!seen.insert(z.path[i]).second)
                throw Error(ErrorCode::StreamsNotDisjoint, "streams share a vertex");
            if (i + 1 < z.path.size())
                stream_edges.insert(*g.edge_between(z.path[i], z.path[i + 1]));
        }
    for (const auto& z : zs)
        for (VertexId v : z.path)
            if (d.contains_vertex(g, v))
                throw Error(ErrorCode::BadSpec, "reference region touches a stream");
    if (nz == 1) return {0};

    // position of each stream's C_1 endpoint along the ccw cycle
    const auto& c1 = seq.cycle(1);
    std::map<VertexId, int> c1pos;
    for (size_t i = 0; i < c1.size(); ++i) c1pos[c1[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> order; // (pos, stream index)
    for (int i = 0; i < nz; ++i) {
        VertexId endp =
            seq.cycle_of_vertex(zs[i].path.front()) == 1 ? zs[i].path.front() : zs[i].path.back();
        auto it = c1pos.find(endp);
        if (it == c1pos.end())
            throw Error(ErrorCode::BadSpec, "stream misses the inner boundary");
        order.push_back({it->second, i});
    }
    std::sort(order.begin(), order.end());

    // Sector of the annulus holding D: dual BFS from D's faces blocked
    // on stream edges; note which C_1 edge slot the sector touches.
    FaceSet ann = seq.faces_between(1, seq.size());
    FaceSet dstart = d.faces & ann;
    if (!dstart.any()) throw Error(ErrorCode::BadSpec, "reference region not in the annulus");
    std::set<EdgeId> c1_edges;
    std::map<EdgeId, int> slot_of; // C_1 edge -> slot k (between c1[k], c1[k+1])
    for (size_t k = 0; k < c1.size(); ++k) {
        EdgeId e = *g.edge_between(c1[k], c1[(k + 1) % c1.size()]);
        c1_edges.insert(e);
        slot_of[e] = static_cast<int>(k);
    }
    std::vector<char> vis(g.num_faces(), 0);
    std::queue<FaceId> qq;
    for (FaceId f : dstart.to_vector()) {
        vis[f] = 1;
        qq.push(f);
    }
    int slot = -1;
    while (!qq.empty() && slot < 0) {
        FaceId f = qq.front();
        qq.pop();
        for (Dart dd : g.faces()[f].boundary_walk) {
            EdgeId e = dd / 2;
            if (c1_edges.count(e)) {
                slot = slot_of[e];
                break;
            }
            if (stream_edges.count(e)) continue;
            FaceId f2 = g.face_of_dart(dd ^ 1);
            if (!ann.test(f2) || vis[f2]) continue;
            vis[f2] = 1;
            qq.push(f2);
        }
    }
    if (slot < 0) throw Error(ErrorCode::BadSpec, "reference region sector not found");

    // the stream whose endpoint position is the last one <= slot
    // (cyclically) comes last; the ordering starts just after it
    int last = -1;
    for (int i = 0; i < nz; ++i)
        if (order[i].first <= slot) last = i;
    if (last < 0) last = nz - 1; // slot precedes all endpoints: wrap
    std::vector<int> result;
    for (int i = 1; i <= nz; ++i) result.push_back(order[(last + i) % nz].second);
    return result;
}

// --- mountains and valleys ---

namespace {

struct ProbeSetup {
    FaceSet region;    // faces of the probe region for this base
    int far_cycle;     // boundary cycle the structure must avoid
    int sign;          // dehe = sign * (idx - base) + 1
};

// Enumerate the consecutive-bump subpaths of one linkage path against
// one base cycle.
void collect_bumps(const PlaneGraph& g, const Linkage& l, const CycleSequence& seq,
                   const Region& d, int base, MountainValley::Kind kind,
                   const ProbeSetup& ps, std::vector<MountainValley>& out) {
    const auto& bc = seq.cycle(base);
    std::set<EdgeId> base_edges = edges_of_cycle(g, bc);
    std::vector<VertexId> terminals = l.terminals();

    for (int pi = 0; pi < l.size(); ++pi) {
        const auto& path = l.path(pi);
        int n = static_cast<int>(path.size());
        auto in_region = [&](int t) {
            VertexId v = path[t];
            if (seq.on_cycle(base, v)) return true;
            return g.vertex_in_closed(ps.region, v);
        };
        auto edge_in_region = [&](int t) {
            EdgeId e = *g.edge_between(path[t - 1], path[t]);
            return base_edges.count(e) || g.edge_in_closed(ps.region, e);
        };
        // maximal runs inside the region
        int start = -1;
        std::vector<std::pair<int, int>> runs;
        for (int t = 0; t <= n; ++t) {
            bool in = t < n && in_region(t) && (t == 0 || start < 0 || edge_in_region(t));
            if (in && start < 0) start = t;
            if (!in && start >= 0) {
                runs.push_back({start, t - 1});
                start = t < n && in_region(t) ? t : -1;
            }
        }
        for (auto [ra, rb] : runs) {
            auto base_runs = cycle_runs(g, seq, base_edges, base, path, ra, rb);
            for (size_t k = 0; k + 1 < base_runs.size(); ++k) {
                int from = base_runs[k].first;
                int to = base_runs[k + 1].second;
                int exc_a = base_runs[k].second;    // last base vertex before the bump
                int exc_b = base_runs[k + 1].first; // first base vertex after it
                if (exc_b <= exc_a) continue;

                std::vector<VertexId> exc = slice(path, exc_a, exc_b);
                std::set<EdgeId> exc_edges;
                for (size_t t = 0; t + 1 < exc.size(); ++t)
                    exc_edges.insert(*g.edge_between(exc[t], exc[t + 1]));
                // boundary cycle of the pocket: excursion + a base arc
                int nb = static_cast<int>(bc.size());
                int pb = -1;
                for (int t = 0; t < nb; ++t)
                    if (bc[t] == exc.back()) pb = t;
                std::vector<VertexId> cyc = exc;
                for (int t = 1; t < nb; ++t) {
                    VertexId v = bc[(pb + t) % nb];
                    if (v == exc.front()) break;
                    cyc.push_back(v);
                }
                bool simple = true;
                {
                    std::set<VertexId> s(cyc.begin(), cyc.end());
                    simple = s.size() == cyc.size() && cyc.size() >= 3;
                }
                if (!simple) continue;
                FaceSet inner = g.disk_region(cyc).interior_faces;
                FaceSet pocket = inner & ps.region;
                FaceSet other = ps.region.minus(inner);

                // The pocket is the side of the excursion away from the far
                // boundary: it holds no face of a far-cycle edge the
                // excursion does not itself ride.
                FaceSet far_faces = g.empty_face_set();
                {
                    const auto& fc = seq.cycle(ps.far_cycle);
                    for (size_t t = 0; t < fc.size(); ++t) {
                        EdgeId e = *g.edge_between(fc[t], fc[(t + 1) % fc.size()]);
                        if (exc_edges.count(e)) continue;
                        far_faces.set(g.face_of_dart(2 * e));
                        far_faces.set(g.face_of_dart(2 * e + 1));
                    }
                    far_faces = far_faces & ps.region;
                }
                if (!far_faces.any()) continue;
                if (pocket.intersects(far_faces)) {
                    if (other.intersects(far_faces)) continue; // ambiguous: not a bump
                    std::swap(pocket, other);
                }

                // condition 4: the pocket shelters no terminal and no part of D
                bool bad = false;
                for (VertexId t : terminals)
                    if (g.vertex_in_closed(pocket, t)) bad = true;
                if (!d.is_empty()) {
                    if (d.faces.intersects(pocket)) bad = true;
                    for (VertexId v : g.vertices()) {
                        if (bad) break;
                        if (g.vertex_in_closed(pocket, v) && d.contains_vertex(g, v)) bad = true;
                    }
                }
                if (bad) continue;

                MountainValley mv;
                mv.kind = kind;
                mv.path_index = pi;
                mv.from = from;
                mv.to = to;
                mv.path = slice(path, from, to);
                mv.base_index = base;
                int dehe = 1;
                for (int t = from; t <= to; ++t) {
                    int idx = seq.cycle_of_vertex(path[t]);
                    if (idx > 0) dehe = std::max(dehe, ps.sign * (idx - base) + 1);
                }
                mv.dehe = dehe;
                mv.pocket = pocket;
                mv.pocket_cycle = cyc;
                out.push_back(std::move(mv));
            }
        }
    }
}

} // namespace

std::vector<MountainValley> mountains_valleys(const PlaneGraph& g, const Linkage& l,
                                              const CycleSequence& seq, const Region& d) {
    std::vector<MountainValley> out;
    int p = seq.size();
    for (int base = 1; base <= p; ++base) {
        if (seq.kind() == SeqKind::Parallel) {
            if (base < p) { // mountains climb toward C_p
                ProbeSetup ps{seq.faces_between(base, p), p, +1};
                collect_bumps(g, l, seq, d, base, MountainValley::Kind::Mountain, ps, out);
            }
            if (base > 1) { // valleys dip toward C_1
                ProbeSetup ps{seq.faces_between(1, base), 1, -1};
                collect_bumps(g, l, seq, d, base, MountainValley::Kind::Valley, ps, out);
            }
        } else {
            if (base < p) { // nested mountains dip inward (higher index = deeper)
                ProbeSetup ps{seq.region(base).interior_faces, p, +1};
                collect_bumps(g, l, seq, d, base, MountainValley::Kind::Mountain, ps, out);
            }
            if (base > 1) { // nested valleys bulge outward
                ProbeSetup ps{seq.faces_between(1, base), 1, -1};
                collect_bumps(g, l, seq, d, base, MountainValley::Kind::Valley, ps, out);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const MountainValley& a, const MountainValley& b) {
        return std::tie(a.path_index, a.from, a.base_index) <
               std::tie(b.path_index, b.from, b.base_index);
    });
    return out;
}

bool is_tight(const PlaneGraph& g, const MountainValley& m,
              const std::vector<MountainValley>& all, int r) {
    if ((m.dehe - 2) % (r + 1) != 0 || m.dehe < 2) return false;
    int d = (m.dehe - 2) / (r + 1);
    if (d == 0) return true;
    // candidates with the same base and kind, keyed by tower level
    std::vector<std::vector<int>> by_level(d + 1);
    for (size_t i = 0; i < all.size(); ++i) {
        const auto& c = all[i];
        if (c.base_index != m.base_index || c.kind != m.kind) continue;
        if (c.dehe < 2 || (c.dehe - 2) % (r + 1) != 0) continue;
        int lv = (c.dehe - 2) / (r + 1);
        if (lv <= d) by_level[lv].push_back(static_cast<int>(i));
    }
    auto inside = [&](const MountainValley& inner, const MountainValley& outer) {
        for (VertexId v : inner.path)
            if (!g.vertex_in_closed(outer.pocket, v)) return false;
        for (size_t i = 0; i + 1 < inner.path.size(); ++i)
            if (!g.edge_in_closed(outer.pocket, *g.edge_between(inner.path[i], inner.path[i + 1])))
                return false;
        return true;
    };
    // DFS down the tower from m
    std::vector<std::vector<char>> memo(d + 1);
    for (int lv = 0; lv <= d; ++lv) memo[lv].assign(all.size(), 2);
    std::function<bool(const MountainValley&, int)> chain = [&](const MountainValley& top,
                                                                int lv) -> bool {
        if (lv == 0) return true;
        for (int idx : by_level[lv - 1]) {
            if (!inside(all[idx], top)) continue;
            char& mm = memo[lv - 1][idx];
            if (mm == 2) mm = chain(all[idx], lv - 1) ? 1 : 0;
            if (mm == 1) return true;
        }
        return false;
    };
    return chain(m, d);
}

std::vector<BridgeRecord> bridges(const PlaneGraph& g, const Linkage& l,
                                  const Region& open_disk) {
    std::vector<BridgeRecord> out;
    std::set<VertexId> terms;
    for (VertexId t : l.terminals()) terms.insert(t);
    for (int pi = 0; pi < l.size(); ++pi) {
        const auto& path = l.path(pi);
        int n = static_cast<int>(path.size());
        auto outside = [&](int t) { return !g.vertex_in_open(open_disk.faces, path[t]); };
        auto edge_outside = [&](int t) {
            return !g.edge_meets_open(open_disk.faces, *g.edge_between(path[t - 1], path[t]));
        };
        int start = -1;
        for (int t = 0; t <= n; ++t) {
            bool in = t < n && outside(t) && (start < 0 || t == 0 || edge_outside(t));
            if (in && start < 0) start = t;
            if (!in && start >= 0) {
                bool terminal_free = true;
                for (int u = start; u <= t - 1; ++u)
                    if (terms.count(path[u])) terminal_free = false;
                if (terminal_free)
                    out.push_back({pi, start, t - 1, slice(path, start, t - 1)});
                start = t < n && outside(t) ? t : -1;
            }
        }
    }
    return out;
}

std::vector<CrossRecord> crossings(const PlaneGraph& g, const Linkage& l,
                                   const CycleSequence& seq) {
    std::vector<CrossRecord> out;
    int p = seq.size();
    for (int i = 1; i <= p; ++i) {
        const auto& cyc = seq.cycle(i);
        std::set<EdgeId> cyc_edges;
        for (size_t k = 0; k < cyc.size(); ++k)
            cyc_edges.insert(*g.edge_between(cyc[k], cyc[(k + 1) % cyc.size()]));
        // side test against the closed disk enclosed by C_i
        const FaceSet& level = seq.region(i).interior_faces;
        auto edge_in_di = [&](EdgeId e) {
            return cyc_edges.count(e) || g.edge_in_closed(level, e);
        };
        for (int pi = 0; pi < l.size(); ++pi) {
            const auto& path = l.path(pi);
            int n = static_cast<int>(path.size());
            for (auto [a, b] : cycle_runs(g, seq, cyc_edges, i, path, 0, n - 1)) {
                if (a == 0 || b == n - 1) continue; // runs at the path ends are not crossings
                EdgeId eq = *g.edge_between(path[a - 1], path[a]);
                EdgeId er = *g.edge_between(path[b], path[b + 1]);
                if (edge_in_di(eq) != edge_in_di(er))
                    out.push_back({pi, i, slice(path, a, b)});
            }
        }
    }
    return out;
}

} // namespace linkcomb
