#include "linkcomb/comb.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace linkcomb {

namespace {

// --- grid routing ---

int manhattan(const GridPoint& a, const GridPoint& b) {
    return std::abs(a.first - b.first) + std::abs(a.second - b.second);
}

bool grid_paths_valid(const std::vector<GridPath>& paths, const GridRoutingProblem& p) {
    std::set<GridPoint> seen;
    for (const auto& path : paths)
        for (const auto& pt : path) {
            if (pt.first < 1 || pt.first > p.cols || pt.second < 1 || pt.second > p.rows)
                return false;
            if (!seen.insert(pt).second) return false;
        }
    for (size_t i = 0; i < paths.size(); ++i)
        for (size_t j = i + 1; j < paths.size(); ++j)
            for (const auto& x : paths[i])
                for (const auto& y : paths[j])
                    if (manhattan(x, y) <= p.r) return false;
    return true;
}

GridPath l_shape(int ucol, int dcol, int rows, int jog) {
    GridPath path;
    for (int y = rows; y >= jog; --y) path.push_back({ucol, y});
    int step = dcol > ucol ? 1 : -1;
    for (int x = ucol + step; dcol != ucol && x != dcol + step; x += step) path.push_back({x, jog});
    for (int y = jog - 1; y >= 1; --y) path.push_back({dcol, y});
    return path;
}

struct GridDfs {
    const GridRoutingProblem& p;
    long long budget;
    std::set<GridPoint> blocked; // used + scattered-forbidden
    std::vector<GridPath> done;

    bool near_any(const GridPoint& pt, const std::vector<GridPoint>& pts, int rad) const {
        for (const auto& q : pts)
            if (manhattan(pt, q) <= rad) return true;
        return false;
    }

    bool route(size_t idx) {
        if (static_cast<int>(idx) == p.d) return true;
        GridPoint s{p.up_cols[idx], p.rows};
        GridPoint t{p.down_cols[idx], 1};
        // forbid r-balls of later terminals
        std::vector<GridPoint> pending;
        for (int k = static_cast<int>(idx) + 1; k < p.d; ++k) {
            pending.push_back({p.up_cols[k], p.rows});
            pending.push_back({p.down_cols[k], 1});
        }
        GridPath path{s};
        std::set<GridPoint> used_here{s};
        std::function<bool(GridPoint)> go = [&](GridPoint at) -> bool {
            if (--budget < 0) throw Error(ErrorCode::SearchBudgetExceeded, "grid routing");
            if (at == t) {
                done.push_back(path);
                std::vector<GridPoint> saved;
                for (const auto& pt : path)
                    for (int dx = -p.r; dx <= p.r; ++dx)
                        for (int dy = -p.r + std::abs(dx); dy <= p.r - std::abs(dx); ++dy) {
                            GridPoint q{pt.first + dx, pt.second + dy};
                            if (blocked.insert(q).second) saved.push_back(q);
                        }
                if (route(idx + 1)) return true;
                for (const auto& q : saved) blocked.erase(q);
                done.pop_back();
                return false;
            }
            // bias downward and toward the target column
            int step = t.first >= at.first ? 1 : -1;
            GridPoint cands[4] = {{at.first, at.second - 1},
                                  {at.first + step, at.second},
                                  {at.first - step, at.second},
                                  {at.first, at.second + 1}};
            for (const auto& nx : cands) {
                if (nx.first < 1 || nx.first > p.cols || nx.second < 1 || nx.second > p.rows)
                    continue;
                if (used_here.count(nx) || blocked.count(nx)) continue;
                if (near_any(nx, pending, p.r)) continue;
                path.push_back(nx);
                used_here.insert(nx);
                if (go(nx)) return true;
                used_here.erase(nx);
                path.pop_back();
            }
            return false;
        };
        if (blocked.count(s) || blocked.count(t) || near_any(s, pending, p.r) ||
            near_any(t, pending, p.r))
            return false;
        return go(s);
    }
};

std::vector<GridPath> route_grid_lax(const GridRoutingProblem& p, long long budget) {
    if (p.d == 0) return {};
    // one jog row per path; try a few canonical band assignments, then
    // every assignment, then free search
    std::vector<std::vector<int>> attempts;
    {
        std::vector<int> asc, desc;
        for (int i = 1; i <= p.d; ++i) {
            asc.push_back(std::min(p.rows, i * (p.r + 1)));
            desc.push_back(std::min(p.rows, (p.d - i + 1) * (p.r + 1)));
        }
        attempts.push_back(asc);
        attempts.push_back(desc);
    }
    for (const auto& jogs : attempts) {
        std::vector<GridPath> paths;
        for (int i = 0; i < p.d; ++i)
            paths.push_back(l_shape(p.up_cols[i], p.down_cols[i], p.rows, jogs[i]));
        if (grid_paths_valid(paths, p)) return paths;
    }
    // exhaustive jog-row combinations
    std::vector<int> jog(p.d, 1);
    while (true) {
        std::vector<GridPath> paths;
        for (int i = 0; i < p.d; ++i)
            paths.push_back(l_shape(p.up_cols[i], p.down_cols[i], p.rows, jog[i]));
        if (grid_paths_valid(paths, p)) return paths;
        int i = 0;
        while (i < p.d && ++jog[i] > p.rows) jog[i++] = 1;
        if (i == p.d) break;
    }
    GridDfs dfs{p, budget, {}, {}};
    if (dfs.route(0)) return dfs.done;
    throw Error(ErrorCode::Infeasible, "grid routing found no scattered paths");
}

// --- annulus path plumbing ---

std::vector<int> run_of(const std::vector<VertexId>& seq, const std::set<VertexId>& sub) {
    std::vector<int> pos;
    for (size_t i = 0; i < seq.size(); ++i)
        if (sub.count(seq[i])) pos.push_back(static_cast<int>(i));
    return pos;
}

// rail-j segment between crossings with cycles i1 and i2, contact to contact
std::vector<VertexId> rail_segment(const RailedAnnulus& a, int j, int i1, int i2) {
    const auto& rail = a.rail(j);
    std::set<VertexId> c1(a.crossing(i1, j).begin(), a.crossing(i1, j).end());
    std::set<VertexId> c2(a.crossing(i2, j).begin(), a.crossing(i2, j).end());
    auto p1 = run_of(rail, c1), p2 = run_of(rail, c2);
    int from, to;
    if (p1.back() < p2.front()) {
        from = p1.back();
        to = p2.front();
    } else {
        from = p1.front();
        to = p2.back();
    }
    std::vector<VertexId> out;
    int step = from <= to ? 1 : -1;
    for (int k = from;; k += step) {
        out.push_back(rail[k]);
        if (k == to) break;
    }
    return out;
}

// cycle-i arc between the crossings of adjacent rails j and j2, not
// passing any other rail
std::vector<VertexId> sector_arc(const RailedAnnulus& a, int i, int j, int j2) {
    const auto& cyc = a.cycle(i);
    int n = static_cast<int>(cyc.size());
    std::set<VertexId> cj(a.crossing(i, j).begin(), a.crossing(i, j).end());
    std::set<VertexId> cj2(a.crossing(i, j2).begin(), a.crossing(i, j2).end());
    for (int s = 0; s < n; ++s) {
        if (!cj.count(cyc[s])) continue;
        for (int dir : {1, -1}) {
            if (cj.count(cyc[(s + dir + n) % n])) continue;
            std::vector<VertexId> walk{cyc[s]};
            bool ok = true;
            for (int t = 1; t < n; ++t) {
                VertexId v = cyc[(s + dir * t + n) % n];
                walk.push_back(v);
                if (cj2.count(v)) break;
                int rv = a.rail_of_vertex(v);
                if (rv != 0) {
                    ok = false;
                    break;
                }
            }
            if (ok && cj2.count(walk.back())) return walk;
        }
    }
    throw Error(ErrorCode::MalformedInput, "adjacent sector arc not found");
}

struct EdgeUnion {
    std::map<VertexId, std::set<VertexId>> adj;
    void add_path(const PlaneGraph& g, const std::vector<VertexId>& p) {
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            (void)*g.edge_between(p[i], p[i + 1]); // validate
            adj[p[i]].insert(p[i + 1]);
            adj[p[i + 1]].insert(p[i]);
        }
        if (p.size() == 1) adj.try_emplace(p[0]);
    }
    std::vector<VertexId> bfs(VertexId s, VertexId t) const {
        std::map<VertexId, VertexId> par;
        std::queue<VertexId> q;
        par[s] = s;
        q.push(s);
        while (!q.empty()) {
            VertexId x = q.front();
            q.pop();
            if (x == t) break;
            auto it = adj.find(x);
            if (it == adj.end()) continue;
            for (VertexId y : it->second)
                if (!par.count(y)) {
                    par[y] = x;
                    q.push(y);
                }
        }
        if (!par.count(t)) throw Error(ErrorCode::MalformedInput, "assembly pieces disconnected");
        std::vector<VertexId> out{t};
        while (out.back() != s) out.push_back(par[out.back()]);
        std::reverse(out.begin(), out.end());
        return out;
    }
};

// expands a grid path over the window rows into host edges
void expand_grid_path(const PlaneGraph& g, const RailedAnnulus& a, const GridPath& gp,
                      const std::function<int(int)>& row_to_cycle, EdgeUnion& u) {
    for (const auto& [col, row] : gp) u.add_path(g, a.crossing(row_to_cycle(row), col));
    for (size_t i = 0; i + 1 < gp.size(); ++i) {
        auto [c1, r1] = gp[i];
        auto [c2, r2] = gp[i + 1];
        if (c1 == c2) {
            int lo = row_to_cycle(std::min(r1, r2)), hi = row_to_cycle(std::max(r1, r2));
            u.add_path(g, rail_segment(a, c1, std::min(lo, hi), std::max(lo, hi)));
        } else {
            u.add_path(g, sector_arc(a, row_to_cycle(r1), c1, c2));
        }
    }
}

// The middle-window router: d paths from crossings (w, starts[h]) to
// (w2, targets-then-starts) using `rows` cycles of grid at each end and
// the target rail in between.
std::vector<std::vector<VertexId>> route_window(const PlaneGraph& g, const RailedAnnulus& a,
                                                int w, int w2, int rows, int r,
                                                const std::vector<int>& starts,
                                                const std::vector<int>& targets,
                                                long long budget) {
    int d = static_cast<int>(starts.size());
    int q = a.q();
    GridRoutingProblem down{q, rows, d, r, targets, starts};
    GridRoutingProblem up{q, rows, d, r, starts, targets};
    auto gp_down = route_grid_lax(down, budget);
    auto gp_up = route_grid_lax(up, budget);

    std::vector<std::vector<VertexId>> out;
    for (int h = 0; h < d; ++h) {
        EdgeUnion u;
        expand_grid_path(g, a, gp_down[h], [&](int row) { return w + row - 1; }, u);
        expand_grid_path(g, a, gp_up[h], [&](int row) { return w2 - rows + row; }, u);
        u.add_path(g, rail_segment(a, targets[h], w + rows - 1, w2 - rows + 1));
        u.add_path(g, a.crossing(w, starts[h]));
        u.add_path(g, a.crossing(w2, starts[h]));
        out.push_back(u.bfs(a.crossing(w, starts[h]).front(), a.crossing(w2, starts[h]).front()));
    }
    return out;
}

// the cycle with the open rectangle removed, as an ordered path
std::vector<VertexId> cycle_minus_rect(const PlaneGraph& g, const RailedAnnulus& a, int i,
                                       const FaceSet& rect) {
    const auto& c = a.cycle(i);
    int n = static_cast<int>(c.size());
    std::vector<char> keep(n, 1);
    for (int k = 0; k < n; ++k)
        if (g.vertex_in_open(rect, c[k])) keep[k] = 0;
    int start = -1;
    for (int k = 0; k < n; ++k)
        if (!keep[k]) start = k;
    if (start < 0) {
        // no vertex strictly inside: cut the cycle at an edge crossing
        // the open rectangle, if any, so the walk stays off it
        for (int k = 0; k < n; ++k) {
            EdgeId e = *g.edge_between(c[k], c[(k + 1) % n]);
            if (g.edge_meets_open(rect, e)) {
                std::vector<VertexId> arc;
                for (int t = 1; t <= n; ++t) arc.push_back(c[(k + t) % n]);
                return arc;
            }
        }
        return c; // cycle is clear of the rectangle altogether
    }
    std::vector<VertexId> arc;
    for (int t = 1; t <= n; ++t) {
        int k = (start + t) % n;
        if (!keep[k]) break;
        arc.push_back(c[k]);
    }
    return arc;
}

} // namespace

std::vector<GridPath> route_grid(const GridRoutingProblem& p, long long budget) {
    if (p.d < 1 || p.r < 0) throw Error(ErrorCode::Infeasible, "bad path count");
    if (!(1 <= p.d * (p.r + 1) && p.d * (p.r + 1) <= p.rows && p.rows <= p.cols))
        throw Error(ErrorCode::Infeasible, "grid size preconditions fail");
    if (static_cast<int>(p.up_cols.size()) != p.d ||
        static_cast<int>(p.down_cols.size()) != p.d)
        throw Error(ErrorCode::Infeasible, "terminal count mismatch");
    for (const auto* cols : {&p.up_cols, &p.down_cols}) {
        for (size_t i = 0; i < cols->size(); ++i) {
            if ((*cols)[i] < 1 || (*cols)[i] > p.cols)
                throw Error(ErrorCode::Infeasible, "terminal outside the grid");
            if (i + 1 < cols->size() && (*cols)[i + 1] - (*cols)[i] <= p.r)
                throw Error(ErrorCode::Infeasible, "consecutive terminals too close");
        }
    }
    auto paths = route_grid_lax(p, budget);
    if (!grid_paths_valid(paths, p))
        throw Error(ErrorCode::Infeasible, "grid routing produced an invalid layout");
    return paths;
}

Linkage route_confined(const PlaneGraph& g, const RailedAnnulus& a, int s, int b, int d, int r,
                       const std::set<int>& rails, long long budget) {
    int p = a.p(), q = a.q();
    if (s < 1 || s % 2 == 0 || b < 1 || d < 1 || r < 0)
        throw Error(ErrorCode::Infeasible, "bad parameters");
    if (p < s + 2 * b) throw Error(ErrorCode::Infeasible, "p < s + 2b");
    if (q < b + d * (r + 1)) throw Error(ErrorCode::Infeasible, "q < b + d(r+1)");
    if (static_cast<int>(rails.size()) < d * (r + 1))
        throw Error(ErrorCode::Infeasible, "|I| < d(r+1)");
    std::vector<int> isorted(rails.begin(), rails.end());
    for (int j : isorted)
        if (j < 1 || j > q) throw Error(ErrorCode::Infeasible, "rail index out of range");
    std::vector<int> starts, targets;
    for (int h = 1; h <= d; ++h) {
        starts.push_back(b + (h - 1) * (r + 1) + 1);
        targets.push_back(isorted[h * (r + 1) - 1]);
    }
    if (starts.back() > q) throw Error(ErrorCode::Infeasible, "start rails out of range");

    auto paths = route_window(g, a, 1, p, b, r, starts, targets, budget);
    Linkage k = Linkage::build(g, paths);
    if (!is_r_scattered(g, k, r))
        throw Error(ErrorCode::Infeasible, "routed linkage is not scattered");
    if (!is_confined(g, k, a, ConfinementSpec{s, rails}))
        throw Error(ErrorCode::Infeasible, "routed linkage is not confined");
    return k;
}

CombAudit audit_comb(const PlaneGraph& g, const RailedAnnulus& a, const Linkage& original,
                     const Linkage& combed, int r, const ConfinementSpec& spec) {
    CombAudit out;
    out.equivalent = equivalent(original, combed);
    out.scattered = is_r_scattered(g, combed, r);
    out.confined = is_confined(g, combed, a, spec);
    AnnulusRegion ann = a.annulus_region(g, 1, a.p());
    auto ov = original.vertices();
    std::set<VertexId> lv(ov.begin(), ov.end());
    auto le = original.edge_ids(g);
    std::set<EdgeId> les(le.begin(), le.end());
    out.outside_contained = true;
    for (VertexId v : combed.vertices())
        if (!ann.has_vertex(v) && !lv.count(v)) out.outside_contained = false;
    for (EdgeId e : combed.edge_ids(g))
        if (!ann.has_edge(e) && !les.count(e)) out.outside_contained = false;
    return out;
}

CombResult comb(const PlaneGraph& g, const RailedAnnulus& a, const Linkage& l,
                const CombParams& prm) {
    int p = a.p(), q = a.q();
    ConfinementSpec spec{prm.s, prm.rails};
    if (prm.s < 1 || prm.s % 2 == 0 || prm.s > p)
        throw Error(ErrorCode::BadSpec, "s must be odd, 1 <= s <= p");
    if (prm.rails.empty()) throw Error(ErrorCode::BadSpec, "I must be non-empty");
    Region ann_closed = Region::of_annulus(a.annulus_region(g, 1, p), true);
    if (!is_region_avoiding(g, l, ann_closed))
        throw PipelineError("input", "linkage is not annulus-avoiding");
    if (!is_r_scattered(g, l, prm.r))
        throw PipelineError("input", "linkage is not r-scattered");

    CombResult res;
    res.geo.m = prm.m + (prm.m % 2);
    if (res.geo.m < 2) res.geo.m = 2;
    res.geo.b = 3 * res.geo.m / 2;

    // fast path: nothing to do
    if (is_confined(g, l, a, spec)) {
        res.combed = l;
        res.fast_path = true;
        res.l_prime = l;
        res.l_second = l;
        return res;
    }

    int z = std::min(p, q) / 2;
    res.geo.outside_guarantee =
        !(2 * q >= (2 * prm.r + 5) * res.geo.m &&
          static_cast<int>(prm.rails.size()) > res.geo.m * (prm.r + 1) &&
          p >= 2 * (res.geo.m + 1) * (res.geo.b + prm.r) + 2 + prm.s + 2 * res.geo.b &&
          z >= res.geo.b + 1);

    // stage 1: derived disks and the reference rectangle
    if (p < 5 || q < 5) throw PipelineError("derive", "annulus too small to derive disks");
    DerivedDisks dd = DerivedDisks::build(g, a);
    res.geo.depth = std::min(res.geo.b + 1, dd.z());
    const DiskRegion& dref = dd.nested_disk(res.geo.depth);
    Region d_closed = Region::of_disk(dref, true);

    // stage 2: minimise against the nested family
    SearchOptions sopt{prm.budget};
    auto min1 = minimal_linkage(g, dd.nested(), Region::empty(g), l, prm.r, sopt);
    res.l_prime = min1.linkage;
    if (!is_region_free(g, res.l_prime, d_closed))
        throw PipelineError("free-disk", "minimised linkage still meets the reference disk");

    // stage 3: minimise against the parallel family
    auto min2 = minimal_linkage(g, a.seq(), d_closed, res.l_prime, prm.r, sopt);
    res.l_second = min2.linkage;

    // stage 4: rivers in reference order
    auto rv = rivers(g, res.l_second, a.seq());
    int d = static_cast<int>(rv.size());
    res.geo.d = d;
    if (d == 0) {
        res.combed = res.l_second;
        CombAudit audit = audit_comb(g, a, l, res.combed, prm.r, spec);
        if (!audit.ok()) throw PipelineError("verify", "riverless result fails the guarantees");
        return res;
    }
    if (d * (prm.r + 1) > static_cast<int>(prm.rails.size()))
        throw PipelineError("rails", "not enough rails in I for the rivers");
    Region d_open = Region::open_of(dref.interior_faces);
    auto order = d_ordering(g, a.seq(), rv, d_open);
    std::vector<Stream> zs;
    for (int i : order) zs.push_back(rv[i]);
    for (auto& zz : zs)
        if (a.seq().cycle_of_vertex(zz.path.front()) != 1)
            std::reverse(zz.path.begin(), zz.path.end());

    // stage 5: geometry
    res.geo.b_q = std::min({res.geo.b, res.geo.depth - 1,
                            (q - 1 - (d - 1) * (prm.r + 1)) / 2});
    if (res.geo.b_q < 1) throw PipelineError("geometry", "no rail-side room");
    // attachment spacing: as wide as the paper allows, but never so wide
    // that the middle window cannot seat the routing grids
    int target_rows = std::min(res.geo.b, d * (prm.r + 1));
    auto rows_for = [&](int g2) {
        int pbar2 = (p - d * g2 - 1) - (d * g2 + 2) + 1;
        return std::min(res.geo.b, (pbar2 - prm.s) / 2);
    };
    res.geo.spacing = -1;
    for (int g2 = res.geo.b + prm.r; g2 >= prm.r + 1; --g2)
        if (rows_for(g2) >= target_rows) {
            res.geo.spacing = g2;
            break;
        }
    if (res.geo.spacing < 0)
        for (int g2 = res.geo.b + prm.r; g2 >= prm.r + 1; --g2)
            if (rows_for(g2) >= 1) {
                res.geo.spacing = g2;
                break;
            }
    if (res.geo.spacing < 0) throw PipelineError("geometry", "no cycle-side room");
    res.geo.w = d * res.geo.spacing + 2;
    res.geo.w2 = p - d * res.geo.spacing - 1;
    res.geo.rows = rows_for(res.geo.spacing);
    int rho = q - res.geo.b_q;
    std::vector<int> cvals, targets;
    std::vector<int> isorted(prm.rails.begin(), prm.rails.end());
    for (int h = 1; h <= d; ++h) {
        cvals.push_back(res.geo.b_q + (h - 1) * (prm.r + 1) + 1);
        targets.push_back(isorted[h * (prm.r + 1) - 1]);
    }
    if (cvals.back() > rho) throw PipelineError("geometry", "start rails collide with the wall");

    // stages 6-8: per-river escort paths
    struct Splice {
        int path_index, from, to;
        std::vector<VertexId> conn;
    };
    std::vector<Splice> splices;
    std::vector<std::vector<VertexId>> x_down(d), x_up(d);
    for (int i = 1; i <= d; ++i) {
        RiverTrace tr;
        tr.target_rail = targets[i - 1];
        const Stream& z = zs[i - 1];
        tr.z = z.path;
        int cyc_dn = i * res.geo.spacing + 1;
        int cyc_up = p - i * res.geo.spacing;
        auto attach = [&](int cyc) -> std::pair<VertexId, std::vector<VertexId>> {
            auto arc = cycle_minus_rect(g, a, cyc, dref.interior_faces);
            std::set<VertexId> zset(z.path.begin(), z.path.end());
            std::set<VertexId> rset(a.crossing(cyc, rho).begin(), a.crossing(cyc, rho).end());
            auto zpos = run_of(arc, zset);
            auto rpos = run_of(arc, rset);
            if (zpos.empty() || rpos.empty())
                throw PipelineError("attach", "river misses the attachment level");
            int bestpos = -1, bestdist = -1;
            for (int pos : zpos) {
                int dist = std::min(std::abs(pos - rpos.front()), std::abs(pos - rpos.back()));
                if (bestpos < 0 || dist < bestdist ||
                    (dist == bestdist && arc[pos] < arc[bestpos])) {
                    bestpos = pos;
                    bestdist = dist;
                }
            }
            // walk toward the nearest crossing vertex
            int target = std::abs(bestpos - rpos.front()) <= std::abs(bestpos - rpos.back())
                             ? rpos.front()
                             : rpos.back();
            std::vector<VertexId> qpath;
            int step = target >= bestpos ? 1 : -1;
            for (int k = bestpos;; k += step) {
                qpath.push_back(arc[k]);
                if (k == target) break;
            }
            return {arc[bestpos], qpath};
        };
        auto [xd, qd] = attach(cyc_dn);
        auto [xu, qu] = attach(cyc_up);
        tr.x_down = xd;
        tr.x_up = xu;
        tr.q_down = qd;
        tr.q_up = qu;

        // split the river at its attachment vertices
        int pd = -1, pu = -1;
        for (size_t k = 0; k < z.path.size(); ++k) {
            if (z.path[k] == xd) pd = static_cast<int>(k);
            if (z.path[k] == xu) pu = static_cast<int>(k);
        }
        if (pd < 0 || pu < 0 || pd >= pu)
            throw PipelineError("split", "river visits its attachment levels out of order");
        std::vector<VertexId> z_down(z.path.begin(), z.path.begin() + pd + 1);
        std::vector<VertexId> z_up(z.path.begin() + pu, z.path.end());

        // escort paths toward the window
        EdgeUnion down_u, up_u;
        down_u.add_path(g, z_down);
        down_u.add_path(g, qd);
        down_u.add_path(g, a.crossing(cyc_dn, rho));
        if (cvals[i - 1] != rho) {
            tr.y_down = dd.l_path(cyc_dn, rho, cvals[i - 1]);
            down_u.add_path(g, tr.y_down);
        }
        down_u.add_path(g, a.crossing(cyc_dn, cvals[i - 1]));
        down_u.add_path(g, dd.r_path(cyc_dn, res.geo.w, cvals[i - 1]));
        down_u.add_path(g, a.crossing(res.geo.w, cvals[i - 1]));
        x_down[i - 1] = down_u.bfs(z.path.front(), a.crossing(res.geo.w, cvals[i - 1]).front());
        tr.x_path_down = x_down[i - 1];

        up_u.add_path(g, z_up);
        up_u.add_path(g, qu);
        up_u.add_path(g, a.crossing(cyc_up, rho));
        if (cvals[i - 1] != rho) {
            tr.y_up = dd.l_path(cyc_up, rho, cvals[i - 1]);
            up_u.add_path(g, tr.y_up);
        }
        up_u.add_path(g, a.crossing(cyc_up, cvals[i - 1]));
        up_u.add_path(g, dd.r_path(cyc_up, res.geo.w2, cvals[i - 1]));
        up_u.add_path(g, a.crossing(res.geo.w2, cvals[i - 1]));
        x_up[i - 1] = up_u.bfs(z.path.back(), a.crossing(res.geo.w2, cvals[i - 1]).front());
        tr.x_path_up = x_up[i - 1];
        res.trace.push_back(std::move(tr));
    }

    // paper claim: each attachment path keeps its distance from the
    // retained stubs of the other rivers
    for (int i = 0; i < d; ++i) {
        auto ball_dn = g.r_neighborhood(res.trace[i].q_down, prm.r);
        auto ball_up = g.r_neighborhood(res.trace[i].q_up, prm.r);
        std::set<VertexId> bdn(ball_dn.begin(), ball_dn.end());
        std::set<VertexId> bup(ball_up.begin(), ball_up.end());
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            int pj_d = -1, pj_u = -1;
            const auto& zp = zs[j].path;
            for (size_t k2 = 0; k2 < zp.size(); ++k2) {
                if (zp[k2] == res.trace[j].x_down) pj_d = static_cast<int>(k2);
                if (zp[k2] == res.trace[j].x_up) pj_u = static_cast<int>(k2);
            }
            for (int k2 = 0; k2 <= pj_d; ++k2)
                if (bdn.count(zp[k2]))
                    throw PipelineError("claim", "attachment path crowds a river stub");
            for (int k2 = pj_u; k2 < static_cast<int>(zp.size()); ++k2)
                if (bup.count(zp[k2]))
                    throw PipelineError("claim", "attachment path crowds a river stub");
        }
    }

    // stage 9: the confined middle
    auto kpaths = route_window(g, a, res.geo.w, res.geo.w2, res.geo.rows, prm.r, cvals, targets,
                               prm.budget);
    res.rails_used = std::set<int>(targets.begin(), targets.end());

    // stage 10: connectors and splicing
    std::vector<std::vector<VertexId>> newpaths = res.l_second.paths();
    std::vector<std::vector<Splice>> by_path(newpaths.size());
    for (int i = 0; i < d; ++i) {
        EdgeUnion u;
        u.add_path(g, x_down[i]);
        u.add_path(g, kpaths[i]);
        u.add_path(g, x_up[i]);
        std::vector<VertexId> conn = u.bfs(zs[i].path.front(), zs[i].path.back());
        res.trace[i].k_path = kpaths[i];
        res.trace[i].conn = conn;
        by_path[zs[i].path_index].push_back({zs[i].path_index, zs[i].from, zs[i].to, conn});
    }
    for (size_t pi = 0; pi < newpaths.size(); ++pi) {
        auto& sp = by_path[pi];
        if (sp.empty()) continue;
        std::sort(sp.begin(), sp.end(), [](const Splice& a2, const Splice& b2) {
            return a2.from < b2.from;
        });
        const auto& old = res.l_second.path(static_cast<int>(pi));
        std::vector<VertexId> np;
        int at = 0;
        for (auto& s2 : sp) {
            for (int k = at; k < s2.from; ++k) np.push_back(old[k]);
            std::vector<VertexId> conn = s2.conn;
            if (conn.front() != old[s2.from]) std::reverse(conn.begin(), conn.end());
            if (conn.front() != old[s2.from] || conn.back() != old[s2.to])
                throw PipelineError("splice", "connector endpoints drifted");
            np.insert(np.end(), conn.begin(), conn.end());
            at = s2.to + 1;
        }
        for (int k = at; k < static_cast<int>(old.size()); ++k) np.push_back(old[k]);
        newpaths[pi] = np;
    }

    try {
        res.combed = Linkage::build(g, newpaths);
    } catch (const Error& e) {
        throw PipelineError("assembly", e.what());
    }
    CombAudit audit = audit_comb(g, a, l, res.combed, prm.r, spec);
    if (!audit.equivalent) throw PipelineError("verify", "result is not equivalent");
    if (!audit.scattered) throw PipelineError("verify", "result is not r-scattered");
    if (!audit.confined) throw PipelineError("verify", "result is not confined");
    if (!audit.outside_contained)
        throw PipelineError("verify", "result leaks outside the annulus");
    return res;
}

Linkage reroute_few_bridges(const PlaneGraph& g, const CycleSequence& nested, VertexId v,
                            const Linkage& l, int r, long long budget) {
    if (nested.kind() != SeqKind::Nested)
        throw Error(ErrorCode::BadSpec, "reroute needs a nested sequence");
    int t = nested.size();
    const DiskRegion& inner = nested.region(t);
    const DiskRegion& outer = nested.region(1);
    if (!g.vertex_in_open(inner.interior_faces, v))
        throw Error(ErrorCode::BadSpec, "sequence does not isolate the vertex");
    Region disk_closed = Region::of_disk(outer, true);
    if (!is_region_avoiding(g, l, disk_closed))
        throw Error(ErrorCode::BadSpec, "linkage terminals meet the disk");
    if (!l.has_vertex(v)) return l;

    Region disk_open = Region::open_of(outer.interior_faces);
    auto brs = bridges(g, l, disk_open);
    int bound = t - l.size() - 1;
    if (static_cast<int>(brs.size()) > bound)
        throw Error(ErrorCode::TooManyBridges,
                    "bridges " + std::to_string(brs.size()) + " exceed bound " +
                        std::to_string(bound));

    // components of the linkage inside the open disk
    struct Comp {
        int path_index, from, to;
        bool has_v;
        std::vector<int> touched; // cycle indices present, ascending
    };
    std::vector<Comp> comps;
    for (int pi = 0; pi < l.size(); ++pi) {
        const auto& path = l.path(pi);
        int n = static_cast<int>(path.size());
        int start = -1;
        for (int k = 0; k <= n; ++k) {
            bool in = k < n && g.vertex_in_open(outer.interior_faces, path[k]);
            if (in && start < 0) start = k;
            if (!in && start >= 0) {
                Comp c{pi, start, k - 1, false, {}};
                std::set<int> touched;
                for (int u = start; u <= k - 1; ++u) {
                    if (path[u] == v) c.has_v = true;
                    int ci = nested.cycle_of_vertex(path[u]);
                    if (ci > 0) touched.insert(ci);
                }
                c.touched.assign(touched.begin(), touched.end());
                comps.push_back(std::move(c));
                start = -1;
            }
        }
    }

    // assign distinct cycles (or keep) per component, then validate
    long long steps = budget;
    std::vector<std::pair<int, int>> choice(comps.size(), {-1, 0}); // (cycle, arc dir)
    std::function<std::optional<Linkage>(size_t, std::set<int>&)> assign =
        [&](size_t idx, std::set<int>& taken) -> std::optional<Linkage> {
        if (--steps < 0) throw Error(ErrorCode::NoValidAssignment, "assignment budget exhausted");
        if (idx == comps.size()) {
            // build the rerouted linkage
            std::vector<std::vector<VertexId>> np = l.paths();
            // group choices per path, splice right-to-left
            std::vector<std::vector<size_t>> per_path(np.size());
            for (size_t c = 0; c < comps.size(); ++c)
                if (choice[c].first > 0) per_path[comps[c].path_index].push_back(c);
            for (auto& list : per_path)
                std::sort(list.begin(), list.end(), [&](size_t x, size_t y) {
                    return comps[x].from > comps[y].from;
                });
            for (size_t pi = 0; pi < np.size(); ++pi) {
                for (size_t c : per_path[pi]) {
                    const Comp& comp = comps[c];
                    int cyc = choice[c].first, dir = choice[c].second;
                    const auto& cyclist = nested.cycle(cyc);
                    int nc = static_cast<int>(cyclist.size());
                    auto& path = np[pi];
                    int first = -1, last = -1;
                    for (int k2 = comp.from; k2 <= comp.to; ++k2)
                        if (nested.on_cycle(cyc, path[k2])) {
                            if (first < 0) first = k2;
                            last = k2;
                        }
                    if (first < 0) return std::nullopt;
                    VertexId xa = path[first], xb = path[last];
                    int pa = -1;
                    for (int k2 = 0; k2 < nc; ++k2)
                        if (cyclist[k2] == xa) pa = k2;
                    std::vector<VertexId> arc{xa};
                    if (xa != xb) {
                        for (int u2 = 1; u2 < nc; ++u2) {
                            VertexId vv = cyclist[((pa + dir * u2) % nc + nc) % nc];
                            arc.push_back(vv);
                            if (vv == xb) break;
                        }
                        if (arc.back() != xb) return std::nullopt;
                    }
                    std::vector<VertexId> repl(path.begin(), path.begin() + first);
                    repl.insert(repl.end(), arc.begin(), arc.end());
                    repl.insert(repl.end(), path.begin() + last + 1, path.end());
                    path = repl;
                }
            }
            try {
                Linkage out = Linkage::build(g, np);
                if (out.has_vertex(v)) return std::nullopt;
                if (!equivalent(out, l)) return std::nullopt;
                if (!is_r_scattered(g, out, r)) return std::nullopt;
                return out;
            } catch (const Error&) {
                return std::nullopt;
            }
        }
        const Comp& c = comps[idx];
        // keep unchanged when legal
        if (!c.has_v) {
            choice[idx] = {-1, 0};
            if (auto got = assign(idx + 1, taken)) return got;
        }
        for (int cyc : c.touched) {
            if (taken.count(cyc)) continue;
            for (int dir : {1, -1}) {
                choice[idx] = {cyc, dir};
                taken.insert(cyc);
                if (auto got = assign(idx + 1, taken)) return got;
                taken.erase(cyc);
            }
        }
        choice[idx] = {-1, 0};
        return std::nullopt;
    };
    std::set<int> taken;
    auto got = assign(0, taken);
    if (!got) throw Error(ErrorCode::NoValidAssignment, "no rerouting assignment validates");
    return *got;
}

} // namespace linkcomb
