#include "linkcomb/witness.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <queue>
#include <unordered_set>

namespace linkcomb {

// --- SmallGraph ---

int SmallGraph::index_of(VertexId v) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) return -1;
    return static_cast<int>(it - verts.begin());
}

SmallGraph SmallGraph::from_edges(const std::vector<std::pair<VertexId, VertexId>>& edges) {
    SmallGraph g;
    std::set<VertexId> vs;
    for (auto [a, b] : edges) {
        vs.insert(a);
        vs.insert(b);
    }
    if (vs.size() > 64) throw Error(ErrorCode::TooLarge, "witness graph exceeds 64 vertices");
    g.verts.assign(vs.begin(), vs.end());
    g.adj.assign(g.verts.size(), 0);
    for (auto [a, b] : edges) {
        int i = g.index_of(a), j = g.index_of(b);
        g.adj[i] |= uint64_t(1) << j;
        g.adj[j] |= uint64_t(1) << i;
    }
    return g;
}

SmallGraph union_graph(const PlaneGraph& g, const Linkage& l, const std::set<EdgeId>& background) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& p : l.paths())
        for (size_t i = 0; i + 1 < p.size(); ++i) edges.push_back({p[i], p[i + 1]});
    for (EdgeId e : background) edges.push_back({g.edges()[e].u, g.edges()[e].v});
    return SmallGraph::from_edges(edges);
}

// --- treewidth ---

namespace {

struct TwSolver {
    const SmallGraph& g;
    int n;
    long long budget;
    std::unordered_set<uint64_t> failed;

    explicit TwSolver(const SmallGraph& gg, long long b) : g(gg), n(gg.n()), budget(b) {}

    // vertices outside S u {v} connected to v through eliminated S
    uint64_t reach(int v, uint64_t S) const {
        uint64_t seen = (uint64_t(1) << v), result = 0, frontier = g.adj[v];
        while (frontier) {
            int u = std::countr_zero(frontier);
            frontier &= frontier - 1;
            uint64_t bit = uint64_t(1) << u;
            if (seen & bit) continue;
            seen |= bit;
            if (S & bit)
                frontier |= g.adj[u] & ~seen;
            else
                result |= bit;
        }
        return result;
    }

    bool dfs(uint64_t S, int k) {
        if (std::popcount(S) == n) return true;
        if (failed.count(S)) return false;
        if (--budget < 0) throw Error(ErrorCode::SearchBudgetExceeded, "treewidth search");

        // safe rule: a vertex whose reach is a clique can go first
        for (int v = 0; v < n; ++v) {
            uint64_t bit = uint64_t(1) << v;
            if (S & bit) continue;
            uint64_t r = reach(v, S);
            if (std::popcount(r) > k) continue;
            bool clique = true;
            for (uint64_t rr = r; rr && clique; rr &= rr - 1) {
                int u = std::countr_zero(rr);
                if ((r & ~g.adj[u] & ~(uint64_t(1) << u)) != 0) clique = false;
            }
            if (clique) {
                bool ok = dfs(S | bit, k);
                if (!ok) failed.insert(S);
                return ok;
            }
        }
        for (int v = 0; v < n; ++v) {
            uint64_t bit = uint64_t(1) << v;
            if (S & bit) continue;
            if (std::popcount(reach(v, S)) > k) continue;
            if (dfs(S | bit, k)) return true;
        }
        failed.insert(S);
        return false;
    }
};

} // namespace

int treewidth_lower_bound(const SmallGraph& g) {
    // degeneracy
    int n = g.n();
    std::vector<int> deg(n);
    uint64_t alive = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
    int best = 0;
    for (int round = 0; round < n; ++round) {
        int mv = -1, md = n + 1;
        for (int v = 0; v < n; ++v) {
            if (!(alive >> v & 1)) continue;
            int d = std::popcount(g.adj[v] & alive);
            if (d < md) {
                md = d;
                mv = v;
            }
        }
        best = std::max(best, md);
        alive &= ~(uint64_t(1) << mv);
    }
    return best;
}

int treewidth_upper_bound(const SmallGraph& g) {
    // greedy min-fill elimination
    int n = g.n();
    std::vector<uint64_t> adj = g.adj;
    uint64_t alive = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
    int width = 0;
    for (int round = 0; round < n; ++round) {
        int bestv = -1;
        long bestfill = -1;
        for (int v = 0; v < n; ++v) {
            if (!(alive >> v & 1)) continue;
            uint64_t nb = adj[v] & alive;
            long fill = 0;
            for (uint64_t x = nb; x; x &= x - 1) {
                int u = std::countr_zero(x);
                fill += std::popcount(nb & ~adj[u] & ~(uint64_t(1) << u));
            }
            if (bestv < 0 || fill < bestfill) {
                bestv = v;
                bestfill = fill;
            }
        }
        uint64_t nb = adj[bestv] & alive;
        width = std::max(width, std::popcount(nb));
        for (uint64_t x = nb; x; x &= x - 1) {
            int u = std::countr_zero(x);
            adj[u] |= nb & ~(uint64_t(1) << u);
        }
        alive &= ~(uint64_t(1) << bestv);
    }
    return width;
}

int treewidth_exact(const SmallGraph& g, const TwOptions& opt) {
    if (g.n() > opt.cap)
        throw Error(ErrorCode::TooLarge, "treewidth cap " + std::to_string(opt.cap) +
                                             " exceeded: n=" + std::to_string(g.n()));
    if (g.n() == 0) return 0;
    int lo = treewidth_lower_bound(g);
    int hi = treewidth_upper_bound(g);
    for (int k = lo; k < hi; ++k) {
        TwSolver solver(g, opt.budget);
        if (solver.dfs(0, k)) return k;
    }
    return hi;
}

TwInterval treewidth_interval(const SmallGraph& g, const TwOptions& opt) {
    TwInterval iv;
    iv.lo = treewidth_lower_bound(g);
    iv.hi = treewidth_upper_bound(g);
    if (g.n() <= opt.cap) {
        try {
            iv.lo = iv.hi = treewidth_exact(g, opt);
            iv.exact = true;
        } catch (const Error&) {
            iv.exact = false;
        }
    }
    return iv;
}

// --- cae ---

int cae(const PlaneGraph& g, const Linkage& l, const std::set<EdgeId>& background) {
    std::map<VertexId, int> deg;
    for (EdgeId e : background) {
        if (++deg[g.edges()[e].u] > 2 || ++deg[g.edges()[e].v] > 2)
            throw Error(ErrorCode::DegreeViolation, "background has a degree-3 vertex");
    }
    int out = 0;
    for (EdgeId e : l.edge_ids(g))
        if (!background.count(e)) ++out;
    return out;
}

std::set<EdgeId> background_edges(const PlaneGraph& g, const CycleSequence& seq, const Region& d) {
    std::set<EdgeId> out;
    for (int i = 1; i <= seq.size(); ++i) {
        const auto& c = seq.cycle(i);
        for (size_t k = 0; k < c.size(); ++k) {
            EdgeId e = *g.edge_between(c[k], c[(k + 1) % c.size()]);
            if (!d.is_empty() && (d.meets_edge(g, e) || d.contains_vertex(g, g.edges()[e].u) ||
                                  d.contains_vertex(g, g.edges()[e].v)))
                continue;
            out.insert(e);
        }
    }
    return out;
}

// --- brambles ---

StreamBrambleInput build_stream_bramble_input(const PlaneGraph& g, const CycleSequence& seq,
                                              const std::vector<Stream>& zs, const Region& d) {
    if (zs.empty()) throw Error(ErrorCode::MalformedInput, "no streams");
    auto order = d_ordering(g, seq, zs, d);
    int r = std::min<int>(seq.size(), static_cast<int>(zs.size()));

    StreamBrambleInput in;
    // truncated streams: clip to the sub-annulus of the first r cycles
    std::vector<std::vector<VertexId>> subcycles;
    for (int i = 1; i <= r; ++i) subcycles.push_back(seq.cycle(i));
    CycleSequence subseq = r == seq.size() ? seq : CycleSequence::build(g, SeqKind::Parallel, subcycles);
    for (int i = 0; i < r; ++i) {
        const Stream& z = zs[order[i]];
        Linkage lz = Linkage::build(g, {z.path});
        auto zz = streams(g, lz, subseq);
        if (zz.empty()) throw Error(ErrorCode::MalformedInput, "stream truncation failed");
        in.z_paths.push_back(zz.front().path);
    }

    // sector of the reference region between the last and first stream
    const Stream& zfirst = zs[order.front()];
    const Stream& zlast = zs[order.back()];
    std::set<EdgeId> wall;
    for (const auto* z : {&zfirst, &zlast})
        for (size_t i = 0; i + 1 < z->path.size(); ++i)
            wall.insert(*g.edge_between(z->path[i], z->path[i + 1]));
    FaceSet ann = seq.faces_between(1, seq.size());
    FaceSet sector = g.empty_face_set();
    std::queue<FaceId> qq;
    for (FaceId f : (d.faces & ann).to_vector()) {
        sector.set(f);
        qq.push(f);
    }
    if (!sector.any()) throw Error(ErrorCode::MalformedInput, "reference region outside annulus");
    while (!qq.empty()) {
        FaceId f = qq.front();
        qq.pop();
        for (Dart dd : g.faces()[f].boundary_walk) {
            if (wall.count(dd / 2)) continue;
            FaceId f2 = g.face_of_dart(dd ^ 1);
            if (!ann.test(f2) || sector.test(f2)) continue;
            sector.set(f2);
            qq.push(f2);
        }
    }

    std::set<VertexId> z1_set(zfirst.path.begin(), zfirst.path.end());
    std::set<VertexId> zd_set(zlast.path.begin(), zlast.path.end());
    std::set<VertexId> zr_set(in.z_paths[r - 1].begin(), in.z_paths[r - 1].end());

    // truncated cycles: the arc outside the sector, oriented from the
    // first stream and clipped at the r-th
    for (int i = 1; i <= r; ++i) {
        const auto& c = seq.cycle(i);
        int nc = static_cast<int>(c.size());
        std::vector<char> keep(nc, 1);
        for (int k = 0; k < nc; ++k)
            if (g.vertex_in_open(sector, c[k])) keep[k] = 0;
        int start = -1;
        for (int k = 0; k < nc; ++k)
            if (!keep[k]) start = k;
        std::vector<VertexId> arc;
        if (start < 0) {
            arc = c; // nothing dropped (single stream wall)
        } else {
            for (int t = 1; t <= nc; ++t) {
                int k = (start + t) % nc;
                if (!keep[k]) break;
                arc.push_back(c[k]);
            }
        }
        auto first_contact = [&](const std::set<VertexId>& ss) {
            for (size_t k = 0; k < arc.size(); ++k)
                if (ss.count(arc[k])) return static_cast<int>(k);
            return -1;
        };
        int p1 = first_contact(z1_set), pd = first_contact(zd_set);
        if (p1 < 0 || pd < 0)
            throw Error(ErrorCode::MalformedInput, "cycle arc misses a wall stream");
        if (p1 > pd) {
            std::reverse(arc.begin(), arc.end());
        }
        int pr = first_contact(zr_set);
        if (pr < 0) throw Error(ErrorCode::MalformedInput, "cycle arc misses stream r");
        int end = pr;
        while (end + 1 < static_cast<int>(arc.size()) && zr_set.count(arc[end + 1])) ++end;
        in.b_paths.push_back(std::vector<VertexId>(arc.begin(), arc.begin() + end + 1));
    }
    return in;
}

BrambleWitness stream_bramble(const PlaneGraph& g, const StreamBrambleInput& in) {
    int r = static_cast<int>(in.b_paths.size());
    if (r != static_cast<int>(in.z_paths.size()))
        throw Error(ErrorCode::MalformedInput, "bramble input size mismatch");
    if (r < 2)
        throw Error(ErrorCode::MalformedInput,
                    "stream bramble needs at least two cycles and streams");

    std::vector<std::pair<VertexId, VertexId>> edges;
    auto add_path = [&](const std::vector<VertexId>& p) {
        for (size_t i = 0; i + 1 < p.size(); ++i) edges.push_back({p[i], p[i + 1]});
    };
    for (const auto& p : in.b_paths) add_path(p);
    for (const auto& p : in.z_paths) add_path(p);
    SmallGraph q = SmallGraph::from_edges(edges);

    // corner paths: hitting them cannot help with the grid elements
    std::set<VertexId> corner(in.b_paths[r - 1].begin(), in.b_paths[r - 1].end());
    corner.insert(in.z_paths[r - 1].begin(), in.z_paths[r - 1].end());

    std::vector<std::vector<VertexId>> elements;
    auto add_element = [&](std::set<VertexId> s) {
        if (s.empty()) throw Error(ErrorCode::MalformedInput, "empty bramble element");
        elements.push_back(std::vector<VertexId>(s.begin(), s.end()));
    };
    for (int i = 1; i <= r - 1; ++i)
        for (int j = 1; j <= r - 1; ++j) {
            std::set<VertexId> s(in.b_paths[i - 1].begin(), in.b_paths[i - 1].end());
            s.insert(in.z_paths[j - 1].begin(), in.z_paths[j - 1].end());
            for (VertexId v : corner) s.erase(v);
            add_element(std::move(s));
        }
    add_element(std::set<VertexId>(in.b_paths[r - 1].begin(), in.b_paths[r - 1].end()));
    {
        std::set<VertexId> x(in.z_paths[r - 1].begin(), in.z_paths[r - 1].end());
        for (VertexId v : in.b_paths[r - 1]) x.erase(v);
        add_element(std::move(x));
    }

    // sanity: connected, pairwise touching
    auto mask_of = [&](const std::vector<VertexId>& el) {
        uint64_t m = 0;
        for (VertexId v : el) {
            int i = q.index_of(v);
            if (i < 0) throw Error(ErrorCode::MalformedInput, "element vertex outside Q");
            m |= uint64_t(1) << i;
        }
        return m;
    };
    std::vector<uint64_t> masks;
    for (const auto& el : elements) masks.push_back(mask_of(el));
    for (const auto& m : masks) {
        uint64_t seen = m & (~m + 1); // lowest bit
        while (true) {
            uint64_t grow = seen;
            for (uint64_t x = seen; x; x &= x - 1) grow |= q.adj[std::countr_zero(x)] & m;
            if (grow == seen) break;
            seen = grow;
        }
        if (seen != m) throw Error(ErrorCode::MalformedInput, "bramble element disconnected");
    }
    for (size_t a = 0; a < masks.size(); ++a)
        for (size_t b = a + 1; b < masks.size(); ++b) {
            bool touch = (masks[a] & masks[b]) != 0;
            for (uint64_t x = masks[a]; x && !touch; x &= x - 1)
                if (q.adj[std::countr_zero(x)] & masks[b]) touch = true;
            if (!touch) throw Error(ErrorCode::MalformedInput, "bramble elements do not touch");
        }

    BrambleWitness w;
    w.elements = elements;
    w.hitting_set = minimum_hitting_set(elements);
    w.order = static_cast<int>(w.hitting_set.size());
    return w;
}

std::vector<VertexId> minimum_hitting_set(const std::vector<std::vector<VertexId>>& elements) {
    std::set<VertexId> uni;
    for (const auto& el : elements) uni.insert(el.begin(), el.end());
    std::vector<VertexId> verts(uni.begin(), uni.end());
    if (verts.size() > 64) throw Error(ErrorCode::TooLarge, "hitting set universe too large");
    auto idx = [&](VertexId v) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    std::vector<uint64_t> masks;
    for (const auto& el : elements) {
        uint64_t m = 0;
        for (VertexId v : el) m |= uint64_t(1) << idx(v);
        masks.push_back(m);
    }
    uint64_t best_set = 0;
    int best = static_cast<int>(elements.size()) + 1;
    // greedy upper bound first
    {
        std::vector<char> hit(masks.size(), 0);
        uint64_t chosen = 0;
        int cnt = 0;
        while (true) {
            int unhit = -1;
            for (size_t i = 0; i < masks.size(); ++i)
                if (!hit[i]) unhit = static_cast<int>(i);
            if (unhit < 0) break;
            int bv = -1, bc = -1;
            for (uint64_t x = masks[unhit]; x; x &= x - 1) {
                int v = std::countr_zero(x);
                int c = 0;
                for (size_t i = 0; i < masks.size(); ++i)
                    if (!hit[i] && (masks[i] >> v & 1)) ++c;
                if (c > bc) {
                    bc = c;
                    bv = v;
                }
            }
            chosen |= uint64_t(1) << bv;
            ++cnt;
            for (size_t i = 0; i < masks.size(); ++i)
                if (masks[i] >> bv & 1) hit[i] = 1;
        }
        best = cnt;
        best_set = chosen;
    }
    // branch and bound
    std::function<void(uint64_t, int)> go = [&](uint64_t chosen, int cnt) {
        if (cnt >= best) return;
        int pick = -1, picksz = 65;
        for (size_t i = 0; i < masks.size(); ++i) {
            if (masks[i] & chosen) continue;
            int sz = std::popcount(masks[i]);
            if (sz < picksz) {
                picksz = sz;
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0) {
            best = cnt;
            best_set = chosen;
            return;
        }
        for (uint64_t x = masks[pick]; x; x &= x - 1)
            go(chosen | (uint64_t(1) << std::countr_zero(x)), cnt + 1);
    };
    go(0, 0);
    std::vector<VertexId> out;
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
        if (best_set >> v & 1) out.push_back(verts[v]);
    return out;
}

// --- minimal linkages ---

namespace {

struct BudgetOut {};

struct CaeSearch {
    const PlaneGraph& g;
    std::set<VertexId> allowed_v;
    std::map<VertexId, std::vector<VertexId>> adj; // allowed edges only, sorted
    const std::set<EdgeId>& background;
    std::vector<std::pair<VertexId, VertexId>> pairs;
    int r;
    long long budget;

    int best_cae = -1;
    std::vector<std::vector<VertexId>> best_paths;
    std::vector<EdgeId> best_code;

    std::vector<std::vector<VertexId>> cur;
    std::set<VertexId> used;
    std::set<VertexId> forbidden; // r-neighborhoods of fixed paths + pending terminals
    int cur_cae = 0;

    CaeSearch(const PlaneGraph& gg, const std::set<EdgeId>& bg) : g(gg), background(bg) {}

    void build_adj(const std::set<EdgeId>& allowed_e) {
        for (EdgeId e : allowed_e) {
            const Edge& ed = g.edges()[e];
            if (!allowed_v.count(ed.u) || !allowed_v.count(ed.v)) continue;
            adj[ed.u].push_back(ed.v);
            adj[ed.v].push_back(ed.u);
        }
        for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
    }

    std::vector<VertexId> ball(const std::vector<VertexId>& src) const {
        if (r == 0) return src;
        return g.r_neighborhood(src, r);
    }

    void consider() {
        std::vector<std::vector<VertexId>> paths = cur;
        int c = cur_cae;
        std::vector<EdgeId> code;
        for (const auto& p : paths)
            for (size_t i = 0; i + 1 < p.size(); ++i) code.push_back(*g.edge_between(p[i], p[i + 1]));
        std::sort(code.begin(), code.end());
        if (best_cae < 0 || c < best_cae || (c == best_cae && code < best_code)) {
            best_cae = c;
            best_paths = paths;
            best_code = code;
        }
    }

    void route(size_t pair_idx) {
        if (pair_idx == pairs.size()) {
            consider();
            return;
        }
        auto [s, t] = pairs[pair_idx];
        // forbidden set for this path: r-balls of fixed paths and of the
        // remaining pairs' terminals
        std::set<VertexId> saved_forbidden = forbidden;
        std::vector<VertexId> pending;
        for (size_t k = pair_idx + 1; k < pairs.size(); ++k) {
            pending.push_back(pairs[k].first);
            pending.push_back(pairs[k].second);
        }
        if (!pending.empty())
            for (VertexId v : ball(pending)) forbidden.insert(v);

        std::vector<VertexId> path{s};
        used.insert(s);
        extend(pair_idx, s, t, path);
        used.erase(s);
        forbidden = std::move(saved_forbidden);
    }

    void extend(size_t pair_idx, VertexId at, VertexId t, std::vector<VertexId>& path) {
        if (--budget < 0) throw BudgetOut{};
        if (at == t) {
            cur.push_back(path);
            std::set<VertexId> saved_forbidden = forbidden;
            for (VertexId v : ball(path)) forbidden.insert(v);
            route(pair_idx + 1);
            forbidden = std::move(saved_forbidden);
            cur.pop_back();
            return;
        }
        auto it = adj.find(at);
        if (it == adj.end()) return;
        for (VertexId nx : it->second) {
            if (used.count(nx)) continue;
            if (forbidden.count(nx)) continue;
            EdgeId e = *g.edge_between(at, nx);
            int dc = background.count(e) ? 0 : 1;
            if (best_cae >= 0 && cur_cae + dc > best_cae) continue;
            path.push_back(nx);
            used.insert(nx);
            cur_cae += dc;
            extend(pair_idx, nx, t, path);
            cur_cae -= dc;
            used.erase(nx);
            path.pop_back();
        }
    }
};

// cycle-arc shortcutting: replaces a subpath by a background route when
// that strictly lowers cae and keeps the linkage valid
Linkage greedy_reduce(const PlaneGraph& g, const Linkage& start,
                      const std::set<VertexId>& allowed_v, const std::set<EdgeId>& allowed_e,
                      const std::set<EdgeId>& background, int r) {
    // background adjacency (degree <= 2)
    std::map<VertexId, std::vector<VertexId>> bgadj;
    for (EdgeId e : background) {
        if (!allowed_e.count(e)) continue;
        const Edge& ed = g.edges()[e];
        if (!allowed_v.count(ed.u) || !allowed_v.count(ed.v)) continue;
        bgadj[ed.u].push_back(ed.v);
        bgadj[ed.v].push_back(ed.u);
    }
    for (auto& [v, nb] : bgadj) std::sort(nb.begin(), nb.end());

    auto noncae_edges = [&](const std::vector<VertexId>& p, int a, int b) {
        int c = 0;
        for (int i = a; i < b; ++i)
            if (!background.count(*g.edge_between(p[i], p[i + 1]))) ++c;
        return c;
    };

    std::vector<std::vector<VertexId>> paths = start.paths();
    bool improved = true;
    while (improved) {
        improved = false;
        for (size_t pi = 0; pi < paths.size() && !improved; ++pi) {
            auto& p = paths[pi];
            int n = static_cast<int>(p.size());
            for (int a = 0; a < n - 1 && !improved; ++a) {
                if (!bgadj.count(p[a])) continue;
                for (int b = n - 1; b > a && !improved; --b) {
                    if (!bgadj.count(p[b])) continue;
                    int save = noncae_edges(p, a, b);
                    if (save == 0) continue;
                    // background walks from p[a] to p[b] (at most two)
                    for (VertexId first : bgadj[p[a]]) {
                        std::vector<VertexId> walk{p[a], first};
                        while (walk.back() != p[b]) {
                            auto& nb = bgadj[walk.back()];
                            VertexId prev = walk[walk.size() - 2];
                            VertexId nxt = -1;
                            for (VertexId u : nb)
                                if (u != prev) nxt = u;
                            if (nxt < 0 || walk.size() > bgadj.size() + 2) break;
                            walk.push_back(nxt);
                        }
                        if (walk.back() != p[b]) continue;
                        std::vector<VertexId> cand(p.begin(), p.begin() + a);
                        cand.insert(cand.end(), walk.begin(), walk.end());
                        cand.insert(cand.end(), p.begin() + b + 1, p.end());
                        std::vector<std::vector<VertexId>> np = paths;
                        np[pi] = cand;
                        try {
                            Linkage cl = Linkage::build(g, np);
                            if (!is_r_scattered(g, cl, r)) continue;
                            int before = noncae_edges(p, 0, n - 1);
                            int after = noncae_edges(cand, 0, static_cast<int>(cand.size()) - 1);
                            if (after < before) {
                                paths = np;
                                improved = true;
                                break;
                            }
                        } catch (const Error&) {
                            continue;
                        }
                    }
                }
            }
        }
    }
    return Linkage::build(g, paths);
}

} // namespace

MinimalLinkageResult minimal_linkage(const PlaneGraph& g, const CycleSequence& seq,
                                     const Region& d, const Linkage& l, int r,
                                     const SearchOptions& opt) {
    if (!d.is_empty() && !is_region_free(g, l, d))
        throw Error(ErrorCode::BadSpec, "linkage must be free of the protected region");
    std::set<EdgeId> bg = background_edges(g, seq, d);

    auto lverts = l.vertices();
    std::set<VertexId> allowed_v(lverts.begin(), lverts.end());
    for (EdgeId e : bg) {
        allowed_v.insert(g.edges()[e].u);
        allowed_v.insert(g.edges()[e].v);
    }
    std::set<EdgeId> allowed_e(bg.begin(), bg.end());
    for (EdgeId e : l.edge_ids(g)) allowed_e.insert(e);

    Linkage seed = greedy_reduce(g, l, allowed_v, allowed_e, bg, r);

    CaeSearch search(g, bg);
    search.allowed_v = allowed_v;
    search.build_adj(allowed_e);
    for (auto [a, b] : pattern(l)) search.pairs.push_back({a, b});
    search.r = r;
    search.budget = opt.budget;
    // seed with the greedy solution
    search.cur = seed.paths();
    search.cur_cae = cae(g, seed, bg);
    search.consider();
    search.cur.clear();
    search.cur_cae = 0;

    MinimalLinkageResult res;
    try {
        search.route(0);
        res.optimal = true;
    } catch (const BudgetOut&) {
        res.optimal = false;
    }
    res.linkage = Linkage::build(g, search.best_paths);
    res.cae_value = search.best_cae;
    return res;
}

std::optional<Linkage> improve_once(const PlaneGraph& g, const Linkage& l,
                                    const std::set<EdgeId>& background, int m, int r,
                                    const SearchOptions& opt, const TwOptions& twopt) {
    int base = cae(g, l, background); // also validates the degree bound
    SmallGraph u = union_graph(g, l, background);
    TwOptions tw = twopt;
    tw.cap = 64;
    if (treewidth_exact(u, tw) <= m) return std::nullopt;
    if (base == 0) return std::nullopt;

    auto lverts = l.vertices();
    std::set<VertexId> allowed_v(lverts.begin(), lverts.end());
    std::set<EdgeId> allowed_e(background.begin(), background.end());
    for (EdgeId e : background) {
        allowed_v.insert(g.edges()[e].u);
        allowed_v.insert(g.edges()[e].v);
    }
    for (EdgeId e : l.edge_ids(g)) allowed_e.insert(e);

    CaeSearch search(g, background);
    search.allowed_v = allowed_v;
    search.build_adj(allowed_e);
    for (auto [a, b] : pattern(l)) search.pairs.push_back({a, b});
    search.r = r;
    search.budget = opt.budget;
    search.cur = l.paths();
    search.cur_cae = base;
    search.consider();
    search.cur.clear();
    search.cur_cae = 0;
    try {
        search.route(0);
    } catch (const BudgetOut&) {
        if (search.best_cae >= base) throw Error(ErrorCode::SearchBudgetExceeded, "improve_once");
    }
    if (search.best_cae < base) return Linkage::build(g, search.best_paths);
    return std::nullopt;
}

std::optional<Linkage> flatten_mountain(const PlaneGraph& g, const Linkage& l,
                                        const CycleSequence& seq, const MountainValley& m, int r) {
    bool mountain = m.kind == MountainValley::Kind::Mountain;
    int dir = mountain ? +1 : -1; // both kinds index away from their base
    // blocking level: one band short of the top
    int lvl = m.base_index + dir * (m.dehe - 2);
    if (m.dehe < 2 || lvl < 1 || lvl > seq.size()) return std::nullopt;
    const auto& lc = seq.cycle(lvl);
    std::set<VertexId> lvset(lc.begin(), lc.end());
    std::set<EdgeId> lvedges = [&] {
        std::set<EdgeId> s;
        for (size_t i = 0; i < lc.size(); ++i)
            s.insert(*g.edge_between(lc[i], lc[(i + 1) % lc.size()]));
        return s;
    }();

    // beyond(v): strictly past the blocking level, toward the top
    auto beyond = [&](VertexId v) {
        int c = seq.cycle_of_vertex(v);
        if (c != 0) return dir > 0 ? c > lvl : c < lvl;
        // off-cycle vertices: compare against the level's enclosed side
        const FaceSet& f = seq.region(lvl).interior_faces;
        bool inside = g.vertex_in_open(f, v);
        bool deeper_is_inside = (seq.kind() == SeqKind::Nested) == (dir > 0);
        return inside == deeper_is_inside;
    };

    const auto& full = l.path(m.path_index);
    std::vector<VertexId> replaced;
    for (int t = 0; t < static_cast<int>(full.size()); ++t) {
        if (t < m.from || t > m.to) {
            replaced.push_back(full[t]);
            continue;
        }
        if (!beyond(full[t])) {
            replaced.push_back(full[t]);
            continue;
        }
        // excursion beyond the level: [x .. y] with x,y on the level cycle
        int a = t;
        while (t <= m.to && beyond(full[t])) ++t;
        VertexId x = full[a - 1], y = full[t];
        if (!lvset.count(x) || !lvset.count(y)) return std::nullopt;
        // the arc of the level cycle from x to y inside the pocket
        int nx = -1;
        int nlc = static_cast<int>(lc.size());
        for (int i = 0; i < nlc; ++i)
            if (lc[i] == x) nx = i;
        std::optional<std::vector<VertexId>> arc;
        for (int step : {1, -1}) {
            std::vector<VertexId> cand;
            bool ok = true;
            for (int i = 1; i < nlc; ++i) {
                VertexId v = lc[((nx + step * i) % nlc + nlc) % nlc];
                if (!g.vertex_in_closed(m.pocket, v)) {
                    ok = false;
                    break;
                }
                cand.push_back(v);
                if (v == y) break;
            }
            if (!ok || cand.empty() || cand.back() != y) continue;
            for (size_t i = 0; i + 1 < cand.size() && ok; ++i)
                if (!g.edge_in_closed(m.pocket, *g.edge_between(cand[i], cand[i + 1]))) ok = false;
            if (!g.edge_in_closed(m.pocket, *g.edge_between(x, cand.front()))) ok = false;
            if (ok) {
                arc = cand;
                break;
            }
        }
        if (!arc) return std::nullopt;
        for (VertexId v : *arc)
            if (v != y) replaced.push_back(v);
        replaced.push_back(y);
    }

    std::vector<std::vector<VertexId>> np = l.paths();
    np[m.path_index] = replaced;
    try {
        Linkage out = Linkage::build(g, np);
        if (!equivalent(out, l)) return std::nullopt;
        if (!is_r_scattered(g, out, r)) return std::nullopt;
        return out;
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace linkcomb
