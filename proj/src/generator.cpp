#include "linkcomb/generator.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace linkcomb {

namespace {

struct Builder {
    int p, q;
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::map<std::pair<VertexId, VertexId>, EdgeId> eid;
    // neighbor lists in ccw order, as vertex ids; converted to edge ids at the end
    std::map<VertexId, std::vector<VertexId>> nbr;

    VertexId grid(int i, int j) const { return (i - 1) * q + ((j % q) + q) % q; }

    EdgeId add_edge(VertexId a, VertexId b) {
        auto key = std::minmax(a, b);
        auto it = eid.find({key.first, key.second});
        if (it != eid.end()) return it->second;
        EdgeId e = static_cast<EdgeId>(edges.size());
        edges.push_back({key.first, key.second});
        eid[{key.first, key.second}] = e;
        return e;
    }
};

} // namespace

GenResult gen_annular_grid(const GenOptions& opt) {
    int p = opt.p, q = opt.q;
    if (p < 3 || p % 2 == 0) throw Error(ErrorCode::BadParams, "p must be odd >= 3");
    if (q < 3) throw Error(ErrorCode::BadParams, "q must be >= 3");
    if (opt.chords < 0 || opt.pad_len < 1) throw Error(ErrorCode::BadParams, "bad generator params");
    for (int j : opt.outer_pad_rails)
        if (j < 1 || j > q) throw Error(ErrorCode::BadParams, "pad rail out of range");
    for (int j : opt.inner_pad_rails)
        if (j < 1 || j > q) throw Error(ErrorCode::BadParams, "pad rail out of range");

    Builder b{p, q, {}, {}, {}};
    std::vector<VertexId> vertices;
    for (int i = 1; i <= p; ++i)
        for (int j = 0; j < q; ++j) vertices.push_back(b.grid(i, j));

    for (int i = 1; i <= p; ++i)
        for (int j = 0; j < q; ++j) b.add_edge(b.grid(i, j), b.grid(i, j + 1));
    for (int i = 1; i < p; ++i)
        for (int j = 0; j < q; ++j) b.add_edge(b.grid(i, j), b.grid(i + 1, j));

    // chords: one diagonal (i,j)-(i+1,j+1) per selected quad
    std::mt19937_64 rng(opt.seed);
    std::vector<std::pair<int, int>> quads;
    for (int i = 1; i < p; ++i)
        for (int j = 0; j < q; ++j) quads.push_back({i, j});
    std::shuffle(quads.begin(), quads.end(), rng);
    int nch = std::min<int>(opt.chords, static_cast<int>(quads.size()));
    std::vector<std::pair<int, int>> chosen(quads.begin(), quads.begin() + nch);
    std::sort(chosen.begin(), chosen.end());
    for (auto [i, j] : chosen) b.add_edge(b.grid(i, j), b.grid(i + 1, j + 1));

    GenResult out;
    VertexId next = p * q;
    auto add_pad = [&](int i, int rail, std::map<int, std::vector<VertexId>>& pads) {
        VertexId at = b.grid(i, rail - 1);
        std::vector<VertexId> chain;
        for (int t = 0; t < opt.pad_len; ++t) {
            vertices.push_back(next);
            b.add_edge(chain.empty() ? at : chain.back(), next);
            chain.push_back(next);
            ++next;
        }
        pads[rail] = chain;
    };
    std::vector<int> outer_rails = opt.outer_pad_rails;
    std::vector<int> inner_rails = opt.inner_pad_rails;
    std::sort(outer_rails.begin(), outer_rails.end());
    outer_rails.erase(std::unique(outer_rails.begin(), outer_rails.end()), outer_rails.end());
    std::sort(inner_rails.begin(), inner_rails.end());
    inner_rails.erase(std::unique(inner_rails.begin(), inner_rails.end()), inner_rails.end());
    for (int rail : outer_rails) add_pad(p, rail, out.outer_pads);
    for (int rail : inner_rails) add_pad(1, rail, out.inner_pads);

    // rotations, counter-clockwise: outward, next rail column, inward, previous
    std::set<std::pair<int, int>> chord_set(chosen.begin(), chosen.end());
    for (int i = 1; i <= p; ++i) {
        for (int j = 0; j < q; ++j) {
            VertexId v = b.grid(i, j);
            auto& r = b.nbr[v];
            if (i < p) r.push_back(b.grid(i + 1, j));
            if (i == p && out.outer_pads.count(j + 1)) r.push_back(out.outer_pads[j + 1].front());
            if (chord_set.count({i, j})) r.push_back(b.grid(i + 1, j + 1));
            r.push_back(b.grid(i, j + 1));
            if (i > 1) r.push_back(b.grid(i - 1, j));
            if (i == 1 && out.inner_pads.count(j + 1)) r.push_back(out.inner_pads[j + 1].front());
            if (chord_set.count({i - 1, (j - 1 + q) % q})) r.push_back(b.grid(i - 1, j - 1));
            r.push_back(b.grid(i, j - 1));
        }
    }
    auto chain_rot = [&](VertexId at, const std::vector<VertexId>& chain) {
        VertexId prev = at;
        for (size_t t = 0; t < chain.size(); ++t) {
            auto& r = b.nbr[chain[t]];
            r.push_back(prev);
            if (t + 1 < chain.size()) r.push_back(chain[t + 1]);
            prev = chain[t];
        }
    };
    for (auto& [rail, chain] : out.outer_pads) chain_rot(b.grid(p, rail - 1), chain);
    for (auto& [rail, chain] : out.inner_pads) chain_rot(b.grid(1, rail - 1), chain);

    std::sort(vertices.begin(), vertices.end());
    std::vector<std::vector<EdgeId>> rotation;
    rotation.reserve(vertices.size());
    for (VertexId v : vertices) {
        std::vector<EdgeId> r;
        for (VertexId u : b.nbr[v]) {
            auto key = std::minmax(v, u);
            r.push_back(b.eid.at({key.first, key.second}));
        }
        rotation.push_back(std::move(r));
    }

    OuterFaceSpec outer{b.grid(p, 0), b.grid(p, 1), /*left=*/false};
    out.graph = PlaneGraph::build(vertices, b.edges, rotation, outer);
    for (int i = 1; i <= p; ++i) {
        std::vector<VertexId> c;
        for (int j = 0; j < q; ++j) c.push_back(b.grid(i, j));
        out.cycles.push_back(c);
    }
    for (int j = 0; j < q; ++j) {
        std::vector<VertexId> r;
        for (int i = 1; i <= p; ++i) r.push_back(b.grid(i, j));
        out.rails.push_back(r);
    }
    return out;
}

std::vector<int> planted_rails(int q, int k, int r) {
    if (k < 1) throw Error(ErrorCode::BadParams, "k >= 1");
    if (k * (r + 1) > q)
        throw Error(ErrorCode::BadParams, "not enough rails for a scattered linkage");
    int spacing = std::max(r + 1, q / k);
    std::vector<int> rails;
    for (int l = 0; l < k; ++l) rails.push_back(1 + l * spacing);
    if (rails.back() > q) throw Error(ErrorCode::BadParams, "rail layout overflow");
    return rails;
}

std::vector<std::vector<VertexId>> plant_linkage(const GenResult& gen, int k, int r,
                                                 bool kinks, uint64_t seed) {
    int p = static_cast<int>(gen.cycles.size());
    int q = static_cast<int>(gen.rails.size());
    auto rails = planted_rails(q, k, r);
    // a kink sidesteps one column, so it needs one extra column of slack
    if (kinks && k >= 2) {
        int min_gap = q;
        for (int l = 0; l < k; ++l) {
            int next = (l + 1 < k) ? rails[l + 1] : rails[0] + q;
            min_gap = std::min(min_gap, next - rails[l]);
        }
        if (min_gap < r + 2) kinks = false;
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::vector<VertexId>> paths;
    for (int idx = 0; idx < k; ++idx) {
        int rail = rails[idx];
        auto oc = gen.outer_pads.find(rail);
        auto ic = gen.inner_pads.find(rail);
        if (oc == gen.outer_pads.end() || ic == gen.inner_pads.end())
            throw Error(ErrorCode::BadParams, "planted rail lacks pads");
        std::vector<VertexId> path(ic->second.rbegin(), ic->second.rend());
        int kink_at = 0;
        if (kinks && p >= 5) kink_at = 2 + static_cast<int>(rng() % (p - 3));
        for (int i = 1; i <= p; ++i) {
            path.push_back(gen.rails[rail - 1][i - 1]);
            if (i == kink_at && i + 1 < p) {
                // sidestep to the next column, climb one cycle, come back
                path.push_back((i - 1) * q + (rail % q));
                path.push_back(i * q + (rail % q));
                path.push_back(i * q + (rail - 1));
                ++i;
            }
        }
        for (VertexId v : oc->second) path.push_back(v);
        paths.push_back(path);
    }
    return paths;
}


std::vector<std::pair<int, int>> uturn_rails(int q, int k, int r) {
    int span = std::max(r + 3, q / std::max(1, k));
    std::vector<std::pair<int, int>> out;
    for (int l = 0; l < k; ++l) {
        int a = 1 + l * span;
        if (a + 1 > q) throw Error(ErrorCode::BadParams, "not enough rails for U-turns");
        out.push_back({a, a + 1});
    }
    // cyclic gap between the last pair and the first must also scatter
    if (k >= 2 && (out.front().first + q) - out.back().second < r + 1)
        throw Error(ErrorCode::BadParams, "not enough rails for U-turns");
    return out;
}

std::vector<std::vector<VertexId>> plant_uturn_linkage(const GenResult& gen, int k, int r) {
    int p = static_cast<int>(gen.cycles.size());
    int q = static_cast<int>(gen.rails.size());
    auto pairs = uturn_rails(q, k, r);
    std::vector<std::vector<VertexId>> out;
    for (auto [a, b] : pairs) {
        auto oa = gen.outer_pads.find(a);
        auto ob = gen.outer_pads.find(b);
        if (oa == gen.outer_pads.end() || ob == gen.outer_pads.end())
            throw Error(ErrorCode::BadParams, "U-turn rail lacks an outer pad");
        std::vector<VertexId> path(oa->second.rbegin(), oa->second.rend());
        for (int i = p; i >= 1; --i) path.push_back(gen.rails[a - 1][i - 1]);
        for (int i = 1; i <= p; ++i) path.push_back(gen.rails[b - 1][i - 1]);
        for (VertexId v : ob->second) path.push_back(v);
        out.push_back(path);
    }
    return out;
}

} // namespace linkcomb
