#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "linkcomb/generator.hpp"
#include "linkcomb/plane_graph.hpp"

namespace linkcomb::testsupport {

// Triangle with the canonical ccw rotation; outer face right of 0->1.
inline PlaneGraph k3() {
    return PlaneGraph::build({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}},
                             {{0, 2}, {1, 0}, {2, 1}}, {0, 1, false});
}

// n x n grid with row-major ids, canonical plane rotation (ccw: right,
// up, left, down in drawing coordinates with row 0 at the bottom).
inline PlaneGraph square_grid(int n) {
    std::vector<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    std::map<std::pair<int, int>, EdgeId> eid;
    auto id = [n](int r, int c) { return r * n + c; };
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) vs.push_back(id(r, c));
    auto add = [&](int a, int b) {
        es.push_back({std::min(a, b), std::max(a, b)});
        eid[{std::min(a, b), std::max(a, b)}] = static_cast<EdgeId>(es.size() - 1);
    };
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (c + 1 < n) add(id(r, c), id(r, c + 1));
            if (r + 1 < n) add(id(r, c), id(r + 1, c));
        }
    std::vector<std::vector<EdgeId>> rot;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::vector<EdgeId> rr;
            auto push = [&](int a, int b) {
                rr.push_back(eid.at({std::min(a, b), std::max(a, b)}));
            };
            if (c + 1 < n) push(id(r, c), id(r, c + 1)); // right
            if (r + 1 < n) push(id(r, c), id(r + 1, c)); // up
            if (c > 0) push(id(r, c), id(r, c - 1));     // left
            if (r > 0) push(id(r, c), id(r - 1, c));     // down
            rot.push_back(std::move(rr));
        }
    return PlaneGraph::build(vs, es, rot, {0, 1, false});
}

inline std::set<VertexId> vset(const std::vector<VertexId>& v) {
    return std::set<VertexId>(v.begin(), v.end());
}

} // namespace linkcomb::testsupport
