#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "linkcomb/generator.hpp"
#include "linkcomb/structures.hpp"
#include "test_support.hpp"

using namespace linkcomb;
using namespace linkcomb::testsupport;

namespace {

RailedAnnulus make(const GenResult& gr) {
    return RailedAnnulus::build(gr.graph, gr.cycles, gr.rails);
}

} // namespace

TEST_CASE("generated annular grid validates") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 5;
    GenResult gr = gen_annular_grid(opt);
    auto rep = validate_railed_annulus(gr.graph, gr.cycles, gr.rails);
    CHECK(rep.ok);
    CHECK_NOTHROW(make(gr));
}

TEST_CASE("truncated rail is reported at the right pair") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 4;
    GenResult gr = gen_annular_grid(opt);
    auto rails = gr.rails;
    rails[1].erase(rails[1].begin()); // rail 2 no longer meets C_1
    auto rep = validate_railed_annulus(gr.graph, gr.cycles, rails);
    CHECK_FALSE(rep.ok);
    bool found = false;
    for (auto& v : rep.violations)
        if (v.find("(1,") != std::string::npos && v.find("empty") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("rails sharing a vertex violate disjointness") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 4;
    GenResult gr = gen_annular_grid(opt);
    auto rails = gr.rails;
    rails[1] = rails[0]; // duplicate rail: still a path, no longer disjoint
    auto rep = validate_railed_annulus(gr.graph, gr.cycles, rails);
    CHECK_FALSE(rep.ok);
    bool found = false;
    for (auto& v : rep.violations)
        if (v.find("share") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("annulus region basics") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 4;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    const PlaneGraph& g = gr.graph;

    AnnulusRegion same = a.annulus_region(g, 2, 2);
    CHECK(vset(same.vertices) == vset(a.cycle(2)));
    CHECK(same.edges.size() == 4); // cycle edges only

    AnnulusRegion whole = a.annulus_region(g, 1, 5);
    CHECK(whole.vertices.size() == 20);

    AnnulusRegion mid = a.annulus_region(g, 2, 3);
    CHECK(mid.vertices.size() == 8);
    CHECK(mid.edges.size() == 12); // 2x4 cycle edges + 4 rail segments
}

TEST_CASE("annulus regions compose") {
    GenOptions opt;
    opt.p = 7;
    opt.q = 5;
    opt.chords = 5;
    opt.seed = 5;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    const PlaneGraph& g = gr.graph;
    AnnulusRegion r13 = a.annulus_region(g, 1, 3);
    AnnulusRegion r35 = a.annulus_region(g, 3, 5);
    AnnulusRegion r15 = a.annulus_region(g, 1, 5);
    std::set<VertexId> uni(r13.vertices.begin(), r13.vertices.end());
    uni.insert(r35.vertices.begin(), r35.vertices.end());
    CHECK(uni == vset(r15.vertices));
    // edge sets meet exactly on C_3
    std::set<EdgeId> e13(r13.edges.begin(), r13.edges.end());
    std::set<EdgeId> common;
    for (EdgeId e : r35.edges)
        if (e13.count(e)) common.insert(e);
    std::set<EdgeId> c3;
    const auto& c = a.cycle(3);
    for (size_t i = 0; i < c.size(); ++i)
        c3.insert(*g.edge_between(c[i], c[(i + 1) % c.size()]));
    CHECK(common == c3);
}

TEST_CASE("derive_disks rejects small annuli") {
    GenOptions opt;
    opt.p = 3;
    opt.q = 5;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    CHECK_THROWS_AS(DerivedDisks::build(gr.graph, a), Error);
}

TEST_CASE("derive_disks on the 9x9 grid gives four nested cycles") {
    GenOptions opt;
    opt.p = 9;
    opt.q = 9;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    DerivedDisks d = DerivedDisks::build(gr.graph, a);
    CHECK(d.z() == 4);
    CHECK(d.nested().size() == 4);
    // strict nesting of the derived disks
    for (int i = 1; i < 4; ++i) {
        const FaceSet& big = d.nested_disk(i).interior_faces;
        const FaceSet& small = d.nested_disk(i + 1).interior_faces;
        CHECK(small.minus(big).count() == 0);
        CHECK(big.minus(small).count() > 0);
    }
}

TEST_CASE("r-path degenerate case returns the crossing") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 5;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    DerivedDisks d = DerivedDisks::build(gr.graph, a);
    CHECK(d.r_path(3, 3, 2) == a.crossing(3, 2));
}

TEST_CASE("l-path is the two-segment arc dodging F") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 8;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    DerivedDisks d = DerivedDisks::build(gr.graph, a);
    auto lp = d.l_path(3, 2, 4);
    CHECK(lp.size() == 3); // rail-2 vertex, rail-3 vertex, rail-4 vertex
    CHECK(lp.front() == a.crossing(3, 2).front());
    CHECK(lp.back() == a.crossing(3, 4).front());
    // never uses an F edge
    for (size_t i = 0; i + 1 < lp.size(); ++i)
        CHECK_FALSE(d.f_edges().count(*gr.graph.edge_between(lp[i], lp[i + 1])));
}

TEST_CASE("rectangle disks concatenate the eight pieces") {
    GenOptions opt;
    opt.p = 7;
    opt.q = 6;
    GenResult gr = gen_annular_grid(opt);
    RailedAnnulus a = make(gr);
    DerivedDisks d = DerivedDisks::build(gr.graph, a);
    DiskRegion r = d.rect_disk(2, 6, 2, 5);
    // boundary = cycles 2..6 sides on rails 2 and 5 plus cycle arcs
    std::set<VertexId> bd(r.bounding_cycle.begin(), r.bounding_cycle.end());
    std::set<VertexId> expect;
    auto piece = [&](const std::vector<VertexId>& p) {
        expect.insert(p.begin(), p.end());
    };
    piece(d.l_path(2, 2, 5));
    piece(d.l_path(6, 5, 2));
    piece(d.r_path(2, 6, 2));
    piece(d.r_path(2, 6, 5));
    CHECK(bd == expect);
    // interior holds exactly the grid vertices strictly inside
    std::set<VertexId> inside;
    for (int i = 3; i <= 5; ++i)
        for (int j = 3; j <= 4; ++j) inside.insert((i - 1) * 6 + (j - 1));
    CHECK(vset(r.interior_vertices) == inside);
}

TEST_CASE("gen determinism and parameter validation") {
    GenOptions opt;
    opt.p = 5;
    opt.q = 4;
    opt.chords = 3;
    opt.seed = 42;
    GenResult a = gen_annular_grid(opt);
    GenResult b = gen_annular_grid(opt);
    CHECK(a.graph.edges().size() == b.graph.edges().size());
    for (int i = 0; i < a.graph.num_edges(); ++i) {
        CHECK(a.graph.edges()[i].u == b.graph.edges()[i].u);
        CHECK(a.graph.edges()[i].v == b.graph.edges()[i].v);
    }
    GenOptions bad = opt;
    bad.p = 4;
    CHECK_THROWS_AS(gen_annular_grid(bad), Error);
}

TEST_CASE("generated instance with pads and chords validates end to end") {
    GenOptions opt;
    opt.p = 9;
    opt.q = 8;
    opt.chords = 6;
    opt.seed = 17;
    opt.outer_pad_rails = {1, 4};
    opt.inner_pad_rails = {1, 4};
    GenResult gr = gen_annular_grid(opt);
    auto rep = validate_railed_annulus(gr.graph, gr.cycles, gr.rails);
    for (auto& v : rep.violations) INFO(v);
    CHECK(rep.ok);
    RailedAnnulus a = make(gr);
    CHECK(a.p() == 9);
    CHECK(a.q() == 8);
    // pads hang outside the annulus
    AnnulusRegion whole = a.annulus_region(gr.graph, 1, 9);
    for (auto& [rail, chain] : gr.outer_pads)
        for (VertexId v : chain) CHECK_FALSE(whole.has_vertex(v));
    for (auto& [rail, chain] : gr.inner_pads)
        for (VertexId v : chain) CHECK_FALSE(whole.has_vertex(v));
}
