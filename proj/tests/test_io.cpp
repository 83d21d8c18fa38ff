#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "linkcomb/generator.hpp"
#include "linkcomb/instance_io.hpp"
#include "test_support.hpp"

using namespace linkcomb;
using namespace linkcomb::testsupport;

namespace {

InstanceFile sample(uint64_t seed) {
    GenOptions o;
    o.p = 7;
    o.q = 6;
    o.chords = 3;
    o.seed = seed;
    auto rails = planted_rails(o.q, 2, 0);
    o.outer_pad_rails = rails;
    o.inner_pad_rails = rails;
    GenResult gr = gen_annular_grid(o);
    InstanceFile f;
    f.graph = gr.graph;
    f.cycles = gr.cycles;
    f.rails = gr.rails;
    f.linkage = plant_linkage(gr, 2, 0, true, seed);
    f.params.r = 0;
    f.params.s = 1;
    f.params.rails_i = {2, 4};
    f.params.m = 2;
    return f;
}

} // namespace

TEST_CASE("instance round-trip is the identity") {
    InstanceFile f = sample(5);
    std::string text = serialize_instance(f);
    InstanceFile g = parse_instance(text);
    std::string text2 = serialize_instance(g);
    CHECK(text == text2);
    CHECK(g.graph.num_vertices() == f.graph.num_vertices());
    CHECK(g.graph.num_edges() == f.graph.num_edges());
    CHECK(g.graph.num_faces() == f.graph.num_faces());
    CHECK(g.cycles == f.cycles);
    CHECK(g.rails == f.rails);
    CHECK(g.linkage == f.linkage);
    CHECK(g.params.rails_i == f.params.rails_i);
    // the rebuilt structures validate
    auto rep = validate_railed_annulus(g.graph, g.cycles, g.rails);
    CHECK(rep.ok);
    CHECK_NOTHROW(g.linkage_of());
}

TEST_CASE("serialization is deterministic") {
    CHECK(serialize_instance(sample(9)) == serialize_instance(sample(9)));
    CHECK(serialize_instance(sample(9)) != serialize_instance(sample(10)));
}

TEST_CASE("parse errors carry context") {
    CHECK_THROWS_AS(parse_instance("{not json"), Error);
    CHECK_THROWS_AS(parse_instance("{}"), Error);
    // rotation missing a vertex
    InstanceFile f = sample(1);
    std::string text = serialize_instance(f);
    auto pos = text.find("\"rotation\"");
    REQUIRE(pos != std::string::npos);
    std::string broken = text;
    broken.replace(broken.find("\"0\":", pos), 4, "\"999\":");
    CHECK_THROWS_AS(parse_instance(broken), Error);
}

TEST_CASE("report exit codes") {
    Report rep;
    rep.command = "verify";
    CHECK(rep.exit_code() == 0);
    rep.add("disjointness", true);
    CHECK(rep.status == "ok");
    rep.add("confined", false, "vertex 7 off rails");
    CHECK(rep.status == "violated");
    CHECK(rep.exit_code() == 1);
    rep.status = "budget";
    CHECK(rep.exit_code() == 2);
    // json output mentions every finding
    std::string js = rep.to_json();
    CHECK(js.find("disjointness") != std::string::npos);
    CHECK(js.find("confined") != std::string::npos);
}
