#include "linkcomb/instance_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace linkcomb {

using nlohmann::json;

namespace {

std::vector<std::vector<VertexId>> parse_paths(const json& j, const char* what) {
    std::vector<std::vector<VertexId>> out;
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
    for (const auto& row : j) {
        std::vector<VertexId> p;
        for (const auto& v : row) p.push_back(v.get<VertexId>());
        out.push_back(std::move(p));
    }
    return out;
}

json paths_json(const std::vector<std::vector<VertexId>>& paths) {
    json out = json::array();
    for (const auto& p : paths) out.push_back(p);
    return out;
}

} // namespace

InstanceFile parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    try {
        std::vector<VertexId> vertices = j.at("vertices").get<std::vector<VertexId>>();
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (const auto& e : j.at("edges")) edges.push_back({e.at(0), e.at(1)});

        // rotation is keyed by vertex id; PlaneGraph::build wants it in
        // sorted-vertex order
        std::vector<VertexId> sorted = vertices;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::vector<EdgeId>> rotation;
        const json& rot = j.at("rotation");
        for (VertexId v : sorted) {
            std::string key = std::to_string(v);
            if (!rot.contains(key))
                throw Error(ErrorCode::ParseError, "rotation missing vertex " + key);
            rotation.push_back(rot.at(key).get<std::vector<EdgeId>>());
        }
        const json& of = j.at("outer_face_edge");
        OuterFaceSpec outer;
        outer.u = of.at(0);
        outer.v = of.at(1);
        std::string side = of.at(2);
        if (side != "left" && side != "right")
            throw Error(ErrorCode::ParseError, "outer face side must be left or right");
        outer.left = side == "left";

        InstanceFile f;
        f.graph = PlaneGraph::build(vertices, edges, rotation, outer);
        if (j.contains("annulus")) {
            f.cycles = parse_paths(j["annulus"].at("cycles"), "annulus.cycles");
            f.rails = parse_paths(j["annulus"].at("rails"), "annulus.rails");
        }
        if (j.contains("linkage")) f.linkage = parse_paths(j["linkage"], "linkage");
        if (j.contains("params")) {
            const json& p = j["params"];
            f.params.r = p.value("r", 0);
            f.params.s = p.value("s", 1);
            f.params.m = p.value("m", 2);
            if (p.contains("I")) f.params.rails_i = p["I"].get<std::vector<int>>();
        }
        if (j.contains("expected")) f.expected_json = j["expected"].dump();
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string serialize_instance(const InstanceFile& f) {
    json j;
    j["vertices"] = f.graph.vertices();
    json edges = json::array();
    for (const Edge& e : f.graph.edges()) edges.push_back({e.u, e.v});
    j["edges"] = edges;
    json rot = json::object();
    for (VertexId v : f.graph.vertices()) rot[std::to_string(v)] = f.graph.rotation_of(v);
    j["rotation"] = rot;
    const OuterFaceSpec& of = f.graph.outer_spec();
    j["outer_face_edge"] = {json(of.u), json(of.v), json(of.left ? "left" : "right")};
    if (!f.cycles.empty()) {
        j["annulus"] = {{"cycles", paths_json(f.cycles)}, {"rails", paths_json(f.rails)}};
    }
    if (!f.linkage.empty()) j["linkage"] = paths_json(f.linkage);
    j["params"] = {{"r", f.params.r}, {"s", f.params.s}, {"I", f.params.rails_i},
                   {"m", f.params.m}};
    if (!f.expected_json.empty()) j["expected"] = json::parse(f.expected_json);
    return j.dump(2) + "\n";
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

void save_instance(const std::string& path, const InstanceFile& f) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << serialize_instance(f);
}

void Report::add(std::string check, bool pass, std::string detail) {
    if (!pass && status == "ok") status = "violated";
    findings.push_back({std::move(check), pass, std::move(detail)});
}

int Report::exit_code() const {
    if (status == "ok") return 0;
    if (status == "violated") return 1;
    return 2; // infeasible / budget
}

std::string Report::to_json() const {
    json j;
    j["command"] = command;
    j["status"] = status;
    json fs = json::array();
    for (const auto& f : findings)
        fs.push_back({{"check", f.check}, {"pass", f.pass}, {"detail", f.detail}});
    j["findings"] = fs;
    j["millis"] = millis;
    return j.dump(2) + "\n";
}

} // namespace linkcomb
