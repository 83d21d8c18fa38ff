#pragma once

#include <optional>
#include <string>

#include "linkcomb/linkage.hpp"

namespace linkcomb {

struct InstanceParams {
    int r = 0;
    int s = 1;
    std::vector<int> rails_i; // I
    int m = 2;
};

/// One structured-text file carries the graph, the annulus, the linkage
/// and the parameters; `expected` is an opaque fixture block.
struct InstanceFile {
    PlaneGraph graph;
    std::vector<std::vector<VertexId>> cycles;
    std::vector<std::vector<VertexId>> rails;
    std::vector<std::vector<VertexId>> linkage;
    InstanceParams params;
    std::string expected_json; // "" when absent

    bool has_annulus() const { return !cycles.empty(); }
    RailedAnnulus annulus() const { return RailedAnnulus::build(graph, cycles, rails); }
    Linkage linkage_of() const { return Linkage::build(graph, linkage); }
};

InstanceFile parse_instance(const std::string& text);
std::string serialize_instance(const InstanceFile& f);
InstanceFile load_instance(const std::string& path);
void save_instance(const std::string& path, const InstanceFile& f);

struct Finding {
    std::string check;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string command;
    std::string status = "ok"; // ok | violated | infeasible | budget
    std::vector<Finding> findings;
    double millis = 0;

    void add(std::string check, bool pass, std::string detail = "");
    int exit_code() const; // 0 ok, 1 violated, 2 infeasible/budget
    std::string to_json() const;
};

} // namespace linkcomb
