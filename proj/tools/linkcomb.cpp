// linkcomb: generate, verify, decompose, minimise and comb linkages in
// railed annuli.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "linkcomb/comb.hpp"
#include "linkcomb/generator.hpp"
#include "linkcomb/instance_io.hpp"

using namespace linkcomb;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

long long default_budget() {
    if (const char* env = std::getenv("LINKCOMB_BUDGET")) {
        long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 1'000'000;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

InstanceFile make_instance(int p, int q, int chords, uint64_t seed, int k, int r, bool kinks) {
    GenOptions o;
    o.p = p;
    o.q = q;
    o.chords = chords;
    o.seed = seed;
    auto rails = planted_rails(q, k, r);
    o.outer_pad_rails = rails;
    o.inner_pad_rails = rails;
    GenResult gr = gen_annular_grid(o);
    InstanceFile f;
    f.graph = gr.graph;
    f.cycles = gr.cycles;
    f.rails = gr.rails;
    f.linkage = plant_linkage(gr, k, r, kinks, seed);
    f.params.r = r;
    f.params.s = 1;
    int need = 2 * (r + 1) + 1; // a workable default window: |I| > m(r+1) for m = 2
    for (int j = 2; j <= q && static_cast<int>(f.params.rails_i.size()) < need; j += r + 1)
        f.params.rails_i.push_back(j);
    f.params.m = 2;
    return f;
}

InstanceFile make_uturn_instance(int p, int q, int chords, uint64_t seed, int k, int r) {
    GenOptions o;
    o.p = p;
    o.q = q;
    o.chords = chords;
    o.seed = seed;
    for (auto [a, b] : uturn_rails(q, k, r)) {
        o.outer_pad_rails.push_back(a);
        o.outer_pad_rails.push_back(b);
    }
    GenResult gr = gen_annular_grid(o);
    InstanceFile f;
    f.graph = gr.graph;
    f.cycles = gr.cycles;
    f.rails = gr.rails;
    f.linkage = plant_uturn_linkage(gr, k, r);
    f.params.r = r;
    f.params.s = 1;
    for (int j = 2; j <= q && static_cast<int>(f.params.rails_i.size()) < 2 * (r + 1) + 1;
         j += r + 1)
        f.params.rails_i.push_back(j);
    f.params.m = 2;
    return f;
}

std::set<int> to_set(const std::vector<int>& v) { return std::set<int>(v.begin(), v.end()); }

int run_verify(const InstanceFile& f, const std::string& what, Report& rep) {
    const PlaneGraph& g = f.graph;
    bool all = what == "all";
    std::optional<RailedAnnulus> a;
    if (f.has_annulus()) {
        auto va = validate_railed_annulus(g, f.cycles, f.rails);
        if (what == "annulus" || all)
            rep.add("annulus", va.ok, va.ok ? "" : va.violations.front());
        if (va.ok) a = f.annulus();
    }
    std::optional<Linkage> l;
    if (!f.linkage.empty()) {
        try {
            l = f.linkage_of();
            if (what == "linkage" || all) rep.add("linkage", true);
        } catch (const Error& e) {
            if (what == "linkage" || all) rep.add("linkage", false, e.what());
        }
    }
    if (l && (what == "scattered" || all))
        rep.add("scattered", is_r_scattered(g, *l, f.params.r),
                "r=" + std::to_string(f.params.r));
    if (l && a && (what == "avoiding" || all)) {
        Region ann = Region::of_annulus(a->annulus_region(g, 1, a->p()), true);
        rep.add("avoiding", is_region_avoiding(g, *l, ann));
    }
    if (l && a && (what == "confined" || all)) {
        ConfinementSpec spec{f.params.s, to_set(f.params.rails_i)};
        rep.add("confined", is_confined(g, *l, *a, spec));
    }
    return rep.exit_code();
}

json path_json(const std::vector<VertexId>& p) { return json(p); }

json paths_to_json(const Linkage& l) {
    json out = json::array();
    for (const auto& p : l.paths()) out.push_back(p);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"combing machinery for linkages in railed annuli"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "generate a seeded annular-grid instance");
    int gp = 9, gq = 6, gchords = 0, gk = 1, grr = 0;
    uint64_t gseed = 0;
    bool gkinks = false;
    std::string gstyle = "cross", gout;
    gen->add_option("--p", gp, "cycles (odd >= 3)");
    gen->add_option("--q", gq, "rails (>= 3)");
    gen->add_option("--chords", gchords, "quad diagonals to add");
    gen->add_option("--seed", gseed, "generator seed");
    gen->add_option("--k", gk, "planted paths");
    gen->add_option("--r", grr, "scattering radius");
    gen->add_flag("--kinks", gkinks, "plant detour kinks");
    gen->add_option("--style", gstyle, "linkage style")->check(CLI::IsMember({"cross", "uturn"}));
    gen->add_option("--out", gout, "output file (default stdout)");

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "run predicate checks on an instance");
    std::string vwhat = "all", vfile;
    verify->add_option("--what", vwhat)
        ->check(CLI::IsMember({"linkage", "scattered", "avoiding", "confined", "annulus", "all"}));
    verify->add_option("file", vfile)->required();

    // --- stats ---
    auto* stats = app.add_subcommand("stats", "decomposition statistics");
    std::string sfile;
    stats->add_option("file", sfile)->required();

    // --- minimize ---
    auto* minimize = app.add_subcommand("minimize", "cae-minimal equivalent linkage");
    std::string mfile, mout;
    int mr = -1;
    long long mbudget = 0;
    minimize->add_option("file", mfile)->required();
    minimize->add_option("--r", mr, "override scattering radius");
    minimize->add_option("--budget", mbudget, "search budget (nodes)");
    minimize->add_option("--out", mout, "write the minimised instance here");

    // --- witness ---
    auto* witness = app.add_subcommand("witness", "treewidth or bramble witness");
    std::string wfile, wmode = "treewidth";
    witness->add_option("file", wfile)->required();
    witness->add_option("--mode", wmode)->check(CLI::IsMember({"treewidth", "bramble"}));

    // --- comb ---
    auto* combcmd = app.add_subcommand("comb", "comb the linkage through rails of I");
    std::string cfile, cout_file, ctrace;
    int cr = -1, cs = 0, cm = 0;
    long long cbudget = 0;
    std::vector<int> crails;
    combcmd->add_option("file", cfile)->required();
    combcmd->add_option("--r", cr);
    combcmd->add_option("--s", cs);
    combcmd->add_option("--I", crails, "rail indices")->delimiter(',');
    combcmd->add_option("--m", cm, "treewidth threshold");
    combcmd->add_option("--budget", cbudget);
    combcmd->add_option("--trace", ctrace, "write the stage trace here");
    combcmd->add_option("--out", cout_file, "write the combed instance here");

    // --- lemma ---
    auto* lemma = app.add_subcommand("lemma", "run a lemma property over a corpus");
    std::string lname, lcorpus = "fixtures";
    lemma->add_option("name", lname)
        ->required()
        ->check(CLI::IsMember({"rivers", "mountains", "bramble", "tight", "free-disk"}));
    lemma->add_option("--corpus", lcorpus, "fixture directory");

    // --- route-grid ---
    auto* rg = app.add_subcommand("route-grid", "scattered paths across a grid");
    int rgk = 4, rgkp = 4, rgd = 1, rgr = 0;
    std::vector<int> rgup, rgdown;
    rg->add_option("--k", rgk, "columns");
    rg->add_option("--kp", rgkp, "rows");
    rg->add_option("--d", rgd, "paths");
    rg->add_option("--r", rgr, "scattering radius");
    rg->add_option("--up", rgup, "top terminal columns")->delimiter(',');
    rg->add_option("--down", rgdown, "bottom terminal columns")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    Timer timer;
    try {
        if (*gen) {
            InstanceFile f = gstyle == "uturn"
                                 ? make_uturn_instance(gp, gq, gchords, gseed, gk, grr)
                                 : make_instance(gp, gq, gchords, gseed, gk, grr, gkinks);
            std::string text = serialize_instance(f);
            if (gout.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(gout);
                out << text;
            }
            return 0;
        }
        if (*verify) {
            InstanceFile f = load_instance(vfile);
            Report rep;
            rep.command = "verify";
            run_verify(f, vwhat, rep);
            rep.millis = timer.ms();
            std::cout << rep.to_json();
            return rep.exit_code();
        }
        if (*stats) {
            InstanceFile f = load_instance(sfile);
            const PlaneGraph& g = f.graph;
            RailedAnnulus a = f.annulus();
            Linkage l = f.linkage_of();
            auto rw = rivers(g, l, a.seq());
            auto mvs = mountains_valleys(g, l, a.seq(), Region::empty(g));
            AnnulusRegion whole = a.annulus_region(g, 1, a.p());
            auto brs = bridges(g, l, Region::of_annulus(whole, false));
            auto crs = crossings(g, l, a.seq());
            for (const auto& z : rw)
                std::cout << "river path=" << z.path_index << " from=" << z.from
                          << " to=" << z.to << "\n";
            for (const auto& mv : mvs)
                std::cout << (mv.kind == MountainValley::Kind::Mountain ? "mountain" : "valley")
                          << " path=" << mv.path_index << " base=" << mv.base_index
                          << " dehe=" << mv.dehe
                          << " tight=" << (is_tight(g, mv, mvs, f.params.r) ? "yes" : "no")
                          << "\n";
            for (const auto& b : brs)
                std::cout << "bridge path=" << b.path_index << " from=" << b.from
                          << " to=" << b.to << "\n";
            for (const auto& c : crs)
                std::cout << "crossing path=" << c.path_index << " cycle=" << c.cycle_index
                          << "\n";
            json summary = {{"rivers", rw.size()},
                            {"mountains_valleys", mvs.size()},
                            {"bridges", brs.size()},
                            {"crossings", crs.size()}};
            std::cout << summary.dump(2) << "\n";
            return 0;
        }
        if (*minimize) {
            InstanceFile f = load_instance(mfile);
            RailedAnnulus a = f.annulus();
            Linkage l = f.linkage_of();
            int r = mr >= 0 ? mr : f.params.r;
            SearchOptions opt{mbudget > 0 ? mbudget : default_budget()};
            auto res = minimal_linkage(f.graph, a.seq(), Region::empty(f.graph), l, r, opt);
            json out = {{"cae", res.cae_value}, {"optimal", res.optimal}};
            std::cout << out.dump(2) << "\n";
            if (!mout.empty()) {
                InstanceFile g2 = f;
                g2.linkage = res.linkage.paths();
                save_instance(mout, g2);
            }
            return res.optimal ? 0 : 2;
        }
        if (*witness) {
            InstanceFile f = load_instance(wfile);
            RailedAnnulus a = f.annulus();
            Linkage l = f.linkage_of();
            const PlaneGraph& g = f.graph;
            if (wmode == "treewidth") {
                std::set<EdgeId> bg = background_edges(g, a.seq(), Region::empty(g));
                SmallGraph u = union_graph(g, l, bg);
                TwOptions topt;
                topt.cap = 64;
                TwInterval iv = treewidth_interval(u, topt);
                json out = {{"lower", iv.lo}, {"upper", iv.hi}, {"exact", iv.exact}};
                std::cout << out.dump(2) << "\n";
                return 0;
            }
            auto rw = rivers(g, l, a.seq());
            if (rw.empty()) {
                std::cout << json({{"error", "no rivers to build a bramble from"}}).dump(2)
                          << "\n";
                return 2;
            }
            // anchor the order at the gap following the last river along C_1
            const auto& c1 = a.cycle(1);
            std::set<VertexId> rverts;
            for (const auto& z : rw) rverts.insert(z.path.begin(), z.path.end());
            FaceSet dface = g.empty_face_set();
            for (size_t i = 0; i < c1.size(); ++i) {
                VertexId x = c1[i], y = c1[(i + 1) % c1.size()];
                if (!rverts.count(x) && !rverts.count(y)) {
                    dface.set(g.face_right_of(x, y));
                    break;
                }
            }
            Region dreg = Region::open_of(dface);
            auto in = build_stream_bramble_input(g, a.seq(), rw, dreg);
            auto w = stream_bramble(g, in);
            json elements = json::array();
            for (const auto& el : w.elements) elements.push_back(el);
            json out = {{"order", w.order},
                        {"hitting_set", w.hitting_set},
                        {"elements", elements}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*combcmd) {
            InstanceFile f = load_instance(cfile);
            RailedAnnulus a = f.annulus();
            Linkage l = f.linkage_of();
            CombParams prm;
            prm.r = cr >= 0 ? cr : f.params.r;
            prm.s = cs > 0 ? cs : f.params.s;
            prm.m = cm > 0 ? cm : f.params.m;
            prm.budget = cbudget > 0 ? cbudget : default_budget();
            prm.rails = crails.empty() ? to_set(f.params.rails_i) : to_set(crails);
            CombResult res = comb(f.graph, a, l, prm);
            CombAudit audit =
                audit_comb(f.graph, a, l, res.combed, prm.r, ConfinementSpec{prm.s, prm.rails});
            Report rep;
            rep.command = "comb";
            rep.add("equivalent", audit.equivalent);
            rep.add("scattered", audit.scattered);
            rep.add("confined", audit.confined);
            rep.add("outside-containment", audit.outside_contained);
            rep.millis = timer.ms();
            std::cout << rep.to_json();
            if (!ctrace.empty()) {
                json tr;
                tr["fast_path"] = res.fast_path;
                tr["outside_guarantee"] = res.geo.outside_guarantee;
                tr["geometry"] = {{"m", res.geo.m},     {"b", res.geo.b},
                                  {"b_q", res.geo.b_q}, {"depth", res.geo.depth},
                                  {"spacing", res.geo.spacing}, {"w", res.geo.w},
                                  {"w2", res.geo.w2},   {"rows", res.geo.rows},
                                  {"d", res.geo.d}};
                tr["l_prime"] = paths_to_json(res.l_prime);
                tr["l_second"] = paths_to_json(res.l_second);
                json rivers_json = json::array();
                for (const auto& t : res.trace) {
                    rivers_json.push_back({{"target_rail", t.target_rail},
                                           {"x_down", t.x_down},
                                           {"x_up", t.x_up},
                                           {"z", path_json(t.z)},
                                           {"q_down", path_json(t.q_down)},
                                           {"q_up", path_json(t.q_up)},
                                           {"y_down", path_json(t.y_down)},
                                           {"y_up", path_json(t.y_up)},
                                           {"x_path_down", path_json(t.x_path_down)},
                                           {"x_path_up", path_json(t.x_path_up)},
                                           {"k", path_json(t.k_path)},
                                           {"connector", path_json(t.conn)}});
                }
                tr["rivers"] = rivers_json;
                tr["combed"] = paths_to_json(res.combed);
                std::ofstream out(ctrace);
                out << tr.dump(2) << "\n";
            }
            if (!cout_file.empty()) {
                InstanceFile g2 = f;
                g2.linkage = res.combed.paths();
                save_instance(cout_file, g2);
            }
            return audit.ok() ? 0 : 1;
        }
        if (*lemma) {
            Report rep;
            rep.command = "lemma " + lname;
            std::vector<std::string> files;
            if (fs::exists(lcorpus))
                for (const auto& e : fs::directory_iterator(lcorpus))
                    if (e.path().extension() == ".json") files.push_back(e.path().string());
            std::sort(files.begin(), files.end());
            if (files.empty()) {
                std::cerr << "warning: corpus '" << lcorpus << "' is empty\n";
                rep.millis = timer.ms();
                std::cout << rep.to_json();
                return 0;
            }
            TwOptions topt;
            topt.cap = 64;
            for (const auto& path : files) {
                InstanceFile f = load_instance(path);
                const PlaneGraph& g = f.graph;
                RailedAnnulus a = f.annulus();
                Linkage l = f.linkage_of();
                std::string tag = fs::path(path).filename().string();
                try {
                    if (lname == "bramble") {
                        auto rw = rivers(g, l, a.seq());
                        if (rw.size() < 2) {
                            rep.add(tag, true, "skipped: fewer than two rivers");
                            continue;
                        }
                        const auto& c1 = a.cycle(1);
                        std::set<VertexId> rverts;
                        for (const auto& z : rw) rverts.insert(z.path.begin(), z.path.end());
                        FaceSet dface = g.empty_face_set();
                        for (size_t i = 0; i < c1.size(); ++i) {
                            VertexId x = c1[i], y = c1[(i + 1) % c1.size()];
                            if (!rverts.count(x) && !rverts.count(y)) {
                                dface.set(g.face_right_of(x, y));
                                break;
                            }
                        }
                        auto in = build_stream_bramble_input(g, a.seq(), rw,
                                                             Region::open_of(dface));
                        auto w = stream_bramble(g, in);
                        int need = std::min<int>(a.p(), static_cast<int>(rw.size())) + 1;
                        rep.add(tag, w.order >= need,
                                "order " + std::to_string(w.order) + " needs >= " +
                                    std::to_string(need));
                        continue;
                    }
                    SearchOptions opt{default_budget()};
                    auto res =
                        minimal_linkage(g, a.seq(), Region::empty(g), l, f.params.r, opt);
                    if (!res.optimal) {
                        rep.add(tag, true, "skipped: search not exhausted");
                        continue;
                    }
                    std::set<EdgeId> bg = background_edges(g, a.seq(), Region::empty(g));
                    SmallGraph u = union_graph(g, res.linkage, bg);
                    if (u.n() > 64) {
                        rep.add(tag, true, "skipped: witness graph too large");
                        continue;
                    }
                    int tw = treewidth_exact(u, topt);
                    if (lname == "rivers") {
                        auto rw = rivers(g, res.linkage, a.seq());
                        bool ok = tw >= a.p() || static_cast<int>(rw.size()) <= tw;
                        rep.add(tag, ok,
                                std::to_string(rw.size()) + " rivers vs tw " +
                                    std::to_string(tw));
                    } else if (lname == "mountains" || lname == "tight") {
                        auto mvs =
                            mountains_valleys(g, res.linkage, a.seq(), Region::empty(g));
                        bool ok = true;
                        std::string detail;
                        for (const auto& mv : mvs) {
                            if (lname == "mountains" && 2 * mv.dehe > 3 * tw) {
                                ok = false;
                                detail = "dehe " + std::to_string(mv.dehe) + " vs tw " +
                                         std::to_string(tw);
                            }
                            if (lname == "tight" && !is_tight(g, mv, mvs, f.params.r)) {
                                ok = false;
                                detail = "loose bump at base " + std::to_string(mv.base_index);
                            }
                        }
                        rep.add(tag, ok, detail);
                    } else if (lname == "free-disk") {
                        // nested view of the annulus cycles, outermost first
                        std::vector<std::vector<VertexId>> nest(f.cycles.rbegin(),
                                                                f.cycles.rend());
                        CycleSequence nested = CycleSequence::build(g, SeqKind::Nested, nest);
                        if (!is_region_avoiding(g, l,
                                                Region::of_disk(nested.region(1), true))) {
                            rep.add(tag, true, "skipped: terminals inside the disk");
                            continue;
                        }
                        Region none = Region::empty(g);
                        auto resn = minimal_linkage(g, nested, none, l, f.params.r, opt);
                        if (!resn.optimal) {
                            rep.add(tag, true, "skipped: nested search not exhausted");
                            continue;
                        }
                        std::set<EdgeId> bgn = background_edges(g, nested, none);
                        int twn = treewidth_exact(union_graph(g, resn.linkage, bgn), topt);
                        int depth = 3 * twn / 2 + 1;
                        if (nested.size() < depth) {
                            rep.add(tag, true, "skipped: sequence shallower than 3m/2+1");
                            continue;
                        }
                        Region deep = Region::of_disk(nested.region(depth), true);
                        rep.add(tag, is_region_free(g, resn.linkage, deep),
                                "depth " + std::to_string(depth));
                    }
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::TooLarge ||
                        e.code() == ErrorCode::SearchBudgetExceeded)
                        rep.add(tag, true, std::string("skipped: ") + e.what());
                    else
                        rep.add(tag, false, e.what());
                }
            }
            rep.millis = timer.ms();
            std::cout << rep.to_json();
            return rep.exit_code();
        }
        if (*rg) {
            GridRoutingProblem p{rgk, rgkp, rgd, rgr, rgup, rgdown};
            auto paths = route_grid(p, default_budget());
            json out = json::array();
            for (const auto& gp2 : paths) {
                json row = json::array();
                for (auto& [c, r2] : gp2) row.push_back({c, r2});
                out.push_back(row);
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const PipelineError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::ParseError:
            case ErrorCode::MalformedInput:
            case ErrorCode::BadParams:
            case ErrorCode::BadSpec:
                std::cerr << "error: " << e.what() << "\n";
                return 3;
            case ErrorCode::SearchBudgetExceeded:
                std::cerr << "budget: " << e.what() << "\n";
                return 2;
            default:
                std::cerr << "infeasible: " << e.what() << "\n";
                return 2;
        }
    }
    return 3;
}
