// relhom: command-line front end for the relational-structure analyses.
//
// Exit codes: 0 = property holds / query answered, 1 = property fails (a
// witness is reported), 2 = usage or parse error, 3 = a resource cap fired.

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "relhom/acceptance.hpp"
#include "relhom/duality.hpp"
#include "relhom/gibbs.hpp"
#include "relhom/mixing.hpp"
#include "relhom/walks.hpp"

using json = nlohmann::ordered_json;
using namespace relhom;

namespace {

struct GlobalFlags {
    bool json_out = false;
    bool timing = false;
    uint64_t seed = 20240101;
    long long cap = 100000;
    int threads = 1;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RelStructure load_structure(const std::string& path) { return parse_structure(read_file(path)); }

std::vector<int> parse_j(const RelStructure& h, const std::string& csv) {
    std::vector<int> out;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty()) out.push_back(h.require_element(item));
    return out;
}

std::vector<std::string> names_of(const RelStructure& h, const std::vector<int>& elems) {
    std::vector<std::string> out;
    for (int e : elems) out.push_back(h.element_name(e));
    return out;
}

json fold_list_json(const DismantleSequence& seq) {
    json arr = json::array();
    for (const auto& f : seq.folds)
        arr.push_back(json{{"removed", f.removed}, {"dominator", f.dominator}});
    return arr;
}

// The single-object report contract shared by every subcommand in JSON mode.
int emit(const GlobalFlags& g, bool verdict_holds, const json& witness, const std::string& text,
         int exit_code) {
    if (g.json_out) {
        json out;
        out["verdict"] = verdict_holds;
        out["witness"] = witness;
        if (g.timing)
            out["timing"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - g.t0).count();
        else
            out["timing"] = nullptr;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    return exit_code;
}

json hom_json(const RelStructure& g, const RelStructure& h, const Homomorphism& f) {
    json out = json::object();
    for (int x = 0; x < g.size(); ++x) out[g.element_name(x)] = h.element_name(f.map[x]);
    return out;
}

int cmd_make(const GlobalFlags& gf, const std::string& kind, const std::vector<std::string>& files,
             int ell, int depth) {
    RelStructure out;
    if (kind == "product") {
        out = product(load_structure(files.at(0)), load_structure(files.at(1)));
    } else if (kind == "diagonal") {
        out = diagonal(load_structure(files.at(0)));
    } else if (kind == "link") {
        out = link(ell, load_structure(files.at(0)).signature());
    } else if (kind == "constants") {
        out = add_constants(load_structure(files.at(0)));
    } else if (kind == "forest") {
        out = walk_forest(load_structure(files.at(0)), depth, gf.cap).structure;
    } else {
        throw ParseError("unknown make kind '" + kind + "'");
    }
    std::cout << render_structure(out);
    return 0;
}

int cmd_dismantle(const GlobalFlags& gf, const std::string& file, const std::string& j_csv) {
    auto h = load_structure(file);
    auto j = parse_j(h, j_csv);
    auto [fin, seq] = greedy_dismantle(h, j);
    std::ostringstream text;
    for (const auto& f : seq.folds) text << f.removed << " -> " << f.dominator << "\n";
    text << render_structure(fin);
    json witness{{"folds", fold_list_json(seq)}, {"result", render_structure(fin)}};
    return emit(gf, true, witness, text.str(), 0);
}

int cmd_decide(const GlobalFlags& gf, const std::string& file, const std::string& j_csv,
               std::string report_mode) {
    auto h = load_structure(file);
    auto j = parse_j(h, j_csv);
    auto rep = decide_main(h, j);

    json jr;
    jr["holds"] = rep.holds;
    jr["J"] = rep.j_names;
    jr["phase1"] = fold_list_json(rep.phase1);
    jr["I"] = render_structure(rep.reduced);
    jr["phase2"] = fold_list_json(rep.phase2);
    jr["K"] = render_structure(rep.kernel);
    if (rep.holds) {
        jr["square_seq"] = fold_list_json(*rep.square_seq);
        jr["gap"] = *rep.gap;
    } else {
        jr["square_seq"] = nullptr;
        jr["gap"] = nullptr;
        json stuck = json::array();
        for (int e = 0; e < rep.kernel.size(); ++e) {
            auto parts = split_pair_name(rep.kernel.element_name(e));
            if (parts && parts->first != parts->second)
                stuck.push_back(rep.kernel.element_name(e));
        }
        jr["counterexample"] = stuck;
    }

    if (gf.json_out || report_mode == "json") {
        std::cout << jr.dump(2) << "\n";
    } else {
        std::cout << (rep.holds ? "holds" : "fails") << "\n";
        std::cout << "phase1 folds: " << rep.phase1.length()
                  << ", phase2 folds: " << rep.phase2.length() << "\n";
        if (rep.holds)
            std::cout << "sequence length " << rep.square_seq->length() << ", gap " << *rep.gap
                      << "\n";
        else
            std::cout << "surviving non-diagonal elements in:\n" << render_structure(rep.kernel);
    }
    return rep.holds ? 0 : 1;
}

int cmd_homs(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
             bool count_only) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    if (count_only) {
        long long n = count_homs(g, h, gf.cap);
        return emit(gf, n > 0, json{{"count", n}}, std::to_string(n) + "\n", 0);
    }
    auto homs = enumerate_homs(g, h, HomEnumOptions{gf.cap, false});
    std::ostringstream text;
    json arr = json::array();
    for (const auto& f : homs) {
        text << render_hom(g, h, f) << "\n";
        arr.push_back(hom_json(g, h, f));
    }
    return emit(gf, !homs.empty(), json{{"count", homs.size()}, {"homs", arr}}, text.str(), 0);
}

int cmd_homgraph(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
                 const std::string& view_name, int n, const std::string& j_csv,
                 const std::string& from_file, const std::string& to_file, bool components) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    auto j = parse_j(h, j_csv);
    HomGraphView view = view_name == "l" ? HomGraphView::Link : HomGraphView::Hamming;
    int hamming_n = view_name == "cN" ? n : 1;

    if (components) {
        auto homs = enumerate_homs(g, h, HomEnumOptions{gf.cap, false});
        auto comp = hom_graph_components(g, h, homs, view, hamming_n);
        int ncomp = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
        std::ostringstream text;
        text << homs.size() << " homomorphisms, " << ncomp << " components\n";
        json witness{{"homs", homs.size()}, {"components", ncomp}};
        return emit(gf, ncomp <= 1, witness, text.str(), 0);
    }

    auto phi = Homomorphism{parse_partial_map(g, h, read_file(from_file)).map};
    auto psi = Homomorphism{parse_partial_map(g, h, read_file(to_file)).map};
    for (int v : phi.map)
        if (v < 0) throw ParseError("--from map is not total");
    for (int v : psi.map)
        if (v < 0) throw ParseError("--to map is not total");
    HomGraphOptions opt;
    opt.hom_cap = gf.cap;
    opt.hamming_n = hamming_n;
    auto walk = j_connected(g, h, j, view, phi, psi, opt);
    if (!walk) return emit(gf, false, json{{"connected", false}}, "no walk\n", 1);
    std::ostringstream text;
    text << "walk of length " << walk->steps.size() - 1 << "\n";
    json steps = json::array();
    for (const auto& s : walk->steps) steps.push_back(hom_json(g, h, s));
    return emit(gf, true, json{{"connected", true}, {"walk", steps}}, text.str(), 0);
}

json counterexample_json(const RelStructure& g, const RelStructure& h,
                         const MixingCounterexample& ce) {
    return json{{"V", names_of(g, ce.v)},
                {"W", names_of(g, ce.w)},
                {"dist", ce.dist == kInfiniteDistance ? json(nullptr) : json(ce.dist)},
                {"phi", hom_json(g, h, ce.phi)},
                {"psi", hom_json(g, h, ce.psi)}};
}

int cmd_mixing_gap(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
                   const std::string& j_csv, int gmax) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    auto j = parse_j(h, j_csv);
    MixingCaps caps;
    caps.hom_cap = gf.cap;
    auto rep = gap_search(g, h, j, gmax, caps);
    std::ostringstream text;
    json witness;
    witness["queries"] = rep.queries;
    if (rep.gap) {
        text << "gap " << *rep.gap << "\n";
        witness["gap"] = *rep.gap;
    } else {
        text << "NONE\n";
        witness["gap"] = nullptr;
    }
    if (rep.counterexample) {
        witness["counterexample"] = counterexample_json(g, h, *rep.counterexample);
        if (!rep.gap) text << "failure at distance " << rep.counterexample->dist << "\n";
    }
    return emit(gf, rep.gap.has_value(), witness, text.str(), rep.gap ? 0 : 1);
}

int cmd_mixing_tssm(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
                    int gap) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    MixingCaps caps;
    caps.hom_cap = gf.cap;
    auto res = tssm_check(g, h, gap, caps);
    json witness{{"queries", res.queries}};
    if (res.counterexample)
        witness["counterexample"] = counterexample_json(g, h, *res.counterexample);
    return emit(gf, res.holds, witness, res.holds ? "holds\n" : "fails\n", res.holds ? 0 : 1);
}

int cmd_mixing_construct(const GlobalFlags& gf, const std::string& gfile,
                         const std::string& hfile, const std::string& j_csv,
                         const std::string& v_csv, const std::string& w_csv,
                         const std::string& phi_file, const std::string& psi_file) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    auto j = parse_j(h, j_csv);
    auto phi = Homomorphism{parse_partial_map(g, h, read_file(phi_file)).map};
    auto psi = Homomorphism{parse_partial_map(g, h, read_file(psi_file)).map};
    std::vector<int> v, w;
    for (const auto& name : parse_j(g, v_csv)) v.push_back(name);
    for (const auto& name : parse_j(g, w_csv)) w.push_back(name);
    auto rep = decide_main(h, j);
    if (!rep.holds)
        return emit(gf, false, json{{"error", "decision procedure fails on H"}},
                    "decision procedure fails on H\n", 1);
    auto merged = mix_constructive(g, h, j, v, w, phi, psi, rep);
    return emit(gf, true, json{{"gamma", hom_json(g, h, merged)}, {"gap", *rep.gap}},
                render_hom(g, h, merged), 0);
}

int cmd_mixing_c2(const GlobalFlags& gf, const std::string& hfile, const std::string& j_csv,
                  int gap, int depth) {
    auto h = load_structure(hfile);
    auto j = parse_j(h, j_csv);
    auto res = forest_root_mixing(h, j, gap, depth, gf.cap);
    json witness{{"forest_size", res.forest_size}};
    std::ostringstream text;
    if (res.holds) {
        text << "holds (forest size " << res.forest_size << ")\n";
    } else {
        witness["failing_root"] = *res.failing_root;
        text << "fails at root " << *res.failing_root << "\n";
    }
    return emit(gf, res.holds, witness, text.str(), res.holds ? 0 : 1);
}

int cmd_gibbs_z(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
                const std::string& v_csv, const std::string& boundary_file,
                const std::string& lambda_text) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    GibbsSpecification spec{g, h, lambda_text.empty() ? uniform_weights(h)
                                                      : parse_weights(h, lambda_text)};
    auto phi = Homomorphism{parse_partial_map(g, h, read_file(boundary_file)).map};
    auto v = parse_j(g, v_csv);
    GibbsCaps caps;
    caps.node_cap = std::max<long long>(gf.cap, 1000000);
    auto z = partition_function(spec, v, phi, caps);
    std::ostringstream text;
    text << rational_str(z.z) << (z.support == 0 ? " (empty support)\n" : "\n");
    json witness{{"Z", rational_str(z.z)}, {"support", z.support}};
    return emit(gf, z.support > 0, witness, text.str(), 0);
}

int cmd_gibbs_marginal(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
                       const std::string& v_csv, const std::string& boundary_file,
                       const std::string& x_name, const std::string& lambda_text) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    GibbsSpecification spec{g, h, lambda_text.empty() ? uniform_weights(h)
                                                      : parse_weights(h, lambda_text)};
    auto phi = Homomorphism{parse_partial_map(g, h, read_file(boundary_file)).map};
    auto v = parse_j(g, v_csv);
    int x = g.require_element(x_name);
    auto marg = conditional_marginal(spec, v, phi, x);
    std::ostringstream text;
    json table = json::object();
    for (auto& [a, p] : marg) {
        text << h.element_name(a) << ": " << rational_str(p) << "\n";
        table[h.element_name(a)] = rational_str(p);
    }
    return emit(gf, true, json{{"marginal", table}}, text.str(), 0);
}

int cmd_gibbs_jsm(const GlobalFlags& gf, const std::string& gfile, const std::string& hfile,
                  const std::string& j_csv, const std::vector<std::string>& volumes,
                  const std::string& lambda_text) {
    auto g = load_structure(gfile);
    auto h = load_structure(hfile);
    GibbsSpecification spec{g, h, lambda_text.empty() ? uniform_weights(h)
                                                      : parse_weights(h, lambda_text)};
    auto j = parse_j(h, j_csv);
    std::vector<std::vector<int>> family;
    if (volumes.empty()) {
        // default family: balls of radius 0..2 around every element
        for (int c = 0; c < g.size(); ++c) {
            auto dist = distances_from(g, {c});
            for (int r = 0; r <= 2; ++r) {
                std::vector<int> ball;
                for (int e = 0; e < g.size(); ++e)
                    if (dist[e] <= r) ball.push_back(e);
                family.push_back(ball);
            }
        }
        std::sort(family.begin(), family.end());
        family.erase(std::unique(family.begin(), family.end()), family.end());
    } else {
        for (const auto& v : volumes) family.push_back(parse_j(g, v));
    }
    GibbsCaps caps;
    caps.hom_cap = gf.cap;
    auto rep = jsm_report(spec, j, family, caps);
    std::ostringstream text;
    json buckets = json::object();
    for (auto& [d, m] : rep.bucket_max) {
        text << "dist " << d << ": max gap " << rational_str(m) << "\n";
        buckets[std::to_string(d)] = rational_str(m);
    }
    text << "disconnected: max gap " << rational_str(rep.infinite_bucket_max) << "\n";
    if (rep.fit_valid) text << "fit C=" << rep.fit_c << " alpha=" << rep.fit_alpha << "\n";
    text << (rep.violation ? "VIOLATION\n" : "no violation\n");
    json witness{{"buckets", buckets},
                 {"disconnected_max", rational_str(rep.infinite_bucket_max)},
                 {"pairs", rep.pairs_tested},
                 {"violation", rep.violation}};
    if (rep.fit_valid) {
        witness["fit_c"] = rep.fit_c;
        witness["fit_alpha"] = rep.fit_alpha;
    }
    return emit(gf, !rep.violation, witness, text.str(), rep.violation ? 1 : 0);
}

int cmd_gibbs_influence(const GlobalFlags& gf, const std::string& hfile, const std::string& j_csv,
                        int depth, const std::string& lambda_text) {
    auto h = load_structure(hfile);
    auto j = parse_j(h, j_csv);
    std::optional<WeightFunction> lambda;
    if (!lambda_text.empty()) lambda = parse_weights(h, lambda_text);
    auto res = boundary_influence(h, j, depth, lambda);
    std::ostringstream text;
    text << "witness " << res.witness_pair << ", gap " << rational_str(res.gap) << "\n";
    json p1 = json::object(), p2 = json::object();
    for (auto& [a, p] : res.p1) p1[h.element_name(a)] = rational_str(p);
    for (auto& [a, p] : res.p2) p2[h.element_name(a)] = rational_str(p);
    json witness{{"witness", res.witness_pair},
                 {"gap", rational_str(res.gap)},
                 {"p1", p1},
                 {"p2", p2},
                 {"forest_size", res.forest_size}};
    return emit(gf, true, witness, text.str(), 0);
}

int cmd_duality_enumerate(const GlobalFlags& gf, const std::string& hfile, int max_size,
                          bool trees) {
    auto h = load_structure(hfile);
    ObstructionCaps caps;
    caps.state_cap = gf.cap * 20;
    auto rep = enumerate_critical_obstructions(h, max_size, trees, caps);
    std::ostringstream text;
    text << rep.found.size() << " critical obstructions, "
         << (rep.exhausted ? "exhausted" : "cap hit") << "\n";
    json arr = json::array();
    for (const auto& o : rep.found) {
        text << render_structure(o) << "\n";
        arr.push_back(render_structure(o));
    }
    json witness{{"found", arr},
                 {"exhausted", rep.exhausted},
                 {"states_visited", rep.states_visited},
                 {"max_size", rep.max_size},
                 {"trees_only", rep.trees_only}};
    if (!rep.exhausted) return emit(gf, false, witness, text.str(), 3);
    return emit(gf, true, witness, text.str(), 0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analyses of finite relational structures: dismantling, homomorphism "
                 "reconfiguration, mixing, conditional distributions, duality"};
    app.require_subcommand(1);

    GlobalFlags gf;
    app.add_flag("--json", gf.json_out, "emit a single JSON object");
    app.add_flag("--timing", gf.timing, "include wall time in JSON output");
    app.add_option("--seed", gf.seed, "seed for randomized batteries");
    app.add_option("--cap", gf.cap, "enumeration cap");
    app.add_option("--threads", gf.threads, "workers for the verification suite");

    // make
    auto* mk = app.add_subcommand("make", "emit a derived structure");
    std::string mk_kind;
    std::vector<std::string> mk_files;
    int mk_ell = 1, mk_depth = 2;
    mk->add_option("kind", mk_kind, "product|diagonal|link|constants|forest")->required();
    mk->add_option("files", mk_files, "input structure files");
    mk->add_option("--ell", mk_ell, "link length");
    mk->add_option("--depth", mk_depth, "forest depth");

    // dismantle
    auto* dis = app.add_subcommand("dismantle", "greedy dismantling outside a protected set");
    std::string dis_file, dis_j;
    dis->add_option("file", dis_file)->required();
    dis->add_option("--J", dis_j, "comma-separated protected elements");

    // decide
    auto* dec = app.add_subcommand("decide", "two-phase square-collapse decision");
    std::string dec_file, dec_j, dec_report = "text";
    dec->add_option("file", dec_file)->required();
    dec->add_option("--J", dec_j, "comma-separated protected elements");
    dec->add_option("--report", dec_report, "json|text");

    // homs
    auto* hm = app.add_subcommand("homs", "enumerate homomorphisms");
    std::string hm_g, hm_h;
    bool hm_count = false;
    hm->add_option("G", hm_g)->required();
    hm->add_option("H", hm_h)->required();
    hm->add_flag("--count-only", hm_count);

    // homgraph
    auto* hg = app.add_subcommand("homgraph", "graphs on the homomorphism set");
    std::string hg_g, hg_h, hg_view = "c1", hg_j, hg_from, hg_to;
    int hg_n = 1;
    bool hg_components = false;
    hg->add_option("G", hg_g)->required();
    hg->add_option("H", hg_h)->required();
    hg->add_option("--view", hg_view, "c1|cN|l");
    hg->add_option("--n", hg_n, "threshold for the cN view");
    hg->add_option("--J", hg_j);
    hg->add_option("--from", hg_from, "homomorphism file (x -> a lines)");
    hg->add_option("--to", hg_to, "homomorphism file");
    hg->add_flag("--components", hg_components);

    // mixing
    auto* mx = app.add_subcommand("mixing", "merge properties of the homomorphism set");
    mx->require_subcommand(1);
    auto* mxgap = mx->add_subcommand("gap", "least verified gap");
    std::string mg_g, mg_h, mg_j;
    int mg_gmax = 6;
    mxgap->add_option("G", mg_g)->required();
    mxgap->add_option("H", mg_h)->required();
    mxgap->add_option("--J", mg_j);
    mxgap->add_option("--gmax", mg_gmax);
    auto* mxts = mx->add_subcommand("tssm", "everything-protected mixing at a gap");
    std::string mt_g, mt_h;
    int mt_gap = 0;
    mxts->add_option("G", mt_g)->required();
    mxts->add_option("H", mt_h)->required();
    mxts->add_option("--g", mt_gap)->required();
    auto* mxc = mx->add_subcommand("construct", "constructive merge witness");
    std::string mc_g, mc_h, mc_j, mc_v, mc_w, mc_phi, mc_psi;
    mxc->add_option("G", mc_g)->required();
    mxc->add_option("H", mc_h)->required();
    mxc->add_option("--J", mc_j);
    mxc->add_option("--V", mc_v)->required();
    mxc->add_option("--W", mc_w)->required();
    mxc->add_option("--phi", mc_phi)->required();
    mxc->add_option("--psi", mc_psi)->required();
    auto* mxc2 = mx->add_subcommand("c2", "root mixing on the truncated square forest");
    std::string m2_h, m2_j;
    int m2_g = 0, m2_depth = 2;
    mxc2->add_option("H", m2_h)->required();
    mxc2->add_option("--J", m2_j);
    mxc2->add_option("--g", m2_g)->required();
    mxc2->add_option("--depth", m2_depth)->required();

    // gibbs
    auto* gb = app.add_subcommand("gibbs", "finite-volume conditional distributions");
    gb->require_subcommand(1);
    auto* gbz = gb->add_subcommand("z", "partition function");
    std::string gz_g, gz_h, gz_v, gz_b, gz_lambda;
    gbz->add_option("G", gz_g)->required();
    gbz->add_option("H", gz_h)->required();
    gbz->add_option("--volume", gz_v)->required();
    gbz->add_option("--boundary", gz_b, "homomorphism file clamping the exterior")->required();
    gbz->add_option("--lambda", gz_lambda, "a=1,b=3/2");
    auto* gbm = gb->add_subcommand("marginal", "conditional marginal at one element");
    std::string gm_g, gm_h, gm_v, gm_b, gm_x, gm_lambda;
    gbm->add_option("G", gm_g)->required();
    gbm->add_option("H", gm_h)->required();
    gbm->add_option("--volume", gm_v)->required();
    gbm->add_option("--boundary", gm_b)->required();
    gbm->add_option("--x", gm_x)->required();
    gbm->add_option("--lambda", gm_lambda);
    auto* gbj = gb->add_subcommand("jsm", "marginal-gap decay report");
    std::string gj_g, gj_h, gj_j, gj_lambda;
    std::vector<std::string> gj_volumes;
    gbj->add_option("G", gj_g)->required();
    gbj->add_option("H", gj_h)->required();
    gbj->add_option("--J", gj_j);
    gbj->add_option("--volume", gj_volumes, "volume element list, repeatable");
    gbj->add_option("--lambda", gj_lambda);
    auto* gbi = gb->add_subcommand("influence", "boundary influence witness");
    std::string gi_h, gi_j, gi_lambda;
    int gi_depth = 3;
    gbi->add_option("H", gi_h)->required();
    gbi->add_option("--J", gi_j);
    gbi->add_option("--depth", gi_depth);
    gbi->add_option("--lambda", gi_lambda);
    auto* gbh = gb->add_subcommand("hardcore", "critical activity for a regular tree");
    int gh_degree = 6;
    gbh->add_option("--degree", gh_degree)->required();

    // duality
    auto* du = app.add_subcommand("duality", "cores and obstructions");
    du->require_subcommand(1);
    auto* duc = du->add_subcommand("core", "is every endomorphism injective");
    std::string dc_h;
    duc->add_option("H", dc_h)->required();
    auto* ducr = du->add_subcommand("critical", "is O a critical obstruction of H");
    std::string dcr_o, dcr_h;
    ducr->add_option("O", dcr_o)->required();
    ducr->add_option("H", dcr_h)->required();
    auto* due = du->add_subcommand("enumerate", "critical obstructions up to a size bound");
    std::string de_h;
    int de_size = 4;
    bool de_trees = false;
    due->add_option("H", de_h)->required();
    due->add_option("--max-size", de_size);
    due->add_flag("--trees", de_trees);
    auto* dua = du->add_subcommand("check-a1c", "square collapse with everything protected");
    std::string da_h;
    dua->add_option("H", da_h)->required();
    auto* dux = du->add_subcommand("extend", "extension via an obstruction list");
    std::string dx_g, dx_h, dx_partial;
    int dx_size = 3;
    dux->add_option("G", dx_g)->required();
    dux->add_option("H", dx_h)->required();
    dux->add_option("--partial", dx_partial, "partial map file (x -> a lines)")->required();
    dux->add_option("--max-size", dx_size, "obstruction enumeration bound");

    // paper-suite
    auto* ps = app.add_subcommand("paper-suite", "run the whole verification battery");
    std::string ps_level = "full";
    ps->add_option("--level", ps_level, "quick|full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*mk) return cmd_make(gf, mk_kind, mk_files, mk_ell, mk_depth);
        if (*dis) return cmd_dismantle(gf, dis_file, dis_j);
        if (*dec) return cmd_decide(gf, dec_file, dec_j, dec_report);
        if (*hm) return cmd_homs(gf, hm_g, hm_h, hm_count);
        if (*hg)
            return cmd_homgraph(gf, hg_g, hg_h, hg_view, hg_n, hg_j, hg_from, hg_to,
                                hg_components);
        if (*mxgap) return cmd_mixing_gap(gf, mg_g, mg_h, mg_j, mg_gmax);
        if (*mxts) return cmd_mixing_tssm(gf, mt_g, mt_h, mt_gap);
        if (*mxc) return cmd_mixing_construct(gf, mc_g, mc_h, mc_j, mc_v, mc_w, mc_phi, mc_psi);
        if (*mxc2) return cmd_mixing_c2(gf, m2_h, m2_j, m2_g, m2_depth);
        if (*gbz) return cmd_gibbs_z(gf, gz_g, gz_h, gz_v, gz_b, gz_lambda);
        if (*gbm) return cmd_gibbs_marginal(gf, gm_g, gm_h, gm_v, gm_b, gm_x, gm_lambda);
        if (*gbj) return cmd_gibbs_jsm(gf, gj_g, gj_h, gj_j, gj_volumes, gj_lambda);
        if (*gbi) return cmd_gibbs_influence(gf, gi_h, gi_j, gi_depth, gi_lambda);
        if (*gbh) {
            auto v = hardcore_critical_activity(gh_degree);
            return emit(gf, true, json{{"activity", rational_str(v)}}, rational_str(v) + "\n", 0);
        }
        if (*duc) {
            bool core = is_core(load_structure(dc_h));
            return emit(gf, core, json{{"core", core}}, core ? "core\n" : "not a core\n",
                        core ? 0 : 1);
        }
        if (*ducr) {
            bool crit = is_critical_obstruction(load_structure(dcr_o), load_structure(dcr_h));
            return emit(gf, crit, json{{"critical", crit}},
                        crit ? "critical obstruction\n" : "not a critical obstruction\n",
                        crit ? 0 : 1);
        }
        if (*due) return cmd_duality_enumerate(gf, de_h, de_size, de_trees);
        if (*dua) {
            bool holds = finite_duality_via_a1c(load_structure(da_h));
            return emit(gf, holds, json{{"holds", holds}}, holds ? "holds\n" : "fails\n",
                        holds ? 0 : 1);
        }
        if (*dux) {
            auto g = load_structure(dx_g);
            auto h = load_structure(dx_h);
            auto p = parse_partial_map(g, h, read_file(dx_partial));
            auto obs = enumerate_critical_obstructions(add_constants(h), dx_size, false);
            bool extends = extension_via_obstructions(g, h, p, obs);
            return emit(gf, extends, json{{"extends", extends}, {"obstructions", obs.found.size()}},
                        extends ? "extends\n" : "no extension\n", extends ? 0 : 1);
        }
        if (*ps) {
            SuiteOptions opt;
            opt.seed = gf.seed;
            opt.full = ps_level != "quick";
            opt.threads = gf.threads;
            if (gf.json_out) {
                auto results = run_paper_suite(opt);
                json arr = json::array();
                bool all = true;
                for (const auto& r : results) {
                    arr.push_back(json{{"id", r.id},
                                       {"name", r.name},
                                       {"pass", r.pass},
                                       {"detail", r.detail},
                                       {"seconds", gf.timing ? json(r.seconds) : json(nullptr)}});
                    all = all && r.pass;
                }
                json out{{"verdict", all}, {"witness", json{{"criteria", arr}}},
                         {"timing", nullptr}};
                std::cout << out.dump(2) << "\n";
                return all ? 0 : 1;
            }
            return run_and_print_paper_suite(opt) ? 0 : 1;
        }
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InternalCheckError& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
