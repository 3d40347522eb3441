// Command-line front end. Every verb is a thin shell over the library: parse
// the inputs, call one public operation, serialize the result. Output is JSON
// on stdout (or plain text with --format text); diagnostics go to stderr.
// Exit codes: 0 success, 2 bad input or failed structural check, 3 unsupported
// capability, 4 mathematical precondition violated.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "corolla/convolution.hpp"
#include "corolla/integration.hpp"
#include "corolla/json_io.hpp"
#include "support/acceptance_criteria.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace corolla;
using nlohmann::json;

namespace {

struct CliConfig {
    int weight_cap = 4;
    int arity_cap = 4;
    int mcn_max_n = 2;
    int poly_degree_bound = 6;
    bool dual_reading = false;  // false: transpose coefficients, true: inverse-coefficient
};

CliConfig load_config(const std::string& explicit_path) {
    CliConfig c;
    std::string path = explicit_path;
    if (path.empty()) {
        const char* env = std::getenv("ABSL_CONFIG");
        if (env) path = env;
    }
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) fail_argument("cannot open config file: " + path);
    json j = json::parse(in);
    c.weight_cap = j.value("weight_cap", c.weight_cap);
    c.arity_cap = j.value("arity_cap", c.arity_cap);
    c.mcn_max_n = j.value("mcn_max_n", c.mcn_max_n);
    c.poly_degree_bound = j.value("poly_degree_bound", c.poly_degree_bound);
    if (j.contains("dual_reading")) {
        std::string r = j.at("dual_reading").get<std::string>();
        if (r == "transpose") c.dual_reading = false;
        else if (r == "inverse-coefficient") c.dual_reading = true;
        else fail_argument("dual_reading must be \"transpose\" or \"inverse-coefficient\"");
    }
    if (c.weight_cap < 1 || c.arity_cap < 1 || c.mcn_max_n < 0 || c.poly_degree_bound < 0)
        fail_argument("config caps must be positive");
    return c;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail_argument(std::string("bad JSON: ") + e.what());
    }
    return {};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_argument("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

// an element argument is either inline JSON or a bare basis name
Elem parse_elem_arg(const std::string& text) {
    if (text.empty() || text == "0") return {};
    if (text[0] == '[' || text[0] == '{') return elem_from_json(parse_json_text(text));
    return Elem{{text, Rat(1)}};
}

CurvedLinftyStructure fixture_by_name(const std::string& name, const CliConfig& cfg) {
    if (name == "heisenberg") return fixtures::heisenberg(std::max(cfg.weight_cap, 4));
    if (name == "twist") return fixtures::twist_fixture(cfg.weight_cap);
    if (name == "abelian") return fixtures::abelian_chain(cfg.weight_cap);
    if (name == "curvature") return fixtures::curvature_only(cfg.weight_cap);
    if (name == "upper3") return fixtures::upper_triangular(3);
    if (name == "upper4") return fixtures::upper_triangular(4);
    if (name == "free22") return oracles::free_nilpotent_lie(2, 2).structure;
    if (name == "free23") return oracles::free_nilpotent_lie(2, 3).structure;
    if (name == "free24") return oracles::free_nilpotent_lie(2, 4).structure;
    if (name == "dual-heisenberg") return fixtures::dual_numbers(fixtures::heisenberg());
    if (name == "dual-free23")
        return fixtures::dual_numbers(oracles::free_nilpotent_lie(2, 3).structure);
    fail_argument("unknown fixture: " + name +
                  " (try heisenberg, twist, abelian, curvature, upper3, upper4, free22, "
                  "free23, free24, dual-heisenberg, dual-free23)");
    return {};
}

CurvedLinftyStructure load_structure(const std::string& input, const std::string& fixture,
                                     const CliConfig& cfg) {
    if (!input.empty() && !fixture.empty())
        fail_argument("give either --input or --fixture, not both");
    if (!input.empty()) return structure_from_json(read_json_file(input));
    if (!fixture.empty()) return fixture_by_name(fixture, cfg);
    fail_argument("a structure is required: --input FILE or --fixture NAME");
    return {};
}

std::string int_str(const Int& v) { return v.str(); }

json form_to_json(const PolyForm& f) {
    json terms = json::array();
    for (auto& [m, c] : f.terms)
        terms.push_back({{"pow", m.pow}, {"ext", m.ext}, {"coef", rat_to_json(c)}});
    return {{"n", f.n}, {"terms", terms}};
}

PolyForm form_from_json(const json& j) {
    PolyForm f = PolyForm::zero(j.at("n").get<int>());
    for (auto& t : j.value("terms", json::array())) {
        FormMonomial m{t.at("pow").get<std::vector<int>>(), t.at("ext").get<std::vector<int>>()};
        if (static_cast<int>(m.pow.size()) != f.n) fail_argument("pow length must equal n");
        f.add_term(m, rat_from_json(t.at("coef")));
    }
    return f;
}

json series_to_json(const TreeSeries& s) {
    json out = json::array();
    for (auto& [key, tc] : s.terms)
        out.push_back({{"tree", tree_text(tc.first.shape)},
                       {"labels", tc.first.labels},
                       {"coef", rat_to_json(tc.second)}});
    return out;
}

bool text_mode = false;

void emit(const json& j, const std::string& text) {
    if (text_mode) std::cout << text << "\n";
    else std::cout << j.dump(2) << "\n";
}

// --- verbs -------------------------------------------------------------------

void cmd_trees_enumerate(int arity, int weight) {
    json list = json::array();
    std::string text;
    for (auto& t : enumerate_crt(arity, weight)) {
        list.push_back({{"tree", tree_text(t)},
                        {"aut", int_str(aut_order(t))},
                        {"coeff", int_str(renorm_coeff(t))}});
        text += tree_text(t) + "\n";
    }
    if (!text.empty()) text.pop_back();
    emit({{"arity", arity}, {"weight", weight}, {"trees", list}}, text);
}

void cmd_trees_aut(const std::string& tree) {
    CRT t = parse_tree(tree);
    emit({{"tree", tree_text(t)}, {"aut", int_str(aut_order(t))}}, int_str(aut_order(t)));
}

void cmd_trees_coeff(const std::string& tree) {
    CRT t = parse_tree(tree);
    emit({{"tree", tree_text(t)}, {"coeff", int_str(renorm_coeff(t))}},
         int_str(renorm_coeff(t)));
}

void cmd_dupont_check(int n, const CliConfig& cfg) {
    Dupont D = build_contraction(n);
    bool pi_id = true, side = true, hh = true, ph = true, hi = true;
    for (auto& b : D.cochains.basis) {
        Elem e{{b.name, Rat(1)}};
        if (!elem_sum(D.p(D.i(e)), elem_scale(e, Rat(-1))).empty()) pi_id = false;
        if (!D.h(D.i(e)).is_zero()) hi = false;
    }
    for (auto& u : acceptance::detail::monomial_basis(n, cfg.poly_degree_bound)) {
        PolyForm hu = D.h(u);
        if (!(D.i(D.p(u)) - u - dform(hu) - D.h(dform(u))).is_zero()) side = false;
        if (!D.h(hu).is_zero()) hh = false;
        if (!D.p(hu).empty()) ph = false;
    }
    int held = pi_id + side + hh + ph + hi;
    emit({{"n", n},
          {"poly_degree_bound", cfg.poly_degree_bound},
          {"identities",
           {{"p i = id", pi_id},
            {"i p - id = d h + h d", side},
            {"h h = 0", hh},
            {"p h = 0", ph},
            {"h i = 0", hi}}},
          {"held", held},
          {"total", 5}},
         std::to_string(held) + "/5 identities hold");
    if (held != 5) throw error(errkind::structure, "contraction identities fail");
}

void cmd_dupont_eval(int n, const std::string& map, const std::string& input) {
    Dupont D = build_contraction(n);
    json j = read_json_file(input);
    if (map == "i") {
        PolyForm f = D.i(elem_from_json(j));
        emit(form_to_json(f), form_pretty(f));
    } else if (map == "p") {
        Elem e = D.p(form_from_json(j));
        emit(elem_to_json(e), elem_pretty(e));
    } else if (map == "h") {
        PolyForm f = D.h(form_from_json(j));
        emit(form_to_json(f), form_pretty(f));
    } else if (map == "d") {
        PolyForm f = dform(form_from_json(j));
        emit(form_to_json(f), form_pretty(f));
    } else {
        fail_argument("--map must be one of i, p, h, d");
    }
}

void cmd_mcn_dump(int n, const CliConfig& cfg) {
    if (n > cfg.mcn_max_n) fail_capability("mcn_max_n in the config is " +
                                           std::to_string(cfg.mcn_max_n));
    McnAlgebra M = build_mcn(n, cfg.weight_cap, cfg.dual_reading);
    json d = json::object();
    std::string text;
    for (auto& [gen, s] : M.d_cobar) {
        d[gen] = series_to_json(s);
        text += "d(" + gen + ") = " + series_pretty(s) + "\n";
    }
    if (!text.empty()) text.pop_back();
    emit({{"n", n},
          {"weight_cap", M.weight_cap},
          {"reading", cfg.dual_reading ? "inverse-coefficient" : "transpose"},
          {"d", d}},
         text);
}

void cmd_mcn_check(int n, const CliConfig& cfg) {
    if (n > cfg.mcn_max_n) fail_capability("mcn_max_n in the config is " +
                                           std::to_string(cfg.mcn_max_n));
    McnAlgebra M = build_mcn(n, cfg.weight_cap);
    auto failures = check_mcn_curvature(M);
    json fl = json::array();
    std::string text;
    for (auto& [gen, res] : failures) {
        fl.push_back({{"generator", gen}, {"residual", series_pretty(res)}});
        text += gen + ": " + series_pretty(res) + "\n";
    }
    if (failures.empty()) text = "curvature identity holds for all generators";
    else text.pop_back();
    emit({{"n", n}, {"weight_cap", M.weight_cap}, {"ok", failures.empty()}, {"failures", fl}},
         text);
    if (!failures.empty()) throw error(errkind::structure, "curvature identity fails");
}

void cmd_structure_check(const CurvedLinftyStructure& g) {
    auto issues = check_structure_data(g);
    std::vector<RelationFailure> rels;
    if (issues.empty()) rels = check_curved_linfty(g);
    json ji = json::array();
    for (auto& i : issues) ji.push_back(i.what);
    json jr = json::array();
    for (auto& r : rels)
        jr.push_back({{"n", r.n}, {"args", r.args}, {"residual", elem_to_json(r.residual)}});
    bool ok = issues.empty() && rels.empty();
    std::string text = ok ? "structure data and homotopy relations hold"
                          : std::to_string(issues.size()) + " data issues, " +
                                std::to_string(rels.size()) + " relation failures";
    emit({{"ok", ok}, {"data_issues", ji}, {"relation_failures", jr}}, text);
    if (!ok) throw error(errkind::structure, "structure check failed");
}

void cmd_mc_check(const CurvedLinftyStructure& g, const std::string& alpha_text) {
    Elem alpha = parse_elem_arg(alpha_text);
    Elem res = mc_residual(g, alpha);
    emit({{"ok", res.empty()}, {"residual", elem_to_json(res)}},
         res.empty() ? "Maurer-Cartan" : "residual = " + elem_pretty(res));
}

void cmd_gauge(const CurvedLinftyStructure& g, const std::string& alpha_text,
               const std::string& lambda_text, bool act_only) {
    Elem alpha = parse_elem_arg(alpha_text);
    Elem lambda = parse_elem_arg(lambda_text);
    GaugePath p = gauge_flow(g, alpha, lambda);
    Elem end;
    for (auto& c : p.coeffs)
        for (auto& [nm, v] : c) elem_add(end, nm, v);
    if (act_only) {
        emit(elem_to_json(end), elem_pretty(end));
        return;
    }
    json coeffs = json::array();
    std::string text;
    for (size_t w = 0; w < p.coeffs.size(); ++w) {
        coeffs.push_back(elem_to_json(p.coeffs[w]));
        text += "t^" + std::to_string(w) + ": " + elem_pretty(p.coeffs[w]) + "\n";
    }
    text += "gamma(1) = " + elem_pretty(end);
    emit({{"coefficients", coeffs}, {"endpoint", elem_to_json(end)}}, text);
}

std::vector<McnAlgebra> tower_for(const CurvedLinftyStructure& g, int n, const CliConfig& cfg) {
    if (degree_one_concentrated(g) && n <= 2) return bch_tower(g.space.weight_cap);
    if (n > cfg.mcn_max_n) fail_capability("mcn_max_n in the config is " +
                                           std::to_string(cfg.mcn_max_n));
    std::vector<McnAlgebra> tower;
    for (int m = 0; m <= n; ++m) tower.push_back(build_mcn(m, g.space.weight_cap));
    return tower;
}

void cmd_horn_fill(const CurvedLinftyStructure& g, int n, int k, const std::string& faces_file,
                   const std::string& y_text, const CliConfig& cfg) {
    Horn h;
    h.n = n;
    h.k = k;
    json faces = read_json_file(faces_file);
    for (auto& [gen, val] : faces.items()) h.faces[gen] = elem_from_json(val);
    Elem y = parse_elem_arg(y_text);
    TwistingMorphism filled = horn_fill(tower_for(g, n, cfg), g, h, y);
    std::string text;
    for (auto& [gen, val] : filled.assignment) text += gen + " = " + elem_pretty(val) + "\n";
    if (!text.empty()) text.pop_back();
    emit(twisting_to_json(filled), text);
}

void cmd_bch(const CurvedLinftyStructure& g, const std::string& xs, const std::string& ys) {
    Elem out = bch(g, parse_elem_arg(xs), parse_elem_arg(ys));
    emit(elem_to_json(out), elem_pretty(out));
}

void cmd_pi(const CurvedLinftyStructure& g, const std::string& alpha_text, int n) {
    HomologyResult r = homotopy_group(g, parse_elem_arg(alpha_text), n);
    emit({{"n", n}, {"dimension", r.dimension}},
         "pi_" + std::to_string(n) + " has dimension " + std::to_string(r.dimension));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact integration of curved absolute L-infinity algebras"};
    app.require_subcommand(1);
    std::string format = "json", config_path;
    app.add_option("--format", format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--config", config_path, "JSON config file (also via ABSL_CONFIG)");

    // trees
    auto* trees = app.add_subcommand("trees", "corked rooted trees");
    trees->require_subcommand(1);
    int arity = 2, weight = 0;
    auto* t_en = trees->add_subcommand("enumerate", "list the trees of one cell");
    t_en->add_option("--arity", arity)->required();
    t_en->add_option("--weight", weight)->required();
    std::string tree_text_arg;
    auto* t_aut = trees->add_subcommand("aut", "automorphism order of a tree");
    t_aut->add_option("--tree", tree_text_arg)->required();
    auto* t_co = trees->add_subcommand("coeff", "renormalization coefficient of a tree");
    t_co->add_option("--tree", tree_text_arg)->required();

    // dupont
    auto* dupont = app.add_subcommand("dupont", "the simplicial contraction");
    dupont->require_subcommand(1);
    int dn = 1;
    auto* d_check = dupont->add_subcommand("check", "verify the contraction identities");
    d_check->add_option("--n", dn)->required();
    std::string d_map, d_input;
    auto* d_eval = dupont->add_subcommand("eval", "apply i, p, h or d to a JSON input");
    d_eval->add_option("--n", dn)->required();
    d_eval->add_option("--map", d_map, "one of i, p, h, d")->required();
    d_eval->add_option("--input", d_input, "JSON file with the argument")->required();

    // mcn
    auto* mcn = app.add_subcommand("mcn", "the Maurer-Cartan algebras");
    mcn->require_subcommand(1);
    int mn = 1;
    auto* m_dump = mcn->add_subcommand("dump", "print the pre-differential table");
    m_dump->add_option("--n", mn)->required();
    auto* m_check = mcn->add_subcommand("check", "verify d^2 = l_2(l_0, -)");
    m_check->add_option("--n", mn)->required();

    // structure-consuming verbs share --input/--fixture
    std::string input, fixture, alpha_text, lambda_text = "0", y_text = "0", faces_file;
    auto add_struct_opts = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "structure JSON file");
        cmd->add_option("--fixture", fixture, "built-in structure by name");
    };

    auto* structure = app.add_subcommand("structure", "curved structures");
    auto* s_check = structure->add_subcommand("check", "validate data and homotopy relations");
    structure->require_subcommand(1);
    add_struct_opts(s_check);

    auto* mc = app.add_subcommand("mc", "Maurer-Cartan elements");
    mc->require_subcommand(1);
    auto* mc_c = mc->add_subcommand("check", "residual of a candidate element");
    add_struct_opts(mc_c);
    mc_c->add_option("--element", alpha_text, "candidate element")->required();

    auto* gauge = app.add_subcommand("gauge", "gauge flows");
    gauge->require_subcommand(1);
    auto* g_flow = gauge->add_subcommand("flow", "polynomial solution of the flow ODE");
    auto* g_act = gauge->add_subcommand("act", "endpoint gamma(1) of the flow");
    for (auto* c : {g_flow, g_act}) {
        add_struct_opts(c);
        c->add_option("--alpha", alpha_text, "Maurer-Cartan source")->required();
        c->add_option("--lambda", lambda_text, "degree-1 gauge generator")->required();
    }

    auto* horn = app.add_subcommand("horn", "canonical horn fillers");
    horn->require_subcommand(1);
    int hn = 2, hk = 1;
    auto* h_fill = horn->add_subcommand("fill", "fill an (n,k)-horn");
    add_struct_opts(h_fill);
    h_fill->add_option("--n", hn)->required();
    h_fill->add_option("--k", hk)->required();
    h_fill->add_option("--faces", faces_file, "JSON file {generator: element}")->required();
    h_fill->add_option("--y", y_text, "top cell value (default 0)");

    auto* bch_cmd = app.add_subcommand("bch", "Baker-Campbell-Hausdorff product");
    add_struct_opts(bch_cmd);
    std::vector<std::string> bch_args;
    bch_cmd->add_option("elements", bch_args, "the two elements")->expected(2);

    auto* pi_cmd = app.add_subcommand("pi", "homotopy groups via twisted homology");
    add_struct_opts(pi_cmd);
    int pin = 1;
    pi_cmd->add_option("--alpha", alpha_text, "Maurer-Cartan basepoint (default 0)");
    pi_cmd->add_option("--n", pin)->required();

    auto* accept = app.add_subcommand("accept", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);
    text_mode = format == "text";

    try {
        CliConfig cfg = load_config(config_path);
        if (t_en->parsed()) cmd_trees_enumerate(arity, weight);
        else if (t_aut->parsed()) cmd_trees_aut(tree_text_arg);
        else if (t_co->parsed()) cmd_trees_coeff(tree_text_arg);
        else if (d_check->parsed()) cmd_dupont_check(dn, cfg);
        else if (d_eval->parsed()) cmd_dupont_eval(dn, d_map, d_input);
        else if (m_dump->parsed()) cmd_mcn_dump(mn, cfg);
        else if (m_check->parsed()) cmd_mcn_check(mn, cfg);
        else if (s_check->parsed()) cmd_structure_check(load_structure(input, fixture, cfg));
        else if (mc_c->parsed()) cmd_mc_check(load_structure(input, fixture, cfg), alpha_text);
        else if (g_flow->parsed())
            cmd_gauge(load_structure(input, fixture, cfg), alpha_text, lambda_text, false);
        else if (g_act->parsed())
            cmd_gauge(load_structure(input, fixture, cfg), alpha_text, lambda_text, true);
        else if (h_fill->parsed())
            cmd_horn_fill(load_structure(input, fixture, cfg), hn, hk, faces_file, y_text, cfg);
        else if (bch_cmd->parsed())
            cmd_bch(load_structure(input, fixture, cfg), bch_args.at(0), bch_args.at(1));
        else if (pi_cmd->parsed())
            cmd_pi(load_structure(input, fixture, cfg), alpha_text, pin);
        else if (accept->parsed())
            return acceptance::run_all(std::cout) ? 1 : 0;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind) {
            case errkind::capability: return 3;
            case errkind::precondition: return 4;
            default: return 2;
        }
    } catch (const json::exception& e) {
        std::cerr << "error: bad JSON: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
