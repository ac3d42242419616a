#include "dbc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

namespace dbc {

namespace {

using nlohmann::json;

const json& field(const json& p, const char* key) {
    if (!p.is_object() || !p.contains(key)) throw SchemaError(std::string("payload is missing \"") + key + "\"");
    return p.at(key);
}

// g<i><j> (1-based entry) or minor<k> (leading principal minor)
Observable observable_from_name(const std::string& name, int n) {
    std::smatch m;
    static const std::regex entry("g([1-9])([1-9])"), minor("minor([1-9])");
    if (std::regex_match(name, m, entry)) {
        const int i = std::stoi(m[1]) - 1, j = std::stoi(m[2]) - 1;
        if (i >= n || j >= n) throw SchemaError("observable " + name + " is out of range for n = " + std::to_string(n));
        return [i, j](const JMatrix& g) { return g(i, j); };
    }
    if (std::regex_match(name, m, minor)) {
        const int k = std::stoi(m[1]);
        if (k >= n) throw SchemaError("observable " + name + " is out of range for n = " + std::to_string(n));
        return [k](const JMatrix& g) { return leading_minor(g, static_cast<std::size_t>(k)); };
    }
    throw SchemaError("unknown observable \"" + name + "\" (expected gij or minork)");
}

CMatrix sl_matrix(const json& j) {
    const CMatrix g = matrix_from_json(j);
    if (g.rows() != g.cols() || g.rows() < 2) throw SchemaError("a square matrix of size at least 2 is required");
    return g;
}

// {"g": matrix} or a sample of G^{u,v} from {"u", "v"}
CellPoint point_from(const json& p, const RunConfig& cfg, const char* key = "g") {
    if (p.is_object() && p.contains(key)) return CellPoint::make(sl_matrix(p.at(key)), cfg.tol);
    if (p.is_object() && p.contains("u") && p.contains("v")) {
        const WeylElement u = weyl_from_json(p.at("u")), v = weyl_from_json(p.at("v"));
        if (u.n() != v.n()) throw SchemaError("u and v act on different n");
        return sample_double_cell(u, v, cfg.seed, cfg.tol);
    }
    throw SchemaError(std::string("payload needs \"") + key + "\" or both \"u\" and \"v\"");
}

GroupoidElement groupoid_element(const json& j, const Tolerance& tol) {
    const CellPoint p = CellPoint::make(sl_matrix(j), tol);
    if (!(p.u == p.v)) throw SchemaError("groupoid elements must lie in a cell G^{v,v}; got u = " + p.u.str() + ", v = " + p.v.str());
    return GroupoidElement::from_point(p, tol);
}

double flag_gap(const FlagPoint& a, const FlagPoint& b) {
    if (!(a.cell == b.cell)) return INFINITY;
    return rel_dev(flag_matrix(a.coords, a.cell, a.rep), flag_matrix(b.coords, b.cell, b.rep));
}

json torus_json(const TorusElement& t) {
    json d = json::array();
    for (cplx z : t.diag()) d.push_back(complex_to_json(z));
    return d;
}

json verb_factor(const json& p, const RunConfig& cfg) {
    const CellPoint x = CellPoint::make(sl_matrix(field(p, "g")), cfg.tol);
    return {{"input", {{"g", to_json(x.g)}}},
            {"u", to_json(x.u)},
            {"v", to_json(x.v)},
            {"c", to_json(x.c())},
            {"b", to_json(x.b())},
            {"b_minus", to_json(x.b_minus())},
            {"c_prime", to_json(x.c_prime())},
            {"flag", to_json(flag_in_cell(x.g, x.u, cfg.tol))},
            {"residuals", {{"left", rel_dev(x.c() * x.b(), x.g)}, {"right", rel_dev(x.b_minus() * x.c_prime(), x.g)}}}};
}

json verb_bracket(const json& p, const RunConfig&) {
    const CMatrix g = sl_matrix(field(p, "g"));
    const int n = static_cast<int>(g.rows());
    const std::string n1 = field(p, "f1").get<std::string>(), n2 = field(p, "f2").get<std::string>();
    const Observable f1 = observable_from_name(n1, n), f2 = observable_from_name(n2, n);
    const cplx v12 = bracket_eval(f1, f2, g), v21 = bracket_eval(f2, f1, g);
    return {{"input", {{"g", to_json(g)}, {"f1", n1}, {"f2", n2}}},
            {"value", complex_to_json(v12)},
            {"residuals", {{"antisymmetry", std::abs(v12 + v21)}, {"det", std::abs(determinant(g) - 1.0)}}}};
}

json verb_mul(const json& p, const RunConfig& cfg) {
    const std::string op = p.is_object() && p.contains("op") ? p.at("op").get<std::string>() : "mul";
    const Tolerance& tol = cfg.tol;
    if (op == "mul") {
        const GroupoidElement g = groupoid_element(field(p, "g"), tol), h = groupoid_element(field(p, "h"), tol);
        const GroupoidElement gh = gpd_mul(g, h, tol);
        return {{"input", {{"op", op}, {"g", to_json(g.g())}, {"h", to_json(h.g())}}},
                {"result", to_json(gh)},
                {"residuals", {{"source", flag_gap(gh.source, g.source)}, {"target", flag_gap(gh.target, h.target)}}}};
    }
    if (op == "inverse") {
        const GroupoidElement g = groupoid_element(field(p, "g"), tol);
        const GroupoidMaps m = gpd_maps(g, tol);
        const GroupoidElement unit = gpd_mul(g, m.inverse, tol);
        return {{"input", {{"op", op}, {"g", to_json(g.g())}}},
                {"result", to_json(m.inverse)},
                {"residuals", {{"unit", rel_dev(unit.g(), m.identity_at.g())},
                               {"swap", std::max(flag_gap(m.inverse.source, g.target), flag_gap(m.inverse.target, g.source))}}}};
    }
    if (op == "act_left") {
        const GroupoidElement g = groupoid_element(field(p, "g"), tol);
        const CellPoint x = CellPoint::make(sl_matrix(field(p, "x")), tol);
        const CellPoint y = act_left(g, x, tol);
        return {{"input", {{"op", op}, {"g", to_json(g.g())}, {"x", to_json(x.g)}}},
                {"result", to_json(y)},
                {"residuals", {{"moment", flag_gap(moment_left(y, tol), g.source)}}}};
    }
    if (op == "act_right") {
        const CellPoint x = CellPoint::make(sl_matrix(field(p, "x")), tol);
        const GroupoidElement h = groupoid_element(field(p, "h"), tol);
        const CellPoint y = act_right(x, h, tol);
        return {{"input", {{"op", op}, {"x", to_json(x.g)}, {"h", to_json(h.g())}}},
                {"result", to_json(y)},
                {"residuals", {{"moment", flag_gap(moment_right(y, tol), h.target)}}}};
    }
    throw SchemaError("unknown op \"" + op + "\" (expected mul, inverse, act_left or act_right)");
}

json verb_twist(const json& p, const RunConfig& cfg) {
    const CellPoint x = point_from(p, cfg);
    const CellPoint y = twist(x, cfg.tol);
    const CellPoint back = twist(y, cfg.tol);
    return {{"input", to_json(x)},
            {"result", to_json(y)},
            {"residuals", {{"formula", twist_formula_defect(x)}, {"round_trip", rel_dev(back.g, x.g)}}}};
}

json verb_leaf(const json& p, const RunConfig& cfg) {
    if (p.is_object() && !p.contains("g") && p.contains("u") && p.contains("v")) {
        const WeylElement u = weyl_from_json(p.at("u")), v = weyl_from_json(p.at("v"));
        if (u.n() != v.n()) throw SchemaError("u and v act on different n");
        return leaf_report(u, v, cfg.seed, cfg.samples, cfg.tol);
    }
    const CellPoint x = CellPoint::make(sl_matrix(field(p, "g")), cfg.tol);
    const LeafInvariant inv = leaf_invariant(x);
    json minors = json::object();
    for (const auto& [k, z] : inv.minors) minors[std::to_string(k)] = complex_to_json(z);
    json fixed = json::array();
    for (int k : fixed_pair(x.u, x.v)) fixed.push_back(k);
    return {{"input", {{"g", to_json(x.g)}}},
            {"u", to_json(x.u)},
            {"v", to_json(x.v)},
            {"I_uv", fixed},
            {"chi", torus_json(inv.chi_rep)},
            {"minors", minors},
            {"leaf_rank", leaf_rank(x, cfg.tol)},
            {"leaf_dimension", leaf_dimension(x.u, x.v)},
            {"residuals", {{"square_identity", square_identity_defect(x)}}}};
}

std::string timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

json cmd_compute(const std::string& verb, const json& payload, const RunConfig& cfg) {
    if (verb == "factor") return verb_factor(payload, cfg);
    if (verb == "bracket") return verb_bracket(payload, cfg);
    if (verb == "mul") return verb_mul(payload, cfg);
    if (verb == "twist") return verb_twist(payload, cfg);
    if (verb == "leaf") return verb_leaf(payload, cfg);
    throw SchemaError("unknown verb \"" + verb + "\"");
}

json error_json(const std::string& kind, const std::string& message, int code) {
    return {{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
}

int run_cli(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Poisson groupoids on double Bruhat cells of SL(n)"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::vector<std::string> suites;
    std::optional<double> tol_flag;
    std::string out_path, payload_text, in_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--samples", cfg.samples, "samples per check");
        sub->add_option("--tol", tol_flag, "equality tolerance (overrides DBC_TOL)");
        sub->add_option("--out", out_path, "write JSON here instead of stdout");
    };
    for (const char* verb : {"factor", "bracket", "mul", "twist", "leaf"}) {
        CLI::App* sub = app.add_subcommand(verb);
        add_common(sub);
        sub->add_option("--payload", payload_text, "JSON payload (default: read --in or stdin)");
        sub->add_option("--in", in_path, "file holding the JSON payload");
    }
    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    add_common(verify);
    verify->add_option("--n", cfg.n, "matrix size");
    verify->add_option("--suite", suites, "suite to run (repeatable): all, " + [] {
        std::string s;
        for (const auto& n : suite_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());

    auto emit = [&](const json& j) {
        const std::string text = j.dump(2) + "\n";
        if (out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(out_path);
        if (!f) throw SchemaError("cannot write " + out_path);
        f << text;
    };
    auto fail = [&](const std::string& kind, const std::string& msg, int code) {
        // errors go to the stream even with --out, so a caller never reads a stale file
        out << error_json(kind, msg, code).dump(2) << "\n";
        return code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        return fail("UsageError", e.what(), kExitUsage);
    }

    try {
        if (const char* env = std::getenv("DBC_TOL"); env && *env) {
            char* end = nullptr;
            const double t = std::strtod(env, &end);
            if (*end != '\0') throw SchemaError(std::string("DBC_TOL is not a number: ") + env);
            cfg.tol.eq = t;
        }
        if (tol_flag) cfg.tol.eq = *tol_flag;
        if (!suites.empty()) cfg.suites = suites;
        cfg.validate();

        CLI::App* sub = app.get_subcommands().front();
        if (sub == verify) {
            json report = verify_report(cfg);
            report["generated_at"] = timestamp();
            emit(report);
            return report_passed(report) ? kExitPass : kExitFail;
        }

        std::string text = payload_text;
        if (text.empty()) {
            std::stringstream ss;
            if (!in_path.empty()) {
                std::ifstream f(in_path);
                if (!f) throw SchemaError("cannot read " + in_path);
                ss << f.rdbuf();
            } else {
                ss << std::cin.rdbuf();
            }
            text = ss.str();
        }
        emit(cmd_compute(sub->get_name(), json::parse(text), cfg));
        return kExitPass;
    } catch (const SchemaError& e) {
        return fail(e.kind(), e.what(), kExitUsage);
    } catch (const json::exception& e) {
        return fail("SchemaError", e.what(), kExitUsage);
    } catch (const Error& e) {
        return fail(e.kind(), e.what(), kExitDomain);
    }
}

}  // namespace dbc
