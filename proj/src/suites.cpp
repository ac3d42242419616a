#include "dbc/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dbc {

namespace {

// FNV-1a over the tag, mixed with the run seed and an index
std::uint64_t sub_seed(std::uint64_t seed, const std::string& tag, std::uint64_t k = 0) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (unsigned char c : tag) h = (h ^ c) * 1099511628211ull;
    h = (h ^ k) * 1099511628211ull;
    return h ? h : 1;
}

double flag_gap(const FlagPoint& a, const FlagPoint& b) {
    if (a.cell != b.cell || a.coords.size() != b.coords.size()) return INFINITY;
    double d = 0;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
        d = std::max(d, std::abs(a.coords[i] - b.coords[i]) / std::max(1.0, std::abs(b.coords[i])));
    return d;
}

double action_gap(const ActionGroupoidElement& a, const ActionGroupoidElement& b) {
    return std::max(flag_gap(a.flag, b.flag), rel_dev(a.b_minus, b.b_minus));
}

// protects a sample loop: a domain error in a sample marks the check invalid
template <class F>
void guarded(CheckReport& r, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        r.invalid = true;
        ++r.samples;
        if (r.note.empty()) r.note = std::string(e.kind()) + ": " + e.what();
    }
}

// like guarded, but a draw that lands too close to a smaller cell to classify
// is redrawn (at most twice); redraws are counted in the note
template <class F>
void guarded_redraw(CheckReport& r, int& redraws, F&& f) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        try {
            f(attempt);
            return;
        } catch (const RankAmbiguityError& e) {
            if (attempt == 2) {
                r.invalid = true;
                ++r.samples;
                r.note = std::string(e.kind()) + ": " + e.what();
                return;
            }
            r.note = std::to_string(++redraws) + " draw(s) near a smaller cell redrawn";
        } catch (const Error& e) {
            r.invalid = true;
            ++r.samples;
            r.note = std::string(e.kind()) + ": " + e.what();
            return;
        }
    }
}

struct Ctx {
    int n;
    std::uint64_t seed;
    int samples;
    Tolerance tol;
    std::vector<CheckReport> out;

    // triples for the axiom checks: at least 50 below n = 4
    int triples() const { return n <= 3 ? std::max(samples, 50) : samples; }
    // expensive conormal and second-order checks
    int few() const { return std::max(1, std::min(samples, n <= 3 ? 5 : 2)); }

    CheckReport& add(const std::string& id, const std::string& st, double tol_, const std::string& u = {},
                     const std::string& v = {}) {
        out.push_back(make_check(id, st, n, tol_, u, v));
        return out.back();
    }
};

std::vector<GroupoidElement> chain(const WeylElement& v, const WeylRep& vb, std::uint64_t seed, int len,
                                   const Tolerance& tol) {
    Rng rng(seed);
    std::vector<GroupoidElement> r{GroupoidElement::from_point(sample_double_cell(v, v, vb, vb, seed, tol), tol)};
    while (static_cast<int>(r.size()) < len) r.push_back(sample_with_source(r.back().target, vb, rng, tol));
    return r;
}

// ---------------------------------------------------------------- factorize

void suite_factorize(Ctx& c) {
    const double eq = c.tol.eq;
    CheckReport& ldu = c.add("factorize.ldu", "g = L D U with L, U unipotent on the big cell", eq);
    Rng rng(sub_seed(c.seed, "ldu"));
    for (int s = 0; s < c.samples; ++s)
        guarded(ldu, [&] {
            const CMatrix g = random_lower(c.n, rng) * random_upper(c.n, rng);
            const LDU<cplx> f = gaussian_decompose(g, c.tol.rank);
            ldu.add(rel_dev(f.lower * f.diag_matrix() * f.upper, g));
        });

    for (const auto& [u, v] : suite_pairs(c.n, c.seed)) {
        const std::string us = u.str(), vs = v.str();
        const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
        CheckReport cls = make_check("factorize.classify", "sampled points classify back into their double Bruhat cell", c.n, 0.0, us, vs);
        CheckReport left = make_check("factorize.left", "g = c b with c in C_ū and b in B", c.n, eq, us, vs);
        CheckReport right = make_check("factorize.right", "g = b_- c' with b_- in B_- and c' in C_v̄", c.n, eq, us, vs);
        CheckReport flag = make_check("factorize.flag_chart", "the chart representative of g·B differs from g by an element of B", c.n, eq, us, vs);
        for (int s = 0; s < c.samples; ++s) {
            const std::uint64_t sd = sub_seed(c.seed, "factorize" + us + vs, s);
            guarded(cls, [&] {
                const CellPoint p = sample_double_cell(u, v, ub, vb, sd, c.tol);
                const auto [cu, cv] = bruhat_cell_of(p.g, c.tol);
                cls.add(cu == u && cv == v ? 0.0 : 1.0);
                left.add(rel_dev(p.c() * p.b(), p.g));
                right.add(rel_dev(p.b_minus() * p.c_prime(), p.g));
                const FlagPoint f = flag_canonical(p.g, c.tol);
                const CMatrix x = inverse(f.matrix()) * p.g;
                double low = 0;
                for (int i = 0; i < c.n; ++i)
                    for (int j = 0; j < i; ++j) low = std::max(low, std::abs(x(i, j)));
                flag.add(low / std::max(1.0, max_abs(x)));
            });
        }
        for (auto* r : {&cls, &left, &right, &flag}) c.out.push_back(*r);
    }
}

// ---------------------------------------------------------------- poisson

void suite_poisson(Ctx& c) {
    const double eq = c.tol.eq, map_tol = 10 * eq;
    const int n = c.n;
    Rng rng(sub_seed(c.seed, "poisson"));
    {
        CheckReport& r = c.add("poisson.multiplicativity", "π(gh) = l_g π(h) + r_h π(g)", eq);
        for (int s = 0; s < std::max(c.samples, 100); ++s) r.add(multiplicativity_defect(random_sl(n, rng), random_sl(n, rng)));
    }
    {
        CheckReport& r = c.add("poisson.ad_invariance", "the symmetric part of the r-matrix is Ad-invariant", eq / 10);
        for (int s = 0; s < c.samples; ++s) r.add(ad_invariance_defect(random_sl(n, rng)));
    }
    {
        CheckReport& r = c.add("poisson.jacobi", "Jacobi identity on all triples of coordinate functions", 100 * eq);
        // one point from n = 5: a second-order pass costs ~17 s there
        const int pts = n >= 5 ? 1 : c.few();
        for (int s = 0; s < pts; ++s) r.add(jacobi_defect(random_sl(n, rng), RMatrix::standard(n)));
    }
    {
        CheckReport r = make_check("poisson.dressing", "dressing fields have the triangular support of their formulas and equal π^#(ξ^R)", n, eq);
        CheckReport span = make_check("poisson.dressing_span", "dressing fields span the image of π^#", n, 0.0);
        for (int s = 0; s < c.samples; ++s) {
            const DressingReport d = dressing_report(random_sl(n, rng), c.tol);
            r.add(std::max({d.support_defect, d.formula_defect, d.sharp_defect}));
            span.add(std::abs(d.span_rank - d.pist_rank));
        }
        c.out.push_back(r);
        c.out.push_back(span);
    }

    for (const auto& v : suite_cells(n, c.seed)) {
        const std::string vs = v.str();
        const WeylRep vb = weyl_representative(v);
        CheckReport& co = c.add("poisson.coisotropy_C", "C_v̄ is coisotropic", eq, {}, vs);
        for (int s = 0; s < c.samples; ++s) co.add(coisotropy_defect(random_C(v, vb, rng), v, vb));

        CheckReport iv = make_check("poisson.embedding_I", "b_- c ↦ (b_- c·B, b_-) is Poisson into the mixed structure", n, map_tol, {}, vs);
        CheckReport qv = make_check("poisson.projection_q", "b_- c ↦ b_- is Poisson onto B_-", n, map_tol, {}, vs);
        CheckReport phi = make_check("poisson.Phi", "B_- c ↦ c·B is anti-Poisson", n, map_tol, {}, vs);
        const WeylElement w0 = WeylElement::longest(n);
        for (int s = 0; s < c.samples; ++s) {
            guarded(iv, [&] {
                const CMatrix g = sample_double_cell(w0, v, sub_seed(c.seed, "Iv" + vs, s), c.tol).g;
                const FlagPoint fp = flag_canonical(g, c.tol);
                const CMatrix bm = right_factor(g, vb.matrix, inverse(vb.matrix)).first;
                const CMatrix J = frame_jacobian(
                    [&](const JMatrix& x) {
                        auto a = flag_coords(x, fp.cell, fp.rep);
                        const auto y = bminus_coords(right_factor(x, vb.matrix, inverse(vb.matrix)).first);
                        a.insert(a.end(), y.begin(), y.end());
                        return a;
                    },
                    g);
                iv.add(pushforward_deviation(J, pist_eval(g).mat, mixed_pi_eval(fp, bm).mat, 1.0));
            });
            const CMatrix g = random_lower(n, rng) * random_C(v, vb, rng);
            guarded(qv, [&] {
                const CMatrix J = frame_jacobian(
                    [&](const JMatrix& x) { return bminus_coords(right_factor(x, vb.matrix, inverse(vb.matrix)).first); }, g);
                const CMatrix bm = right_factor(g, vb.matrix, inverse(vb.matrix)).first;
                qv.add(pushforward_deviation(J, pist_eval(g).mat, pist_bminus_eval(bm).mat, 1.0));
            });
            guarded(phi, [&] {
                // in the charts B_-\B_- C_v̄ ≅ C_v̄ ≅ BvB/B the map is the identity
                const FlagPoint fp{v, coflag_coords(g, v, vb), vb};
                const std::size_t d = fp.coords.size();
                phi.add(pushforward_deviation(CMatrix::identity(d), pi1_eval(fp, Side::Right).mat,
                                              pi1_eval(fp, Side::Left).mat, -1.0));
            });
        }
        for (auto* r : {&iv, &qv, &phi}) c.out.push_back(*r);
    }

    for (const auto& [u, v] : suite_pairs(n, c.seed)) {
        const std::string us = u.str(), vs = v.str();
        const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
        CheckReport tan = make_check("poisson.cell_tangency", "π^# maps into the tangent space of G^{u,v}", n, eq, us, vs);
        CheckReport wp = make_check("poisson.weak_pair", "(ϖ, ϖ_-) is Poisson into π_1 × π_-1", n, map_tol, us, vs);
        CheckReport tw = make_check("poisson.twist", "the twist G^{u,v} → G^{v,u} is anti-Poisson", n, map_tol, us, vs);
        for (int s = 0; s < c.samples; ++s)
            guarded(tan, [&] {
                const CellPoint p = sample_double_cell(u, v, ub, vb, sub_seed(c.seed, "cells" + us + vs, s), c.tol);
                tan.add(cell_tangency_defect(p));
                wp.add(weak_pair_defect(p));
                tw.add(twist_push_defect(p));
            });
        for (auto* r : {&tan, &wp, &tw}) c.out.push_back(*r);
    }
}

// ---------------------------------------------------------------- groupoid

void suite_groupoid(Ctx& c) {
    const double eq = c.tol.eq, map_tol = 10 * eq;
    const int n = c.n;
    for (const auto& v : suite_cells(n, c.seed)) {
        const std::string vs = v.str();
        const WeylRep vb = weyl_representative(v), vt = weyl_representative(v, sub_seed(c.seed, "rep" + vs));
        CheckReport as = make_check("groupoid.associativity", "μ(μ(g,h),k) = μ(g,μ(h,k))", n, eq, vs, vs);
        CheckReport st = make_check("groupoid.source_target", "θ(μ(g,h)) = θ(g) and τ(μ(g,h)) = τ(h)", n, eq, vs, vs);
        CheckReport id = make_check("groupoid.identity", "μ(ε(θ(g)),g) = g = μ(g,ε(τ(g)))", n, eq, vs, vs);
        CheckReport iv = make_check("groupoid.inverse", "μ(g,ι(g)) = ε(θ(g)), μ(ι(g),g) = ε(τ(g)), ι(ι(g)) = g", n, eq, vs, vs);
        CheckReport ri = make_check("groupoid.representative", "left translation by t intertwines the groupoids of v̄ and t·v̄", n, eq, vs, vs);
        CheckReport emb = make_check("groupoid.embedding", "I_v̄ intertwines μ and ι with the action groupoid", n, eq, vs, vs);
        CheckReport push = make_check("groupoid.structure_push", "θ pushes π to π_1, τ to −π_1, ι is anti-Poisson", n, map_tol, vs, vs);
        CheckReport graph = make_check("groupoid.graph", "the graph of μ is coisotropic in G × G × Ḡ", n, map_tol, vs, vs);
        const CMatrix t = vt.torus_twist.matrix();
        for (int s = 0; s < c.triples(); ++s)
            guarded(as, [&] {
                const auto ch = chain(v, vb, sub_seed(c.seed, "chain" + vs, s), 3, c.tol);
                const auto &g = ch[0], &h = ch[1], &k = ch[2];
                const GroupoidElement gh = gpd_mul(g, h, c.tol);
                as.add(rel_dev(gpd_mul(gh, k, c.tol).g(), gpd_mul(g, gpd_mul(h, k, c.tol), c.tol).g()));
                st.add(std::max(flag_gap(gh.source, g.source), flag_gap(gh.target, h.target)));
                const GroupoidElement es = gpd_identity(g.source, vb, c.tol), et = gpd_identity(g.target, vb, c.tol);
                id.add(std::max(rel_dev(gpd_mul(es, g, c.tol).g(), g.g()), rel_dev(gpd_mul(g, et, c.tol).g(), g.g())));
                const GroupoidElement gi = gpd_inverse(g, c.tol);
                iv.add(std::max({rel_dev(gpd_mul(g, gi, c.tol).g(), es.g()), rel_dev(gpd_mul(gi, g, c.tol).g(), et.g()),
                                 rel_dev(gpd_inverse(gi, c.tol).g(), g.g())}));
                const GroupoidElement g2 = GroupoidElement::make(t * g.g(), vt, c.tol);
                const GroupoidElement h2 = GroupoidElement::make(t * h.g(), vt, c.tol);
                ri.add(std::max(rel_dev(gpd_mul(g2, h2, c.tol).g(), t * gh.g()),
                                rel_dev(gpd_inverse(g2, c.tol).g(), t * gi.g())));
                const ActionGroupoidElement ig = embed_Iv(g.point, c.tol), ih = embed_Iv(h.point, c.tol);
                emb.add(std::max(action_gap(embed_Iv(gh.point, c.tol), action_gpd_mul(ig, ih, c.tol)),
                                 action_gap(embed_Iv(gi.point, c.tol), action_gpd(ig, c.tol).inverse)));
            });
        for (int s = 0; s < c.samples; ++s)
            guarded(push, [&] {
                const auto e = GroupoidElement::from_point(
                    sample_double_cell(v, v, s % 2 ? vt : vb, s % 2 ? vt : vb, sub_seed(c.seed, "push" + vs, s), c.tol), c.tol);
                push.add(std::max({source_push_defect(e), target_push_defect(e), inverse_push_defect(e)}));
            });
        if (n <= 3)
            for (int s = 0; s < c.few(); ++s)
                guarded(graph, [&] {
                    const auto ch = chain(v, vb, sub_seed(c.seed, "graph" + vs, s), 2, c.tol);
                    graph.add(mul_graph_defect(ch[0], ch[1]));
                });
        for (auto* r : {&as, &st, &id, &iv, &ri, &emb, &push})
            c.out.push_back(*r);
        if (n <= 3) c.out.push_back(graph);
    }

    {
        Rng rng(sub_seed(c.seed, "action groupoid"));
        CheckReport as = make_check("groupoid.action.associativity", "associativity of (G/B) × B_-", n, eq);
        CheckReport iv = make_check("groupoid.action.inverse", "a·ι(a) = (θ(a), e) and ι(a)·a = (τ(a), e) in (G/B) × B_-", n, eq);
        CheckReport li = make_check("groupoid.action.left_invariance", "π^#(τ^*α) is left invariant", n, map_tol);
        CheckReport gr = make_check("groupoid.action.graph", "the graph of μ on (G/B) × B_- is coisotropic for the mixed structure", n, map_tol);
        const CMatrix I = CMatrix::identity(n);
        for (int s = 0; s < c.triples(); ++s)
            guarded(as, [&] {
                const ActionGroupoidElement a{flag_canonical(random_sl(n, rng), c.tol), random_lower(n, rng)};
                const ActionGroupoidElement b{action_target(a, c.tol), random_lower(n, rng)};
                const ActionGroupoidElement d{action_target(b, c.tol), random_lower(n, rng)};
                as.add(action_gap(action_gpd_mul(action_gpd_mul(a, b, c.tol), d, c.tol),
                                  action_gpd_mul(a, action_gpd_mul(b, d, c.tol), c.tol)));
                const ActionMaps m = action_gpd(a, c.tol);
                iv.add(std::max(action_gap(action_gpd_mul(a, m.inverse, c.tol), {m.theta, I}),
                                action_gap(action_gpd_mul(m.inverse, a, c.tol), {m.tau, I})));
                if (s < c.few()) {
                    std::vector<cplx> alpha(action_target(b, c.tol).coords.size());
                    for (auto& z : alpha) z = rng.annulus(0.5, 1.5);
                    li.add(left_invariance_defect(a, b, alpha, c.tol));
                    if (n <= 3) gr.add(action_mul_graph_defect(a, b));
                }
            });
        for (auto* r : {&as, &iv, &li}) c.out.push_back(*r);
        if (n <= 3) c.out.push_back(gr);
    }

    for (const auto& [u, v] : suite_pairs(n, c.seed)) {
        const std::string us = u.str(), vs = v.str();
        const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
        CheckReport cm = make_check("groupoid.actions.commute", "(g▷x)◁h = g▷(x◁h)", n, eq, us, vs);
        CheckReport un = make_check("groupoid.actions.unit", "identities act trivially on both sides", n, eq, us, vs);
        CheckReport cp = make_check("groupoid.actions.compose", "g2▷(g1▷x) = μ(g2,g1)▷x and the moments move as the groupoid maps", n, eq, us, vs);
        CheckReport tw = make_check("groupoid.twist", "the twist is an involution G^{u,v} → G^{v,u} agreeing with its closed formula", n, eq, us, vs);
        CheckReport gr = make_check("groupoid.actions.graph", "the graphs of both actions are coisotropic", n, map_tol, us, vs);
        int redraws = 0;
        for (int s = 0; s < c.triples(); ++s)
            guarded_redraw(cm, redraws, [&](std::uint64_t attempt) {
                const std::uint64_t sd = sub_seed(c.seed, "actions" + us + vs + std::to_string(attempt), s);
                Rng rng(sd);
                const CellPoint x = sample_double_cell(u, v, ub, vb, sd, c.tol);
                const GroupoidElement g = gpd_inverse(sample_with_source(moment_left(x, c.tol), ub, rng, c.tol), c.tol);
                const GroupoidElement h = sample_with_source(moment_right(x, c.tol), vb, rng, c.tol);
                const CellPoint gx = act_left(g, x, c.tol), xh = act_right(x, h, c.tol);
                cm.add(rel_dev(act_right(gx, h, c.tol).g, act_left(g, xh, c.tol).g));
                un.add(std::max(rel_dev(act_left(gpd_identity(moment_left(x, c.tol), ub, c.tol), x, c.tol).g, x.g),
                                rel_dev(act_right(x, gpd_identity(moment_right(x, c.tol), vb, c.tol), c.tol).g, x.g)));
                const GroupoidElement g2 = gpd_inverse(sample_with_source(g.source, ub, rng, c.tol), c.tol);
                cp.add(std::max({rel_dev(act_left(g2, gx, c.tol).g, act_left(gpd_mul(g2, g, c.tol), x, c.tol).g),
                                 flag_gap(moment_left(gx, c.tol), g.source), flag_gap(moment_right(xh, c.tol), h.target)}));
                const CellPoint q = twist(x, c.tol);
                tw.add(std::max({rel_dev(twist(q, c.tol).g, x.g), twist_formula_defect(x), q.u == v && q.v == u ? 0.0 : 1.0}));
                if (n <= 3 && s < c.few()) gr.add(std::max(left_action_graph_defect(g, x), right_action_graph_defect(x, h)));
            });
        for (auto* r : {&cm, &un, &cp, &tw}) c.out.push_back(*r);
        if (n <= 3) c.out.push_back(gr);
    }
}

// ---------------------------------------------------------------- leaves

void suite_leaves(Ctx& c) {
    const int n = c.n;
    for (const auto& [u, v] : suite_pairs(n, c.seed)) {
        const std::string us = u.str(), vs = v.str();
        for (auto& r : leaf_checks(u, v, sub_seed(c.seed, "leaf" + us + vs), c.samples, c.tol)) c.out.push_back(r);

        const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
        CheckReport fl = make_check("leaves.flow", "dressing flows stay on a leaf and keep the rank", n, 1e-5, us, vs);
        CheckReport tw = make_check("leaves.twist", "the twist maps leaves to leaves", n, 1e-5, us, vs);
        const Tolerance loose{c.tol.eq, 1e-6, 1e-8};
        for (int s = 0; s < c.few(); ++s)
            guarded(fl, [&] {
                const std::uint64_t sd = sub_seed(c.seed, "flow" + us + vs, s);
                Rng rng(sd);
                const CellPoint p = sample_double_cell(u, v, ub, vb, sd, c.tol);
                std::vector<cplx> coeffs(dual_basis(n).size());
                for (auto& z : coeffs) z = rng.annulus(0.5, 1.5);
                coeffs = normalized_coeffs(p.g, coeffs, 0.3);
                // integration error moves vanishing minors off zero by about 1e-9
                const CellPoint q = CellPoint::make(dressing_flow(p.g, coeffs, 1e-2, 100), ub, vb, loose);
                fl.add(std::max(leaf_distance(p, q), leaf_rank(q, c.tol) == leaf_rank(p, c.tol) ? 0.0 : 1.0));
                tw.add(leaf_distance(twist(p, c.tol), twist(q, loose)));
            });
        c.out.push_back(fl);
        c.out.push_back(tw);
    }
    for (const auto& v : suite_cells(n, c.seed))
        for (auto& r : leaf_groupoid_check(v, sub_seed(c.seed, "sigma" + v.str()), c.samples, c.tol)) c.out.push_back(r);
}

void suite_golden(Ctx& c) {
    for (auto& r : golden_all(c.seed, std::max(c.samples, 20))) c.out.push_back(r);
}

}  // namespace

void RunConfig::validate() const {
    if (n < 2 || n > 6) throw SchemaError("n must be in 2..6");
    if (samples < 1) throw SchemaError("samples must be at least 1");
    tol.validate();
    for (const auto& s : suites)
        if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw SchemaError("unknown suite '" + s + "'");
}

std::vector<std::string> RunConfig::expanded_suites() const {
    std::vector<std::string> r;
    for (const auto& name : suite_names())
        if (std::find(suites.begin(), suites.end(), name) != suites.end() ||
            std::find(suites.begin(), suites.end(), "all") != suites.end())
            r.push_back(name);
    return r;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"factorize", "poisson", "groupoid", "leaves", "golden"};
    return names;
}

std::vector<std::pair<WeylElement, WeylElement>> suite_pairs(int n, std::uint64_t seed) {
    const auto all = WeylElement::all(n);
    std::vector<std::pair<WeylElement, WeylElement>> r;
    if (n <= 3) {
        for (const auto& u : all)
            for (const auto& v : all) r.emplace_back(u, v);
        return r;
    }
    Rng rng(sub_seed(seed, "pairs"));
    while (r.size() < 10) {
        std::pair<WeylElement, WeylElement> p{all[rng.index(all.size())], all[rng.index(all.size())]};
        if (std::find(r.begin(), r.end(), p) == r.end()) r.push_back(p);
    }
    return r;
}

std::vector<WeylElement> suite_cells(int n, std::uint64_t seed) {
    if (n <= 3) return WeylElement::all(n);
    std::vector<WeylElement> r;
    for (const auto& [u, v] : suite_pairs(n, seed))
        if (std::find(r.begin(), r.end(), v) == r.end()) r.push_back(v);
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<CheckReport> run_suite(const std::string& name, const RunConfig& cfg) {
    Ctx c{cfg.n, cfg.seed, cfg.samples, cfg.tol, {}};
    if (name == "factorize") suite_factorize(c);
    else if (name == "poisson") suite_poisson(c);
    else if (name == "groupoid") suite_groupoid(c);
    else if (name == "leaves") suite_leaves(c);
    else if (name == "golden") suite_golden(c);
    else throw SchemaError("unknown suite '" + name + "'");
    return c.out;
}

nlohmann::json verify_report(const RunConfig& cfg) {
    cfg.validate();
    std::vector<CheckReport> all;
    std::map<std::string, std::pair<int, int>> per_suite;
    for (const auto& s : cfg.expanded_suites()) {
        auto r = run_suite(s, cfg);
        int passed = 0;
        for (const auto& x : r) passed += x.pass();
        per_suite[s] = {static_cast<int>(r.size()), passed};
        all.insert(all.end(), r.begin(), r.end());
    }
    std::stable_sort(all.begin(), all.end(), [](const CheckReport& a, const CheckReport& b) {
        return std::tie(a.id, a.u, a.v) < std::tie(b.id, b.u, b.v);
    });
    nlohmann::json checks = nlohmann::json::array();
    int passed = 0;
    for (const auto& r : all) {
        checks.push_back(to_json(r));
        passed += r.pass();
    }
    nlohmann::json suites = nlohmann::json::object();
    for (const auto& [s, pr] : per_suite) suites[s] = {{"checks", pr.first}, {"passed", pr.second}};
    return {{"schema", "dbc-report/1"},
            {"config",
             {{"n", cfg.n},
              {"seed", cfg.seed},
              {"samples", cfg.samples},
              {"tol", {{"eq", cfg.tol.eq}, {"rank", cfg.tol.rank}, {"det", cfg.tol.det}}},
              {"suites", cfg.expanded_suites()}}},
            {"summary", {{"checks", all.size()}, {"passed", passed}, {"failed", static_cast<int>(all.size()) - passed}}},
            {"suites", suites},
            {"checks", checks}};
}

bool report_passed(const nlohmann::json& report) { return report.at("summary").at("failed").get<int>() == 0; }

}  // namespace dbc
