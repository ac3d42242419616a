#include "dbc/leaves.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <memory>

namespace dbc {

namespace {

double rel_floor(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// |π^#(df)| relative to |df|·|π|
double hamiltonian_norm(const Observable& f, const CMatrix& g, const CMatrix& mat) {
    const auto a = frame_gradient(f, g);
    const std::size_t K = a.size();
    double top = 0, da = 0;
    for (std::size_t q = 0; q < K; ++q) {
        cplx s = 0;
        for (std::size_t p = 0; p < K; ++p) s += a[p] * mat(p, q);
        top = std::max(top, std::abs(s));
        da = std::max(da, std::abs(a[q]));
    }
    return top / std::max(1.0, da * max_abs(mat));
}

CellPoint base_point(const WeylRep& vbar) { return CellPoint::make(vbar.matrix, vbar, vbar); }

}  // namespace

cplx delta_minor(const CMatrix& g, int k) { return leading_minor(g, static_cast<std::size_t>(k)); }

std::set<int> fixed_pair(const WeylElement& u, const WeylElement& v) {
    const std::set<int> a = fixed_simples(u), b = fixed_simples(v);
    std::set<int> r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.begin()));
    return r;
}

TorusElement chi_rep(const CellPoint& p) {
    try {
        return TorusElement(chi_rep_diag(p.g, p.ubar, p.vbar), 1e-6);
    } catch (const BigCellError& e) {
        throw FactorizationError(std::string("χ needs both factorizations: ") + e.what());
    }
}

// ---------------------------------------------------------------- T^{u,v}

bool TorusSubgroupTest::member(const TorusElement& t, double tol) const {
    for (const auto& l : kernel_chars)
        if (std::abs(l.evaluate(t) - 1.0) > tol) return false;
    return true;
}

TorusSubgroupTest torus_subgroup(const WeylElement& u, const WeylElement& v) {
    const int n = u.n();
    const WeylElement ui = u.inverse(), vi = v.inverse();
    // λ((t^u)^{-1} t^v) = Π_j t_j^{e_{v^{-1}(j)} − e_{u^{-1}(j)}}: trivial iff that exponent is constant = k
    IntMatrix m;
    for (int j = 1; j <= n; ++j) {
        std::vector<std::int64_t> row(n + 1, 0);
        row[vi(j) - 1] += 1;
        row[ui(j) - 1] -= 1;
        row[n] = -1;
        m.push_back(row);
    }
    std::vector<std::int64_t> last(n + 1, 0);
    last[n - 1] = 1;
    m.push_back(last);
    TorusSubgroupTest r{u, v, {}};
    for (const auto& k : lattice_kernel(m, static_cast<std::size_t>(n) + 1))
        r.kernel_chars.push_back(CharacterVector{std::vector<std::int64_t>(k.begin(), k.begin() + n)});
    return r;
}

bool Tuv_member(const TorusElement& t, const WeylElement& u, const WeylElement& v, double tol) {
    return torus_subgroup(u, v).member(t, tol);
}

// ---------------------------------------------------------------- leaves

LeafInvariant leaf_invariant(const CellPoint& p) {
    LeafInvariant r{chi_rep(p), {}};
    for (int k : fixed_pair(p.u, p.v)) r.minors[k] = delta_minor(p.g, k);
    return r;
}

double leaf_distance(const CellPoint& p1, const CellPoint& p2) {
    if (p1.u != p2.u || p1.v != p2.v) return INFINITY;
    const TorusSubgroupTest T = torus_subgroup(p1.u, p1.v);
    const TorusElement q = chi_rep(p1) * chi_rep(p2).inverse();
    double d = 0;
    for (const auto& l : T.kernel_chars) d = std::max(d, std::abs(l.evaluate(q) - 1.0));
    for (int k : fixed_pair(p1.u, p1.v)) d = std::max(d, rel_floor(delta_minor(p1.g, k), delta_minor(p2.g, k)));
    return d;
}

bool same_leaf(const CellPoint& p1, const CellPoint& p2, double tol) {
    if (p1.u != p2.u || p1.v != p2.v) return false;
    return leaf_distance(p1, p2) <= tol;
}

int leaf_rank(const CellPoint& p, const Tolerance& tol) {
    const CMatrix mat = pist_eval(p.g).mat;
    const auto s = singular_values(mat);
    return rank_abs(mat, tol.rank * std::max(1.0, s.empty() ? 0.0 : s.front()));
}

int leaf_dimension(const WeylElement& u, const WeylElement& v) {
    return u.length() + v.length() + torus_subgroup(u, v).subtorus_dim();
}

LeafCensus leaf_census(const WeylElement& u, const WeylElement& v, double tol) {
    const int n = u.n();
    LeafCensus c;
    c.u = u;
    c.v = v;
    c.fixed = fixed_pair(u, v);
    const auto T = std::make_shared<TorusSubgroupTest>(torus_subgroup(u, v));
    const std::set<int> fixed = c.fixed;
    c.stab_test = [T, fixed, n, tol](const TorusElement& t) {
        for (int k : fixed)
            if (std::abs(CharacterVector::fundamental(n, k).evaluate(t) - 1.0) > tol) return false;
        return T->member(t * t, tol);
    };
    c.count_per_level = 1 << c.fixed.size();
    const auto order2 = enumerate_order2(n);
    for (const auto& t : order2)
        if (c.stab_test(t)) ++c.stab_order2;
    c.order2_quotient = static_cast<int>(order2.size()) / std::max(1, c.stab_order2);
    return c;
}

double square_identity_defect(const CellPoint& p) {
    const int n = p.u.n();
    const TorusElement t = chi_rep(p);
    double d = 0;
    for (int k : fixed_pair(p.u, p.v)) {
        const cplx lhs = delta_minor(p.g, k) * delta_minor(p.g, k);
        const cplx rhs = delta_minor(p.ubar.matrix, k) * delta_minor(p.vbar.matrix, k) *
                         CharacterVector::fundamental(n, k).evaluate(t);
        d = std::max(d, rel_floor(lhs, rhs));
    }
    return d;
}

double minor_casimir_defect(const CellPoint& p) {
    const CMatrix mat = pist_eval(p.g).mat;
    double d = 0;
    for (int k : fixed_pair(p.u, p.v))
        d = std::max(d, hamiltonian_norm([k](const JMatrix& x) { return leading_minor(x, static_cast<std::size_t>(k)); },
                                         p.g, mat));
    return d;
}

double chi_casimir_defect(const CellPoint& p) {
    const CMatrix mat = pist_eval(p.g).mat;
    double d = 0;
    for (const auto& l : torus_subgroup(p.u, p.v).kernel_chars) {
        const WeylRep ub = p.ubar, vb = p.vbar;
        d = std::max(d, hamiltonian_norm([&](const JMatrix& x) { return l.evaluate_diag(chi_rep_diag(x, ub, vb)); },
                                         p.g, mat));
    }
    return d;
}

LeafProjection project_to_leaf(const CellPoint& p, const Tolerance& tol) {
    if (p.u != p.v) throw SchemaError("projection onto Σ^v̄ needs u = v");
    const int n = p.u.n();
    const TorusElement chi = chi_rep(p);
    std::vector<cplx> a(n);
    cplx prod = 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        a[i] = 1.0 / std::sqrt(chi[i]);
        prod *= a[i];
    }
    a[n - 1] = 1.0 / prod;
    const TorusElement ta(a, 1e-6);
    const CMatrix ga = p.g * ta.matrix();
    for (const auto& eps : enumerate_order2(n)) {
        const CMatrix h = ga * eps.matrix();
        bool ok = true;
        for (int k : fixed_simples(p.v))
            if (rel_floor(delta_minor(h, k), delta_minor(p.vbar.matrix, k)) > 1e-6) ok = false;
        if (ok) return {CellPoint::make(h, p.ubar, p.vbar, tol), ta, eps};
    }
    throw SamplingExhaustedError("no order-2 correction matches the minors of the representative");
}

CMatrix dressing_field(const CMatrix& g, const std::vector<cplx>& coeffs) {
    const int n = static_cast<int>(g.rows());
    const auto basis = dual_basis(n);
    if (coeffs.size() != basis.size()) throw SchemaError("one coefficient per dual basis element");
    CMatrix v(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i) v = v + scaled(dressing_eval(basis[i], g), coeffs[i]);
    return v;
}

std::vector<cplx> normalized_coeffs(const CMatrix& g, std::vector<cplx> coeffs, double rel_speed) {
    const double f = max_abs(dressing_field(g, coeffs));
    if (f > 0)
        for (auto& c : coeffs) c *= rel_speed * max_abs(g) / f;
    return coeffs;
}

CMatrix dressing_flow(const CMatrix& g, const std::vector<cplx>& coeffs, double step, int steps) {
    const int n = static_cast<int>(g.rows());
    auto field = [&](const CMatrix& x) { return dressing_field(x, coeffs); };
    CMatrix x = g;
    const cplx h(step);
    for (int s = 0; s < steps; ++s) {
        const CMatrix k1 = field(x);
        const CMatrix k2 = field(x + scaled(k1, h / 2.0));
        const CMatrix k3 = field(x + scaled(k2, h / 2.0));
        const CMatrix k4 = field(x + scaled(k3, h));
        x = x + scaled(k1 + scaled(k2, cplx(2.0)) + scaled(k3, cplx(2.0)) + k4, h / 6.0);
    }
    // back onto det 1
    return scaled(x, std::pow(determinant(x), -1.0 / n));
}

// ---------------------------------------------------------------- Σ^v̄ as a groupoid

std::vector<CheckReport> leaf_groupoid_check(const WeylElement& v, std::uint64_t seed, int samples,
                                             const Tolerance& tol) {
    const int n = v.n();
    const std::string vs = v.str();
    const WeylRep vb = weyl_representative(v);
    const CellPoint vp = base_point(vb);
    CheckReport member = make_check("leaves.sigma.membership", "sampled points lie on the leaf through the representative", n, 1e-8, vs, vs);
    CheckReport mul = make_check("leaves.sigma.mul_closure", "the leaf through the representative is closed under the groupoid product", n, 1e-8, vs, vs);
    CheckReport inv = make_check("leaves.sigma.inverse_closure", "the leaf through the representative is closed under the groupoid inverse", n, 1e-8, vs, vs);
    CheckReport rank = make_check("leaves.sigma.rank", "the bivector is nondegenerate on the leaf: rank = 2 l(v)", n, 0.0, vs, vs);
    CheckReport left = make_check("leaves.sigma.left_action", "the left action of the leaf groupoid preserves leaves of G^{u,v}", n, 1e-8, {}, vs);
    CheckReport right = make_check("leaves.sigma.right_action", "the right action of the leaf groupoid preserves leaves of G^{u,v}", n, 1e-8, {}, vs);

    Rng rng(seed);
    const auto all = WeylElement::all(n);
    for (int s = 0; s < samples; ++s) {
        const std::uint64_t sd = seed * 7919 + static_cast<std::uint64_t>(s);
        const LeafProjection lp = project_to_leaf(sample_double_cell(v, v, vb, vb, sd, tol), tol);
        const GroupoidElement g = GroupoidElement::from_point(lp.point, tol);
        member.add(leaf_distance(g.point, vp));
        rank.add(std::abs(leaf_rank(g.point, tol) - 2 * v.length()));

        const GroupoidElement h0 = sample_with_source(g.target, vb, rng, tol);
        const GroupoidElement h = GroupoidElement::from_point(project_to_leaf(h0.point, tol).point, tol);
        mul.add(leaf_distance(gpd_mul(g, h, tol).point, vp));
        inv.add(leaf_distance(gpd_inverse(g, tol).point, vp));

        const WeylElement& u = all[static_cast<std::size_t>(s) % all.size()];
        const WeylRep ub = weyl_representative(u);
        const CellPoint x = sample_double_cell(u, v, ub, vb, sd + 1, tol);
        const GroupoidElement a0 = sample_with_source(moment_left(x, tol), ub, rng, tol);
        const GroupoidElement a =
            gpd_inverse(GroupoidElement::from_point(project_to_leaf(a0.point, tol).point, tol), tol);
        left.add(leaf_distance(act_left(a, x, tol), x));
        const GroupoidElement b0 = sample_with_source(moment_right(x, tol), vb, rng, tol);
        const GroupoidElement b = GroupoidElement::from_point(project_to_leaf(b0.point, tol).point, tol);
        right.add(leaf_distance(act_right(x, b, tol), x));
    }
    return {member, mul, inv, rank, left, right};
}

std::vector<CheckReport> leaf_checks(const WeylElement& u, const WeylElement& v, std::uint64_t seed, int samples,
                                     const Tolerance& tol) {
    const int n = u.n();
    const LeafCensus census = leaf_census(u, v, tol.eq);
    const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
    const std::string us = u.str(), vs = v.str();
    CheckReport cas = make_check("leaves.casimir.minors", "Hamiltonian fields of the fixed minors vanish on the cell", n, 1e-8, us, vs);
    CheckReport cchi = make_check("leaves.casimir.chi", "Hamiltonian fields of kernel characters of χ vanish on the cell", n, 1e-8, us, vs);
    CheckReport sq = make_check("leaves.square_identity", "squared fixed minors equal Δ(ū)Δ(v̄)χ^ω", n, 1e-8, us, vs);
    CheckReport rk = make_check("leaves.rank", "rank of the bivector equals l(u)+l(v)+dim T^{u,v}", n, 0.0, us, vs);
    CheckReport cnt = make_check("leaves.count", "|T^(2)/(T^(2) ∩ T_stab)| = 2^|I(u,v)|", n, 0.0, us, vs);
    cnt.add(std::abs(census.order2_quotient - census.count_per_level));
    const int dim = leaf_dimension(u, v);
    for (int s = 0; s < samples; ++s) {
        const CellPoint p = sample_double_cell(u, v, ub, vb, seed * 104729 + static_cast<std::uint64_t>(s), tol);
        cas.add(minor_casimir_defect(p));
        cchi.add(chi_casimir_defect(p));
        sq.add(square_identity_defect(p));
        rk.add(std::abs(leaf_rank(p, tol) - dim));
    }
    return {cas, cchi, cnt, rk, sq};
}

nlohmann::json leaf_report(const WeylElement& u, const WeylElement& v, std::uint64_t seed, int samples,
                           const Tolerance& tol) {
    const LeafCensus census = leaf_census(u, v, tol.eq);
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : leaf_checks(u, v, seed, samples, tol)) checks.push_back(to_json(c));
    return {{"u", to_json(u)},
            {"v", to_json(v)},
            {"I_uv", std::vector<int>(census.fixed.begin(), census.fixed.end())},
            {"count_per_level", census.count_per_level},
            {"stab_order", census.stab_order2},
            {"leaf_dimension", leaf_dimension(u, v)},
            {"samples", samples},
            {"checks", checks}};
}

}  // namespace dbc
