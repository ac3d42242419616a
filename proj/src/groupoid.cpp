#include "dbc/groupoid.hpp"

#include <algorithm>
#include <cmath>

namespace dbc {

namespace {

bool same_rep(const WeylRep& a, const WeylRep& b) {
    return a.weyl == b.weyl && max_abs(a.matrix - b.matrix) <= 1e-12 * std::max(1.0, max_abs(a.matrix));
}

CMatrix unvec(const CMatrix& cols, std::size_t j, std::size_t n) {
    CMatrix x(n, n);
    for (std::size_t k = 0; k < n * n; ++k) x(k / n, k % n) = cols(k, j);
    return x;
}

// x + Σ_k ε_{offset+k} D_k x with D_k the columns of q (right-trivialized directions)
JMatrix seeded_block(const CMatrix& x, const CMatrix& q, std::size_t offset, std::size_t total) {
    const std::size_t n = x.rows();
    JMatrix r = lift<Jet>(x);
    for (std::size_t k = 0; k < q.cols(); ++k) {
        const CMatrix d = unvec(q, k, n) * x;
        const Jet eps = Jet::variable(0.0, offset + k, total);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d(i, j) != cplx{}) r(i, j) += eps * Jet(d(i, j));
    }
    return r;
}

// rows = vec(dF F^{-1}) along each seed
CMatrix right_trivialized(const JMatrix& F, std::size_t nseeds) {
    const JMatrix t = F * inverse(values(F));
    return jacobian(t.data(), nseeds);
}

CMatrix reversal(std::size_t n) {
    CMatrix J(n, n);
    for (std::size_t i = 0; i < n; ++i) J(i, n - 1 - i) = 1.0;
    return J;
}

std::vector<cplx> concat(std::vector<cplx> a, const std::vector<cplx>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <class T>
Matrix<T> target_rep_of(const Matrix<T>& g, const WeylRep& vbar) {
    return right_factor(g, vbar.matrix, inverse(vbar.matrix)).second;
}

template <class T>
Matrix<T> left_b_of(const Matrix<T>& g, const WeylRep& ubar) {
    return left_factor(g, ubar.matrix, inverse(ubar.matrix)).second;
}

template <class T>
Matrix<T> right_bminus_of(const Matrix<T>& g, const WeylRep& vbar) {
    return right_factor(g, vbar.matrix, inverse(vbar.matrix)).first;
}

}  // namespace

// ---------------------------------------------------------------- G^{v̄,v̄}

GroupoidElement GroupoidElement::make(const CMatrix& g, const WeylRep& vbar, const Tolerance& tol) {
    return from_point(CellPoint::make(g, vbar, vbar, tol), tol);
}

GroupoidElement GroupoidElement::from_point(const CellPoint& p, const Tolerance& tol) {
    if (p.u != p.v || !same_rep(p.ubar, p.vbar))
        throw FactorizationError("groupoid elements need u = v and one representative on both sides");
    if (!p.left || !p.right) throw FactorizationError("missing factorization");
    return {p, flag_in_cell(p.c(), p.v, tol), flag_in_cell(p.c_prime(), p.v, tol)};
}

CMatrix cell_representative(const FlagPoint& y, const WeylRep& vbar) {
    if (y.cell != vbar.weyl) throw SchemaError("flag is not in the cell of the representative");
    return flag_matrix(flag_coords(y.matrix(), y.cell, vbar), y.cell, vbar);
}

GroupoidElement gpd_identity(const FlagPoint& y, const WeylRep& vbar, const Tolerance& tol) {
    return GroupoidElement::make(cell_representative(y, vbar), vbar, tol);
}

GroupoidElement gpd_inverse(const GroupoidElement& e, const Tolerance& tol) {
    return GroupoidElement::make(e.point.c_prime() * inverse(e.point.b()), e.rep(), tol);
}

GroupoidMaps gpd_maps(const GroupoidElement& e, const Tolerance& tol) {
    return {e.source, e.target, gpd_inverse(e, tol), gpd_identity(e.source, e.rep(), tol)};
}

GroupoidElement gpd_mul(const GroupoidElement& e1, const GroupoidElement& e2, const Tolerance& tol) {
    if (!same_rep(e1.rep(), e2.rep())) throw ComposabilityError("elements belong to different groupoids");
    if (!e1.target.near(e2.source, tol.eq)) throw ComposabilityError("target of the first is not the source of the second");
    return GroupoidElement::make(e1.g() * e2.point.b(), e1.rep(), tol);
}

// ---------------------------------------------------------------- (G/B) × B_-

std::vector<cplx> ActionGroupoidElement::coords() const { return concat(flag.coords, bminus_coords(b_minus)); }

FlagPoint action_target(const ActionGroupoidElement& e, const Tolerance& tol) {
    return flag_canonical(inverse(e.b_minus) * e.flag.matrix(), tol);
}

ActionMaps action_gpd(const ActionGroupoidElement& e, const Tolerance& tol) {
    const FlagPoint tau = action_target(e, tol);
    return {e.flag, tau, {tau, inverse(e.b_minus)}};
}

ActionGroupoidElement action_gpd_mul(const ActionGroupoidElement& e1, const ActionGroupoidElement& e2,
                                     const Tolerance& tol) {
    if (!action_target(e1, tol).near(e2.flag, tol.eq))
        throw ComposabilityError("target of the first is not the source of the second");
    return {e1.flag, e1.b_minus * e2.b_minus};
}

ActionGroupoidElement embed_Iv(const CellPoint& p, const Tolerance& tol) {
    if (!p.right) throw FactorizationError("missing right factorization");
    return {flag_in_cell(p.g, p.u, tol), p.b_minus()};
}

ActionGroupoidElement embed_Jv(const CellPoint& p, const Tolerance& tol) {
    if (!p.right) throw FactorizationError("missing right factorization");
    return {flag_in_cell(p.c_prime(), p.v, tol), inverse(p.b_minus())};
}

bool in_F(const ActionGroupoidElement& e, const WeylElement& u, const WeylElement& v, const Tolerance& tol) {
    return e.flag.cell == u && action_target(e, tol).cell == v;
}

// ---------------------------------------------------------------- twist and actions

CellPoint twist(const CellPoint& p, const Tolerance& tol) {
    if (!p.left || !p.right) throw FactorizationError("missing factorization");
    return CellPoint::make(inverse(p.b_minus()) * p.c(), p.vbar, p.ubar, tol);
}

double twist_formula_defect(const CellPoint& p) {
    const CMatrix a = inverse(p.b_minus()) * p.c();
    const CMatrix b = p.c_prime() * inverse(p.b());
    const CMatrix ui = inverse(p.ubar.matrix), vi = inverse(p.vbar.matrix);
    const LDU<cplx> l = gaussian_decompose(CMatrix(ui * p.g));
    const LDU<cplx> r = gaussian_decompose(CMatrix(p.g * vi));
    const CMatrix closed = inverse(CMatrix(inverse(l.lower) * ui * p.g * vi * inverse(r.upper)));
    return std::max(rel_dev(a, b), rel_dev(a, closed));
}

FlagPoint moment_left(const CellPoint& x, const Tolerance& tol) { return flag_in_cell(x.g, x.u, tol); }

FlagPoint moment_right(const CellPoint& x, const Tolerance& tol) {
    if (!x.right) throw FactorizationError("missing right factorization");
    return flag_in_cell(x.c_prime(), x.v, tol);
}

CellPoint act_left(const GroupoidElement& g, const CellPoint& x, const Tolerance& tol) {
    if (g.cell() != x.u || !same_rep(g.rep(), x.ubar))
        throw MomentMatchError("acting groupoid does not match the left cell of the point");
    if (!g.target.near(moment_left(x, tol), tol.eq)) throw MomentMatchError("target of g is not x.B");
    return CellPoint::make(g.point.b_minus() * x.g, x.ubar, x.vbar, tol);
}

CellPoint act_right(const CellPoint& x, const GroupoidElement& h, const Tolerance& tol) {
    if (h.cell() != x.v || !same_rep(h.rep(), x.vbar))
        throw MomentMatchError("acting groupoid does not match the right cell of the point");
    if (!h.source.near(moment_right(x, tol), tol.eq)) throw MomentMatchError("source of h is not the right moment of x");
    return CellPoint::make(x.g * h.point.b(), x.ubar, x.vbar, tol);
}

// ---------------------------------------------------------------- sampling

CMatrix sample_over_flag(const CMatrix& c, const WeylRep& vbar, Rng& rng) {
    const std::size_t n = c.rows();
    const CMatrix X = inverse(c) * random_lower(static_cast<int>(n), rng) * vbar.matrix;
    // X = b ℓ from the LDU of the reversed matrix
    const CMatrix J = reversal(n);
    const LDU<cplx> f = gaussian_decompose(CMatrix(J * X * J));
    const CMatrix b = J * f.lower * J * (J * f.diag_matrix() * J);
    return c * b;
}

GroupoidElement sample_with_source(const FlagPoint& y, const WeylRep& vbar, Rng& rng, const Tolerance& tol) {
    const CMatrix c = cell_representative(y, vbar);
    for (int attempt = 0; attempt < 50; ++attempt) {
        try {
            const CMatrix h = sample_over_flag(c, vbar, rng);
            if (condition_number(h) > 1e4) continue;
            return GroupoidElement::make(h, vbar, tol);
        } catch (const Error&) {
        }
    }
    throw SamplingExhaustedError("no groupoid element found over the requested source");
}

CellPoint sample_with_moment(const FlagPoint& y, const WeylRep& ubar, const WeylRep& vbar, Rng& rng,
                             const Tolerance& tol) {
    const CMatrix c = cell_representative(y, ubar);
    for (int attempt = 0; attempt < 50; ++attempt) {
        try {
            const CMatrix x = sample_over_flag(c, vbar, rng);
            if (condition_number(x) > 1e4) continue;
            return CellPoint::make(x, ubar, vbar, tol);
        } catch (const Error&) {
        }
    }
    throw SamplingExhaustedError("no cell point found over the requested flag");
}

// ---------------------------------------------------------------- Poisson checks

double pair_graph_defect(const CMatrix& x1, const CMatrix& x2, const FlagMap& m1, const FlagMap& m2,
                         const PairProduct& prod, double last_sign) {
    const std::size_t n = x1.rows(), K = n * n;
    const CMatrix q1 = cell_tangent_basis(x1), q2 = cell_tangent_basis(x2);
    const std::size_t d1 = q1.cols(), d2 = q2.cols(), d = d1 + d2;
    const JMatrix j1 = seeded_block(x1, q1, 0, d), j2 = seeded_block(x2, q2, d1, d);
    const CMatrix a1 = jacobian(m1(j1), d), a2 = jacobian(m2(j2), d);
    const CMatrix constraint = a1 - a2;
    const CMatrix z = null_space(constraint, 1e-10);
    const CMatrix jp = right_trivialized(prod(j1, j2), d);

    CMatrix T(3 * K, z.cols());
    for (std::size_t c = 0; c < z.cols(); ++c) {
        for (std::size_t k = 0; k < d1; ++k)
            for (std::size_t i = 0; i < K; ++i) T(i, c) += q1(i, k) * z(k, c);
        for (std::size_t k = 0; k < d2; ++k)
            for (std::size_t i = 0; i < K; ++i) T(K + i, c) += q2(i, k) * z(d1 + k, c);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < K; ++i) T(2 * K + i, c) += jp(i, k) * z(k, c);
    }
    const CMatrix p = values(prod(lift<Jet>(x1), lift<Jet>(x2)));
    const CMatrix mat =
        block_diag(block_diag(pist_eval(x1).mat, pist_eval(x2).mat), scaled(pist_eval(p).mat, cplx(last_sign)));
    return conormal_defect(T, mat);
}


double group_map_deviation(const std::function<JMatrix(const JMatrix&)>& F, const CMatrix& g, double sign) {
    const std::size_t K = g.rows() * g.cols();
    const JMatrix out = F(seeded(g, right_frame(g)));
    const CMatrix J = right_trivialized(out, K);
    return pushforward_deviation(J, pist_eval(g).mat, pist_eval(values(out)).mat, sign);
}

double source_push_defect(const GroupoidElement& e) {
    const WeylRep canon = weyl_representative(e.cell());
    const CMatrix J = frame_jacobian([&](const JMatrix& g) { return flag_coords(g, e.cell(), canon); }, e.g());
    return pushforward_deviation(J, pist_eval(e.g()).mat, pi1_eval(e.source).mat, 1.0);
}

double target_push_defect(const GroupoidElement& e) {
    const WeylRep canon = weyl_representative(e.cell());
    const CMatrix J = frame_jacobian(
        [&](const JMatrix& g) { return flag_coords(target_rep_of(g, e.rep()), e.cell(), canon); }, e.g());
    return pushforward_deviation(J, pist_eval(e.g()).mat, pi1_eval(e.target).mat, -1.0);
}

double inverse_push_defect(const GroupoidElement& e) {
    return group_map_deviation(
        [&](const JMatrix& g) { return JMatrix(target_rep_of(g, e.rep()) * inverse(left_b_of(g, e.rep()))); }, e.g(),
        -1.0);
}

double twist_push_defect(const CellPoint& p) {
    return group_map_deviation(
        [&](const JMatrix& g) {
            const JMatrix c = left_factor(g, p.ubar.matrix, inverse(p.ubar.matrix)).first;
            return JMatrix(inverse(right_bminus_of(g, p.vbar)) * c);
        },
        p.g, -1.0);
}

double mul_graph_defect(const GroupoidElement& g, const GroupoidElement& h) {
    const WeylElement v = g.cell();
    const WeylRep canon = weyl_representative(v), vbar = g.rep();
    return pair_graph_defect(
        g.g(), h.g(), [&](const JMatrix& x) { return flag_coords(target_rep_of(x, vbar), v, canon); },
        [&](const JMatrix& x) { return flag_coords(x, v, canon); },
        [&](const JMatrix& a, const JMatrix& b) { return JMatrix(a * left_b_of(b, vbar)); }, -1.0);
}

double left_action_graph_defect(const GroupoidElement& g, const CellPoint& x) {
    const WeylElement u = x.u;
    const WeylRep canon = weyl_representative(u), ubar = g.rep();
    return pair_graph_defect(
        g.g(), x.g, [&](const JMatrix& a) { return flag_coords(target_rep_of(a, ubar), u, canon); },
        [&](const JMatrix& a) { return flag_coords(a, u, canon); },
        [&](const JMatrix& a, const JMatrix& b) { return JMatrix(right_bminus_of(a, ubar) * b); }, -1.0);
}

double right_action_graph_defect(const CellPoint& x, const GroupoidElement& h) {
    const WeylElement v = x.v;
    const WeylRep canon = weyl_representative(v), vbar = h.rep();
    return pair_graph_defect(
        x.g, h.g(), [&](const JMatrix& a) { return flag_coords(target_rep_of(a, vbar), v, canon); },
        [&](const JMatrix& a) { return flag_coords(a, v, canon); },
        [&](const JMatrix& a, const JMatrix& b) { return JMatrix(a * left_b_of(b, vbar)); }, -1.0);
}

namespace {

// τ in product charts, as jets of (flag coords ⊕ B_- coords)
std::vector<Jet> action_target_jets(const ActionGroupoidElement& e, const std::vector<Jet>& y, const FlagPoint& tau) {
    const int n = e.flag.cell.n();
    const std::size_t d1 = e.flag.coords.size();
    const std::vector<Jet> fc(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(d1));
    const std::vector<Jet> bc(y.begin() + static_cast<std::ptrdiff_t>(d1), y.end());
    const JMatrix c = flag_matrix(fc, e.flag.cell, e.flag.rep);
    const JMatrix b = bminus_from_coords(bc, static_cast<std::size_t>(n));
    return flag_coords(JMatrix(inverse(b) * c), tau.cell, tau.rep);
}

}  // namespace

double action_mul_graph_defect(const ActionGroupoidElement& a, const ActionGroupoidElement& b) {
    const int n = a.flag.cell.n();
    const FlagPoint tau_a = action_target(a);
    if (!tau_a.near(b.flag, Tolerance{}.eq)) throw ComposabilityError("pair is not composable");
    const ActionGroupoidElement ab = action_gpd_mul(a, b);
    const std::size_t dy = a.flag.coords.size(), db = bminus_dim(n);
    const std::vector<cplx> base = concat(a.coords(), bminus_coords(b.b_minus));
    const std::vector<Jet> x = variables(base);
    const std::vector<Jet> ya(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(dy + db));
    const std::vector<Jet> b1(x.begin() + static_cast<std::ptrdiff_t>(dy), x.begin() + static_cast<std::ptrdiff_t>(dy + db));
    const std::vector<Jet> b2(x.begin() + static_cast<std::ptrdiff_t>(dy + db), x.end());

    std::vector<Jet> graph = ya;
    const std::vector<Jet> w = action_target_jets(a, ya, b.flag);
    graph.insert(graph.end(), w.begin(), w.end());
    graph.insert(graph.end(), b2.begin(), b2.end());
    graph.insert(graph.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(dy));
    const JMatrix prod = bminus_from_coords(b1, n) * bminus_from_coords(b2, n);
    const std::vector<Jet> pc = bminus_coords(prod);
    graph.insert(graph.end(), pc.begin(), pc.end());
    const CMatrix T = jacobian(graph, base.size());

    const CMatrix mat = block_diag(block_diag(mixed_pi_eval(a.flag, a.b_minus).mat, mixed_pi_eval(b.flag, b.b_minus).mat),
                                   scaled(mixed_pi_eval(ab.flag, ab.b_minus).mat, cplx(-1.0)));
    return conormal_defect(T, mat);
}

std::vector<cplx> x_alpha(const ActionGroupoidElement& e, const std::vector<cplx>& alpha, const Tolerance& tol) {
    const FlagPoint tau = action_target(e, tol);
    if (alpha.size() != tau.coords.size()) throw SchemaError("covector size does not match the target chart");
    const std::vector<cplx> base = e.coords();
    const CMatrix J = jacobian(action_target_jets(e, variables(base), tau), base.size());
    const CMatrix mat = mixed_pi_eval(e.flag, e.b_minus).mat;
    std::vector<cplx> beta(base.size()), X(base.size());
    for (std::size_t j = 0; j < base.size(); ++j)
        for (std::size_t a = 0; a < alpha.size(); ++a) beta[j] += J(a, j) * alpha[a];
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = 0; j < base.size(); ++j) X[i] += beta[j] * mat(j, i);
    return X;
}

double left_invariance_defect(const ActionGroupoidElement& a, const ActionGroupoidElement& b,
                              const std::vector<cplx>& alpha, const Tolerance& tol) {
    const int n = a.flag.cell.n();
    const ActionGroupoidElement ab = action_gpd_mul(a, b, tol);
    const std::vector<cplx> xb = x_alpha(b, alpha, tol), xab = x_alpha(ab, alpha, tol);
    const std::size_t dy = a.flag.coords.size(), dw = b.flag.coords.size(), db = bminus_dim(n);
    // left translation by b_1 on the B_- factor
    const auto w = variables(bminus_coords(b.b_minus));
    const CMatrix L =
        jacobian(bminus_coords(JMatrix(a.b_minus * bminus_from_coords(w, static_cast<std::size_t>(n)))), w.size());
    double scale = 1.0, dev = 0.0;
    for (const auto& z : xab) scale = std::max(scale, std::abs(z));
    for (std::size_t i = 0; i < dy; ++i) dev = std::max(dev, std::abs(xab[i]));
    for (std::size_t i = 0; i < dw; ++i) dev = std::max(dev, std::abs(xb[i]));
    for (std::size_t i = 0; i < db; ++i) {
        cplx s = 0;
        for (std::size_t j = 0; j < db; ++j) s += L(i, j) * xb[dw + j];
        dev = std::max(dev, std::abs(xab[dy + i] - s));
    }
    return dev / scale;
}

nlohmann::json to_json(const GroupoidElement& e) {
    nlohmann::json j = to_json(e.point);
    j["source"] = to_json(e.source);
    j["target"] = to_json(e.target);
    return j;
}

nlohmann::json to_json(const ActionGroupoidElement& e) {
    return {{"flag", to_json(e.flag)}, {"b_minus", to_json(e.b_minus)}};
}

}  // namespace dbc
