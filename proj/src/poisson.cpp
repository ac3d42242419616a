#include "dbc/poisson.hpp"

#include <algorithm>
#include <cmath>

namespace dbc {

namespace {

std::vector<cplx> vec(const CMatrix& x) { return x.data(); }

CMatrix unvec(const std::vector<cplx>& v, std::size_t n) {
    CMatrix x(n, n);
    for (std::size_t k = 0; k < v.size(); ++k) x(k / n, k % n) = v[k];
    return x;
}

CMatrix columns(const std::vector<std::vector<cplx>>& cols, std::size_t rows) {
    CMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
}

CMatrix adjoint(const CMatrix& m) {
    CMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

// Ad_g on gl(n) in the row-major basis e_ij
CMatrix ad_matrix(const CMatrix& g) {
    const std::size_t n = g.rows(), K = n * n;
    const CMatrix gi = inverse(g);
    CMatrix A(K, K);
    for (std::size_t q = 0; q < K; ++q) {
        const CMatrix y = g * unit_matrix(n, q / n, q % n) * gi;
        for (std::size_t p = 0; p < K; ++p) A(p, q) = y(p / n, p % n);
    }
    return A;
}

// largest distance of a column of x from the span of the orthonormal columns of q
double span_residual(const CMatrix& q, const CMatrix& x) {
    const CMatrix r = x - q * (adjoint(q) * x);
    return max_abs(r);
}

std::vector<CMatrix> borel_sl(int n, bool upper) {
    std::vector<CMatrix> b = cartan_basis(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.push_back(upper ? unit_matrix(n, i, j) : unit_matrix(n, j, i));
    return b;
}

CMatrix push(const CMatrix& J, const CMatrix& mat) { return J * mat * J.transpose(); }

// rank with the threshold relative to max(1, σ_max), so round-off on a vanishing matrix counts as zero
int scaled_rank(const CMatrix& m, const Tolerance& tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    const auto s = singular_values(m);
    return rank_abs(m, tol.rank * std::max(1.0, s.front()));
}

}  // namespace

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
    CMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

// ---------------------------------------------------------------- r-matrix

std::vector<CMatrix> cartan_basis(int n) {
    std::vector<CMatrix> h;
    for (int i = 1; i < n; ++i) {
        CMatrix x(n, n);
        const double s = 1.0 / std::sqrt(static_cast<double>(i * (i + 1)));
        for (int k = 0; k < i; ++k) x(k, k) = s;
        x(i, i) = -i * s;
        h.push_back(x);
    }
    return h;
}

RMatrix RMatrix::standard(int n) {
    RMatrix r;
    r.n = n;
    for (const auto& h : cartan_basis(n)) r.terms.emplace_back(scaled(h, cplx(0.5)), h);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) r.terms.emplace_back(unit_matrix(n, j, i), unit_matrix(n, i, j));
    return r;
}

CMatrix RMatrix::tensor() const {
    const std::size_t K = static_cast<std::size_t>(n) * n;
    CMatrix t(K, K);
    for (const auto& [a, b] : terms)
        for (std::size_t p = 0; p < K; ++p)
            for (std::size_t q = 0; q < K; ++q) t(p, q) += a(p / n, p % n) * b(q / n, q % n);
    return t;
}

CMatrix RMatrix::symmetric_tensor() const {
    const CMatrix t = tensor();
    return scaled(t + t.transpose(), cplx(0.5));
}

DualBases borel_dual_bases(int n) {
    DualBases d;
    for (const auto& h : cartan_basis(n)) {
        d.lower.push_back(scaled(h, cplx(1.0 / std::sqrt(2.0))));
        d.upper.push_back(scaled(h, cplx(1.0 / std::sqrt(2.0))));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            d.lower.push_back(unit_matrix(n, j, i));
            d.upper.push_back(unit_matrix(n, i, j));
        }
    return d;
}

double Bivector::antisymmetry_defect() const {
    const double scale = std::max(1.0, max_abs(mat));
    return max_abs(mat + mat.transpose()) / scale;
}

Bivector pist_eval(const CMatrix& g, const RMatrix& r) {
    return {"right-trivialized", scaled(pist_tensor(g, r), cplx(kBracketFactor))};
}

Bivector pist_eval(const CMatrix& g) { return pist_eval(g, RMatrix::standard(static_cast<int>(g.rows()))); }

std::vector<cplx> frame_gradient(const Observable& f, const CMatrix& g) {
    const Jet j = jet_eval(f, g, right_frame(g));
    std::vector<cplx> d(g.rows() * g.cols());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = j.d(k);
    return d;
}

cplx bracket_eval(const Observable& f1, const Observable& f2, const CMatrix& g) {
    const CMatrix m = pist_eval(g).mat;
    const auto a = frame_gradient(f1, g), b = frame_gradient(f2, g);
    cplx s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t l = 0; l < b.size(); ++l) s += m(k, l) * a[k] * b[l];
    return s;
}

CMatrix frame_jacobian(const MatrixMap& F, const CMatrix& g) { return direction_jacobian(F, g, right_frame(g)); }

CMatrix direction_jacobian(const MatrixMap& F, const CMatrix& g, const std::vector<CMatrix>& directions) {
    return jacobian(F(seeded(g, directions)), directions.size());
}

// ---------------------------------------------------------------- dressing

std::vector<DualElement> dual_basis(int n) {
    std::vector<DualElement> b;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            b.push_back({DualElement::Kind::Upper, unit_matrix(n, i, j)});
            b.push_back({DualElement::Kind::Lower, unit_matrix(n, j, i)});
        }
    for (const auto& h : cartan_basis(n)) b.push_back({DualElement::Kind::Cartan, h});
    return b;
}

CMatrix dressing_eval(const DualElement& xi, const CMatrix& g) {
    const CMatrix gi = inverse(g);
    const CMatrix y = gi * xi.x * g;
    const CMatrix half0 = scaled(diag_part(y), cplx(0.5));
    switch (xi.kind) {
        case DualElement::Kind::Upper: return -(g * (half0 + lower_part(y)));
        case DualElement::Kind::Lower: return -(g * (half0 + upper_part(y)));
        case DualElement::Kind::Cartan: return g * (upper_part(y) - lower_part(y));
    }
    return {};
}

CMatrix dressing_eval_alt(const DualElement& xi, const CMatrix& g) {
    const CMatrix gi = inverse(g);
    const CMatrix y = gi * xi.x * g;
    const CMatrix half0 = scaled(diag_part(y), cplx(0.5));
    switch (xi.kind) {
        case DualElement::Kind::Upper: return g * (half0 + upper_part(y)) - xi.x * g;
        case DualElement::Kind::Lower: return g * (half0 + lower_part(y)) - xi.x * g;
        case DualElement::Kind::Cartan: return xi.x * g - g * (diag_part(y) + scaled(lower_part(y), cplx(2.0)));
    }
    return {};
}

std::vector<cplx> dual_covector(const DualElement& xi, int n) {
    const double f = xi.kind == DualElement::Kind::Upper ? 1.0 : xi.kind == DualElement::Kind::Lower ? -1.0 : 2.0;
    std::vector<cplx> a(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) a[k * n + l] = f * xi.x(l, k);
    return a;
}

// ---------------------------------------------------------------- quotients

std::vector<cplx> sigma_field(const CMatrix& x, const FlagPoint& fp) {
    const CMatrix c = fp.matrix();
    const auto out = flag_coords(seeded(c, {-(x * c)}), fp.cell, fp.rep);
    std::vector<cplx> v;
    for (const auto& j : out) v.push_back(j.d(0));
    return v;
}

Bivector pi1_eval(const FlagPoint& fp, Side side) {
    const CMatrix c = fp.matrix();
    const CMatrix P = pist_eval(c).mat;
    CMatrix J;
    if (side == Side::Left)
        J = frame_jacobian([&](const JMatrix& g) { return flag_coords(g, fp.cell, fp.rep); }, c);
    else
        J = frame_jacobian([&](const JMatrix& g) { return coflag_coords(g, fp.cell, fp.rep); }, c);
    return {(side == Side::Left ? "flag-cell" : "coflag-cell") + fp.cell.str(), push(J, P)};
}

Bivector pi1_eval_sigma(const FlagPoint& fp) {
    const std::size_t d = fp.coords.size();
    CMatrix m(d, d);
    for (const auto& [a, b] : RMatrix::standard(fp.cell.n()).terms) {
        const auto sa = sigma_field(a, fp), sb = sigma_field(b, fp);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, j) -= kBracketFactor * sa[i] * sb[j];
    }
    return {"flag-cell" + fp.cell.str(), m};
}

std::size_t bminus_dim(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2 + n - 1; }

namespace {

CMatrix bminus_frame_jacobian(const CMatrix& b) {
    const std::size_t n = b.rows();
    const auto frame = right_frame(b);
    CMatrix J(bminus_dim(static_cast<int>(n)), frame.size());
    for (std::size_t k = 0; k < frame.size(); ++k) {
        const auto y = bminus_coords(frame[k]);
        for (std::size_t a = 0; a < y.size(); ++a) J(a, k) = y[a];
    }
    return J;
}

}  // namespace

Bivector pist_bminus_eval(const CMatrix& b_minus) {
    return {"B_- entries", push(bminus_frame_jacobian(b_minus), pist_eval(b_minus).mat)};
}

Bivector mixed_pi_eval(const FlagPoint& fp, const CMatrix& b_minus) {
    const int n = fp.cell.n();
    const CMatrix p1 = pi1_eval(fp).mat;
    const CMatrix pb = pist_bminus_eval(b_minus).mat;
    const std::size_t d1 = p1.rows(), d2 = pb.rows();
    CMatrix m = block_diag(p1, pb);
    const DualBases bases = borel_dual_bases(n);
    for (std::size_t i = 0; i < bases.lower.size(); ++i) {
        const auto s = sigma_field(bases.upper[i], fp);
        const auto x = bminus_coords(CMatrix(bases.lower[i] * b_minus));
        for (std::size_t a = 0; a < d1; ++a)
            for (std::size_t b = 0; b < d2; ++b) {
                const cplx t = kBracketFactor * s[a] * x[b];
                m(a, d1 + b) -= t;
                m(d1 + b, a) += t;
            }
    }
    return {"flag-cell" + fp.cell.str() + " x B_- entries", m};
}

// ---------------------------------------------------------------- verification helpers

double pushforward_deviation(const CMatrix& J, const CMatrix& src, const CMatrix& dst, double sign) {
    return rel_dev(push(J, src), scaled(dst, cplx(sign)));
}

CMatrix chart_jacobian(const ChartMap& phi, const std::vector<cplx>& x) {
    return jacobian(phi.map(variables(x)), x.size());
}

CheckReport poisson_map_check(const std::string& id, const std::string& statement, const std::vector<MapSample>& pts,
                              double sign, double tol, int n) {
    CheckReport r = make_check(id, statement, n, tol);
    for (const auto& s : pts) r.add(pushforward_deviation(s.jacobian, s.src.mat, s.dst.mat, sign));
    return r;
}

// ---------------------------------------------------------------- structural checks

double multiplicativity_defect(const CMatrix& g, const CMatrix& h) {
    const CMatrix A = ad_matrix(g);
    return rel_dev(pist_eval(g * h).mat, push(A, pist_eval(h).mat) + pist_eval(g).mat);
}

double ad_invariance_defect(const CMatrix& g) {
    const CMatrix s = RMatrix::standard(static_cast<int>(g.rows())).symmetric_tensor();
    return rel_dev(push(ad_matrix(g), s), s);
}

cplx jacobi_cyclic(const Observable& f1, const Observable& f2, const Observable& f3, const CMatrix& g,
                   const RMatrix& r) {
    const std::size_t n = g.rows(), K = n * n;
    const auto frame = right_frame(g);
    const JMatrix gs = seeded(g, frame, true);
    const JMatrix gf = seeded(g, frame, false);
    Matrix<Jet> mat = pist_tensor(gf, r);
    const CMatrix m0 = values(mat);

    // right-frame derivatives D_k f as jets in the frame parameters
    auto grad = [&](const Observable& f) {
        const Jet j = f(gs);
        std::vector<Jet> D(K);
        for (std::size_t k = 0; k < K; ++k) {
            std::vector<cplx> first(K);
            for (std::size_t m = 0; m < K; ++m) {
                // e_k e_m = δ(k1,m0) e_{k0,m1}
                cplx v = j.dd(k, m);
                if (k % n == m / n) v += j.d((k / n) * n + m % n);
                first[m] = v;
            }
            Jet dk(j.d(k));
            for (std::size_t m = 0; m < K; ++m)
                if (first[m] != cplx{}) dk += Jet::variable(0.0, m, K) * Jet(first[m]);
            D[k] = dk;
        }
        return D;
    };
    const std::vector<Jet> D1 = grad(f1), D2 = grad(f2), D3 = grad(f3);

    auto bracket = [&](const std::vector<Jet>& a, const std::vector<Jet>& b) {
        Jet s;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < K; ++l)
                if (value_of(mat(k, l)) != cplx{} || mat(k, l).seeds()) s += mat(k, l) * a[k] * b[l];
        return s * Jet(kBracketFactor);
    };
    auto outer = [&](const Jet& F, const std::vector<Jet>& b) {
        cplx s = 0;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < K; ++l) s += m0(k, l) * F.d(k) * b[l].value();
        return kBracketFactor * s;
    };
    return outer(bracket(D1, D2), D3) + outer(bracket(D2, D3), D1) + outer(bracket(D3, D1), D2);
}

double jacobi_defect(const CMatrix& g, const RMatrix& r) {
    const std::size_t n = g.rows(), K = n * n;
    std::vector<Observable> coord;
    for (std::size_t k = 0; k < K; ++k) coord.push_back([k, n](const JMatrix& x) { return x(k / n, k % n); });
    double worst = 0;
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = a + 1; b < K; ++b)
            for (std::size_t c = b + 1; c < K; ++c)
                worst = std::max(worst, std::abs(jacobi_cyclic(coord[a], coord[b], coord[c], g, r)));
    return worst;
}

double conormal_defect(const CMatrix& tangent, const CMatrix& mat) {
    const CMatrix N = tangent.cols() == 0 ? CMatrix::identity(mat.rows()) : null_space(tangent.transpose(), 1e-10);
    if (N.cols() == 0) return 0.0;
    return max_abs(N.transpose() * mat * N) / std::max(1.0, max_abs(mat));
}

double coisotropy_defect(const CMatrix& c, const WeylElement& v, const WeylRep& vbar) {
    const std::size_t n = c.rows(), K = n * n;
    const CMatrix nn = c * inverse(vbar.matrix);
    const CMatrix ni = inverse(nn);
    std::vector<std::vector<cplx>> tangent;
    for (auto [a, b] : flag_positions(v)) tangent.push_back(vec(nn * unit_matrix(n, a, b) * ni));
    return conormal_defect(columns(tangent, K), pist_eval(c).mat);
}

double weak_pair_defect(const CellPoint& p) {
    const WeylRep ub = weyl_representative(p.u), vb = weyl_representative(p.v);
    const CMatrix J = frame_jacobian(
        [&](const JMatrix& g) {
            auto a = flag_coords(g, p.u, ub);
            auto b = coflag_coords(g, p.v, vb);
            a.insert(a.end(), b.begin(), b.end());
            return a;
        },
        p.g);
    const FlagPoint left{p.u, flag_coords(p.g, p.u, ub), ub};
    const FlagPoint right{p.v, coflag_coords(p.g, p.v, vb), vb};
    const CMatrix dst = block_diag(pi1_eval(left, Side::Left).mat, pi1_eval(right, Side::Right).mat);
    return pushforward_deviation(J, pist_eval(p.g).mat, dst, 1.0);
}

namespace {

std::pair<CMatrix, CMatrix> double_coset_spans(const CMatrix& g) {
    const int n = static_cast<int>(g.rows());
    const CMatrix gi = inverse(g);
    std::vector<std::vector<cplx>> s1, s2;
    for (const auto& x : borel_sl(n, true)) {
        s1.push_back(vec(x));
        s1.push_back(vec(g * x * gi));
    }
    for (const auto& x : borel_sl(n, false)) {
        s2.push_back(vec(x));
        s2.push_back(vec(g * x * gi));
    }
    const std::size_t K = static_cast<std::size_t>(n) * n;
    return {column_span(columns(s1, K), 1e-10), column_span(columns(s2, K), 1e-10)};
}

}  // namespace

double cell_tangency_defect(const CellPoint& p) {
    const auto [q1, q2] = double_coset_spans(p.g);
    const CMatrix mat = pist_eval(p.g).mat;
    return std::max(span_residual(q1, mat), span_residual(q2, mat)) / std::max(1.0, max_abs(mat));
}

int cell_tangent_dim(const CMatrix& g) {
    const auto [q1, q2] = double_coset_spans(g);
    CMatrix both(q1.rows(), q1.cols() + q2.cols());
    for (std::size_t i = 0; i < q1.rows(); ++i) {
        for (std::size_t j = 0; j < q1.cols(); ++j) both(i, j) = q1(i, j);
        for (std::size_t j = 0; j < q2.cols(); ++j) both(i, q1.cols() + j) = q2(i, j);
    }
    return static_cast<int>(q1.cols() + q2.cols()) - rank_abs(both, 1e-8);
}

CMatrix cell_tangent_basis(const CMatrix& g) {
    const auto [q1, q2] = double_coset_spans(g);
    CMatrix both(q1.rows(), q1.cols() + q2.cols());
    for (std::size_t i = 0; i < q1.rows(); ++i) {
        for (std::size_t j = 0; j < q1.cols(); ++j) both(i, j) = q1(i, j);
        for (std::size_t j = 0; j < q2.cols(); ++j) both(i, q1.cols() + j) = -q2(i, j);
    }
    const CMatrix z = null_space(both, 1e-8);
    CMatrix a(q1.cols(), z.cols());
    for (std::size_t i = 0; i < q1.cols(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) a(i, j) = z(i, j);
    if (z.cols() == 0) return CMatrix(q1.rows(), 0);
    return column_span(q1 * a, 1e-10);
}

DressingReport dressing_report(const CMatrix& g, const Tolerance& tol) {
    const int n = static_cast<int>(g.rows());
    const std::size_t K = static_cast<std::size_t>(n) * n;
    const CMatrix gi = inverse(g);
    const CMatrix mat = pist_eval(g).mat;
    DressingReport rep;
    std::vector<std::vector<cplx>> span;
    for (const auto& xi : dual_basis(n)) {
        const CMatrix d = dressing_eval(xi, g), alt = dressing_eval_alt(xi, g);
        rep.formula_defect = std::max(rep.formula_defect, rel_dev(d, alt));
        const CMatrix left = gi * d;
        const CMatrix shifted = gi * (d + xi.x * g);
        double s = 0;
        switch (xi.kind) {
            case DualElement::Kind::Upper:
                s = std::max(max_abs(upper_part(left)), max_abs(lower_part(shifted)));
                break;
            case DualElement::Kind::Lower:
                s = std::max(max_abs(lower_part(left)), max_abs(upper_part(shifted)));
                break;
            case DualElement::Kind::Cartan:
                s = std::max(max_abs(upper_part(gi * (d - xi.x * g))), max_abs(lower_part(shifted)));
                break;
        }
        rep.support_defect = std::max(rep.support_defect, s / std::max(1.0, max_abs(left)));
        // π^#(ξ^R) in the right frame; the covector pairs through the form scaled by the bracket factor
        const auto a = dual_covector(xi, n);
        std::vector<cplx> sharp(K);
        for (std::size_t p = 0; p < K; ++p)
            for (std::size_t q = 0; q < K; ++q) sharp[q] += a[p] * mat(p, q) / kBracketFactor;
        const CMatrix right = d * gi;
        rep.sharp_defect = std::max(rep.sharp_defect, rel_dev(right, unvec(sharp, n)));
        span.push_back(vec(right));
    }
    rep.span_rank = scaled_rank(columns(span, K), tol);
    rep.pist_rank = scaled_rank(mat, tol);
    return rep;
}

std::pair<int, int> submersion_ranks(const CellPoint& p, const Tolerance& tol) {
    const WeylRep ub = weyl_representative(p.u), vb = weyl_representative(p.v);
    const CMatrix mat = pist_eval(p.g).mat;
    const CMatrix J1 = frame_jacobian([&](const JMatrix& g) { return flag_coords(g, p.u, ub); }, p.g);
    const CMatrix J2 = frame_jacobian([&](const JMatrix& g) { return coflag_coords(g, p.v, vb); }, p.g);
    auto rank_of = [&](const CMatrix& J) { return J.rows() == 0 ? 0 : scaled_rank(J * mat, tol); };
    return {rank_of(J1), rank_of(J2)};
}

}  // namespace dbc
