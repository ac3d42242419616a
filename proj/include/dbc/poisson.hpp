#pragma once

#include <functional>
#include <string>

#include "dbc/factorize.hpp"
#include "dbc/report.hpp"

namespace dbc {

// Brackets pair a bivector with df ∧ dg = df⊗dg − dg⊗df.  With the trace form
// this is twice the plain tensor contraction of Π = (Ad_g⊗Ad_g) r − r.
inline constexpr double kBracketFactor = 2.0;

struct RMatrix {
    int n = 0;
    std::vector<std::pair<CMatrix, CMatrix>> terms;

    // ½ Σ h_i⊗h_i + Σ_{i<j} e_ji⊗e_ij, h_i orthonormal for tr(xy)
    static RMatrix standard(int n);
    // coefficient matrix in the e_ij⊗e_kl basis, index i*n+j
    CMatrix tensor() const;
    CMatrix symmetric_tensor() const;
};

// orthonormal traceless diagonal basis of the Cartan subalgebra
std::vector<CMatrix> cartan_basis(int n);

// Basis x_i of b_- and its dual basis ξ_i of b for the pairing
// ⟨x_- + x_0, y_+ + y_0⟩ = tr(x_- y_+) + 2 tr(x_0 y_0).
struct DualBases {
    std::vector<CMatrix> lower;  // x_i
    std::vector<CMatrix> upper;  // ξ_i
};
DualBases borel_dual_bases(int n);

struct Bivector {
    std::string chart;
    CMatrix mat;  // brackets of chart coordinates (frame vectors on G)

    std::size_t dim() const { return mat.rows(); }
    double antisymmetry_defect() const;
};

// Π(g) = (Ad_g⊗Ad_g) r − r as an n²×n² coefficient matrix
template <class T>
Matrix<T> pist_tensor(const Matrix<T>& g, const RMatrix& r) {
    const std::size_t n = g.rows();
    const Matrix<T> gi = inverse(g);
    Matrix<T> P(n * n, n * n);
    for (const auto& [a, b] : r.terms) {
        const Matrix<T> A = g * a * gi, B = g * b * gi;
        for (std::size_t p = 0; p < n * n; ++p) {
            const T& ap = A(p / n, p % n);
            const cplx a0 = a(p / n, p % n);
            for (std::size_t q = 0; q < n * n; ++q) P(p, q) += ap * B(q / n, q % n) - T(a0 * b(q / n, q % n));
        }
    }
    return P;
}

// right-trivialized frame on G, brackets of frame covectors
Bivector pist_eval(const CMatrix& g, const RMatrix& r);
Bivector pist_eval(const CMatrix& g);

// gradient of f along the right frame e_ij g
std::vector<cplx> frame_gradient(const Observable& f, const CMatrix& g);
cplx bracket_eval(const Observable& f1, const Observable& f2, const CMatrix& g);

// Jacobian of a vector-valued map of g along the right frame (rows = outputs)
using MatrixMap = std::function<std::vector<Jet>(const JMatrix&)>;
CMatrix frame_jacobian(const MatrixMap& F, const CMatrix& g);
// Jacobian of a map of a single matrix-valued curve parameter direction
CMatrix direction_jacobian(const MatrixMap& F, const CMatrix& g, const std::vector<CMatrix>& directions);

// ---------------------------------------------------------------- dressing

// Elements of g*_st ⊂ g⊕g: (η,0) with η strictly upper, (0,η) with η strictly
// lower, (x,−x) with x traceless diagonal.
struct DualElement {
    enum class Kind { Upper, Lower, Cartan } kind;
    CMatrix x;
};
std::vector<DualElement> dual_basis(int n);

// tangent vector δg at g (not trivialized)
CMatrix dressing_eval(const DualElement& xi, const CMatrix& g);
// the same vector written as −ξ g + g(...) with a b-valued (resp. b_- valued) left part
CMatrix dressing_eval_alt(const DualElement& xi, const CMatrix& g);
// ξ^R as a covector on the right frame, paired through the trace form on g⊕g
std::vector<cplx> dual_covector(const DualElement& xi, int n);

// ---------------------------------------------------------------- quotient structures

enum class Side { Left, Right };  // G/B  |  B_-\G

// Bracket matrix of π_1 (Side::Left) at c·B, or of π_-1 (Side::Right) at B_-·c,
// in the chart of fp.cell, by pushing π_st forward from c = fp.matrix().
Bivector pi1_eval(const FlagPoint& fp, Side side = Side::Left);
// π_1 = −σ(r_st) with σ(x)(gB) = d/dt exp(−tx) g B
Bivector pi1_eval_sigma(const FlagPoint& fp);
// σ(x) at fp as a chart vector
std::vector<cplx> sigma_field(const CMatrix& x, const FlagPoint& fp);

// B_- entry chart: strictly lower entries (row-major), then diagonal 1..n-1
template <class T>
std::vector<T> bminus_coords(const Matrix<T>& b) {
    std::vector<T> r;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) r.push_back(b(i, j));
    for (std::size_t i = 0; i + 1 < b.rows(); ++i) r.push_back(b(i, i));
    return r;
}
template <class T>
Matrix<T> bminus_from_coords(const std::vector<T>& y, std::size_t n) {
    Matrix<T> b(n, n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) b(i, j) = y[k++];
    T prod(1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b(i, i) = y[k++];
        prod = prod * b(i, i);
    }
    b(n - 1, n - 1) = T(1.0) / prod;
    return b;
}
std::size_t bminus_dim(int n);

// π_st restricted to B_- in the entry chart
Bivector pist_bminus_eval(const CMatrix& b_minus);

// Mixed product structure on (G/B) × B_- in the chart (flag coords ⊕ B_- coords)
Bivector mixed_pi_eval(const FlagPoint& fp, const CMatrix& b_minus);

// ---------------------------------------------------------------- verification helpers

// |J src Jᵀ − sign·dst| relative to the larger of the two sides (absolute when both are tiny)
double pushforward_deviation(const CMatrix& J, const CMatrix& src, const CMatrix& dst, double sign);

struct ChartMap {
    std::string source, target;
    std::function<std::vector<Jet>(const std::vector<Jet>&)> map;
};
CMatrix chart_jacobian(const ChartMap& phi, const std::vector<cplx>& x);

struct MapSample {
    CMatrix jacobian;
    Bivector src, dst;
};
CheckReport poisson_map_check(const std::string& id, const std::string& statement, const std::vector<MapSample>& pts,
                              double sign, double tol, int n);

// ---------------------------------------------------------------- structural checks

double multiplicativity_defect(const CMatrix& g, const CMatrix& h);
double ad_invariance_defect(const CMatrix& g);
// {{f1,f2},f3} + cyclic, using second-order jets of the observables
cplx jacobi_cyclic(const Observable& f1, const Observable& f2, const Observable& f3, const CMatrix& g,
                   const RMatrix& r);
// worst |cyclic sum| over all triples of coordinate functions g_ab
double jacobi_defect(const CMatrix& g, const RMatrix& r);
// residual of π_st on the conormal of C_v at c, relative to |Π(c)|
double coisotropy_defect(const CMatrix& c, const WeylElement& v, const WeylRep& vbar);
// (ϖ, ϖ_-) Poisson into π_1 × π_-1 at p
double weak_pair_defect(const CellPoint& p);
// image of Π(g) inside the tangent space of the double Bruhat cell
double cell_tangency_defect(const CellPoint& p);
// dim T_g G^{u,v} computed as (b + Ad_g b) ∩ (b_- + Ad_g b_-)
int cell_tangent_dim(const CMatrix& g);
// orthonormal columns spanning that intersection (right-trivialized, vec of x with x g tangent)
CMatrix cell_tangent_basis(const CMatrix& g);

// A submanifold with tangent columns `tangent` is coisotropic for the bivector `mat`
// when mat vanishes on its conormal.  Residual relative to max(1, |mat|).
double conormal_defect(const CMatrix& tangent, const CMatrix& mat);

CMatrix block_diag(const CMatrix& a, const CMatrix& b);

struct DressingReport {
    double support_defect = 0;   // triangular support of both expressions
    double formula_defect = 0;   // the two expressions agree
    double sharp_defect = 0;     // agrees with π^# of ξ^R
    int span_rank = 0;           // rank of all dressing vectors
    int pist_rank = 0;
};
DressingReport dressing_report(const CMatrix& g, const Tolerance& tol = {});

// ranks of dϖ and dϖ_- restricted to the leaf directions (image of Π)
std::pair<int, int> submersion_ranks(const CellPoint& p, const Tolerance& tol = {});

}  // namespace dbc
