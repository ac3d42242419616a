#pragma once

#include <functional>
#include <map>
#include <set>

#include "dbc/groupoid.hpp"

namespace dbc {

// Δ_{ω_k}: leading principal k×k minor, k = 1..n-1
cplx delta_minor(const CMatrix& g, int k);

// I(u,v) = I(u) ∩ I(v), simple indices fixed by both
std::set<int> fixed_pair(const WeylElement& u, const WeylElement& v);

// diagonal of [ū^{-1}g]_0 ([g v̄^{-1}]_0)^v
template <class T>
std::vector<T> chi_rep_diag(const Matrix<T>& g, const WeylRep& ubar, const WeylRep& vbar) {
    const LDU<T> a = gaussian_decompose(Matrix<T>(inverse(ubar.matrix) * g));
    const LDU<T> b = gaussian_decompose(Matrix<T>(g * inverse(vbar.matrix)));
    const WeylElement& v = vbar.weyl;
    std::vector<T> d(a.diag.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.diag[i] * b.diag[v(static_cast<int>(i) + 1) - 1];
    return d;
}
TorusElement chi_rep(const CellPoint& p);

// Characters of T vanishing on T^{u,v} = {(t^u)^{-1} t^v}, as a Z-basis with
// last exponent 0 (characters are taken modulo the all-ones vector).
struct TorusSubgroupTest {
    WeylElement u, v;
    std::vector<CharacterVector> kernel_chars;

    bool member(const TorusElement& t, double tol) const;
    int subtorus_dim() const { return u.n() - 1 - static_cast<int>(kernel_chars.size()); }
};
TorusSubgroupTest torus_subgroup(const WeylElement& u, const WeylElement& v);
bool Tuv_member(const TorusElement& t, const WeylElement& u, const WeylElement& v, double tol = Tolerance{}.eq);

struct LeafInvariant {
    TorusElement chi_rep;
    std::map<int, cplx> minors;  // α ∈ I(u,v)
};
LeafInvariant leaf_invariant(const CellPoint& p);

// max over kernel characters λ of |λ(χ1 χ2^{-1}) − 1| and over I(u,v) of the
// relative minor mismatch; infinite across different cells
double leaf_distance(const CellPoint& p1, const CellPoint& p2);
// χ classes agree modulo T^{u,v} and the minors over I(u,v) agree
bool same_leaf(const CellPoint& p1, const CellPoint& p2, double tol = Tolerance{}.eq);

// numerical rank of π_st at p, and the predicted leaf dimension l(u)+l(v)+dim T^{u,v}
int leaf_rank(const CellPoint& p, const Tolerance& tol = {});
int leaf_dimension(const WeylElement& u, const WeylElement& v);

struct LeafCensus {
    WeylElement u, v;
    std::set<int> fixed;                              // I(u,v)
    std::function<bool(const TorusElement&)> stab_test;  // T_stab membership
    int count_per_level = 0;                          // 2^{|I(u,v)|}
    int stab_order2 = 0;                              // |T^(2) ∩ T_stab|
    int order2_quotient = 0;                          // |T^(2)| / |T^(2) ∩ T_stab|
};
LeafCensus leaf_census(const WeylElement& u, const WeylElement& v, double tol = Tolerance{}.eq);

// |Δ_α(g)^2 − Δ_α(ū)Δ_α(v̄) χ(g)^{ω_α}| over α ∈ I(u,v), relative with floor 1e-12
double square_identity_defect(const CellPoint& p);

// |π^#(dΔ_α)| for α ∈ I(u,v) and |π^#(d(λ∘χ))| for kernel characters λ, relative to |df|·|π|
double minor_casimir_defect(const CellPoint& p);
double chi_casimir_defect(const CellPoint& p);

// Right torus translate g·a·ε of a point of G^{v,v} onto the leaf Σ^v̄:
// a is the principal square root of χ(g)^{-1}, ε ∈ T^(2) fixes the minor signs.
struct LeafProjection {
    CellPoint point;
    TorusElement a;
    TorusElement eps;
};
LeafProjection project_to_leaf(const CellPoint& p, const Tolerance& tol = {});

// Σ c_i ρ(ξ_i)(g) with ξ_i the dual basis
CMatrix dressing_field(const CMatrix& g, const std::vector<cplx>& coeffs);
// rescales coeffs so that |field(g)| = rel_speed·|g|
std::vector<cplx> normalized_coeffs(const CMatrix& g, std::vector<cplx> coeffs, double rel_speed);
// fourth-order Runge–Kutta along the dressing field, projected back to det 1 at the end
CMatrix dressing_flow(const CMatrix& g, const std::vector<cplx>& coeffs, double step, int steps);

// Σ^v̄ as a symplectic groupoid: membership, closure under μ and ι,
// nondegeneracy, and invariance of the leaves Σ^{u,v} under both actions.
std::vector<CheckReport> leaf_groupoid_check(const WeylElement& v, std::uint64_t seed, int samples,
                                             const Tolerance& tol = {});

// Casimirs, square identity, rank and count cross-check on G^{u,v}
std::vector<CheckReport> leaf_checks(const WeylElement& u, const WeylElement& v, std::uint64_t seed, int samples,
                                     const Tolerance& tol = {});

// {u, v, I_uv, count_per_level, stab_order, samples, checks: [...]}
nlohmann::json leaf_report(const WeylElement& u, const WeylElement& v, std::uint64_t seed, int samples,
                           const Tolerance& tol = {});

}  // namespace dbc
