#pragma once

#include <optional>
#include <utility>

#include "dbc/rootdata.hpp"

namespace dbc {

// Points within this factor of the largest singular value of g (but above
// tol_rank) are too close to a smaller cell to classify.
inline constexpr double kRankAmbiguityBand = 1e-7;

struct SamplingOptions {
    double param_min = 0.3;   // annulus for elementary-factor parameters
    double param_max = 3.0;
    double torus_min = 0.5;   // annulus for torus entries
    double torus_max = 2.0;
    double max_condition = 1e4;
    int retries = 20;
};

WeylElement bruhat_u(const CMatrix& g, const Tolerance& tol = {});
WeylElement bruhat_v(const CMatrix& g, const Tolerance& tol = {});
std::pair<WeylElement, WeylElement> bruhat_cell_of(const CMatrix& g, const Tolerance& tol = {});

struct CellPoint {
    CMatrix g;
    WeylElement u, v;
    WeylRep ubar, vbar;
    std::optional<std::pair<CMatrix, CMatrix>> left;   // (c, b),  g = c b
    std::optional<std::pair<CMatrix, CMatrix>> right;  // (b_-, c'), g = b_- c'

    // classifies g, checks the labels of the representatives and caches both
    // factorizations
    static CellPoint make(const CMatrix& g, const WeylRep& ubar, const WeylRep& vbar, const Tolerance& tol = {});
    static CellPoint make(const CMatrix& g, const Tolerance& tol = {});

    const CMatrix& c() const { return left->first; }
    const CMatrix& b() const { return left->second; }
    const CMatrix& b_minus() const { return right->first; }
    const CMatrix& c_prime() const { return right->second; }
};

// g = c b with c = u [u^-1 g]_-, b = [u^-1 g]_0 [u^-1 g]_+
template <class T>
std::pair<Matrix<T>, Matrix<T>> left_factor(const Matrix<T>& g, const CMatrix& ubar, const CMatrix& ubar_inv,
                                            double tol_rank = Tolerance{}.rank) {
    const LDU<T> f = gaussian_decompose(ubar_inv * g, tol_rank);
    return {ubar * f.lower, f.diag_matrix() * f.upper};
}

// g = b_- c' with b_- = [g v^-1]_- [g v^-1]_0, c' = [g v^-1]_+ v
template <class T>
std::pair<Matrix<T>, Matrix<T>> right_factor(const Matrix<T>& g, const CMatrix& vbar, const CMatrix& vbar_inv,
                                             double tol_rank = Tolerance{}.rank) {
    const LDU<T> f = gaussian_decompose(g * vbar_inv, tol_rank);
    return {f.lower * f.diag_matrix(), f.upper * vbar};
}

std::pair<CMatrix, CMatrix> left_C_factor(const CellPoint& p, const Tolerance& tol = {});
std::pair<CMatrix, CMatrix> right_C_factor(const CellPoint& p, const Tolerance& tol = {});

// Positions (a,b), a<b, 0-based, with u^-1(a) > u^-1(b), row-major.  These are
// the free entries of N ∩ u N_- u^-1, so c = n u with n supported there.
std::vector<std::pair<int, int>> flag_positions(const WeylElement& u);

// A point of BuB/B given by its representative c = n u in C_u; coords are the
// entries of n = c u^-1 at flag_positions(u).
struct FlagPoint {
    WeylElement cell;
    std::vector<cplx> coords;
    WeylRep rep;

    CMatrix matrix() const;
    bool near(const FlagPoint& o, double tol) const;
};

// Chart coordinates of g.B in the chart of cell u (g need only satisfy
// u^-1 g in the big cell, which makes this a smooth extension off the cell).
template <class T>
std::vector<T> flag_coords(const Matrix<T>& g, const WeylElement& u, const WeylRep& ubar,
                           double tol_rank = Tolerance{}.rank) {
    const CMatrix uinv = inverse(ubar.matrix);
    const LDU<T> f = gaussian_decompose(uinv * g, tol_rank);
    const Matrix<T> n = ubar.matrix * f.lower * uinv;
    std::vector<T> r;
    for (auto [a, b] : flag_positions(u)) r.push_back(n(a, b));
    return r;
}

// Chart coordinates of B_-.g in the chart of cell v: entries of [g v^-1]_+.
template <class T>
std::vector<T> coflag_coords(const Matrix<T>& g, const WeylElement& v, const WeylRep& vbar,
                             double tol_rank = Tolerance{}.rank) {
    const CMatrix vinv = inverse(vbar.matrix);
    const LDU<T> f = gaussian_decompose(g * vinv, tol_rank);
    std::vector<T> r;
    for (auto [a, b] : flag_positions(v)) r.push_back(f.upper(a, b));
    return r;
}

// c = n(coords) u
template <class T>
Matrix<T> flag_matrix(const std::vector<T>& coords, const WeylElement& u, const WeylRep& ubar) {
    const auto pos = flag_positions(u);
    if (pos.size() != coords.size()) throw SchemaError("flag coordinate count does not match the cell");
    Matrix<T> n = Matrix<T>::identity(u.n());
    for (std::size_t k = 0; k < pos.size(); ++k) n(pos[k].first, pos[k].second) = coords[k];
    return n * ubar.matrix;
}

// The FlagPoint of g.B, in the canonical chart of its cell.
FlagPoint flag_canonical(const CMatrix& g, const Tolerance& tol = {});
// The same, when the cell is already known.
FlagPoint flag_in_cell(const CMatrix& g, const WeylElement& u, const Tolerance& tol = {});

CellPoint sample_double_cell(const WeylElement& u, const WeylElement& v, std::uint64_t rng_seed,
                             const Tolerance& tol = {}, const SamplingOptions& opt = {});
CellPoint sample_double_cell(const WeylElement& u, const WeylElement& v, const WeylRep& ubar, const WeylRep& vbar,
                             std::uint64_t rng_seed, const Tolerance& tol = {}, const SamplingOptions& opt = {});

// random elements for property tests
TorusElement random_torus(int n, Rng& rng, double rmin = 0.5, double rmax = 2.0);
CMatrix random_upper(int n, Rng& rng);   // det 1
CMatrix random_lower(int n, Rng& rng);   // det 1
CMatrix random_sl(int n, Rng& rng, double max_condition = 1e4);
CMatrix random_C(const WeylElement& v, const WeylRep& vbar, Rng& rng);  // point of C_v

nlohmann::json to_json(const CellPoint& p);
nlohmann::json to_json(const FlagPoint& f);

}  // namespace dbc
