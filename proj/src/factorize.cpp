#include "dbc/factorize.hpp"

#include <algorithm>

namespace dbc {

namespace {

// rank of every lower-left block g[i..n, 1..j], 1-based; R[i][j], R[n+1][*] = R[*][0] = 0
std::vector<std::vector<int>> lower_left_ranks(const CMatrix& g, const Tolerance& tol) {
    const int n = static_cast<int>(g.rows());
    const auto sv = singular_values(g);
    const double top = sv.empty() ? 0.0 : sv.front();
    const double threshold = tol.rank * top;
    const double band = kRankAmbiguityBand * top;
    std::vector<std::vector<int>> R(n + 2, std::vector<int>(n + 1, 0));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const auto s = singular_values(g.block(i - 1, 0, n - i + 1, j));
            int r = 0;
            for (double x : s) {
                if (x > threshold && x < band)
                    throw RankAmbiguityError("submatrix rank is ambiguous (point near a smaller cell)");
                if (x > threshold) ++r;
            }
            R[i][j] = r;
        }
    return R;
}

}  // namespace

WeylElement bruhat_u(const CMatrix& g, const Tolerance& tol) {
    const int n = static_cast<int>(g.rows());
    if (!g.square() || n < 1) throw SchemaError("bruhat_cell_of: square matrix required");
    const auto R = lower_left_ranks(g, tol);
    std::vector<int> perm(n, 0);
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const int jump = R[i][j] - R[i][j - 1] - R[i + 1][j] + R[i + 1][j - 1];
            if (jump == 1) {
                if (perm[j - 1] != 0) throw RankAmbiguityError("inconsistent rank pattern");
                perm[j - 1] = i;
            } else if (jump != 0) {
                throw RankAmbiguityError("inconsistent rank pattern");
            }
        }
        if (perm[j - 1] == 0) throw RankAmbiguityError("inconsistent rank pattern (singular matrix?)");
    }
    WeylElement u;
    try {
        u = WeylElement(perm);
    } catch (const SchemaError&) {
        throw RankAmbiguityError("rank pattern is not a permutation pattern");
    }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            int expected = 0;
            for (int k = 1; k <= j; ++k)
                if (u(k) >= i) ++expected;
            if (expected != R[i][j]) throw RankAmbiguityError("rank pattern disagrees with its permutation");
        }
    return u;
}

WeylElement bruhat_v(const CMatrix& g, const Tolerance& tol) {
    // w0 (B_- v B_-) w0 = B (w0 v w0) B
    const int n = static_cast<int>(g.rows());
    const WeylElement w0 = WeylElement::longest(n);
    const CMatrix P = w0.permutation_matrix();
    const WeylElement u = bruhat_u(P * g * P, tol);
    return w0 * u * w0;
}

std::pair<WeylElement, WeylElement> bruhat_cell_of(const CMatrix& g, const Tolerance& tol) {
    return {bruhat_u(g, tol), bruhat_v(g, tol)};
}

CellPoint CellPoint::make(const CMatrix& g, const WeylRep& ubar, const WeylRep& vbar, const Tolerance& tol) {
    if (std::abs(determinant(g) - 1.0) > tol.det * std::max(1.0, std::pow(max_abs(g), g.rows())))
        throw SchemaError("group element must have determinant 1");
    auto [u, v] = bruhat_cell_of(g, tol);
    if (u != ubar.weyl || v != vbar.weyl)
        throw FactorizationError("point lies in G^{" + u.str() + "," + v.str() + "}, not in the cell of the representatives");
    CellPoint p{g, u, v, ubar, vbar, {}, {}};
    p.left = left_C_factor(p, tol);
    p.right = right_C_factor(p, tol);
    return p;
}

CellPoint CellPoint::make(const CMatrix& g, const Tolerance& tol) {
    auto [u, v] = bruhat_cell_of(g, tol);
    return make(g, weyl_representative(u), weyl_representative(v), tol);
}

std::pair<CMatrix, CMatrix> left_C_factor(const CellPoint& p, const Tolerance& tol) {
    return left_factor(p.g, p.ubar.matrix, inverse(p.ubar.matrix), tol.rank);
}

std::pair<CMatrix, CMatrix> right_C_factor(const CellPoint& p, const Tolerance& tol) {
    return right_factor(p.g, p.vbar.matrix, inverse(p.vbar.matrix), tol.rank);
}

std::vector<std::pair<int, int>> flag_positions(const WeylElement& u) {
    const WeylElement ui = u.inverse();
    std::vector<std::pair<int, int>> r;
    for (int a = 1; a <= u.n(); ++a)
        for (int b = a + 1; b <= u.n(); ++b)
            if (ui(a) > ui(b)) r.emplace_back(a - 1, b - 1);
    return r;
}

CMatrix FlagPoint::matrix() const { return flag_matrix(coords, cell, rep); }

bool FlagPoint::near(const FlagPoint& o, double tol) const {
    if (cell != o.cell || coords.size() != o.coords.size()) return false;
    for (std::size_t k = 0; k < coords.size(); ++k)
        if (std::abs(coords[k] - o.coords[k]) > tol * std::max({1.0, std::abs(coords[k]), std::abs(o.coords[k])}))
            return false;
    return true;
}

FlagPoint flag_in_cell(const CMatrix& g, const WeylElement& u, const Tolerance& tol) {
    WeylRep rep = weyl_representative(u);
    return FlagPoint{u, flag_coords(g, u, rep, tol.rank), rep};
}

FlagPoint flag_canonical(const CMatrix& g, const Tolerance& tol) { return flag_in_cell(g, bruhat_u(g, tol), tol); }

// ---------------------------------------------------------------- sampling

TorusElement random_torus(int n, Rng& rng, double rmin, double rmax) {
    std::vector<cplx> d(n);
    cplx prod = 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        d[i] = rng.annulus(rmin, rmax);
        prod *= d[i];
    }
    d[n - 1] = 1.0 / prod;
    return TorusElement(d);
}

CMatrix random_upper(int n, Rng& rng) {
    CMatrix b = random_torus(n, rng).matrix();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b(i, j) = rng.annulus(0.0, 1.5);
    return b;
}

CMatrix random_lower(int n, Rng& rng) { return random_upper(n, rng).transpose(); }

CMatrix random_sl(int n, Rng& rng, double max_condition) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        CMatrix g = random_lower(n, rng) * random_upper(n, rng);
        // a Weyl element mixes in non-big-cell points
        if (rng.uniform() < 0.5) {
            std::vector<int> p(n);
            for (int i = 0; i < n; ++i) p[i] = i + 1;
            for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.index(i + 1)]);
            g = g * weyl_representative(WeylElement(p)).matrix * random_upper(n, rng);
        }
        if (condition_number(g) <= max_condition) return g;
    }
    throw SamplingExhaustedError("could not sample a well-conditioned SL(n) element");
}

CMatrix random_C(const WeylElement& v, const WeylRep& vbar, Rng& rng) {
    std::vector<cplx> coords;
    for (std::size_t k = 0; k < flag_positions(v).size(); ++k) coords.push_back(rng.annulus(0.3, 2.0));
    return flag_matrix(coords, v, vbar);
}

CellPoint sample_double_cell(const WeylElement& u, const WeylElement& v, const WeylRep& ubar, const WeylRep& vbar,
                             std::uint64_t rng_seed, const Tolerance& tol, const SamplingOptions& opt) {
    const int n = u.n();
    Rng rng(rng_seed);
    for (int attempt = 0; attempt <= opt.retries; ++attempt) {
        CMatrix g = random_torus(n, rng, opt.torus_min, opt.torus_max).matrix();
        // lower elementary factors along u, upper ones along v
        for (int k : u.reduced_word()) {
            CMatrix y = CMatrix::identity(n);
            y(k, k - 1) = rng.annulus(opt.param_min, opt.param_max);
            g = g * y;
        }
        for (int k : v.reduced_word()) {
            CMatrix x = CMatrix::identity(n);
            x(k - 1, k) = rng.annulus(opt.param_min, opt.param_max);
            g = g * x;
        }
        if (condition_number(g) > opt.max_condition) continue;
        try {
            return CellPoint::make(g, ubar, vbar, tol);
        } catch (const RankAmbiguityError&) {
        } catch (const FactorizationError&) {
        } catch (const BigCellError&) {
        }
    }
    throw SamplingExhaustedError("no valid sample of G^{" + u.str() + "," + v.str() + "} after retries");
}

CellPoint sample_double_cell(const WeylElement& u, const WeylElement& v, std::uint64_t rng_seed, const Tolerance& tol,
                             const SamplingOptions& opt) {
    return sample_double_cell(u, v, weyl_representative(u), weyl_representative(v), rng_seed, tol, opt);
}

nlohmann::json to_json(const CellPoint& p) {
    return {{"g", to_json(p.g)},
            {"u", to_json(p.u)},
            {"v", to_json(p.v)},
            {"u_rep_seed", p.ubar.seed},
            {"v_rep_seed", p.vbar.seed}};
}

nlohmann::json to_json(const FlagPoint& f) {
    nlohmann::json c = nlohmann::json::array();
    for (cplx z : f.coords) c.push_back(complex_to_json(z));
    return {{"cell", to_json(f.cell)}, {"coords", c}, {"rep_seed", f.rep.seed}};
}

}  // namespace dbc
