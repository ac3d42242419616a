#include "dbc/rootdata.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace dbc {

// ---------------------------------------------------------------- WeylElement

namespace {

std::vector<int> compute_reduced_word(std::vector<int> w) {
    // peel right descents: w = (w s_i) s_i whenever w(i) > w(i+1)
    std::vector<int> word;
    for (;;) {
        std::size_t i = 0;
        while (i + 1 < w.size() && w[i] < w[i + 1]) ++i;
        if (i + 1 >= w.size()) break;
        std::swap(w[i], w[i + 1]);
        word.push_back(static_cast<int>(i) + 1);
    }
    std::reverse(word.begin(), word.end());
    return word;
}

}  // namespace

WeylElement::WeylElement(std::vector<int> one_line) : perm_(std::move(one_line)) {
    std::vector<int> sorted = perm_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i) + 1) throw SchemaError("not a permutation of 1..n");
    if (perm_.empty()) throw SchemaError("empty permutation");
    word_ = compute_reduced_word(perm_);
}

WeylElement WeylElement::identity(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    return WeylElement(p);
}

WeylElement WeylElement::simple(int n, int k) {
    if (k < 1 || k >= n) throw SchemaError("simple reflection index out of range");
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    std::swap(p[k - 1], p[k]);
    return WeylElement(p);
}

WeylElement WeylElement::longest(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = n - i;
    return WeylElement(p);
}

WeylElement WeylElement::from_word(int n, const std::vector<int>& word) {
    WeylElement w = identity(n);
    for (int k : word) w = w * simple(n, k);
    return w;
}

std::vector<WeylElement> WeylElement::all(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    std::vector<WeylElement> r;
    do r.emplace_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return r;
}

std::vector<std::pair<int, int>> WeylElement::inversions() const {
    std::vector<std::pair<int, int>> r;
    for (int i = 1; i <= n(); ++i)
        for (int j = i + 1; j <= n(); ++j)
            if ((*this)(i) > (*this)(j)) r.emplace_back(i, j);
    return r;
}

WeylElement WeylElement::inverse() const {
    std::vector<int> p(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) p[perm_[i] - 1] = static_cast<int>(i) + 1;
    return WeylElement(p);
}

WeylElement operator*(const WeylElement& a, const WeylElement& b) {
    if (a.n() != b.n()) throw SchemaError("Weyl elements of different rank");
    std::vector<int> p(a.perm_.size());
    for (int i = 1; i <= a.n(); ++i) p[i - 1] = a(b(i));
    return WeylElement(p);
}

CMatrix WeylElement::permutation_matrix() const {
    CMatrix m(n(), n());
    for (int k = 1; k <= n(); ++k) m((*this)(k) - 1, k - 1) = 1.0;
    return m;
}

std::string WeylElement::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < perm_.size(); ++i) os << (i ? "," : "") << perm_[i];
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------- torus

TorusElement::TorusElement(std::vector<cplx> diag, double tol) : diag_(std::move(diag)) {
    cplx prod = 1.0;
    for (cplx z : diag_) {
        if (z == cplx{}) throw SchemaError("torus entries must be nonzero");
        prod *= z;
    }
    if (std::abs(prod - 1.0) > tol) throw SchemaError("torus element must have determinant 1");
}

TorusElement TorusElement::identity(int n) { return TorusElement(std::vector<cplx>(n, 1.0)); }

TorusElement TorusElement::from_matrix(const CMatrix& m, double tol) {
    std::vector<cplx> d(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) d[i] = m(i, i);
    return TorusElement(d, tol);
}

CMatrix TorusElement::matrix() const { return CMatrix::diagonal(diag_); }

TorusElement TorusElement::inverse() const {
    std::vector<cplx> d(diag_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 / diag_[i];
    return TorusElement(d, 1e-6);
}

TorusElement operator*(const TorusElement& a, const TorusElement& b) {
    std::vector<cplx> d(a.diag_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.diag_[i] * b.diag_[i];
    return TorusElement(d, 1e-6);
}

bool TorusElement::near(const TorusElement& o, double tol) const {
    for (std::size_t i = 0; i < diag_.size(); ++i)
        if (std::abs(diag_[i] - o.diag_[i]) > tol * std::max(1.0, std::abs(diag_[i]))) return false;
    return true;
}

TorusElement torus_conjugate(const TorusElement& t, const WeylElement& w) {
    std::vector<cplx> d(t.n());
    for (int i = 1; i <= t.n(); ++i) d[i - 1] = t[w(i) - 1];
    return TorusElement(d, 1e-6);
}

cplx CharacterVector::evaluate(const TorusElement& t) const { return evaluate_diag(t.diag()); }

CharacterVector CharacterVector::fundamental(int n, int k) {
    CharacterVector c{std::vector<std::int64_t>(n, 0)};
    for (int i = 0; i < k; ++i) c.exps[i] = 1;
    return c;
}

WeylRep weyl_representative(const WeylElement& w, std::uint64_t choice_seed) {
    const int n = w.n();
    CMatrix m = CMatrix::identity(n);
    for (int k : w.reduced_word()) {
        CMatrix s = CMatrix::identity(n);
        s(k - 1, k - 1) = 0.0;
        s(k, k) = 0.0;
        s(k, k - 1) = 1.0;
        s(k - 1, k) = -1.0;
        m = m * s;
    }
    TorusElement t = TorusElement::identity(n);
    if (choice_seed != 0) {
        Rng rng(choice_seed);
        std::vector<cplx> d(n);
        cplx prod = 1.0;
        for (int i = 0; i + 1 < n; ++i) {
            d[i] = rng.annulus(0.5, 2.0);
            prod *= d[i];
        }
        d[n - 1] = 1.0 / prod;
        t = TorusElement(d);
        m = t.matrix() * m;
    }
    return WeylRep{w, m, t, choice_seed};
}

// ---------------------------------------------------------------- Bruhat order

namespace {

int rank_count(const WeylElement& w, int i, int j) {
    int r = 0;
    for (int k = 1; k <= j; ++k)
        if (w(k) >= i) ++r;
    return r;
}

}  // namespace

bool bruhat_leq(const WeylElement& w1, const WeylElement& w2) {
    if (w1.n() != w2.n()) throw SchemaError("Bruhat comparison across ranks");
    for (int i = 1; i <= w1.n(); ++i)
        for (int j = 1; j <= w1.n(); ++j)
            if (rank_count(w1, i, j) > rank_count(w2, i, j)) return false;
    return true;
}

std::set<int> fixed_simples(const WeylElement& w) {
    std::set<int> r;
    int running_max = 0;
    for (int k = 1; k < w.n(); ++k) {
        running_max = std::max(running_max, w(k));
        if (running_max == k) r.insert(k);
    }
    return r;
}

// ---------------------------------------------------------------- lattices

SmithForm smith_normal_form(const IntMatrix& m, std::size_t cols) {
    const std::size_t rows = m.size();
    IntMatrix a = m;
    for (const auto& r : a)
        if (r.size() != cols) throw SchemaError("ragged integer matrix");
    IntMatrix u(rows, std::vector<std::int64_t>(rows, 0)), v(cols, std::vector<std::int64_t>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;
    for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

    auto swap_rows = [&](std::size_t i, std::size_t k) {
        std::swap(a[i], a[k]);
        std::swap(u[i], u[k]);
    };
    auto swap_cols = [&](std::size_t j, std::size_t k) {
        for (auto& r : a) std::swap(r[j], r[k]);
        for (auto& r : v) std::swap(r[j], r[k]);
    };

    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (pi == rows || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        swap_rows(t, pi);
        swap_cols(t, pj);
        for (;;) {
            for (std::size_t i = t + 1; i < rows; ++i) {
                const std::int64_t q = a[i][t] / a[t][t];
                if (q == 0) continue;
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                for (std::size_t j = 0; j < rows; ++j) u[i][j] -= q * u[t][j];
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const std::int64_t q = a[t][j] / a[t][t];
                if (q == 0) continue;
                for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                for (std::size_t i = 0; i < cols; ++i) v[i][j] -= q * v[i][t];
            }
            std::size_t ri = rows, cj = cols;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (a[i][t] != 0 && (ri == rows || std::llabs(a[i][t]) < std::llabs(a[ri][t]))) ri = i;
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[t][j] != 0 && (cj == cols || std::llabs(a[t][j]) < std::llabs(a[t][cj]))) cj = j;
            if (ri == rows && cj == cols) break;
            if (ri != rows && (cj == cols || std::llabs(a[ri][t]) <= std::llabs(a[t][cj])))
                swap_rows(t, ri);
            else
                swap_cols(t, cj);
        }
    }
    return SmithForm{a, u, v, static_cast<int>(t)};
}

std::vector<std::vector<std::int64_t>> lattice_kernel(const IntMatrix& m, std::size_t cols) {
    const SmithForm s = smith_normal_form(m, cols);
    std::vector<std::vector<std::int64_t>> basis;
    for (std::size_t j = s.rank; j < cols; ++j) {
        std::vector<std::int64_t> x(cols);
        for (std::size_t i = 0; i < cols; ++i) x[i] = s.v[i][j];
        basis.push_back(x);
    }
    return basis;
}

std::vector<std::vector<std::int64_t>> lattice_kernel(const IntMatrix& m) {
    if (m.empty()) throw SchemaError("lattice_kernel: column count unknown for empty matrix");
    return lattice_kernel(m, m[0].size());
}

std::vector<std::vector<std::int64_t>> lattice_row_basis(const IntMatrix& rows_in, std::size_t cols) {
    IntMatrix a = rows_in;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        for (;;) {
            std::size_t p = a.size();
            for (std::size_t i = r; i < a.size(); ++i)
                if (a[i][c] != 0 && (p == a.size() || std::llabs(a[i][c]) < std::llabs(a[p][c]))) p = i;
            if (p == a.size()) break;
            std::swap(a[r], a[p]);
            bool clean = true;
            for (std::size_t i = r + 1; i < a.size(); ++i) {
                const std::int64_t q = a[i][c] / a[r][c];
                for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) clean = false;
            }
            if (clean) {
                ++r;
                break;
            }
        }
    }
    a.resize(r);
    return a;
}

std::vector<TorusElement> enumerate_order2(int n) {
    if (n < 1 || n > 8) throw SchemaError("enumerate_order2 supports n <= 8");
    std::vector<TorusElement> r;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) % 2) continue;
        std::vector<cplx> d(n, 1.0);
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) d[i] = -1.0;
        r.emplace_back(d);
    }
    return r;
}

nlohmann::json to_json(const WeylElement& w) { return w.one_line(); }

WeylElement weyl_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw SchemaError("Weyl element must be an integer array");
    std::vector<int> p;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw SchemaError("Weyl element must be an integer array");
        p.push_back(x.get<int>());
    }
    return WeylElement(p);
}

}  // namespace dbc
