#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dbc {

using cplx = std::complex<double>;

// ---------------------------------------------------------------- errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define DBC_DECLARE_ERROR(Name)                                           \
    class Name : public Error {                                           \
    public:                                                               \
        using Error::Error;                                               \
        const char* kind() const noexcept override { return #Name; }      \
    }

DBC_DECLARE_ERROR(BigCellError);
DBC_DECLARE_ERROR(SingularError);
DBC_DECLARE_ERROR(RankAmbiguityError);
DBC_DECLARE_ERROR(SamplingExhaustedError);
DBC_DECLARE_ERROR(FactorizationError);
DBC_DECLARE_ERROR(ComposabilityError);
DBC_DECLARE_ERROR(MomentMatchError);
DBC_DECLARE_ERROR(SchemaError);

#undef DBC_DECLARE_ERROR

struct Tolerance {
    double eq = 1e-9;
    double rank = 1e-10;
    double det = 1e-10;

    void validate() const;
};

// ---------------------------------------------------------------- RNG

// Seeded generator whose draws depend only on the engine bit stream, so
// results are reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
    // modulus uniform in [rmin, rmax], argument uniform
    cplx annulus(double rmin, double rmax) { return std::polar(uniform(rmin, rmax), uniform(-M_PI, M_PI)); }
    Rng split(std::uint64_t salt) { return Rng(bits() ^ (salt * 0x9E3779B97F4A7C15ull)); }

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------- Jet

// Forward-mode jet over C.  `first` and `second` may be empty, meaning zero;
// a jet built without second-order tracking must not be mixed with one that
// has it unless its own second derivatives vanish.
class Jet {
public:
    Jet() = default;
    Jet(cplx v) : value_(v) {}
    Jet(double v) : value_(v) {}

    static Jet variable(cplx value, std::size_t index, std::size_t nseeds, bool second = false);

    cplx value() const { return value_; }
    std::size_t seeds() const { return first_.size(); }
    bool has_second() const { return !second_.empty(); }
    cplx d(std::size_t k) const { return k < first_.size() ? first_[k] : cplx{}; }
    cplx dd(std::size_t i, std::size_t j) const;
    const std::vector<cplx>& first() const { return first_; }
    const std::vector<cplx>& second() const { return second_; }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a);

    Jet reciprocal() const;

private:
    cplx value_{};
    std::vector<cplx> first_;
    std::vector<cplx> second_;  // row-major seeds x seeds
};

inline cplx value_of(cplx z) { return z; }
inline cplx value_of(const Jet& j) { return j.value(); }

// ---------------------------------------------------------------- Matrix

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows);

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
        return m;
    }
    static Matrix diagonal(const std::vector<T>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<T>& data() const { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = -a.data_[k];
        return r;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

using CMatrix = Matrix<cplx>;
using JMatrix = Matrix<Jet>;

template <class A, class B>
auto operator*(const Matrix<A>& a, const Matrix<B>& b) {
    using R = decltype(std::declval<A>() * std::declval<B>());
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    Matrix<R> r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const A& aik = a(i, k);
            if (value_of(aik) == cplx{} && !std::is_same_v<A, Jet>) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

template <class T, class S>
Matrix<T> scaled(const Matrix<T>& m, const S& s) {
    Matrix<T> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j) * s;
    return r;
}

template <class T>
Matrix<T> lift(const CMatrix& m) {
    Matrix<T> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = T(m(i, j));
    return r;
}

template <class T>
CMatrix values(const Matrix<T>& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = value_of(m(i, j));
    return r;
}

CMatrix unit_matrix(std::size_t n, std::size_t i, std::size_t j);  // e_ij, 0-based
double max_abs(const CMatrix& m);
double frobenius(const CMatrix& m);
// max |a - b| / max(1, max|a|, max|b|)
double rel_dev(const CMatrix& a, const CMatrix& b);
bool is_finite(const CMatrix& m);

// ---------------------------------------------------------------- factorizations

template <class T>
struct LDU {
    Matrix<T> lower;
    std::vector<T> diag;
    Matrix<T> upper;

    Matrix<T> diag_matrix() const { return Matrix<T>::diagonal(diag); }
};

// g = [g]_- [g]_0 [g]_+ without pivoting.  Throws BigCellError when a pivot
// falls below tol_rank relative to the largest entry.
template <class T>
LDU<T> gaussian_decompose(const Matrix<T>& g, double tol_rank = Tolerance{}.rank) {
    const std::size_t n = g.rows();
    if (!g.square()) throw std::invalid_argument("gaussian_decompose: square matrix required");
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(value_of(g(i, j))));
    Matrix<T> m = g;
    LDU<T> r{Matrix<T>::identity(n), std::vector<T>(n), Matrix<T>::identity(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const T pivot = m(k, k);
        if (!(std::abs(value_of(pivot)) > tol_rank * scale))
            throw BigCellError("leading principal minor " + std::to_string(k + 1) + " vanishes");
        r.diag[k] = pivot;
        const T inv = T(1.0) / pivot;
        for (std::size_t i = k + 1; i < n; ++i) r.lower(i, k) = m(i, k) * inv;
        for (std::size_t j = k + 1; j < n; ++j) r.upper(k, j) = m(k, j) * inv;
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= r.lower(i, k) * m(k, j);
    }
    return r;
}

// Partial-pivot Gauss-Jordan.  Pivot choice uses values only, so jets
// differentiate the smooth branch selected at the base point.
template <class T>
Matrix<T> inverse(const Matrix<T>& g, double tol = Tolerance{}.rank) {
    const std::size_t n = g.rows();
    if (!g.square()) throw std::invalid_argument("inverse: square matrix required");
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(value_of(g(i, j))));
    Matrix<T> a = g;
    Matrix<T> inv = Matrix<T>::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(value_of(a(i, k))) > std::abs(value_of(a(p, k)))) p = i;
        if (!(std::abs(value_of(a(p, k))) > tol * scale)) throw SingularError("matrix is singular");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        const T piv = T(1.0) / a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) = a(k, j) * piv;
            inv(k, j) = inv(k, j) * piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const T f = a(i, k);
            if (value_of(f) == cplx{} && !std::is_same_v<T, Jet>) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

template <class T>
T determinant(const Matrix<T>& g) {
    const std::size_t n = g.rows();
    if (!g.square()) throw std::invalid_argument("determinant: square matrix required");
    Matrix<T> a = g;
    T det(1.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(value_of(a(i, k))) > std::abs(value_of(a(p, k)))) p = i;
        if (value_of(a(p, k)) == cplx{}) return T(0.0);
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det = det * a(k, k);
        const T inv = T(1.0) / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a(i, k) * inv;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

// k-th leading principal minor, k in 1..n
template <class T>
T leading_minor(const Matrix<T>& g, std::size_t k) {
    if (k == 0) return T(1.0);
    return determinant(g.block(0, 0, k, k));
}

template <class T>
Matrix<T> lower_part(const Matrix<T>& x) {  // strictly lower
    Matrix<T> r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) r(i, j) = x(i, j);
    return r;
}
template <class T>
Matrix<T> upper_part(const Matrix<T>& x) {  // strictly upper
    Matrix<T> r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = i + 1; j < x.cols(); ++j) r(i, j) = x(i, j);
    return r;
}
template <class T>
Matrix<T> diag_part(const Matrix<T>& x) {
    Matrix<T> r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) r(i, i) = x(i, i);
    return r;
}

CMatrix solve_and_invert(const CMatrix& g, const Tolerance& tol = {});

std::vector<double> singular_values(const CMatrix& m);
int rank_tol(const CMatrix& m, const Tolerance& tol = {});
// number of singular values above an absolute threshold
int rank_abs(const CMatrix& m, double threshold);
double condition_number(const CMatrix& m);
// orthonormal basis (as columns) of the null space of m, relative threshold
CMatrix null_space(const CMatrix& m, double rel_tol);
// orthonormal basis (as columns) of the column span of m, relative threshold
CMatrix column_span(const CMatrix& m, double rel_tol);

// ---------------------------------------------------------------- AD helpers

using Observable = std::function<Jet(const JMatrix&)>;

// Matrix of jets g + sum_k eps_k seeds[k].
JMatrix seeded(const CMatrix& g, const std::vector<CMatrix>& seeds, bool second = false);
Jet jet_eval(const Observable& f, const CMatrix& g, const std::vector<CMatrix>& seeds, bool second = false);
// right-translates e_ij g, row-major over (i,j)
std::vector<CMatrix> right_frame(const CMatrix& g);
// rows = outputs, cols = seeds
CMatrix jacobian(const std::vector<Jet>& outputs, std::size_t nseeds);
std::vector<Jet> variables(const std::vector<cplx>& base, bool second = false);

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

}  // namespace dbc
