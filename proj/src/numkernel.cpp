#include "dbc/numkernel.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace dbc {

void Tolerance::validate() const {
    if (!(eq > 0) || !(rank > 0) || !(det > 0)) throw SchemaError("tolerances must be strictly positive");
}

// ---------------------------------------------------------------- Jet

Jet Jet::variable(cplx value, std::size_t index, std::size_t nseeds, bool second) {
    Jet j(value);
    j.first_.assign(nseeds, cplx{});
    j.first_.at(index) = 1.0;
    if (second) j.second_.assign(nseeds * nseeds, cplx{});
    return j;
}

cplx Jet::dd(std::size_t i, std::size_t j) const {
    const std::size_t k = first_.size();
    if (second_.empty() || i >= k || j >= k) return {};
    return second_[i * k + j];
}

namespace {

void grow(std::vector<cplx>& v, std::size_t n) {
    if (v.size() < n) v.resize(n, cplx{});
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
    value_ += o.value_;
    if (!o.first_.empty()) {
        grow(first_, o.first_.size());
        for (std::size_t k = 0; k < o.first_.size(); ++k) first_[k] += o.first_[k];
    }
    if (!o.second_.empty()) {
        if (second_.empty()) second_.assign(o.second_.size(), cplx{});
        for (std::size_t k = 0; k < o.second_.size(); ++k) second_[k] += o.second_[k];
    }
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    value_ -= o.value_;
    if (!o.first_.empty()) {
        grow(first_, o.first_.size());
        for (std::size_t k = 0; k < o.first_.size(); ++k) first_[k] -= o.first_[k];
    }
    if (!o.second_.empty()) {
        if (second_.empty()) second_.assign(o.second_.size(), cplx{});
        for (std::size_t k = 0; k < o.second_.size(); ++k) second_[k] -= o.second_[k];
    }
    return *this;
}

Jet operator-(const Jet& a) {
    Jet r = a;
    r.value_ = -r.value_;
    for (auto& x : r.first_) x = -x;
    for (auto& x : r.second_) x = -x;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.value_ * b.value_);
    const std::size_t k = std::max(a.first_.size(), b.first_.size());
    if (k == 0) return r;
    r.first_.assign(k, cplx{});
    for (std::size_t i = 0; i < a.first_.size(); ++i) r.first_[i] += b.value_ * a.first_[i];
    for (std::size_t i = 0; i < b.first_.size(); ++i) r.first_[i] += a.value_ * b.first_[i];
    if (a.second_.empty() && b.second_.empty()) return r;
    r.second_.assign(k * k, cplx{});
    if (!a.second_.empty())
        for (std::size_t i = 0; i < a.second_.size(); ++i) r.second_[i] += b.value_ * a.second_[i];
    if (!b.second_.empty())
        for (std::size_t i = 0; i < b.second_.size(); ++i) r.second_[i] += a.value_ * b.second_[i];
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) r.second_[i * k + j] += a.d(i) * b.d(j) + a.d(j) * b.d(i);
    return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet Jet::reciprocal() const {
    const cplx inv = 1.0 / value_;
    Jet r(inv);
    const std::size_t k = first_.size();
    if (k == 0) return r;
    const cplx inv2 = inv * inv;
    r.first_.resize(k);
    for (std::size_t i = 0; i < k; ++i) r.first_[i] = -inv2 * first_[i];
    if (second_.empty()) return r;
    r.second_.resize(k * k);
    const cplx inv3 = 2.0 * inv2 * inv;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            r.second_[i * k + j] = -inv2 * second_[i * k + j] + inv3 * first_[i] * first_[j];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.first_.empty()) {
        Jet r = a;
        const cplx inv = 1.0 / b.value_;
        r.value_ *= inv;
        for (auto& x : r.first_) x *= inv;
        for (auto& x : r.second_) x *= inv;
        return r;
    }
    return a * b.reciprocal();
}

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

// ---------------------------------------------------------------- matrix utils

CMatrix unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
    CMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

double max_abs(const CMatrix& m) {
    double r = 0;
    for (const auto& x : m.data()) r = std::max(r, std::abs(x));
    return r;
}

double frobenius(const CMatrix& m) {
    double r = 0;
    for (const auto& x : m.data()) r += std::norm(x);
    return std::sqrt(r);
}

double rel_dev(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("rel_dev: shape mismatch");
    const double scale = std::max({1.0, max_abs(a), max_abs(b)});
    return max_abs(a - b) / scale;
}

bool is_finite(const CMatrix& m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix solve_and_invert(const CMatrix& g, const Tolerance& tol) {
    if (!(std::abs(determinant(g)) > tol.rank)) throw SingularError("determinant below tol_rank");
    return inverse(g, tol.rank);
}

namespace {

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

}  // namespace

std::vector<double> singular_values(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

int rank_tol(const CMatrix& m, const Tolerance& tol) {
    const auto s = singular_values(m);
    if (s.empty() || s.front() == 0.0) return 0;
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double x) { return x > tol.rank * s.front(); }));
}

int rank_abs(const CMatrix& m, double threshold) {
    const auto s = singular_values(m);
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double x) { return x > threshold; }));
}

double condition_number(const CMatrix& m) {
    const auto s = singular_values(m);
    if (s.empty() || s.back() == 0.0) return INFINITY;
    return s.front() / s.back();
}

CMatrix null_space(const CMatrix& m, double rel_tol) {
    const std::size_t cols = m.cols();
    if (m.rows() == 0) return CMatrix::identity(cols);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double top = s.size() ? s(0) : 0.0;
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > rel_tol * top && top > 0) ++rank;
    const auto& V = svd.matrixV();
    CMatrix r(cols, cols - rank);
    for (std::size_t j = rank; j < cols; ++j)
        for (std::size_t i = 0; i < cols; ++i) r(i, j - rank) = V(i, j);
    return r;
}

CMatrix column_span(const CMatrix& m, double rel_tol) {
    if (m.cols() == 0) return CMatrix(m.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double top = s.size() ? s(0) : 0.0;
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > rel_tol * top && top > 0) ++rank;
    const auto& U = svd.matrixU();
    CMatrix r(m.rows(), rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) r(i, j) = U(i, j);
    return r;
}

// ---------------------------------------------------------------- AD helpers

JMatrix seeded(const CMatrix& g, const std::vector<CMatrix>& seeds, bool second) {
    const std::size_t K = seeds.size();
    JMatrix r = lift<Jet>(g);
    for (std::size_t k = 0; k < K; ++k) {
        const Jet eps = Jet::variable(0.0, k, K, second);
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
                if (seeds[k](i, j) != cplx{}) r(i, j) += eps * Jet(seeds[k](i, j));
    }
    return r;
}

Jet jet_eval(const Observable& f, const CMatrix& g, const std::vector<CMatrix>& seeds, bool second) {
    return f(seeded(g, seeds, second));
}

std::vector<CMatrix> right_frame(const CMatrix& g) {
    const std::size_t n = g.rows();
    std::vector<CMatrix> frame;
    frame.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frame.push_back(unit_matrix(n, i, j) * g);
    return frame;
}

CMatrix jacobian(const std::vector<Jet>& outputs, std::size_t nseeds) {
    CMatrix J(outputs.size(), nseeds);
    for (std::size_t a = 0; a < outputs.size(); ++a)
        for (std::size_t k = 0; k < nseeds; ++k) J(a, k) = outputs[a].d(k);
    return J;
}

std::vector<Jet> variables(const std::vector<cplx>& base, bool second) {
    std::vector<Jet> r;
    r.reserve(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) r.push_back(Jet::variable(base[k], k, base.size(), second));
    return r;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const CMatrix& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    nlohmann::json j;
    if (m.square()) {
        j["n"] = m.rows();
    } else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("re")) throw SchemaError("matrix JSON needs \"re\"");
    const auto& re = j.at("re");
    if (!re.is_array() || re.empty()) throw SchemaError("matrix \"re\" must be a non-empty array");
    const std::size_t rows = re.size();
    const std::size_t cols = re[0].size();
    if (j.contains("n") && (j.at("n") != rows || rows != cols)) throw SchemaError("matrix \"n\" disagrees with entries");
    CMatrix m(rows, cols);
    const bool has_im = j.contains("im");
    for (std::size_t i = 0; i < rows; ++i) {
        if (!re[i].is_array() || re[i].size() != cols) throw SchemaError("ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!re[i][k].is_number()) throw SchemaError("matrix entries must be numbers");
            double im = 0;
            if (has_im) {
                const auto& jim = j.at("im");
                if (jim.size() != rows || jim[i].size() != cols || !jim[i][k].is_number())
                    throw SchemaError("\"im\" shape disagrees with \"re\"");
                im = jim[i][k].get<double>();
            }
            m(i, k) = cplx(re[i][k].get<double>(), im);
        }
    }
    if (!is_finite(m)) throw SchemaError("matrix entries must be finite");
    return m;
}

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw SchemaError("complex scalar must be a number or [re, im]");
}

}  // namespace dbc
