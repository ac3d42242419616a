#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "dbc/numkernel.hpp"

namespace dbc {

// Permutation of {1..n} in one-line notation; composition (a*b)(i) = a(b(i)).
// The permutation matrix sends e_k to e_{w(k)}.
class WeylElement {
public:
    WeylElement() = default;
    explicit WeylElement(std::vector<int> one_line);

    static WeylElement identity(int n);
    static WeylElement simple(int n, int k);  // s_k swaps k, k+1
    static WeylElement longest(int n);
    static WeylElement from_word(int n, const std::vector<int>& word);
    // all of S_n in lexicographic order of one-line notation
    static std::vector<WeylElement> all(int n);

    int n() const { return static_cast<int>(perm_.size()); }
    int operator()(int i) const { return perm_.at(i - 1); }
    const std::vector<int>& one_line() const { return perm_; }
    int length() const { return static_cast<int>(word_.size()); }
    const std::vector<int>& reduced_word() const { return word_; }
    // pairs (i,j), i<j, w(i) > w(j)
    std::vector<std::pair<int, int>> inversions() const;

    WeylElement inverse() const;
    friend WeylElement operator*(const WeylElement& a, const WeylElement& b);
    friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.perm_ == b.perm_; }
    friend bool operator!=(const WeylElement& a, const WeylElement& b) { return !(a == b); }
    friend bool operator<(const WeylElement& a, const WeylElement& b) { return a.perm_ < b.perm_; }

    CMatrix permutation_matrix() const;
    std::string str() const;  // "[2,3,1]"

private:
    std::vector<int> perm_;
    std::vector<int> word_;
};

class TorusElement {
public:
    TorusElement() = default;
    explicit TorusElement(std::vector<cplx> diag, double tol = Tolerance{}.eq);

    static TorusElement identity(int n);
    static TorusElement from_matrix(const CMatrix& m, double tol = Tolerance{}.eq);

    int n() const { return static_cast<int>(diag_.size()); }
    cplx operator[](int i) const { return diag_.at(i); }
    const std::vector<cplx>& diag() const { return diag_; }
    CMatrix matrix() const;
    TorusElement inverse() const;
    friend TorusElement operator*(const TorusElement& a, const TorusElement& b);
    bool near(const TorusElement& o, double tol) const;

private:
    std::vector<cplx> diag_;
};

// t^w = w^{-1} t w, entry i is t_{w(i)}
TorusElement torus_conjugate(const TorusElement& t, const WeylElement& w);

struct CharacterVector {
    std::vector<std::int64_t> exps;

    cplx evaluate(const TorusElement& t) const;
    template <class T>
    T evaluate_diag(const std::vector<T>& d) const {
        T r(1.0);
        for (std::size_t i = 0; i < exps.size(); ++i) {
            const std::int64_t e = exps[i];
            for (std::int64_t k = 0; k < (e < 0 ? -e : e); ++k) r = e > 0 ? r * d[i] : r / d[i];
        }
        return r;
    }
    static CharacterVector fundamental(int n, int k);  // t -> t_1 ... t_k
};

struct WeylRep {
    WeylElement weyl;
    CMatrix matrix;
    TorusElement torus_twist;
    std::uint64_t seed = 0;
};

// seed 0: product of the s~_k over the reduced word; other seeds left-multiply
// by a random torus element
WeylRep weyl_representative(const WeylElement& w, std::uint64_t choice_seed = 0);

bool bruhat_leq(const WeylElement& w1, const WeylElement& w2);
// {k : w({1..k}) = {1..k}}, k in 1..n-1
std::set<int> fixed_simples(const WeylElement& w);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct SmithForm {
    IntMatrix d;      // diagonal form U*m*V
    IntMatrix u, v;   // unimodular
    int rank = 0;
};
SmithForm smith_normal_form(const IntMatrix& m, std::size_t cols);
// Z-basis of {x : m x = 0}; `cols` is needed when m has no rows
std::vector<std::vector<std::int64_t>> lattice_kernel(const IntMatrix& m, std::size_t cols);
std::vector<std::vector<std::int64_t>> lattice_kernel(const IntMatrix& m);
// Z-basis of the row lattice spanned by `rows`
std::vector<std::vector<std::int64_t>> lattice_row_basis(const IntMatrix& rows, std::size_t cols);

std::vector<TorusElement> enumerate_order2(int n);

nlohmann::json to_json(const WeylElement& w);
WeylElement weyl_from_json(const nlohmann::json& j);

}  // namespace dbc
