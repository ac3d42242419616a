#include <doctest.h>

#include <map>
#include <set>

#include "dbc/rootdata.hpp"

using namespace dbc;

namespace {

// Bruhat order by the subword property: w1 <= w2 iff some subword of a fixed
// reduced word of w2 is a reduced word of w1.
bool subword_leq(const WeylElement& w1, const WeylElement& w2) {
    const auto& word = w2.reduced_word();
    const int n = w1.n();
    for (unsigned mask = 0; mask < (1u << word.size()); ++mask) {
        std::vector<int> sub;
        for (std::size_t k = 0; k < word.size(); ++k)
            if (mask & (1u << k)) sub.push_back(word[k]);
        const WeylElement p = WeylElement::from_word(n, sub);
        if (p.length() == static_cast<int>(sub.size()) && p == w1) return true;
    }
    return false;
}

int count_inversions(const std::vector<int>& p) {
    int r = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++r;
    return r;
}

std::int64_t rational_rank(IntMatrix m) {
    // fraction-free elimination over Q using long double
    std::vector<std::vector<long double>> a;
    for (auto& r : m) a.emplace_back(r.begin(), r.end());
    std::int64_t rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<std::int64_t>(a.size()); ++c) {
        std::size_t p = rank;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[rank], a[p]);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (i != static_cast<std::size_t>(rank) && a[i][c] != 0) {
                const long double f = a[i][c] / a[rank][c];
                for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[rank][j];
            }
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("Weyl element basics") {
    for (int n = 1; n <= 5; ++n)
        for (const auto& w : WeylElement::all(n)) {
            CHECK(w.length() == count_inversions(w.one_line()));
            CHECK(w.length() == w.inverse().length());
            CHECK(WeylElement::from_word(n, w.reduced_word()) == w);
            CHECK(static_cast<int>(w.inversions().size()) == w.length());
            CHECK(w * w.inverse() == WeylElement::identity(n));
        }
    CHECK(WeylElement::longest(3).length() == 3);
    const WeylElement s1s2 = WeylElement::simple(3, 1) * WeylElement::simple(3, 2);
    CHECK(s1s2.one_line() == std::vector<int>{2, 3, 1});
    CHECK(s1s2.reduced_word() == std::vector<int>{1, 2});
    CHECK_THROWS_AS(WeylElement({1, 1, 2}), SchemaError);
}

TEST_CASE("bruhat_leq agrees with the subword property") {
    const int n3 = 3;
    const WeylElement s1 = WeylElement::simple(n3, 1), s2 = WeylElement::simple(n3, 2);
    CHECK(bruhat_leq(s1, s1 * s2));
    CHECK_FALSE(bruhat_leq(s1 * s2, s2 * s1));
    for (int n = 1; n <= 4; ++n) {
        const auto all = WeylElement::all(n);
        for (const auto& a : all) {
            CHECK(bruhat_leq(WeylElement::identity(n), a));
            CHECK(bruhat_leq(a, a));
            for (const auto& b : all) CHECK(bruhat_leq(a, b) == subword_leq(a, b));
        }
    }
}

TEST_CASE("fixed_simples") {
    CHECK(fixed_simples(WeylElement::identity(3)) == std::set<int>{1, 2});
    CHECK(fixed_simples(WeylElement::longest(3)).empty());
    CHECK(fixed_simples(WeylElement::simple(3, 1)) == std::set<int>{2});
    for (int n = 1; n <= 5; ++n)
        for (const auto& w : WeylElement::all(n)) {
            std::set<int> letters(w.reduced_word().begin(), w.reduced_word().end());
            std::set<int> complement;
            for (int k = 1; k < n; ++k)
                if (!letters.count(k)) complement.insert(k);
            CHECK(fixed_simples(w) == complement);
        }
}

TEST_CASE("weyl_representative") {
    CHECK(max_abs(weyl_representative(WeylElement::identity(3)).matrix - CMatrix::identity(3)) == 0.0);
    CHECK(max_abs(weyl_representative(WeylElement::simple(2, 1)).matrix - CMatrix{{0.0, -1.0}, {1.0, 0.0}}) == 0.0);
    const CMatrix s1{{0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const CMatrix s2{{1.0, 0.0, 0.0}, {0.0, 0.0, -1.0}, {0.0, 1.0, 0.0}};
    const WeylElement v = WeylElement::simple(3, 1) * WeylElement::simple(3, 2);
    CHECK(max_abs(weyl_representative(v).matrix - s1 * s2) == 0.0);

    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const auto all = WeylElement::all(n);
        const WeylElement a = all[rng.index(all.size())], b = all[rng.index(all.size())];
        const WeylRep ra = weyl_representative(a, trial), rb = weyl_representative(b, trial + 100);
        const CMatrix prod = ra.matrix * rb.matrix;
        CHECK(std::abs(determinant(ra.matrix) - 1.0) < 1e-12);
        // prod * P_{ab}^{-1} must be diagonal
        const CMatrix t = prod * (a * b).permutation_matrix().transpose();
        CHECK(max_abs(t - diag_part(t)) < 1e-12);
        // normalizes T
        std::vector<cplx> d(n);
        cplx dprod = 1.0;
        for (int i = 0; i + 1 < n; ++i) dprod *= (d[i] = rng.annulus(0.5, 2));
        d[n - 1] = 1.0 / dprod;
        const TorusElement x(d);
        const CMatrix conj = ra.matrix * x.matrix() * inverse(ra.matrix);
        CHECK(max_abs(conj - diag_part(conj)) < 1e-12);
    }
}

TEST_CASE("torus_conjugate matches matrix conjugation") {
    const TorusElement t({cplx(3.0), cplx(1.0 / 3.0)});
    CHECK(torus_conjugate(t, WeylElement::identity(2)).near(t, 1e-15));
    CHECK(torus_conjugate(t, WeylElement::simple(2, 1)).near(TorusElement({cplx(1.0 / 3.0), cplx(3.0)}), 1e-15));
    Rng rng(2);
    const auto all = WeylElement::all(4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> d(4);
        cplx prod = 1.0;
        for (int i = 0; i < 3; ++i) prod *= (d[i] = rng.annulus(0.5, 2));
        d[3] = 1.0 / prod;
        const TorusElement x(d);
        const WeylElement w = all[rng.index(all.size())];
        const CMatrix wb = weyl_representative(w, trial + 1).matrix;
        const CMatrix conj = inverse(wb) * x.matrix() * wb;
        CHECK(max_abs(conj - torus_conjugate(x, w).matrix()) < 1e-12);
    }
}

TEST_CASE("lattice_kernel") {
    auto k = lattice_kernel(IntMatrix{{0}});
    REQUIRE(k.size() == 1);
    CHECK(k[0] == std::vector<std::int64_t>{1});
    CHECK(lattice_kernel(IntMatrix{{1, 0}, {0, 1}}).empty());
    k = lattice_kernel(IntMatrix{{1, -1}, {-1, 1}});
    REQUIRE(k.size() == 1);
    CHECK(((k[0] == std::vector<std::int64_t>{1, 1}) || (k[0] == std::vector<std::int64_t>{-1, -1})));

    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng.index(4), cols = 1 + rng.index(5);
        IntMatrix m(rows, std::vector<std::int64_t>(cols));
        for (auto& r : m)
            for (auto& x : r) x = static_cast<std::int64_t>(rng.index(5)) - 2;
        const auto basis = lattice_kernel(m, cols);
        for (const auto& x : basis)
            for (const auto& r : m) {
                std::int64_t s = 0;
                for (std::size_t j = 0; j < cols; ++j) s += r[j] * x[j];
                CHECK(s == 0);
            }
        CHECK(static_cast<std::int64_t>(basis.size()) == static_cast<std::int64_t>(cols) - rational_rank(m));
        // saturation: basis spans a primitive lattice iff its gcd of maximal minors is 1; check the
        // Smith form of the basis matrix has unit invariant factors
        if (!basis.empty()) {
            IntMatrix bt(basis.size(), std::vector<std::int64_t>(cols));
            for (std::size_t i = 0; i < basis.size(); ++i) bt[i] = basis[i];
            const auto s = smith_normal_form(bt, cols);
            for (int i = 0; i < s.rank; ++i) CHECK(std::llabs(s.d[i][i]) == 1);
        }
    }
}

TEST_CASE("enumerate_order2") {
    auto two = enumerate_order2(2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].near(TorusElement::identity(2), 0));
    CHECK(two[1].near(TorusElement({cplx(-1.0), cplx(-1.0)}), 0));
    for (int n = 1; n <= 6; ++n) {
        const auto all = enumerate_order2(n);
        CHECK(all.size() == (1u << (n - 1)));
        for (const auto& t : all) CHECK((t * t).near(TorusElement::identity(n), 0));
    }
}

TEST_CASE("characters") {
    const TorusElement t({cplx(2.0), cplx(3.0), cplx(1.0 / 6.0)});
    CHECK(std::abs(CharacterVector::fundamental(3, 2).evaluate(t) - 6.0) < 1e-14);
    CHECK(std::abs(CharacterVector{{1, 1, 1}}.evaluate(t) - 1.0) < 1e-14);
    CHECK(std::abs(CharacterVector{{-1, 2, 0}}.evaluate(t) - 4.5) < 1e-14);
}
