#include <doctest.h>

#include "dbc/factorize.hpp"

using namespace dbc;

namespace {

bool is_upper(const CMatrix& m, double tol) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(m(i, j)) > tol) return false;
    return true;
}

bool is_lower(const CMatrix& m, double tol) { return is_upper(m.transpose(), tol); }

// c in N v ∩ v N_-
bool in_C(const CMatrix& c, const CMatrix& vbar, double tol) {
    const CMatrix vinv = inverse(vbar);
    const CMatrix n = c * vinv, nm = vinv * c;
    for (std::size_t i = 0; i < c.rows(); ++i)
        if (std::abs(n(i, i) - 1.0) > tol || std::abs(nm(i, i) - 1.0) > tol) return false;
    return is_upper(n, tol) && is_lower(nm, tol);
}

std::vector<std::pair<WeylElement, WeylElement>> all_pairs(int n) {
    std::vector<std::pair<WeylElement, WeylElement>> r;
    for (const auto& u : WeylElement::all(n))
        for (const auto& v : WeylElement::all(n)) r.emplace_back(u, v);
    return r;
}

}  // namespace

TEST_CASE("bruhat_cell_of golden") {
    auto [u, v] = bruhat_cell_of(CMatrix::identity(3));
    CHECK(u == WeylElement::identity(3));
    CHECK(v == WeylElement::identity(3));
    auto [u2, v2] = bruhat_cell_of(CMatrix{{0.0, -1.0}, {1.0, 0.0}});
    CHECK(u2 == WeylElement::simple(2, 1));
    CHECK(v2 == WeylElement::simple(2, 1));
    // permutation representatives sit in G^{w,w}
    for (const auto& w : WeylElement::all(4)) {
        auto [a, b] = bruhat_cell_of(weyl_representative(w, 5).matrix);
        CHECK(a == w);
        CHECK(b == w);
    }
    // a point just off the torus is ambiguous rather than misclassified
    CMatrix near = CMatrix::identity(2);
    near(1, 0) = 1e-9;
    CHECK_THROWS_AS(bruhat_cell_of(near), RankAmbiguityError);
}

TEST_CASE("sample_double_cell round trip") {
    for (int n = 2; n <= 3; ++n)
        for (const auto& [u, v] : all_pairs(n))
            for (int s = 0; s < 5; ++s) {
                const CellPoint p = sample_double_cell(u, v, 1000 * n + s);
                auto [a, b] = bruhat_cell_of(p.g);
                CHECK(a == u);
                CHECK(b == v);
            }
    const auto pairs = all_pairs(4);
    Rng rng(4);
    for (int s = 0; s < 100; ++s) {
        const auto& [u, v] = pairs[rng.index(pairs.size())];
        const CellPoint p = sample_double_cell(u, v, 77 + s);
        auto [a, b] = bruhat_cell_of(p.g);
        CHECK(a == u);
        CHECK(b == v);
    }
    const CellPoint t = sample_double_cell(WeylElement::identity(3), WeylElement::identity(3), 1);
    CHECK(max_abs(t.g - diag_part(t.g)) == 0.0);
    const WeylElement s = WeylElement::simple(2, 1);
    const CellPoint p = sample_double_cell(s, s, 2);
    CHECK(std::abs(p.g(1, 0)) > 0.0);
    CHECK(std::abs(p.g(0, 1)) > 0.0);
}

TEST_CASE("sampling reaches n = 5 and n = 6") {
    Rng rng(6);
    for (int n : {5, 6}) {
        const auto all = WeylElement::all(n);
        for (int s = 0; s < 10; ++s) {
            const WeylElement u = all[rng.index(all.size())], v = all[rng.index(all.size())];
            const CellPoint p = sample_double_cell(u, v, 500 + s);
            CHECK(p.u == u);
            CHECK(p.v == v);
        }
    }
}

TEST_CASE("left and right C factors") {
    const WeylElement s = WeylElement::simple(2, 1);
    const WeylRep sb = weyl_representative(s);
    // G^{s,s} chart (z,a,b)
    const cplx z(0.7, 0.2), a(1.3, -0.4), b(-0.6, 0.9);
    const CMatrix g{{a * z, (a * b * z - 1.0) / a}, {a, b}};
    const CellPoint p = CellPoint::make(g, sb, sb);
    CHECK(rel_dev(p.c(), CMatrix{{z, -1.0}, {1.0, 0.0}}) < 1e-14);
    CHECK(rel_dev(p.b(), CMatrix{{a, b}, {0.0, 1.0 / a}}) < 1e-14);
    CHECK(rel_dev(p.b_minus() * p.c_prime(), g) < 1e-14);

    for (int n = 2; n <= 4; ++n) {
        const auto all = WeylElement::all(n);
        Rng rng(n);
        for (int trial = 0; trial < 100; ++trial) {
            const WeylElement u = all[rng.index(all.size())], v = all[rng.index(all.size())];
            const CellPoint q = sample_double_cell(u, v, 31 * trial + n);
            CHECK(rel_dev(q.c() * q.b(), q.g) < 1e-9);
            CHECK(rel_dev(q.b_minus() * q.c_prime(), q.g) < 1e-9);
            CHECK(in_C(q.c(), q.ubar.matrix, 1e-9));
            CHECK(in_C(q.c_prime(), q.vbar.matrix, 1e-9));
            CHECK(is_upper(q.b(), 1e-12));
            CHECK(is_lower(q.b_minus(), 1e-12));
            // u^-1 c is unit lower triangular supported on the inversions of u
            const CMatrix m = inverse(q.ubar.matrix) * q.c();
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    const cplx x = m(i - 1, j - 1);
                    if (i == j)
                        CHECK(std::abs(x - 1.0) < 1e-9);
                    else if (i > j && u(i) < u(j))
                        CHECK(std::abs(x) > 1e-9);
                    else
                        CHECK(std::abs(x) < 1e-9);
                }
            // with a wrong representative the factorization fails or leaves C
            const WeylElement w = all[rng.index(all.size())];
            if (w != u) {
                const WeylRep wb = weyl_representative(w);
                try {
                    auto [c, bb] = left_factor(q.g, wb.matrix, inverse(wb.matrix));
                    CHECK_FALSE(in_C(c, wb.matrix, 1e-9));
                } catch (const BigCellError&) {
                }
            }
        }
    }
    // g = u gives (u, I) and (I, u)
    for (const auto& w : WeylElement::all(3)) {
        const WeylRep wb = weyl_representative(w, 3);
        const CellPoint q = CellPoint::make(wb.matrix, wb, wb);
        CHECK(rel_dev(q.c(), wb.matrix) < 1e-14);
        CHECK(rel_dev(q.b(), CMatrix::identity(3)) < 1e-14);
        CHECK(rel_dev(q.b_minus(), CMatrix::identity(3)) < 1e-14);
        CHECK(rel_dev(q.c_prime(), wb.matrix) < 1e-14);
    }
}

TEST_CASE("flag_canonical") {
    const FlagPoint f0 = flag_canonical(CMatrix{{2.0, 3.0}, {0.0, 0.5}});
    CHECK(f0.cell == WeylElement::identity(2));
    CHECK(f0.coords.empty());

    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx z = rng.annulus(0.2, 3);
        const CMatrix c{{z, -1.0}, {1.0, 0.0}};
        const FlagPoint f = flag_canonical(c * random_upper(2, rng));
        CHECK(f.cell == WeylElement::simple(2, 1));
        REQUIRE(f.coords.size() == 1);
        CHECK(std::abs(f.coords[0] - z) < 1e-12);
        // the chart coordinate is the affine coordinate a/c of the first column
        const CMatrix g = c * random_upper(2, rng);
        CHECK(std::abs(flag_canonical(g).coords[0] - g(0, 0) / g(1, 0)) < 1e-12);
    }

    for (int n = 2; n <= 4; ++n) {
        const auto all = WeylElement::all(n);
        for (int trial = 0; trial < 50; ++trial) {
            const WeylElement u = all[rng.index(all.size())];
            const CellPoint p = sample_double_cell(u, all[rng.index(all.size())], 9000 + trial);
            const FlagPoint f = flag_canonical(p.g);
            CHECK(f.cell == u);
            CHECK(rel_dev(f.matrix(), p.c()) < 1e-9);
            const CMatrix b = random_upper(n, rng);
            CHECK(flag_canonical(p.g * b).near(f, 1e-9));
            // left B-action is the action on representatives
            const CMatrix bl = random_upper(n, rng);
            CHECK(flag_canonical(bl * p.g).near(flag_canonical(bl * f.matrix()), 1e-9));
        }
    }
}
