#include <doctest.h>

#include "dbc/factorize.hpp"
#include "dbc/numkernel.hpp"

using namespace dbc;

namespace {

CMatrix random_general(int n, Rng& rng) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return m;
}

// independent cofactor-expansion determinant
cplx cofactor_det(const CMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    cplx r = 0;
    for (std::size_t j = 0; j < n; ++j) {
        CMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = m(i, k);
        r += (j % 2 ? -1.0 : 1.0) * m(0, j) * cofactor_det(minor);
    }
    return r;
}

}  // namespace

TEST_CASE("gaussian_decompose golden and identity") {
    const CMatrix I = CMatrix::identity(3);
    auto f = gaussian_decompose(I);
    CHECK(max_abs(f.lower - I) == 0.0);
    CHECK(max_abs(f.upper - I) == 0.0);
    CHECK(max_abs(f.diag_matrix() - I) == 0.0);

    const CMatrix g{{2.0, 1.0}, {1.0, 1.0}};
    f = gaussian_decompose(g);
    CHECK(max_abs(f.lower - CMatrix{{1.0, 0.0}, {0.5, 1.0}}) < 1e-15);
    CHECK(max_abs(f.diag_matrix() - CMatrix{{2.0, 0.0}, {0.0, 0.5}}) < 1e-15);
    CHECK(max_abs(f.upper - CMatrix{{1.0, 0.5}, {0.0, 1.0}}) < 1e-15);

    const CMatrix s{{0.0, -1.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(gaussian_decompose(s), BigCellError);
}

TEST_CASE("gaussian_decompose reassembles and diag = ratios of leading minors") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const CMatrix g = random_general(n, rng);
        const auto f = gaussian_decompose(g);
        CHECK(rel_dev(f.lower * f.diag_matrix() * f.upper, g) < 1e-12);
        cplx prev = 1.0;
        for (int k = 1; k <= n; ++k) {
            const cplx minor = cofactor_det(g.block(0, 0, k, k));
            CHECK(std::abs(f.diag[k - 1] - minor / prev) < 1e-9 * std::max(1.0, std::abs(minor / prev)));
            prev = minor;
        }
    }
}

TEST_CASE("rank_tol") {
    CHECK(rank_tol(CMatrix(2, 2)) == 0);
    CHECK(rank_tol(CMatrix::identity(3)) == 3);
    CHECK(rank_tol(CMatrix{{1.0, 2.0}, {2.0, 4.0}}) == 1);

    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 2;
        // rank-2 matrix
        CMatrix a(n, 2), b(2, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) {
                a(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
                b(j, i) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            }
        const CMatrix m = a * b;
        CMatrix q;
        do q = random_sl(n, rng);
        while (condition_number(q) > 10);
        CHECK(rank_tol(m) == 2);
        CHECK(rank_tol(q * m) == 2);
        CHECK(rank_tol(m * q) == 2);
    }
}

TEST_CASE("solve_and_invert") {
    const CMatrix I = CMatrix::identity(3);
    CHECK(max_abs(solve_and_invert(I) - I) == 0.0);
    CHECK(max_abs(solve_and_invert(CMatrix{{2.0, 0.0}, {0.0, 0.5}}) - CMatrix{{0.5, 0.0}, {0.0, 2.0}}) < 1e-15);
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix g = random_sl(3, rng);
        CHECK(rel_dev(g * solve_and_invert(g), CMatrix::identity(3)) < 1e-9);
    }
    CHECK_THROWS_AS(solve_and_invert(CMatrix{{1.0, 2.0}, {2.0, 4.0}}), SingularError);
}

TEST_CASE("determinant agrees with cofactor expansion") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const CMatrix g = random_general(2 + trial % 4, rng);
        CHECK(std::abs(determinant(g) - cofactor_det(g)) < 1e-12);
    }
}

TEST_CASE("jet_eval trivial directions") {
    const CMatrix I = CMatrix::identity(2);
    const Observable det = [](const JMatrix& m) { return determinant(m); };
    const Jet d = jet_eval(det, I, {unit_matrix(2, 0, 0) - unit_matrix(2, 1, 1)});
    CHECK(std::abs(d.d(0)) < 1e-15);
    const Observable e11 = [](const JMatrix& m) { return m(0, 0); };
    CHECK(std::abs(jet_eval(e11, I, {unit_matrix(2, 0, 1) * I}).d(0)) == 0.0);
}

TEST_CASE("jet first derivatives match central finite differences") {
    Rng rng(99);
    const Observable minor2 = [](const JMatrix& m) { return leading_minor(m, 2); };
    const Observable through_ldu = [](const JMatrix& m) {
        const auto f = gaussian_decompose(m);
        const JMatrix inv = inverse(m);
        return f.lower(2, 0) * f.upper(0, 1) + f.diag[1] / f.diag[2] + inv(1, 2);
    };
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix g = random_sl(3, rng);
        CMatrix seed(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) seed(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        for (const Observable* f : {&minor2, &through_ldu}) {
            Jet j;
            try {
                j = jet_eval(*f, g, {seed});
            } catch (const BigCellError&) {
                continue;
            }
            const double h = 1e-6;
            const cplx fp = (*f)(lift<Jet>(g + scaled(seed, cplx(h)))).value();
            const cplx fm = (*f)(lift<Jet>(g - scaled(seed, cplx(h)))).value();
            const cplx fd = (fp - fm) / (2 * h);
            CHECK(std::abs(j.d(0) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
            ++checked;
        }
    }
    CHECK(checked > 150);
}

TEST_CASE("second-order jets match finite differences of first derivatives") {
    Rng rng(4);
    const Observable f = [](const JMatrix& m) { return m(0, 1) * m(1, 0) / m(0, 0) + determinant(m); };
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix g = random_sl(2, rng);
        const std::vector<CMatrix> seeds = right_frame(g);
        const Jet j = jet_eval(f, g, seeds, true);
        const double h = 1e-5;
        for (std::size_t a = 0; a < seeds.size(); ++a) {
            const Jet jp = jet_eval(f, g + scaled(seeds[a], cplx(h)), seeds);
            const Jet jm = jet_eval(f, g - scaled(seeds[a], cplx(h)), seeds);
            for (std::size_t b = 0; b < seeds.size(); ++b) {
                const cplx fd = (jp.d(b) - jm.d(b)) / (2 * h);
                CHECK(std::abs(j.dd(a, b) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
                CHECK(std::abs(j.dd(a, b) - j.dd(b, a)) < 1e-12 * std::max(1.0, std::abs(j.dd(a, b))));
            }
        }
    }
}

TEST_CASE("matrix JSON round trip") {
    const CMatrix m{{cplx(1, 2), cplx(3, 0)}, {cplx(0, -1), cplx(0.5, 0.25)}};
    const auto j = to_json(m);
    CHECK(j["n"] == 2);
    CHECK(max_abs(matrix_from_json(j) - m) == 0.0);
    CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"n", 3}, {"re", {{1, 2}, {3, 4}}}}), SchemaError);
}
