#include <doctest.h>

#include "dbc/leaves.hpp"

using namespace dbc;

namespace {

CMatrix zab(cplx z, cplx a, cplx b) { return CMatrix{{a * z, (a * b * z - 1.0) / a}, {a, b}}; }

std::vector<cplx> random_coeffs(int n, Rng& rng) {
    std::vector<cplx> c(dual_basis(n).size());
    for (auto& x : c) x = rng.annulus(0.1, 0.4);
    return c;
}

// integration error moves vanishing minors off zero by about 1e-9
const Tolerance kFlowTol{1e-9, 1e-6, 1e-8};

CellPoint flowed(const CellPoint& p, Rng& rng, int steps = 100) {
    const CMatrix g = dressing_flow(p.g, normalized_coeffs(p.g, random_coeffs(p.u.n(), rng), 0.3), 1e-2, steps);
    return CellPoint::make(g, p.ubar, p.vbar, kFlowTol);
}

CMatrix unit_lower(int n, Rng& rng) {
    CMatrix l = CMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) l(i, j) = rng.annulus(0.3, 2.0);
    return l;
}

}  // namespace

TEST_CASE("leading minors") {
    Rng rng(3);
    for (int n = 2; n <= 4; ++n) {
        for (int k = 1; k < n; ++k) CHECK(std::abs(delta_minor(CMatrix::identity(n), k) - 1.0) < 1e-15);
        const TorusElement t = random_torus(n, rng);
        const CMatrix g = unit_lower(n, rng) * t.matrix() * unit_lower(n, rng).transpose();
        cplx prod = 1.0;
        for (int k = 1; k < n; ++k) {
            prod *= t[k - 1];
            CHECK(std::abs(delta_minor(g, k) - prod) < 1e-10 * std::abs(prod));
        }
        for (const auto& v : WeylElement::all(n)) {
            const CMatrix vb = weyl_representative(v).matrix;
            for (int k : fixed_simples(v)) CHECK(std::abs(delta_minor(vb, k) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("χ on double Bruhat cells") {
    const WeylRep sb = weyl_representative(WeylElement::simple(2, 1));
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const cplx z = rng.annulus(0.3, 2.0), a = rng.annulus(0.3, 2.0), b = rng.annulus(0.3, 2.0);
        const CellPoint p = CellPoint::make(zab(z, a, b), sb, sb);
        const TorusElement x = chi_rep(p);
        const cplx expect = a * a / (1.0 - a * b * z);
        CHECK(std::abs(x[0] - expect) < 1e-10 * std::abs(expect));
        CHECK(std::abs(x[0] * x[1] - 1.0) < 1e-10);
    }
    for (int n = 2; n <= 3; ++n) {
        for (const auto& u : WeylElement::all(n))
            for (const auto& v : WeylElement::all(n)) {
                const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
                if (u == v) CHECK(chi_rep(CellPoint::make(vb.matrix, vb, vb)).near(TorusElement::identity(n), 1e-12));
                for (int s = 0; s < 5; ++s) {
                    const CellPoint p = sample_double_cell(u, v, ub, vb, 100 + s);
                    const TorusElement a = random_torus(n, rng);
                    const TorusElement lhs = chi_rep(CellPoint::make(p.g * a.matrix(), ub, vb));
                    CHECK(lhs.near(chi_rep(p) * a * a, 1e-8));
                }
            }
    }
}

TEST_CASE("the subtorus T^{u,v}") {
    Rng rng(11);
    for (int n = 2; n <= 4; ++n) {
        const auto all = WeylElement::all(n);
        for (const auto& u : all) {
            const TorusSubgroupTest d = torus_subgroup(u, u);
            CHECK(d.subtorus_dim() == 0);
            CHECK(d.member(TorusElement::identity(n), 1e-12));
            CHECK_FALSE(d.member(random_torus(n, rng, 1.5, 2.0), 1e-6));
            for (const auto& v : all) {
                const TorusSubgroupTest T = torus_subgroup(u, v);
                for (int s = 0; s < 50; ++s) {
                    const TorusElement t = random_torus(n, rng);
                    CHECK(T.member(torus_conjugate(t, u).inverse() * torus_conjugate(t, v), 1e-9));
                }
            }
        }
    }
    const WeylElement e = WeylElement::identity(2), w0 = WeylElement::longest(2);
    CHECK(torus_subgroup(e, w0).subtorus_dim() == 1);
    for (int s = 0; s < 10; ++s) CHECK(Tuv_member(random_torus(2, rng), e, w0));
}

TEST_CASE("leaf dimensions, ranks and census") {
    CHECK(leaf_dimension(WeylElement::identity(3), WeylElement::identity(3)) == 0);
    CHECK(leaf_dimension(WeylElement::simple(2, 1), WeylElement::simple(2, 1)) == 2);
    const WeylElement s1s2 = WeylElement::from_word(3, {1, 2});
    CHECK(leaf_dimension(s1s2, s1s2) == 4);
    CHECK(leaf_dimension(WeylElement::identity(2), WeylElement::longest(2)) == 2);

    for (int n = 2; n <= 3; ++n)
        for (const auto& u : WeylElement::all(n))
            for (const auto& v : WeylElement::all(n)) {
                const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
                for (int s = 0; s < 3; ++s)
                    CHECK(leaf_rank(sample_double_cell(u, v, ub, vb, 7 + s)) == leaf_dimension(u, v));
                const LeafCensus c = leaf_census(u, v);
                CHECK(c.order2_quotient == c.count_per_level);
            }

    const LeafCensus ee = leaf_census(WeylElement::identity(3), WeylElement::identity(3));
    CHECK(ee.count_per_level == 4);
    CHECK(ee.stab_order2 == 1);
    const WeylElement s = WeylElement::simple(2, 1);
    const LeafCensus ss = leaf_census(s, s);
    CHECK(ss.count_per_level == 1);
    CHECK(ss.stab_order2 == 2);
    CHECK(ss.stab_test(TorusElement({-1.0, -1.0})));
}

TEST_CASE("Casimirs and the square identity") {
    for (int n = 2; n <= 3; ++n)
        for (const auto& u : WeylElement::all(n))
            for (const auto& v : WeylElement::all(n)) {
                const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
                for (int s = 0; s < 4; ++s) {
                    const CellPoint p = sample_double_cell(u, v, ub, vb, 40 + s);
                    CHECK(minor_casimir_defect(p) < 1e-8);
                    CHECK(chi_casimir_defect(p) < 1e-8);
                    CHECK(square_identity_defect(p) < 1e-8);
                }
            }
    // Δ_1 is not a Casimir off I(u,v)
    const WeylElement s = WeylElement::simple(2, 1);
    const WeylRep sb = weyl_representative(s);
    const CellPoint p = sample_double_cell(s, s, sb, sb, 1);
    const CMatrix mat = pist_eval(p.g).mat;
    const auto a = frame_gradient([](const JMatrix& x) { return leading_minor(x, 1); }, p.g);
    double top = 0;
    for (std::size_t q = 0; q < a.size(); ++q) {
        cplx r = 0;
        for (std::size_t k = 0; k < a.size(); ++k) r += a[k] * mat(k, q);
        top = std::max(top, std::abs(r));
    }
    CHECK(top > 1e-3);
}

TEST_CASE("dressing flows stay on a leaf") {
    Rng rng(17);
    for (int n = 2; n <= 3; ++n)
        for (const auto& u : WeylElement::all(n))
            for (const auto& v : WeylElement::all(n)) {
                INFO("u=" << u.str() << " v=" << v.str());
                const WeylRep ub = weyl_representative(u), vb = weyl_representative(v);
                const bool separates = !torus_subgroup(u, v).kernel_chars.empty() || !fixed_pair(u, v).empty();
                for (std::uint64_t seed = 23; seed < 28; ++seed) {
                    const CellPoint p = sample_double_cell(u, v, ub, vb, seed);
                    CHECK(same_leaf(p, p));
                    const CellPoint q = flowed(p, rng);
                    CHECK(same_leaf(p, q, 1e-5));
                    CHECK(leaf_rank(q) == leaf_rank(p));
                    CHECK(same_leaf(twist(p), twist(q, kFlowTol), 1e-5));
                    if (separates) {
                        const TorusElement a = random_torus(n, rng, 1.5, 2.0);
                        CHECK_FALSE(same_leaf(p, CellPoint::make(p.g * a.matrix(), ub, vb), 1e-5));
                    }
                }
            }
}

TEST_CASE("projection onto the leaf through the representative") {
    for (int n = 2; n <= 3; ++n)
        for (const auto& v : WeylElement::all(n)) {
            const WeylRep vb = weyl_representative(v);
            const CellPoint base = CellPoint::make(vb.matrix, vb, vb);
            for (int s = 0; s < 4; ++s) {
                const CellPoint p = sample_double_cell(v, v, vb, vb, 60 + s);
                const LeafProjection lp = project_to_leaf(p);
                CHECK(same_leaf(lp.point, base, 1e-8));
                const GroupoidMaps m0 = gpd_maps(GroupoidElement::from_point(p));
                const GroupoidMaps m1 = gpd_maps(GroupoidElement::from_point(lp.point));
                CHECK(m0.theta.near(m1.theta, 1e-8));
            }
        }
    const WeylRep sb = weyl_representative(WeylElement::simple(2, 1));
    CHECK_THROWS_AS(project_to_leaf(sample_double_cell(WeylElement::identity(2), WeylElement::simple(2, 1),
                                                       weyl_representative(WeylElement::identity(2)), sb, 1)),
                    SchemaError);
}

TEST_CASE("the leaf through the representative as a groupoid") {
    for (int n = 2; n <= 3; ++n)
        for (const auto& v : WeylElement::all(n))
            for (const auto& r : leaf_groupoid_check(v, 9, 8)) {
                INFO(r.id << " v=" << r.v << " dev=" << r.max_dev);
                CHECK(r.pass());
            }
}

TEST_CASE("leaf report") {
    const WeylElement s = WeylElement::simple(3, 1);
    const nlohmann::json j = leaf_report(s, s, 1, 5);
    CHECK(j["I_uv"] == nlohmann::json::array({2}));
    CHECK(j["count_per_level"] == 2);
    CHECK(j["samples"] == 5);
    for (const auto& c : j["checks"]) {
        INFO(c.dump());
        CHECK(c["pass"] == true);
    }
}
