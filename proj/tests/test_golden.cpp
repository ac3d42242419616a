#include <doctest.h>

#include "dbc/golden.hpp"

using namespace dbc;

TEST_CASE("worked examples reproduce") {
    for (std::uint64_t seed : {1u, 77u}) {
        const auto reports = golden_all(seed, 20);
        CHECK(reports.size() == 27);
        for (const auto& r : reports) {
            INFO(r.id << " dev=" << r.max_dev << " " << r.note);
            CHECK(r.pass());
            CHECK(r.samples >= 1);
        }
    }
}

TEST_CASE("SL(3) leaf chart") {
    const std::array<cplx, 6> e{0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
    const WeylRep vb = weyl_representative(WeylElement::from_word(3, {1, 2}));
    CHECK(rel_dev(sl3_leaf_point(e), vb.matrix) < 1e-15);

    // a torus translate stays in G^{v,v} but leaves Σ
    const cplx p1 = 0.7, t1 = 1.3, p2 = -0.4, t2 = 0.9;
    auto q = [](cplx p, cplx t) { return (1.0 - 1.0 / (t * t)) / p; };
    const CellPoint on = CellPoint::make(sl3_leaf_point({p1, q(p1, t1), t1, p2, q(p2, t2), t2}), vb, vb);
    const CellPoint off = CellPoint::make(on.g * TorusElement({2.0, 0.5, 1.0}).matrix(), vb, vb);
    const CellPoint base = CellPoint::make(vb.matrix, vb, vb);
    CHECK(same_leaf(on, base));
    CHECK_FALSE(same_leaf(off, base));
}
