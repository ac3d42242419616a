#include "dbc/golden.hpp"

#include <algorithm>
#include <cmath>

namespace dbc {

namespace {

double rel(cplx c, cplx e, double scale = 1e-12) { return std::abs(c - e) / std::max(std::abs(e), scale); }

Observable coord(int i, int j) {
    return [i, j](const JMatrix& x) { return x(i, j); };
}

CMatrix zab(cplx z, cplx a, cplx b) { return CMatrix{{a * z, (a * b * z - 1.0) / a}, {a, b}}; }
CMatrix sigma(cplx p, cplx q, cplx t) { return CMatrix{{p * t, -t}, {t, -q * t}}; }

struct Zab {
    cplx z, a, b;
    cplx chi() const { return a * a / (1.0 - a * b * z); }
};

Zab random_zab(Rng& rng) {
    for (;;) {
        const Zab p{rng.annulus(0.3, 2.0), rng.annulus(0.5, 2.0), rng.annulus(0.3, 2.0)};
        if (std::abs(1.0 - p.a * p.b * p.z) > 0.2) return p;
    }
}

// q from t²(1 − pq) = 1
cplx leaf_q(cplx p, cplx t) { return (1.0 - 1.0 / (t * t)) / p; }

struct Pqt {
    cplx p, q, t;
};

Pqt random_pqt(Rng& rng) {
    const cplx p = rng.annulus(0.4, 2.0), t = rng.annulus(0.6, 1.6);
    return {p, leaf_q(p, t), t};
}

Pqt pqt_with(cplx p, Rng& rng) {
    const cplx t = rng.annulus(0.6, 1.6);
    return {p, leaf_q(p, t), t};
}

const WeylRep& sbar() {
    static const WeylRep r = weyl_representative(WeylElement::simple(2, 1));
    return r;
}

WeylRep sl3_vbar() {
    const WeylElement v = WeylElement::from_word(3, {1, 2});
    const CMatrix s1{{0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const CMatrix s2{{1.0, 0.0, 0.0}, {0.0, 0.0, -1.0}, {0.0, 1.0, 0.0}};
    return WeylRep{v, s1 * s2, TorusElement::identity(3), 0};
}

// [z1, z2] = [[z1,−1,0],[1,0,0],[0,0,1]] [[1,0,0],[0,z2,−1],[0,1,0]] · B
CMatrix sl3_flag_rep(cplx z1, cplx z2) {
    return CMatrix{{z1, -1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}} *
           CMatrix{{1.0, 0.0, 0.0}, {0.0, z2, -1.0}, {0.0, 1.0, 0.0}};
}

// the canonical chart of that cell reads [z1, z2] as (z1, −z2)
double flag_dev(const FlagPoint& f, cplx z1, cplx z2) {
    if (f.coords.size() != 2) return INFINITY;
    return std::max(rel(f.coords[0], z1, 1.0), rel(f.coords[1], -z2, 1.0));
}

}  // namespace

CMatrix sl3_leaf_point(const std::array<cplx, 6>& x) {
    const auto [p1, q1, t1, p2, q2, t2] = x;
    return CMatrix{{p1 * t1, -t1, 0.0}, {t1, -q1 * t1, 0.0}, {0.0, 0.0, 1.0}} *
           CMatrix{{1.0, 0.0, 0.0}, {0.0, p2 * t2, -t2}, {0.0, t2, -q2 * t2}};
}

std::vector<CheckReport> golden_sl2_brackets(std::uint64_t seed, int samples) {
    struct Entry {
        const char* name;
        int a, b, c, d;
        std::function<cplx(const CMatrix&)> rhs;
    };
    const std::vector<Entry> table{
        {"g11_g12", 0, 0, 0, 1, [](const CMatrix& g) { return g(0, 0) * g(0, 1); }},
        {"g11_g21", 0, 0, 1, 0, [](const CMatrix& g) { return g(0, 0) * g(1, 0); }},
        {"g12_g22", 0, 1, 1, 1, [](const CMatrix& g) { return g(0, 1) * g(1, 1); }},
        {"g21_g22", 1, 0, 1, 1, [](const CMatrix& g) { return g(1, 0) * g(1, 1); }},
        {"g11_g22", 0, 0, 1, 1, [](const CMatrix& g) { return 2.0 * g(0, 1) * g(1, 0); }},
        {"g12_g21", 0, 1, 1, 0, [](const CMatrix&) { return cplx(0.0); }},
    };
    std::vector<CheckReport> out;
    for (const auto& e : table) {
        CheckReport r = make_check(std::string("golden.sl2.bracket.") + e.name,
                                   "SL(2) coordinate bracket {" + std::string(e.name).replace(3, 1, ", ") +
                                       "} matches its quadratic closed form",
                                   2, 1e-9);
        Rng rng(seed);
        for (int s = 0; s < samples; ++s) {
            const CMatrix g = random_sl(2, rng);
            const cplx got = bracket_eval(coord(e.a, e.b), coord(e.c, e.d), g);
            r.add(rel(got, e.rhs(g), std::abs(g(e.a, e.b) * g(e.c, e.d))));
        }
        out.push_back(r);
    }
    return out;
}

std::vector<CheckReport> golden_sl2_groupoid(std::uint64_t seed, int samples) {
    const std::string s = WeylElement::simple(2, 1).str();
    auto chk = [&](const std::string& id, const std::string& st) { return make_check(id, st, 2, 1e-9, s, s); };
    CheckReport br = chk("golden.sl2.chart.brackets", "{z,a} = za, {z,b} = a⁻¹(abz−2), {a,b} = ab on G^{s,s}");
    CheckReport chi = chk("golden.sl2.chart.chi", "χ = a²(1−abz)⁻¹ on G^{s,s}");
    CheckReport src = chk("golden.sl2.chart.source", "θ(z,a,b) = z");
    CheckReport tgt = chk("golden.sl2.chart.target", "τ(z,a,b) = χz");
    CheckReport inv = chk("golden.sl2.chart.inverse", "ι(z,a,b) = (χz, a⁻¹, −b)");
    CheckReport idn = chk("golden.sl2.chart.identity", "ε(z) = (z, 1, 0)");
    CheckReport mul = chk("golden.sl2.chart.mul", "μ((z1,a1,b1),(χ1z1,a2,b2)) = (z1, a1a2, a1b2 + b1a2⁻¹)");
    CheckReport lbr = chk("golden.sl2.leaf.brackets", "{p,q} = 2(1−pq), {p,t} = pt, {q,t} = −qt on the leaf through s̄");
    CheckReport lmem = chk("golden.sl2.leaf.membership", "t²(1−pq) = 1 parametrizes the leaf through s̄");
    CheckReport lst = chk("golden.sl2.leaf.source_target", "θ(p,q,t) = τ(p,q,t) = p on the leaf");
    CheckReport linv = chk("golden.sl2.leaf.inverse", "ι(p,q,t) = (p, −qt², t⁻¹) on the leaf");
    CheckReport lid = chk("golden.sl2.leaf.identity", "ε(p) = (p, 0, 1) on the leaf");
    CheckReport lmul = chk("golden.sl2.leaf.mul", "μ((p,q1,t1),(p,q2,t2)) = (p, q2 + q1t2⁻², t1t2) on the leaf");

    const Observable fz = [](const JMatrix& x) { return x(0, 0) / x(1, 0); };
    const Observable fa = coord(1, 0), fb = coord(1, 1);
    const Observable fp = [](const JMatrix& x) { return x(0, 0) / x(1, 0); };
    const Observable fq = [](const JMatrix& x) { return -x(1, 1) / x(1, 0); };
    const Observable ft = coord(1, 0);
    const CellPoint base = CellPoint::make(sbar().matrix, sbar(), sbar());

    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        const Zab x = random_zab(rng);
        const CMatrix g = zab(x.z, x.a, x.b);
        br.add(std::max({rel(bracket_eval(fz, fa, g), x.z * x.a, 1.0),
                         rel(bracket_eval(fz, fb, g), (x.a * x.b * x.z - 2.0) / x.a, 1.0),
                         rel(bracket_eval(fa, fb, g), x.a * x.b, 1.0)}));
        const GroupoidElement e = GroupoidElement::make(g, sbar());
        chi.add(rel(chi_rep(e.point)[0], x.chi(), 1.0));
        src.add(rel(e.source.coords.at(0), x.z, 1.0));
        tgt.add(rel(e.target.coords.at(0), x.chi() * x.z, 1.0));
        inv.add(rel_dev(gpd_inverse(e).g(), zab(x.chi() * x.z, 1.0 / x.a, -x.b)));
        idn.add(rel_dev(gpd_identity(e.source, sbar()).g(), zab(x.z, 1.0, 0.0)));
        const cplx a2 = rng.annulus(0.5, 2.0), b2 = rng.annulus(0.3, 2.0);
        const GroupoidElement h = GroupoidElement::make(zab(x.chi() * x.z, a2, b2), sbar());
        mul.add(rel_dev(gpd_mul(e, h).g(), zab(x.z, x.a * a2, x.a * b2 + x.b / a2)));

        const Pqt y = random_pqt(rng);
        const CMatrix m = sigma(y.p, y.q, y.t);
        lbr.add(std::max({rel(bracket_eval(fp, fq, m), 2.0 * (1.0 - y.p * y.q), 1.0),
                          rel(bracket_eval(fp, ft, m), y.p * y.t, 1.0),
                          rel(bracket_eval(fq, ft, m), -y.q * y.t, 1.0)}));
        const GroupoidElement l = GroupoidElement::make(m, sbar());
        lmem.add(same_leaf(l.point, base, 1e-9) ? 0.0 : 1.0);
        lst.add(std::max(rel(l.source.coords.at(0), y.p, 1.0), rel(l.target.coords.at(0), y.p, 1.0)));
        linv.add(rel_dev(gpd_inverse(l).g(), sigma(y.p, -y.q * y.t * y.t, 1.0 / y.t)));
        lid.add(rel_dev(gpd_identity(l.source, sbar()).g(), sigma(y.p, 0.0, 1.0)));
        const Pqt y2 = pqt_with(y.p, rng);
        const GroupoidElement l2 = GroupoidElement::make(sigma(y2.p, y2.q, y2.t), sbar());
        lmul.add(rel_dev(gpd_mul(l, l2).g(), sigma(y.p, y2.q + y.q / (y2.t * y2.t), y.t * y2.t)));
    }
    return {br, chi, src, tgt, inv, idn, mul, lbr, lmem, lst, linv, lid, lmul};
}

std::vector<CheckReport> golden_sl3(std::uint64_t seed, int samples) {
    const WeylRep vb = sl3_vbar();
    const std::string vs = vb.weyl.str();
    auto chk = [&](const std::string& id, const std::string& st, double tol = 1e-8) {
        return make_check(id, st, 3, tol, vs, vs);
    };
    CheckReport fb = chk("golden.sl3.flag_bracket", "{z1,z2} = −z1z2 on the Schubert cell of s1s2");
    CheckReport rep = chk("golden.sl3.leaf.representative", "the canonical representative of s1s2 is s̄1s̄2", 0.0);
    CheckReport mem = chk("golden.sl3.leaf.membership", "products of two SL(2) leaf points lie on the leaf through s̄1s̄2");
    CheckReport src = chk("golden.sl3.leaf.source", "θ = [p1, p2t1⁻¹]");
    CheckReport tgt = chk("golden.sl3.leaf.target", "τ = [p1t2⁻¹, p2]");
    CheckReport inv = chk("golden.sl3.leaf.inverse", "ι = (p1t2⁻¹, −q1t1²t2, t1⁻¹, p2t1⁻¹, −q2t1t2², t2⁻¹)");
    CheckReport idn = chk("golden.sl3.leaf.identity", "ε(z1,z2) = (z1, 0, 1, z2, 0, 1)");
    CheckReport mul = chk("golden.sl3.leaf.mul",
                          "μ(γ,γ') = (p1, q1't2⁻¹ + q1t1'⁻², t1t1', p2', q2' + q2t1'⁻¹t2'⁻², t2t2') for p1t2⁻¹ = p1', p2 = p2't1'⁻¹");
    rep.add(rel_dev(weyl_representative(vb.weyl).matrix, vb.matrix));

    const CellPoint base = CellPoint::make(vb.matrix, vb, vb);
    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        const cplx z1 = rng.annulus(0.3, 3.0), z2 = rng.annulus(0.3, 3.0);
        const FlagPoint f = flag_canonical(sl3_flag_rep(z1, z2) * random_upper(3, rng));
        if (f.coords.size() == 2) {
            // coordinates (y1, y2) = (z1, −z2)
            const cplx got = -pi1_eval(f).mat(0, 1);
            fb.add(rel(got, -z1 * z2, std::abs(z1 * z2)));
        } else {
            fb.add(INFINITY);
        }

        const Pqt a = random_pqt(rng), b = random_pqt(rng);
        const std::array<cplx, 6> x{a.p, a.q, a.t, b.p, b.q, b.t};
        const GroupoidElement g = GroupoidElement::make(sl3_leaf_point(x), vb);
        mem.add(same_leaf(g.point, base, 1e-9) ? 0.0 : 1.0);
        src.add(flag_dev(g.source, a.p, b.p / a.t));
        tgt.add(flag_dev(g.target, a.p / b.t, b.p));
        inv.add(rel_dev(gpd_inverse(g).g(), sl3_leaf_point({a.p / b.t, -a.q * a.t * a.t * b.t, 1.0 / a.t, b.p / a.t,
                                                            -b.q * a.t * b.t * b.t, 1.0 / b.t})));
        idn.add(rel_dev(gpd_identity(flag_canonical(sl3_flag_rep(z1, z2)), vb).g(),
                        sl3_leaf_point({z1, 0.0, 1.0, z2, 0.0, 1.0})));

        // γ' with p1' = p1t2⁻¹ and p2' = p2t1'
        const Pqt a2 = pqt_with(a.p / b.t, rng);
        const cplx t2p = rng.annulus(0.6, 1.6);
        const cplx p2p = b.p * a2.t;
        const Pqt b2{p2p, leaf_q(p2p, t2p), t2p};
        const GroupoidElement h = GroupoidElement::make(sl3_leaf_point({a2.p, a2.q, a2.t, b2.p, b2.q, b2.t}), vb);
        const std::array<cplx, 6> printed{a.p,
                                          a2.q / b.t + a.q / (a2.t * a2.t),
                                          a.t * a2.t,
                                          b2.p,
                                          b2.q + b.q / (a2.t * b2.t * b2.t),
                                          b.t * b2.t};
        try {
            mul.add(rel_dev(gpd_mul(g, h).g(), sl3_leaf_point(printed)));
        } catch (const ComposabilityError& err) {
            mul.add(INFINITY);
            mul.note = err.what();
        }
    }
    return {fb, rep, mem, src, tgt, inv, idn, mul};
}

std::vector<CheckReport> golden_all(std::uint64_t seed, int samples) {
    std::vector<CheckReport> r = golden_sl2_brackets(seed, samples);
    for (auto&& v : {golden_sl2_groupoid(seed + 1, samples), golden_sl3(seed + 2, samples)})
        r.insert(r.end(), v.begin(), v.end());
    return r;
}

}  // namespace dbc
