#pragma once

#include "dbc/poisson.hpp"

namespace dbc {

// A point of G^{v,v} with the groupoid structure of one fixed representative v̄:
// g = c b = b_- c', source c·B, target c'·B.
struct GroupoidElement {
    CellPoint point;
    FlagPoint source, target;

    static GroupoidElement make(const CMatrix& g, const WeylRep& vbar, const Tolerance& tol = {});
    static GroupoidElement from_point(const CellPoint& p, const Tolerance& tol = {});

    const CMatrix& g() const { return point.g; }
    const WeylRep& rep() const { return point.vbar; }
    const WeylElement& cell() const { return point.v; }
};

struct GroupoidMaps {
    FlagPoint theta, tau;
    GroupoidElement inverse;
    GroupoidElement identity_at;  // ε(θ(g))
};
GroupoidMaps gpd_maps(const GroupoidElement& e, const Tolerance& tol = {});

// the representative of y in C_v̄, i.e. ε_v̄(y)
CMatrix cell_representative(const FlagPoint& y, const WeylRep& vbar);
GroupoidElement gpd_identity(const FlagPoint& y, const WeylRep& vbar, const Tolerance& tol = {});
GroupoidElement gpd_inverse(const GroupoidElement& e, const Tolerance& tol = {});
// μ(g,h) = g b_h; throws ComposabilityError unless τ(g) = θ(h)
GroupoidElement gpd_mul(const GroupoidElement& e1, const GroupoidElement& e2, const Tolerance& tol = {});

// ---------------------------------------------------------------- (G/B) × B_-

struct ActionGroupoidElement {
    FlagPoint flag;
    CMatrix b_minus;

    // chart (flag coords ⊕ B_- entry coords)
    std::vector<cplx> coords() const;
};

struct ActionMaps {
    FlagPoint theta, tau;
    ActionGroupoidElement inverse;
};
ActionMaps action_gpd(const ActionGroupoidElement& e, const Tolerance& tol = {});
FlagPoint action_target(const ActionGroupoidElement& e, const Tolerance& tol = {});
ActionGroupoidElement action_gpd_mul(const ActionGroupoidElement& e1, const ActionGroupoidElement& e2,
                                     const Tolerance& tol = {});

// I_v̄(b_- c) = (g·B, b_-), J_v̄(b_- c) = (c·B, b_-^{-1})
ActionGroupoidElement embed_Iv(const CellPoint& p, const Tolerance& tol = {});
ActionGroupoidElement embed_Jv(const CellPoint& p, const Tolerance& tol = {});
bool in_F(const ActionGroupoidElement& e, const WeylElement& u, const WeylElement& v, const Tolerance& tol = {});

// ---------------------------------------------------------------- twist and actions

// G^{u,v} → G^{v,u}, g = c b = b_- c' ↦ b_-^{-1} c = c' b^{-1}
CellPoint twist(const CellPoint& p, const Tolerance& tol = {});
// largest disagreement between b_-^{-1}c, c'b^{-1} and the closed formula through [ ]_±
double twist_formula_defect(const CellPoint& p);

// g ▷ x = b_-(g) x, moment τ_ū(g) = x·B
CellPoint act_left(const GroupoidElement& g, const CellPoint& x, const Tolerance& tol = {});
// x ◁ h = x b(h), moment c''·B = θ_v̄(h) where x = b_-'' c''
CellPoint act_right(const CellPoint& x, const GroupoidElement& h, const Tolerance& tol = {});
FlagPoint moment_left(const CellPoint& x, const Tolerance& tol = {});
FlagPoint moment_right(const CellPoint& x, const Tolerance& tol = {});

// ---------------------------------------------------------------- sampling

// A point x = c b (b ∈ B) of B_- v B_-, with c the given representative of a flag;
// b comes from the UL factorization of c^{-1} b_1 v̄ for a random b_1 ∈ B_-.
CMatrix sample_over_flag(const CMatrix& c, const WeylRep& vbar, Rng& rng);
// h ∈ G^{v,v} with θ_v̄(h) = y
GroupoidElement sample_with_source(const FlagPoint& y, const WeylRep& vbar, Rng& rng, const Tolerance& tol = {});
// x ∈ G^{u,v} with x·B = y (y in cell u)
CellPoint sample_with_moment(const FlagPoint& y, const WeylRep& ubar, const WeylRep& vbar, Rng& rng,
                             const Tolerance& tol = {});

// ---------------------------------------------------------------- Poisson checks

// right-trivialized Jacobian of a matrix-valued map at g, compared against the
// bivector at F(g): |J Π(g) Jᵀ − sign Π(F(g))|
double group_map_deviation(const std::function<JMatrix(const JMatrix&)>& F, const CMatrix& g, double sign);

// θ_v̄ pushes π_st to π_1, τ_v̄ to −π_1
double source_push_defect(const GroupoidElement& e);
double target_push_defect(const GroupoidElement& e);
double inverse_push_defect(const GroupoidElement& e);
double twist_push_defect(const CellPoint& p);

using PairProduct = std::function<JMatrix(const JMatrix&, const JMatrix&)>;
using FlagMap = std::function<std::vector<Jet>(const JMatrix&)>;

// Graph {(x1, x2, P(x1, x2))} over the pairs with m1(x1) = m2(x2), both factors
// moving inside their double Bruhat cells, in G × G × G with bivectors
// (π_st, π_st, last_sign·π_st).  Residual of the bivector on the conormal.
double pair_graph_defect(const CMatrix& x1, const CMatrix& x2, const FlagMap& m1, const FlagMap& m2,
                         const PairProduct& prod, double last_sign = -1.0);

// Coisotropy of the graph {(g, h, μ(g,h))} in G × G × Ḡ at a composable pair.
double mul_graph_defect(const GroupoidElement& g, const GroupoidElement& h);
// {(g, x, g ▷ x)} and {(x, h, x ◁ h)}
double left_action_graph_defect(const GroupoidElement& g, const CellPoint& x);
double right_action_graph_defect(const CellPoint& x, const GroupoidElement& h);
// {(a, b, ab)} for the mixed structure on (G/B) × B_-
double action_mul_graph_defect(const ActionGroupoidElement& a, const ActionGroupoidElement& b);

// X_α = π^#(τ^*α) for a covector α on the target chart
std::vector<cplx> x_alpha(const ActionGroupoidElement& e, const std::vector<cplx>& alpha, const Tolerance& tol = {});
// max(|θ_*X_α(ab)|, |X_α(ab) − l_a X_α(b)|) relative to |X_α(ab)|
double left_invariance_defect(const ActionGroupoidElement& a, const ActionGroupoidElement& b,
                              const std::vector<cplx>& alpha, const Tolerance& tol = {});

nlohmann::json to_json(const GroupoidElement& e);
nlohmann::json to_json(const ActionGroupoidElement& e);

}  // namespace dbc
