#pragma once

#include <array>

#include "dbc/leaves.hpp"

namespace dbc {

// Worked SL(2) and SL(3) examples, recomputed through the library and compared
// with their closed forms.

// the six coordinate brackets {g_ij, g_kl} at seeded points of SL(2)
std::vector<CheckReport> golden_sl2_brackets(std::uint64_t seed, int samples);

// G^{s,s} in the chart g = [[az, (abz−1)/a], [a, b]]: brackets of (z,a,b), χ, θ, τ, ι, ε, μ;
// the leaf through s̄ in the chart [[pt, −t], [t, −qt]], t²(1−pq) = 1: brackets and groupoid maps
std::vector<CheckReport> golden_sl2_groupoid(std::uint64_t seed, int samples);

// SL(3): the flag bracket on the cell of s1s2 and the groupoid maps on the leaf through s̄1s̄2,
// parametrized as products of two SL(2) leaves
std::vector<CheckReport> golden_sl3(std::uint64_t seed, int samples);

std::vector<CheckReport> golden_all(std::uint64_t seed, int samples);

// [[p1t1, −t1, 0], [t1, −q1t1, 0], [0, 0, 1]] · [[1, 0, 0], [0, p2t2, −t2], [0, t2, −q2t2]]
CMatrix sl3_leaf_point(const std::array<cplx, 6>& x);

}  // namespace dbc
