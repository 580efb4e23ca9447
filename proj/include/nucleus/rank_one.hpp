#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nucleus/matrix.hpp"
#include "nucleus/variants.hpp"

namespace nucleus {

// A solution of the twinning equation  Q G - F = a (x) n.
struct TwinSolution {
    Mat3 Q;
    Vec3 a;
    Vec3 n;           // unit, first nonzero component positive
    int branch = 1;   // 1 or 2
    double residual = 0.0;
};

struct TwinTolerances {
    // |mu_2(C) - 1| allowed for solvability, and |C - I| below which the wells coincide.
    double solvability = 1e-8;
    double residual = 1e-10;
};

// All rank-one connections between SO(3)G and F. Forms C = F^-T G^T G F^-1;
// returns the two classical branches when the middle eigenvalue of C is 1,
// nothing otherwise. Residuals are not checked here.
//
// Throws Error{Singular} for det F <= 0 or det G <= 0 and Error{Degenerate}
// when C = I (infinitely many trivial solutions).
std::vector<TwinSolution> twin_candidates(const Mat3& F, const Mat3& G, double solvability_tol);

// twin_candidates() plus the residual contract: every returned solution has
// |Q G - F - a (x) n| <= tol.residual, else Error{NumericalFailure}.
std::vector<TwinSolution> solve_twin(const Mat3& F, const Mat3& G, const TwinTolerances& tol = {});

// Solutions keyed by ordered 1-based variant pair (i, j): Q U_j - U_i = a (x) n.
using TwinTable = std::map<std::pair<int, int>, std::vector<TwinSolution>>;

TwinTable twin_table(const VariantSet& vs, const TwinTolerances& tol = {});

// |Q G - F - a (x) n|
double twin_residual(const Mat3& F, const Mat3& G, const TwinSolution& t);

}  // namespace nucleus
