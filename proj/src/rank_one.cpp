#include "nucleus/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nucleus/error.hpp"

namespace nucleus {

namespace {

// Flip (a, n) so the first component of n above noise level is positive.
void canonicalize(TwinSolution& t) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(t.n[i]) > 1e-12) {
            if (t.n[i] < 0.0) {
                t.n = -t.n;
                t.a = -t.a;
            }
            return;
        }
    }
}

}  // namespace

double twin_residual(const Mat3& F, const Mat3& G, const TwinSolution& t) {
    return norm(t.Q * G - F - outer(t.a, t.n));
}

std::vector<TwinSolution> twin_candidates(const Mat3& F, const Mat3& G, double solvability_tol) {
    if (!(det(F) > 0.0) || !(det(G) > 0.0))
        throw Error(ErrorCode::Singular, "twinning equation needs det F > 0 and det G > 0");

    const Mat3 f_inv = inverse(F);
    const Mat3 g_hat = G * f_inv;
    Mat3 c = transpose(g_hat) * g_hat;
    c = 0.5 * (c + transpose(c));
    if (norm(c - Mat3::identity()) <= solvability_tol)
        throw Error(ErrorCode::Degenerate, "wells coincide: C = I");

    const SymEig3 eig = sym_eigen(c);
    if (std::abs(eig.values[1] - 1.0) > solvability_tol) return {};

    const double l1 = std::min(eig.values[0], 1.0);
    const double l3 = std::max(eig.values[2], 1.0);
    if (l3 - l1 <= 1e-14) throw Error(ErrorCode::Degenerate, "wells coincide: C = I");
    const Vec3& e1 = eig.vectors[0];
    const Vec3& e3 = eig.vectors[2];

    const double span = l3 - l1;
    const double ca1 = std::sqrt(l3 * (1.0 - l1) / span);
    const double ca3 = std::sqrt(l1 * (l3 - 1.0) / span);
    const double cn = (std::sqrt(l3) - std::sqrt(l1)) / std::sqrt(span);
    const double cn1 = std::sqrt(1.0 - l1);
    const double cn3 = std::sqrt(l3 - 1.0);

    std::vector<TwinSolution> out;
    for (int branch = 1; branch <= 2; ++branch) {
        const double kappa = branch == 1 ? 1.0 : -1.0;
        // Q G F^-1 - I = a' (x) n'  in the frame of F.
        const Vec3 a_ref = ca1 * e1 + kappa * ca3 * e3;
        const Vec3 n_ref = cn * (-cn1 * e1 + kappa * cn3 * e3);

        Vec3 n = transpose(F) * n_ref;
        const double scale = norm(n);
        n *= 1.0 / scale;

        TwinSolution t;
        t.branch = branch;
        t.Q = polar((F + outer(scale * a_ref, n)) * inverse(G)).rotation;
        // With Q fixed, (Q G - F) n is the best shear for the unit normal n.
        t.n = n;
        t.a = (t.Q * G - F) * n;
        canonicalize(t);
        t.residual = twin_residual(F, G, t);
        out.push_back(t);
    }
    return out;
}

std::vector<TwinSolution> solve_twin(const Mat3& F, const Mat3& G, const TwinTolerances& tol) {
    auto solutions = twin_candidates(F, G, tol.solvability);
    for (const auto& t : solutions) {
        if (!(t.residual <= tol.residual))
            throw Error(ErrorCode::NumericalFailure,
                        "twin residual " + std::to_string(t.residual) + " exceeds tolerance");
    }
    return solutions;
}

TwinTable twin_table(const VariantSet& vs, const TwinTolerances& tol) {
    TwinTable table;
    for (int i = 1; i <= kVariantCount; ++i) {
        for (int j = 1; j <= kVariantCount; ++j) {
            if (i == j) continue;
            table[{i, j}] = solve_twin(vs.variant(i), vs.variant(j), tol);
        }
    }
    return table;
}

}  // namespace nucleus
