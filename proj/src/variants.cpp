#include "nucleus/variants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nucleus/error.hpp"

namespace nucleus {

void validate(const LatticeParams& p) {
    for (double x : {p.alpha, p.beta, p.gamma}) {
        if (!std::isfinite(x) || x <= 0.0)
            throw Error(ErrorCode::InvalidParams, "lattice stretches must be finite and positive");
    }
}

bool is_untransformed(const LatticeParams& p, double tol) {
    return std::abs(p.alpha - 1.0) <= tol && std::abs(p.beta - 1.0) <= tol && std::abs(p.gamma - 1.0) <= tol;
}

void check_variant_index(int s) {
    if (s < 1 || s > kVariantCount)
        throw Error(ErrorCode::RangeError, "variant index " + std::to_string(s) + " outside 1..6");
}

const Mat3& VariantSet::variant(int s) const {
    check_variant_index(s);
    return U[static_cast<std::size_t>(s - 1)];
}

VariantSet make_variants(const LatticeParams& params) {
    validate(params);
    const double a = params.alpha, b = params.beta, g = params.gamma;
    const double p = 0.5 * (a + g);
    const double m = 0.5 * (a - g);

    VariantSet vs;
    vs.params = params;
    vs.U = {
        Mat3{b, 0, 0, 0, p, m, 0, m, p},
        Mat3{b, 0, 0, 0, p, -m, 0, -m, p},
        Mat3{p, 0, m, 0, b, 0, m, 0, p},
        Mat3{p, 0, -m, 0, b, 0, -m, 0, p},
        Mat3{p, m, 0, m, p, 0, 0, 0, b},
        Mat3{p, -m, 0, -m, p, 0, 0, 0, b},
    };
    return vs;
}

bool variants_coincide(const VariantSet& vs, double tol) {
    return std::all_of(vs.U.begin(), vs.U.end(), [&](const Mat3& u) { return norm(u - vs.U[0]) <= tol; });
}

std::array<double, kVariantCount + 1> well_distances(const Mat3& m, const VariantSet& vs) {
    if (!(det(m) > 0.0)) throw Error(ErrorCode::Singular, "well projection needs det M > 0");
    std::array<double, kVariantCount + 1> d{};
    d[0] = distance_to_rotations(m);
    for (std::size_t i = 0; i < kVariantCount; ++i) {
        const Mat3 r = polar(m * vs.U[i]).rotation;
        d[i + 1] = norm(m - r * vs.U[i]);
    }
    return d;
}

WellTag well_projection(const Mat3& m, const VariantSet& vs, double tol) {
    const auto d = well_distances(m, vs);
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] < d[best]) best = i;
    if (d[best] > tol) return WellTag::off_well();
    return best == 0 ? WellTag::austenite() : WellTag::martensite(static_cast<int>(best));
}

const std::array<Mat3, 24>& cubic_rotations() {
    static const std::array<Mat3, 24> rotations = [] {
        std::array<Mat3, 24> out{};
        std::size_t k = 0;
        std::array<int, 3> perm{0, 1, 2};
        do {
            for (int signs = 0; signs < 8; ++signs) {
                Mat3 r;
                for (std::size_t i = 0; i < 3; ++i)
                    r(i, static_cast<std::size_t>(perm[i])) = (signs >> i) & 1 ? -1.0 : 1.0;
                if (det(r) > 0.0) out[k++] = r;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }();
    return rotations;
}

}  // namespace nucleus
