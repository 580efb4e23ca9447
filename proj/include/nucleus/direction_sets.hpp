#pragma once

// Membership in the direction sets that decide which faces and edges can be
// excluded as nucleation sites:
//
//   M_s      = { e : |U_s e| = max_i { |U_i e|, 1 } }
//   M_s^-1   = { e : |cof U_s e| > max_{i != s} { |cof U_i e|, 1 } } u { e_max(cof U_s) }
//
// and the qualifying set  M_s u U_s^-2 M_s^-1.  Two evaluation modes exist:
// the definitions above, and closed-form sign/ordering conditions on the
// components of e that hold for a range of lattice parameters. The two are
// cross-checked at runtime before the closed form is trusted.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nucleus/matrix.hpp"
#include "nucleus/variants.hpp"

namespace nucleus {

enum class DirectionMode { Definitional, Explicit };

std::string_view to_string(DirectionMode m) noexcept;

inline constexpr double kDefaultBoundaryBand = 1e-6;
// angular slack for the isolated e_max point
inline constexpr double kEmaxAngleTol = 1e-8;

struct DirectionVerdict {
    Vec3 e;
    bool in_Ms = false;
    bool in_Msinv = false;       // e itself in M_s^-1
    bool in_Us2_Msinv = false;   // normalized U_s^2 e in M_s^-1
    bool qualifying = false;     // in_Ms || in_Us2_Msinv
    DirectionMode mode = DirectionMode::Definitional;
    bool boundary_flag = false;  // some defining inequality is within the band
};

// All predicates throw Error{NotUnit} when |e| differs from 1 by more than 1e-10
// and Error{RangeError} for s outside 1..6.

bool in_Ms_definitional(const Vec3& e, const VariantSet& vs, int s, double tol = kDefaultTol);

// Error{AmbiguousEmax} when the top two eigenvalues of cof U_s agree within 1e-10.
bool in_Msinv_definitional(const Vec3& e, const VariantSet& vs, int s, double tol = kDefaultTol);

bool in_Ms_explicit(const Vec3& e, int s);
bool in_Msinv_explicit(const Vec3& e, int s);

// Signed slack of the deciding inequality (positive inside). Definitional:
// |U_s e| - max_{i!=s}(|U_i e|, 1) and the analogue with cofactors.
double Ms_margin_definitional(const Vec3& e, const VariantSet& vs, int s);
double Msinv_margin_definitional(const Vec3& e, const VariantSet& vs, int s);
// Smallest absolute slack over the closed-form inequalities.
double margin_explicit(const Vec3& e, int s);

DirectionVerdict qualifying(const Vec3& e, const VariantSet& vs, int s, DirectionMode mode,
                            double tol = kDefaultTol, double band = kDefaultBoundaryBand);

struct Disagreement {
    std::uint64_t index = 0;
    Vec3 e;
    bool definitional_Ms = false;
    bool definitional_Msinv = false;
    bool explicit_Ms = false;
    bool explicit_Msinv = false;
};

struct ValidationStats {
    int s = 1;
    std::uint64_t samples = 0;
    std::uint64_t evaluated = 0;  // outside the boundary band
    std::uint64_t agreements = 0;
    double agreement = 1.0;       // agreements / evaluated
    double band = kDefaultBoundaryBand;
    bool degenerate = false;      // parameters admit no meaningful comparison
    std::string degenerate_reason;
    std::vector<Disagreement> disagreements;  // ascending index, at most kMaxReportedDisagreements

    static constexpr std::size_t kMaxReportedDisagreements = 64;
};

// Uniform directions on S^2 (normalized Gaussians). Sample i depends only on
// (seed, i), never on how the work is split.
std::vector<Vec3> sample_sphere(std::uint64_t count, std::uint64_t seed);

// Agreement between the two modes on the given directions, skipping points
// where either mode is within `band` of a boundary.
ValidationStats cross_validate_points(const VariantSet& vs, int s, std::span<const Vec3> points, double band,
                                      unsigned workers = 0);

ValidationStats cross_validate(const VariantSet& vs, int s, std::uint64_t samples, double band,
                               std::uint64_t seed, unsigned workers = 0);

// Agreement threshold below which the closed-form mode is not trusted.
inline constexpr double kExplicitModeMinAgreement = 0.999;

}  // namespace nucleus
