#pragma once

#include <array>
#include <vector>

#include "nucleus/matrix.hpp"

namespace nucleus {

inline constexpr int kVariantCount = 6;

// Orthorhombic stretches of the cubic-to-orthorhombic transformation.
struct LatticeParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;

    double det() const { return alpha * beta * gamma; }
    double norm_sq() const { return alpha * alpha + beta * beta + gamma * gamma; }
    // The face/edge exclusion argument assumes det U_s <= 1.
    bool det_le_one() const { return det() <= 1.0; }

    friend bool operator==(const LatticeParams&, const LatticeParams&) = default;
};

// Throws Error{InvalidParams} unless every stretch is finite and positive.
void validate(const LatticeParams& p);

// True when alpha = beta = gamma = 1 within tol: every well is SO(3).
bool is_untransformed(const LatticeParams& p, double tol = kDefaultTol);

struct VariantSet {
    std::array<Mat3, kVariantCount> U;
    LatticeParams params;

    // 1-based, as the variants are conventionally numbered. Error{RangeError} outside 1..6.
    const Mat3& variant(int s) const;
};

// Throws Error{RangeError} unless 1 <= s <= 6.
void check_variant_index(int s);

// U_1, U_2 carry beta in slot (1,1), U_3, U_4 in (2,2), U_5, U_6 in (3,3); the
// off-diagonal pair is +(alpha-gamma)/2 for odd and -(alpha-gamma)/2 for even indices.
VariantSet make_variants(const LatticeParams& params);

// True when all six wells coincide (alpha = beta = gamma).
bool variants_coincide(const VariantSet& vs, double tol = kDefaultTol);

struct WellTag {
    enum class Kind { Austenite, Martensite, OffWell };
    Kind kind = Kind::OffWell;
    int variant = 0;  // 1..6 when kind == Martensite

    static WellTag austenite() { return {Kind::Austenite, 0}; }
    static WellTag martensite(int i) { return {Kind::Martensite, i}; }
    static WellTag off_well() { return {Kind::OffWell, 0}; }

    friend bool operator==(const WellTag&, const WellTag&) = default;
};

// Frobenius distances to SO(3) (index 0) and to each SO(3)U_i (index i).
// The nearest point of SO(3)U is R U with R the polar rotation of M U.
std::array<double, kVariantCount + 1> well_distances(const Mat3& m, const VariantSet& vs);

// Nearest well within tol; ties go to the smaller distance, then to the lower
// index (austenite first). Error{Singular} if det M <= 0.
WellTag well_projection(const Mat3& m, const VariantSet& vs, double tol);

// The 24 proper rotations of the cube (signed permutation matrices, det +1).
const std::array<Mat3, 24>& cubic_rotations();

}  // namespace nucleus
