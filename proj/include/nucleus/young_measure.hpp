#pragma once

#include <array>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nucleus/matrix.hpp"
#include "nucleus/variants.hpp"

namespace nucleus {

struct Atom {
    double weight = 0.0;
    Mat3 matrix;
    WellTag tag;
};

// Homogeneous (x-independent) Young measure with finitely many atoms. Weights
// lie in (0, 1] and sum to 1 within 1e-12; each atom is tagged with its well.
class DiscreteYoungMeasure {
public:
    // Error{InvalidMeasure} on empty input, weights outside (0,1] or a total
    // weight off 1 by more than 1e-12. Atoms with det <= 0 are tagged OffWell.
    static DiscreteYoungMeasure make(std::span<const std::pair<double, Mat3>> atoms, const VariantSet& wells,
                                     double well_tol = 1e-8);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const VariantSet& wells() const { return wells_; }

private:
    std::vector<Atom> atoms_;
    VariantSet wells_;
};

// Tag for a single matrix; det <= 0 is OffWell instead of an error.
WellTag classify_atom(const Mat3& m, const VariantSet& wells, double well_tol);

// lambda delta_F + (1 - lambda) delta_G; only valid for rank-one connected
// F, G (Error{NotRankOne} if rank_one_defect(G - F) > tol) and 0 < lambda < 1
// (Error{RangeError}).
DiscreteYoungMeasure build_laminate_measure(const Mat3& F, const Mat3& G, double lambda, const VariantSet& wells,
                                            double tol = 1e-8);

Mat3 barycenter(const DiscreteYoungMeasure& nu);

// <nu, W> with W = -delta on SO(3), 0 on the martensite wells and +inf off K.
// Atoms are re-projected at well_tol.
double energy(const DiscreteYoungMeasure& nu, double delta, double well_tol = 1e-8);

struct MinorsResiduals {
    double det_residual = 0.0;  // |det(bar nu) - <nu, det>|
    double cof_residual = 0.0;  // |cof(bar nu) - <nu, cof>|
};

MinorsResiduals minors_residuals(const DiscreteYoungMeasure& nu);

// Jensen: <nu, |.|^2> - |bar nu|^2 >= 0.
double norm_convexity_gap(const DiscreteYoungMeasure& nu);

enum class ExclusionVerdict { NoAusteniteMass, DeterminantObstruction, NormObstruction, Inconclusive };

std::string_view to_string(ExclusionVerdict v) noexcept;

// Outcome of testing an interior variation with barycenter U_s. The
// barycenter-side quantities are evaluated at U_s itself.
struct ExclusionReport {
    double det_barycenter = 0.0;      // det U_s
    double measure_det = 0.0;         // <nu, det>
    double so3_mass = 0.0;            // nu(SO(3))
    double norm_sq_barycenter = 0.0;  // |U_s|^2
    double measure_norm_sq = 0.0;     // <nu, |.|^2>
    double barycenter_error = 0.0;    // |bar nu - U_s|
    // measure_det - det_barycenter, which must equal so3_mass * (1 - det U_s)
    double det_identity = 0.0;
    double det_identity_expected = 0.0;
    ExclusionVerdict verdict = ExclusionVerdict::Inconclusive;
};

struct ExclusionOptions {
    double tol = 1e-8;               // so3 mass threshold and U_s = I test
    double barycenter_tol = 1e-8;    // allowed |bar nu - U_s|
    double unit_det_tol = 1e-10;     // |det U_s - 1| below this takes the norm branch
};

// Error{RangeError} for a bad s; Error{BarycenterMismatch} if |bar nu - U_s| >
// barycenter_tol; Error{InvalidMeasure} if an atom is off the wells.
ExclusionReport interior_exclusion_check(const DiscreteYoungMeasure& nu, const VariantSet& vs, int s,
                                         const ExclusionOptions& opt = {});

// Verdict from the numeric fields alone (used by interior_exclusion_check).
ExclusionVerdict exclusion_verdict(const ExclusionReport& r, double tol, double unit_det_tol, bool untransformed);

// On-well probe with SO(3) mass so3_mass and barycenter U_s. When the
// stretches of U_s lie in the rotation hull the probe is so3_mass spread over
// rotations averaging to U_s plus (1 - so3_mass) at U_s, exact for every mass.
// Otherwise: mass at the identity and the rest on rotations of U_s, exact only
// for small enough masses and clipped to the nearest mixture beyond that.
DiscreteYoungMeasure austenite_probe(const VariantSet& vs, int s, double so3_mass);

// True when diag(d) is an average of rotations: d lies in the tetrahedron
// spanned by (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
bool in_rotation_hull(const Vec3& d);

// Rotations (in the eigenframe `basis`) and non-negative weights whose average
// is basis * diag(target) * basis^T. Exact when target lies in the tetrahedron
// spanned by the four diagonal rotations; otherwise clipped onto it.
std::vector<std::pair<double, Mat3>> rotations_averaging_to(const Mat3& basis, const Vec3& target);

}  // namespace nucleus
