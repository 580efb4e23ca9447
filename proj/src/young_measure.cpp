#include "nucleus/young_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nucleus/error.hpp"

namespace nucleus {

std::string_view to_string(ExclusionVerdict v) noexcept {
    switch (v) {
        case ExclusionVerdict::NoAusteniteMass: return "NoAusteniteMass";
        case ExclusionVerdict::DeterminantObstruction: return "DeterminantObstruction";
        case ExclusionVerdict::NormObstruction: return "NormObstruction";
        case ExclusionVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

WellTag classify_atom(const Mat3& m, const VariantSet& wells, double well_tol) {
    if (!(det(m) > 0.0)) return WellTag::off_well();
    return well_projection(m, wells, well_tol);
}

DiscreteYoungMeasure DiscreteYoungMeasure::make(std::span<const std::pair<double, Mat3>> atoms,
                                                const VariantSet& wells, double well_tol) {
    if (atoms.empty()) throw Error(ErrorCode::InvalidMeasure, "a measure needs at least one atom");
    DiscreteYoungMeasure nu;
    nu.wells_ = wells;
    double total = 0.0;
    for (const auto& [w, m] : atoms) {
        if (!(w > 0.0 && w <= 1.0)) throw Error(ErrorCode::InvalidMeasure, "atom weight outside (0, 1]");
        total += w;
        nu.atoms_.push_back({w, m, classify_atom(m, wells, well_tol)});
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidMeasure, "weights do not sum to 1");
    return nu;
}

DiscreteYoungMeasure build_laminate_measure(const Mat3& F, const Mat3& G, double lambda, const VariantSet& wells,
                                            double tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::RangeError, "lambda outside (0, 1)");
    if (rank_one_defect(G - F) > tol) throw Error(ErrorCode::NotRankOne, "laminate end states are not rank-one connected");
    const std::pair<double, Mat3> atoms[] = {{lambda, F}, {1.0 - lambda, G}};
    return DiscreteYoungMeasure::make(atoms, wells);
}

Mat3 barycenter(const DiscreteYoungMeasure& nu) {
    Mat3 out;
    for (const auto& a : nu.atoms()) out += a.weight * a.matrix;
    return out;
}

double energy(const DiscreteYoungMeasure& nu, double delta, double well_tol) {
    double e = 0.0;
    for (const auto& a : nu.atoms()) {
        const WellTag tag = classify_atom(a.matrix, nu.wells(), well_tol);
        if (tag.kind == WellTag::Kind::OffWell) return std::numeric_limits<double>::infinity();
        if (tag.kind == WellTag::Kind::Austenite) e -= delta * a.weight;
    }
    return e;
}

MinorsResiduals minors_residuals(const DiscreteYoungMeasure& nu) {
    double mean_det = 0.0;
    Mat3 mean_cof;
    for (const auto& a : nu.atoms()) {
        mean_det += a.weight * det(a.matrix);
        mean_cof += a.weight * cofactor(a.matrix);
    }
    const Mat3 bar = barycenter(nu);
    return {std::abs(det(bar) - mean_det), norm(cofactor(bar) - mean_cof)};
}

double norm_convexity_gap(const DiscreteYoungMeasure& nu) {
    double mean_sq = 0.0;
    for (const auto& a : nu.atoms()) mean_sq += a.weight * norm_sq(a.matrix);
    return mean_sq - norm_sq(barycenter(nu));
}

ExclusionVerdict exclusion_verdict(const ExclusionReport& r, double tol, double unit_det_tol, bool untransformed) {
    if (r.so3_mass <= tol) return ExclusionVerdict::NoAusteniteMass;
    if (untransformed) return ExclusionVerdict::Inconclusive;
    // mass on SO(3) forces <nu,det> - det U_s = mass (1 - det U_s) != 0 ...
    if (std::abs(r.det_barycenter - 1.0) > unit_det_tol) return ExclusionVerdict::DeterminantObstruction;
    // ... or, at det U_s = 1, <nu,|.|^2> < |U_s|^2, contradicting convexity of |.|^2
    return ExclusionVerdict::NormObstruction;
}

ExclusionReport interior_exclusion_check(const DiscreteYoungMeasure& nu, const VariantSet& vs, int s,
                                         const ExclusionOptions& opt) {
    const Mat3& us = vs.variant(s);
    ExclusionReport r;
    r.barycenter_error = norm(barycenter(nu) - us);
    if (!(r.barycenter_error <= opt.barycenter_tol))
        throw Error(ErrorCode::BarycenterMismatch, "measure barycenter differs from U_s");

    for (const auto& a : nu.atoms()) {
        if (a.tag.kind == WellTag::Kind::OffWell)
            throw Error(ErrorCode::InvalidMeasure, "interior exclusion needs every atom on the wells");
        r.measure_det += a.weight * det(a.matrix);
        r.measure_norm_sq += a.weight * norm_sq(a.matrix);
        if (a.tag.kind == WellTag::Kind::Austenite) r.so3_mass += a.weight;
    }
    r.det_barycenter = det(us);
    r.norm_sq_barycenter = norm_sq(us);
    r.det_identity = r.measure_det - r.det_barycenter;
    r.det_identity_expected = r.so3_mass * (1.0 - r.det_barycenter);
    const bool untransformed = norm(us - Mat3::identity()) <= opt.tol;
    r.verdict = exclusion_verdict(r, opt.tol, opt.unit_det_tol, untransformed);
    return r;
}

bool in_rotation_hull(const Vec3& d) {
    return 1 + d[0] + d[1] + d[2] >= 0 && 1 + d[0] - d[1] - d[2] >= 0 && 1 - d[0] + d[1] - d[2] >= 0 &&
           1 - d[0] - d[1] + d[2] >= 0;
}

std::vector<std::pair<double, Mat3>> rotations_averaging_to(const Mat3& basis, const Vec3& target) {
    Vec3 t = target;
    for (std::size_t i = 0; i < 3; ++i) t[i] = std::clamp(t[i], -1.0, 1.0);
    // barycentric coordinates w.r.t. I, diag(1,-1,-1), diag(-1,1,-1), diag(-1,-1,1)
    std::array<double, 4> p{(1 + t[0] + t[1] + t[2]) / 4, (1 + t[0] - t[1] - t[2]) / 4,
                            (1 - t[0] + t[1] - t[2]) / 4, (1 - t[0] - t[1] + t[2]) / 4};
    double total = 0.0;
    for (auto& x : p) {
        x = std::max(x, 0.0);
        total += x;
    }
    const std::array<Mat3, 4> diag{Mat3::identity(), Mat3::diag(1, -1, -1), Mat3::diag(-1, 1, -1),
                                   Mat3::diag(-1, -1, 1)};
    std::vector<std::pair<double, Mat3>> out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (p[k] <= 0.0) continue;
        out.emplace_back(p[k] / total, basis * diag[k] * transpose(basis));
    }
    return out;
}

DiscreteYoungMeasure austenite_probe(const VariantSet& vs, int s, double so3_mass) {
    if (!(so3_mass > 0.0 && so3_mass <= 1.0)) throw Error(ErrorCode::RangeError, "so3_mass outside (0, 1]");
    const Mat3& us = vs.variant(s);
    const SymEig3 e = sym_eigen(us);
    const Vec3 u{e.values[0], e.values[1], e.values[2]};
    std::vector<std::pair<double, Mat3>> atoms;

    if (in_rotation_hull(u)) {
        // U_s is itself an average of rotations: theta of them plus (1 - theta) U_s
        for (const auto& [w, r] : rotations_averaging_to(e.basis(), u)) atoms.emplace_back(so3_mass * w, r);
        if (so3_mass < 1.0) atoms.emplace_back(1.0 - so3_mass, us);
        return DiscreteYoungMeasure::make(atoms, vs);
    }

    atoms.emplace_back(so3_mass, Mat3::identity());
    if (so3_mass < 1.0) {
        // theta I + (1 - theta) M U_s = U_s  <=>  M = (I - theta U_s^-1) / (1 - theta)
        Vec3 target;
        for (std::size_t i = 0; i < 3; ++i) target[i] = (u[i] - so3_mass) / ((1.0 - so3_mass) * u[i]);
        for (const auto& [w, r] : rotations_averaging_to(e.basis(), target))
            atoms.emplace_back((1.0 - so3_mass) * w, r * us);
    }
    return DiscreteYoungMeasure::make(atoms, vs);
}

}  // namespace nucleus
