#include "nucleus/specimen.hpp"

#include <cmath>
#include <numbers>

#include "nucleus/error.hpp"

namespace nucleus {

std::string_view to_string(FaceMode m) noexcept { return m == FaceMode::Theorem ? "theorem" : "extended"; }

std::string_view to_string(SiteReason r) noexcept {
    switch (r) {
        case SiteReason::DeterminantObstruction: return "DeterminantObstruction";
        case SiteReason::NormObstruction: return "NormObstruction";
        case SiteReason::CoveringDirectionExists: return "CoveringDirectionExists";
        case SiteReason::CertificateFound: return "CertificateFound";
        case SiteReason::NoCertificate: return "NoCertificate";
        case SiteReason::HypothesisUnmet: return "HypothesisUnmet";
        case SiteReason::NoTransformation: return "NoTransformation";
    }
    return "NoCertificate";
}

std::string_view to_string(Headline h) noexcept {
    switch (h) {
        case Headline::CornersOnly: return "corner-only";
        case Headline::Inconclusive: return "inconclusive";
        case Headline::NoCertificate: return "no-certificate";
        case Headline::NoTransformation: return "no-transformation";
    }
    return "inconclusive";
}

std::string SiteId::name() const {
    switch (kind) {
        case SiteKind::Interior: return "interior";
        case SiteKind::Face: return "face " + std::to_string(index + 1);
        case SiteKind::Edge: return "edge " + std::to_string(index + 1);
        case SiteKind::Corner: return "corner " + std::to_string(index + 1);
    }
    return "interior";
}

void validate(const Specimen& sp) {
    validate(sp.lattice);
    check_variant_index(sp.stabilized_variant);
    for (const auto& d : sp.edge_directions)
        if (!is_unit(d, 1e-10)) throw Error(ErrorCode::NotUnit, "edge directions must be unit vectors");
    const Mat3 frame = Mat3::from_columns(sp.edge_directions[0], sp.edge_directions[1], sp.edge_directions[2]);
    if (!(det(frame) > 1e-12))
        throw Error(ErrorCode::InvalidParams, "edge directions must be independent and right-handed");
    for (double l : sp.edge_lengths)
        if (!std::isfinite(l) || !(l > 0.0)) throw Error(ErrorCode::InvalidParams, "edge lengths must be positive");
}

Specimen cube_axis_bar(const LatticeParams& lattice, int s) {
    Specimen sp;
    sp.lattice = lattice;
    sp.stabilized_variant = s;
    return sp;
}

HypothesisReport hypothesis_check(const Specimen& sp, DirectionMode mode, double tol, double band) {
    validate(sp);
    const VariantSet vs = make_variants(sp.lattice);
    HypothesisReport out;
    out.pass = true;
    for (std::size_t k = 0; k < 3; ++k) {
        out.edges[k] = qualifying(sp.edge_directions[k], vs, sp.stabilized_variant, mode, tol, band);
        out.pass = out.pass && out.edges[k].qualifying;
    }
    return out;
}

SiteVerdict interior_verdict(const Specimen& sp, double tol) {
    validate(sp);
    SiteVerdict v;
    v.site = {SiteKind::Interior, 0};
    if (is_untransformed(sp.lattice, tol)) {
        v.excluded = false;
        v.reason = SiteReason::NoTransformation;
        return v;
    }
    const VariantSet vs = make_variants(sp.lattice);
    const int s = sp.stabilized_variant;
    // The obstruction only needs some austenite mass; the probe's barycenter
    // is U_s exactly when that is achievable on the wells, and the identities
    // are evaluated at U_s either way.
    const DiscreteYoungMeasure probe = austenite_probe(vs, s, 0.5);
    ExclusionOptions eo;
    eo.tol = 1e-8;
    eo.unit_det_tol = tol;
    eo.barycenter_tol = norm(barycenter(probe) - vs.variant(s)) + 1e-8;
    const ExclusionReport rep = interior_exclusion_check(probe, vs, s, eo);
    v.exclusion = rep;
    switch (rep.verdict) {
        case ExclusionVerdict::DeterminantObstruction:
            v.excluded = true;
            v.reason = SiteReason::DeterminantObstruction;
            break;
        case ExclusionVerdict::NormObstruction:
            v.excluded = true;
            v.reason = SiteReason::NormObstruction;
            break;
        case ExclusionVerdict::NoAusteniteMass:
        case ExclusionVerdict::Inconclusive:
            v.excluded = false;
            v.reason = SiteReason::NoTransformation;
            break;
    }
    return v;
}

namespace {

std::pair<std::size_t, std::size_t> other_axes(std::size_t axis) {
    return {axis == 0 ? 1u : 0u, axis == 2 ? 1u : 2u};
}

}  // namespace

std::vector<SiteVerdict> face_edge_verdicts(const Specimen& sp, const AnalysisOptions& opt) {
    validate(sp);
    if (!opt.ciarlet_necas_assumed)
        throw Error(ErrorCode::AssumptionUnmet, "face/edge exclusion needs the Ciarlet-Necas condition");
    if (sp.lattice.det() > 1.0 + opt.det_tol)
        throw Error(ErrorCode::AssumptionUnmet, "face/edge exclusion needs det U_s <= 1");

    const VariantSet vs = make_variants(sp.lattice);
    const int s = sp.stabilized_variant;
    auto qualifies = [&](const Vec3& e) {
        return qualifying(e, vs, s, opt.direction_mode, opt.membership_tol, opt.boundary_band).qualifying;
    };

    std::array<bool, 3> edge_ok{};
    for (std::size_t k = 0; k < 3; ++k) edge_ok[k] = qualifies(sp.edge_directions[k]);

    std::vector<SiteVerdict> out;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const auto [i, j] = other_axes(axis);
        const Vec3& di = sp.edge_directions[i];
        const Vec3& dj = sp.edge_directions[j];

        std::optional<Vec3> witness;
        if (edge_ok[i]) {
            witness = di;
        } else if (edge_ok[j]) {
            witness = dj;
        } else if (opt.face_mode == FaceMode::Extended) {
            // orthonormal in-plane frame; sample angle 2 pi k / n
            const Vec3 u = normalized(di);
            const Vec3 w = normalized(dj - dot(dj, u) * u);
            const int n = std::max(opt.circle_samples, 1);
            for (int k = 0; k < n && !witness; ++k) {
                const double t = 2.0 * std::numbers::pi * k / n;
                const Vec3 e = normalized(std::cos(t) * u + std::sin(t) * w);
                if (qualifies(e)) witness = e;
            }
        }
        for (int side = 0; side < 2; ++side) {
            SiteVerdict v;
            v.site = {SiteKind::Face, static_cast<int>(2 * axis) + side};
            v.excluded = witness.has_value();
            v.reason = v.excluded ? SiteReason::CoveringDirectionExists : SiteReason::HypothesisUnmet;
            v.witness = witness;
            v.assumed_ciarlet_necas = opt.ciarlet_necas_assumed;
            out.push_back(v);
        }
    }
    for (std::size_t axis = 0; axis < 3; ++axis) {
        for (int pos = 0; pos < 4; ++pos) {
            SiteVerdict v;
            v.site = {SiteKind::Edge, static_cast<int>(4 * axis) + pos};
            v.excluded = edge_ok[axis];
            v.reason = v.excluded ? SiteReason::CoveringDirectionExists : SiteReason::HypothesisUnmet;
            if (v.excluded) v.witness = sp.edge_directions[axis];
            v.assumed_ciarlet_necas = opt.ciarlet_necas_assumed;
            out.push_back(v);
        }
    }
    return out;
}

std::array<Vec3, 3> inward_edges(const Specimen& sp, int corner) {
    std::array<Vec3, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        const bool far = (corner >> k) & 1;
        out[k] = far ? -sp.edge_directions[k] : sp.edge_directions[k];
    }
    return out;
}

bool cuts_corner(const Vec3& v, const std::array<Vec3, 3>& inward, double tol) {
    int positive = 0, negative = 0;
    for (const auto& d : inward) {
        const double x = dot(v, d);
        if (x > tol) ++positive;
        else if (x < -tol) ++negative;
    }
    return positive == 3 || negative == 3;
}

CornerAnalysis corner_verdicts(const Specimen& sp, const AnalysisOptions& opt) {
    validate(sp);
    CornerAnalysis out;
    const VariantSet vs = make_variants(sp.lattice);
    if (!is_untransformed(sp.lattice, opt.membership_tol)) {
        try {
            out.certificates = corner_certificates(vs, sp.stabilized_variant, opt.delta, opt.certificates);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Degenerate) throw;
            out.degenerate = true;
        }
    } else {
        out.degenerate = true;
    }

    for (int c = 0; c < 8; ++c) {
        SiteVerdict v;
        v.site = {SiteKind::Corner, c};
        v.excluded = false;
        v.reason = SiteReason::NoCertificate;
        v.assumed_ciarlet_necas = opt.ciarlet_necas_assumed;
        const auto inward = inward_edges(sp, c);
        for (const auto& cert : out.certificates) {
            if (cuts_corner(cert.habit.m, inward) && cuts_corner(cert.twin.n, inward)) {
                v.reason = SiteReason::CertificateFound;
                v.certificate = cert;
                break;
            }
        }
        out.corners[static_cast<std::size_t>(c)] = v;
    }
    return out;
}

namespace {

template <class F>
auto attributed(const std::string& site, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw e.with_site(site);
    }
}

}  // namespace

AnalysisReport analyze(const Specimen& sp, const AnalysisOptions& opt) {
    attributed("specimen", [&] { validate(sp); return 0; });

    AnalysisReport rep;
    rep.specimen = sp;
    rep.options = opt;
    rep.variants = make_variants(sp.lattice);
    const int s = sp.stabilized_variant;

    if (is_untransformed(sp.lattice, opt.membership_tol)) {
        rep.interior = interior_verdict(sp, opt.membership_tol);
        auto untransformed = [](SiteKind kind, int index) {
            SiteVerdict v;
            v.site = {kind, index};
            v.reason = SiteReason::NoTransformation;
            return v;
        };
        for (int f = 0; f < 6; ++f) rep.faces.push_back(untransformed(SiteKind::Face, f));
        for (int e = 0; e < 12; ++e) rep.edges.push_back(untransformed(SiteKind::Edge, e));
        rep.corners = corner_verdicts(sp, opt).corners;
        rep.validation = cross_validate_points(rep.variants, s, {}, opt.boundary_band);
        rep.validation.samples = opt.sphere_samples;
        rep.hypothesis.pass = false;
        for (std::size_t k = 0; k < 3; ++k) rep.hypothesis.edges[k].e = sp.edge_directions[k];
        rep.headline = Headline::NoTransformation;
        rep.headline_text = "no transformation";
        rep.notes.push_back({"lattice", "Degenerate", "all stretches equal 1: every well is SO(3)"});
        return rep;
    }

    try {
        rep.twins = twin_table(rep.variants, opt.certificates.twin);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Degenerate) throw e.with_site("twins");
        rep.notes.push_back({"twins", std::string(to_string(e.code())), e.what()});
    }

    rep.validation = attributed("direction sets", [&] {
        return cross_validate(rep.variants, s, opt.sphere_samples, opt.boundary_band, opt.seed, opt.workers);
    });
    AnalysisOptions used = opt;
    rep.mode_used = opt.direction_mode;
    if (opt.direction_mode == DirectionMode::Explicit &&
        (rep.validation.degenerate || rep.validation.agreement < kExplicitModeMinAgreement)) {
        rep.mode_used = DirectionMode::Definitional;
        rep.notes.push_back({"direction sets", "ExplicitModeRejected",
                             "closed-form direction sets disagree with the definitions; using definitional mode"});
    }
    used.direction_mode = rep.mode_used;

    rep.hypothesis = attributed("edges", [&] {
        return hypothesis_check(sp, rep.mode_used, opt.membership_tol, opt.boundary_band);
    });
    rep.interior = attributed("interior", [&] { return interior_verdict(sp, opt.det_tol); });

    try {
        const auto fe = face_edge_verdicts(sp, used);
        rep.faces.assign(fe.begin(), fe.begin() + 6);
        rep.edges.assign(fe.begin() + 6, fe.end());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::AssumptionUnmet) throw e.with_site("faces/edges");
        rep.notes.push_back({"faces/edges", std::string(to_string(e.code())), e.what()});
        for (int f = 0; f < 6; ++f)
            rep.faces.push_back({{SiteKind::Face, f}, false, SiteReason::HypothesisUnmet, {}, {}, {},
                                 opt.ciarlet_necas_assumed});
        for (int k = 0; k < 12; ++k)
            rep.edges.push_back({{SiteKind::Edge, k}, false, SiteReason::HypothesisUnmet, {}, {}, {},
                                 opt.ciarlet_necas_assumed});
    }

    const CornerAnalysis corners = attributed("corners", [&] { return corner_verdicts(sp, used); });
    rep.corners = corners.corners;
    rep.certificates = corners.certificates;
    if (corners.degenerate)
        rep.notes.push_back({"corners", "Degenerate", "coincident wells: no certificate construction"});

    std::vector<std::string> open_sites;
    if (!rep.interior.excluded) open_sites.push_back(rep.interior.site.name());
    for (const auto& v : rep.faces)
        if (!v.excluded) open_sites.push_back(v.site.name());
    for (const auto& v : rep.edges)
        if (!v.excluded) open_sites.push_back(v.site.name());
    const bool any_corner = std::any_of(rep.corners.begin(), rep.corners.end(),
                                        [](const SiteVerdict& v) { return v.certificate.has_value(); });

    if (!open_sites.empty()) {
        rep.headline = Headline::Inconclusive;
        rep.headline_text = "inconclusive at ";
        for (std::size_t k = 0; k < open_sites.size(); ++k)
            rep.headline_text += (k ? ", " : "") + open_sites[k];
    } else if (any_corner) {
        rep.headline = Headline::CornersOnly;
        rep.headline_text = "corners only";
    } else {
        rep.headline = Headline::NoCertificate;
        rep.headline_text = "interior, faces and edges excluded; no corner certificate";
    }
    return rep;
}

}  // namespace nucleus
