#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nucleus/direction_sets.hpp"
#include "nucleus/habit_plane.hpp"
#include "nucleus/rank_one.hpp"
#include "nucleus/variants.hpp"
#include "nucleus/young_measure.hpp"

namespace nucleus {

// Parallelepiped specimen spanned by three edge vectors from one corner.
struct Specimen {
    std::array<Vec3, 3> edge_directions{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    std::array<double, 3> edge_lengths{12.0, 3.0, 3.0};  // mm
    int stabilized_variant = 1;
    LatticeParams lattice;

    friend bool operator==(const Specimen&, const Specimen&) = default;
};

// Unit, right-handed, independent edge directions; positive lengths; valid s
// and lattice. Throws Error{NotUnit}, Error{InvalidParams} or Error{RangeError}.
void validate(const Specimen& sp);

// The 12 x 3 x 3 mm bar with edges along the cubic axes.
Specimen cube_axis_bar(const LatticeParams& lattice, int s = 1);

enum class FaceMode { Theorem, Extended };

std::string_view to_string(FaceMode m) noexcept;

// Printed with every report: the per-corner rule is a stand-in.
inline constexpr std::string_view kCornerProxyDisclaimer =
    "corner feasibility uses a conservative proxy: a corner is credited with a certificate only when both the "
    "habit-plane normal and the twin-plane normal have nonzero dot products of one common sign with all three "
    "inward edge directions at that corner; this is not an exact admissibility condition";

enum class SiteKind { Interior, Face, Edge, Corner };

struct SiteId {
    SiteKind kind = SiteKind::Interior;
    int index = 0;  // 0-based within its kind

    std::string name() const;  // "interior", "face 1", "edge 7", "corner 3" (1-based)
    friend bool operator==(const SiteId&, const SiteId&) = default;
};

// Faces: index = 2*axis + side (side 0 contains the origin corner).
// Edges: index = 4*axis + bits of the two other coordinates (lower axis first).
// Corners: index = b0 + 2 b1 + 4 b2, corner position sum_k b_k L_k d_k.

enum class SiteReason {
    DeterminantObstruction,
    NormObstruction,
    CoveringDirectionExists,
    CertificateFound,
    NoCertificate,
    HypothesisUnmet,
    NoTransformation,
};

std::string_view to_string(SiteReason r) noexcept;

struct SiteVerdict {
    SiteId site;
    // true: no energy-lowering admissible variation is possible here.
    // false is never a claim that nucleation happens; only corners carry
    // constructive certificates.
    bool excluded = false;
    SiteReason reason = SiteReason::NoCertificate;
    std::optional<NucleationCertificate> certificate;
    std::optional<Vec3> witness;              // qualifying direction used for a face/edge
    std::optional<ExclusionReport> exclusion; // interior witness
    bool assumed_ciarlet_necas = true;
};

struct AnalysisOptions {
    double delta = 1.0;
    DirectionMode direction_mode = DirectionMode::Definitional;
    FaceMode face_mode = FaceMode::Theorem;
    int circle_samples = 3600;
    std::uint64_t sphere_samples = 100000;
    std::uint64_t seed = 1;
    double membership_tol = kDefaultTol;
    double boundary_band = kDefaultBoundaryBand;
    double det_tol = kDefaultTol;
    double well_tol = 1e-8;
    bool ciarlet_necas_assumed = true;
    CertificateOptions certificates{};
    unsigned workers = 0;
};

struct HypothesisReport {
    std::array<DirectionVerdict, 3> edges;
    bool pass = false;
};

HypothesisReport hypothesis_check(const Specimen& sp, DirectionMode mode, double tol = kDefaultTol,
                                  double band = kDefaultBoundaryBand);

SiteVerdict interior_verdict(const Specimen& sp, double tol = kDefaultTol);

// 6 faces then 12 edges. Error{AssumptionUnmet} when det U_s > 1 + det_tol or
// the Ciarlet-Necas assumption is off.
std::vector<SiteVerdict> face_edge_verdicts(const Specimen& sp, const AnalysisOptions& opt);

struct CornerAnalysis {
    std::array<SiteVerdict, 8> corners;
    std::vector<NucleationCertificate> certificates;
    bool degenerate = false;
};

// Inward edge directions at a corner.
std::array<Vec3, 3> inward_edges(const Specimen& sp, int corner);

// True when v has nonzero dot products of one common sign with all three inward edges.
bool cuts_corner(const Vec3& v, const std::array<Vec3, 3>& inward, double tol = 1e-9);

CornerAnalysis corner_verdicts(const Specimen& sp, const AnalysisOptions& opt);

enum class Headline { CornersOnly, Inconclusive, NoCertificate, NoTransformation };

std::string_view to_string(Headline h) noexcept;

struct AnalysisNote {
    std::string site;
    std::string code;
    std::string message;
};

struct AnalysisReport {
    Specimen specimen;
    AnalysisOptions options;
    VariantSet variants;
    std::optional<TwinTable> twins;  // absent when wells coincide
    std::vector<NucleationCertificate> certificates;
    ValidationStats validation;
    DirectionMode mode_used = DirectionMode::Definitional;
    HypothesisReport hypothesis;
    SiteVerdict interior;
    std::vector<SiteVerdict> faces;  // 6
    std::vector<SiteVerdict> edges;  // 12
    std::array<SiteVerdict, 8> corners;
    std::vector<AnalysisNote> notes;
    Headline headline = Headline::Inconclusive;
    std::string headline_text;
};

// Runs every site analysis. Module errors are rethrown with the site group
// attached; an unmet face/edge assumption is recorded as a note instead.
AnalysisReport analyze(const Specimen& sp, const AnalysisOptions& opt);

}  // namespace nucleus
