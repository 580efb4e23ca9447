#pragma once

#include <vector>

#include "nucleus/matrix.hpp"
#include "nucleus/rank_one.hpp"
#include "nucleus/variants.hpp"

namespace nucleus {

// Simple laminate of F and G = F + a (x) n with volume fraction lambda of F.
struct LaminateSpec {
    Mat3 F;
    Mat3 G;
    Vec3 a;
    Vec3 n;
    double lambda = 0.5;
};

// lambda F + (1 - lambda) G. Error{RangeError} unless 0 <= lambda <= 1.
Mat3 laminate_average(const Mat3& F, const Mat3& G, double lambda);

// Austenite/laminate interface:  R (lambda F + (1-lambda) G) - I = b (x) m.
struct HabitSolution {
    double lambda = 0.0;
    Mat3 R;
    Vec3 b;
    Vec3 m;
    int root_index = 0;   // which lambda root (ascending in lambda), 0-based
    int branch = 1;       // rank-one branch of the austenite interface
    bool tangent = false; // mu_2 touches 1 without crossing
    double residual = 0.0;
    double middle_eigenvalue = 1.0;  // mu_2 of A^T A at lambda
};

struct HabitOptions {
    int scan_points = 10000;
    double bisection_tol = 1e-13;
    double solvability_tol = 1e-8;
    double residual_tol = 1e-8;
    // max |mu_2 - 1| at a local extremum for a tangent root
    double tangent_tol = 1e-10;
    bool include_tangent = false;
};

struct LambdaRoot {
    double lambda = 0.0;
    bool tangent = false;
};

// Middle eigenvalue of A^T A for A = lambda F + (1 - lambda) G.
double middle_stretch_sq(const Mat3& F, const Mat3& G, double lambda);

// Roots of mu_2(lambda) = 1 in the open interval (0, 1), ascending: dense
// scan followed by bisection. Tangent roots are returned flagged.
std::vector<LambdaRoot> habit_lambda_roots(const Mat3& F, const Mat3& G, const HabitOptions& opt = {});

// Every (lambda root x rank-one branch) habit solution passing the residual
// check. Error{DegenerateLaminate} if a = 0; Error{NotRankOne} if
// G - F != a (x) n; Error{Singular} for non-invertible F or G.
std::vector<HabitSolution> solve_habit(const LaminateSpec& lam, const HabitOptions& opt = {});

struct NucleationCertificate {
    int s = 1;  // stabilized variant
    int l = 2;  // twin partner
    TwinSolution twin;      // Q U_l - U_s = a (x) n
    HabitSolution habit;    // R (lambda U_s + (1-lambda) Q U_l) - I = b (x) m
    double energy_gap_rate = 0.0;  // per unit austenite volume, = -delta
};

struct CertificateOptions {
    TwinTolerances twin{};
    HabitOptions habit{};
    // habit and twin normals count as parallel above this |m . n|
    double parallel_tol = 1e-8;
};

// Corner nucleation certificates for stabilized variant s: for each partner l
// and twin branch, every habit plane between austenite and the U_s/QU_l
// laminate. Error{RangeError} for bad s or delta <= 0; Error{Degenerate}
// propagates from coincident wells.
std::vector<NucleationCertificate> corner_certificates(const VariantSet& vs, int s, double delta,
                                                       const CertificateOptions& opt = {});

// I(nu) - I(delta_{U_s}) for a certificate whose austenite region has the given
// volume. Only the austenite region contributes: -delta * volume.
double certificate_energy(const NucleationCertificate& cert, double austenite_volume, double delta);

}  // namespace nucleus
