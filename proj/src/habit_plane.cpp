#include "nucleus/habit_plane.hpp"

#include <algorithm>
#include <cmath>

#include "nucleus/error.hpp"

namespace nucleus {

Mat3 laminate_average(const Mat3& F, const Mat3& G, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::RangeError, "lambda outside [0, 1]");
    return lambda * F + (1.0 - lambda) * G;
}

double middle_stretch_sq(const Mat3& F, const Mat3& G, double lambda) {
    const Mat3 a = lambda * F + (1.0 - lambda) * G;
    return sym_eigen(transpose(a) * a).values[1];
}

namespace {

double bisect(const Mat3& F, const Mat3& G, double lo, double hi, double f_lo, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = middle_stretch_sq(F, G, mid) - 1.0;
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    const double f_hi = middle_stretch_sq(F, G, hi) - 1.0;
    return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

// Minimizer of |mu_2 - 1| on [lo, hi] by golden-section search.
double golden_min(const Mat3& F, const Mat3& G, double lo, double hi, double tol) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double x) { return std::abs(middle_stretch_sq(F, G, x) - 1.0); };
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<LambdaRoot> habit_lambda_roots(const Mat3& F, const Mat3& G, const HabitOptions& opt) {
    const int n = std::max(opt.scan_points, 2);
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) f[static_cast<std::size_t>(k)] = middle_stretch_sq(F, G, double(k) / n) - 1.0;

    std::vector<LambdaRoot> roots;
    for (int k = 0; k < n; ++k) {
        const double fk = f[static_cast<std::size_t>(k)];
        const double fk1 = f[static_cast<std::size_t>(k) + 1];
        const double lo = double(k) / n, hi = double(k + 1) / n;
        if (k > 0 && fk == 0.0) {
            roots.push_back({lo, false});
            continue;
        }
        if (fk != 0.0 && fk1 != 0.0 && (fk < 0.0) != (fk1 < 0.0)) {
            roots.push_back({bisect(F, G, lo, hi, fk, opt.bisection_tol), false});
            continue;
        }
        // tangency: interior local minimum of |f| without a sign change
        if (k > 0) {
            const double fprev = f[static_cast<std::size_t>(k) - 1];
            const bool same_sign = (fprev < 0.0) == (fk < 0.0) && (fk < 0.0) == (fk1 < 0.0) && fprev != 0.0 &&
                                   fk1 != 0.0;
            if (same_sign && std::abs(fk) <= std::abs(fprev) && std::abs(fk) <= std::abs(fk1)) {
                const double x = golden_min(F, G, double(k - 1) / n, hi, opt.bisection_tol);
                if (std::abs(middle_stretch_sq(F, G, x) - 1.0) <= opt.tangent_tol) roots.push_back({x, true});
            }
        }
    }
    return roots;
}

std::vector<HabitSolution> solve_habit(const LaminateSpec& lam, const HabitOptions& opt) {
    if (norm(lam.a) == 0.0) throw Error(ErrorCode::DegenerateLaminate, "laminate shear a is zero");
    if (!(det(lam.F) > 0.0) || !(det(lam.G) > 0.0))
        throw Error(ErrorCode::Singular, "laminate end states must have positive determinant");
    const double scale = std::max({1.0, norm(lam.F), norm(lam.G)});
    if (norm(lam.G - lam.F - outer(lam.a, lam.n)) > opt.residual_tol * scale)
        throw Error(ErrorCode::NotRankOne, "G - F is not a (x) n");

    std::vector<HabitSolution> out;
    const auto roots = habit_lambda_roots(lam.F, lam.G, opt);
    for (std::size_t r = 0; r < roots.size(); ++r) {
        if (roots[r].tangent && !opt.include_tangent) continue;
        const double lambda = roots[r].lambda;
        const Mat3 avg = laminate_average(lam.F, lam.G, lambda);
        std::vector<TwinSolution> interfaces;
        try {
            interfaces = twin_candidates(Mat3::identity(), avg, opt.solvability_tol);
        } catch (const Error& e) {
            // the average is itself a rotation: no plane interface to speak of
            if (e.code() == ErrorCode::Degenerate) continue;
            throw;
        }
        for (const auto& t : interfaces) {
            if (!(t.residual <= opt.residual_tol)) continue;
            HabitSolution h;
            h.lambda = lambda;
            h.R = t.Q;
            h.b = t.a;
            h.m = t.n;
            h.root_index = static_cast<int>(r);
            h.branch = t.branch;
            h.tangent = roots[r].tangent;
            h.residual = t.residual;
            h.middle_eigenvalue = sym_eigen(transpose(avg) * avg).values[1];
            out.push_back(h);
        }
    }
    return out;
}

std::vector<NucleationCertificate> corner_certificates(const VariantSet& vs, int s, double delta,
                                                       const CertificateOptions& opt) {
    check_variant_index(s);
    if (!(delta > 0.0)) throw Error(ErrorCode::RangeError, "delta must be positive");

    std::vector<NucleationCertificate> out;
    const Mat3& us = vs.variant(s);
    for (int l = 1; l <= kVariantCount; ++l) {
        if (l == s) continue;
        const Mat3& ul = vs.variant(l);
        for (const auto& twin : solve_twin(us, ul, opt.twin)) {
            const LaminateSpec lam{us, twin.Q * ul, twin.a, twin.n, 0.5};
            for (const auto& habit : solve_habit(lam, opt.habit)) {
                if (std::abs(dot(habit.m, twin.n)) >= 1.0 - opt.parallel_tol) continue;
                out.push_back({s, l, twin, habit, -delta});
            }
        }
    }
    return out;
}

double certificate_energy(const NucleationCertificate&, double austenite_volume, double delta) {
    if (!(austenite_volume >= 0.0)) throw Error(ErrorCode::RangeError, "austenite volume must be non-negative");
    return -delta * austenite_volume;
}

}  // namespace nucleus
