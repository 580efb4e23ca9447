#include "nucleus/matrix.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <utility>

#include "nucleus/error.hpp"

namespace nucleus {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::RangeError: return "RangeError";
        case ErrorCode::DegenerateLaminate: return "DegenerateLaminate";
        case ErrorCode::NotRankOne: return "NotRankOne";
        case ErrorCode::InvalidMeasure: return "InvalidMeasure";
        case ErrorCode::BarycenterMismatch: return "BarycenterMismatch";
        case ErrorCode::NotUnit: return "NotUnit";
        case ErrorCode::AmbiguousEmax: return "AmbiguousEmax";
        case ErrorCode::AssumptionUnmet: return "AssumptionUnmet";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    return n > 0.0 ? (1.0 / n) * a : a;
}

bool is_unit(const Vec3& a, double tol) { return std::abs(norm(a) - 1.0) <= tol; }

Mat3 cofactor(const Mat3& a) {
    Mat3 c;
    c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return c;
}

Mat3 inverse(const Mat3& a) {
    const double d = det(a);
    const double scale = norm(a);
    if (d == 0.0 || std::abs(d) <= std::numeric_limits<double>::epsilon() * scale * scale * scale)
        throw Error(ErrorCode::Singular, "matrix is singular");
    return (1.0 / d) * transpose(cofactor(a));
}

bool is_symmetric(const Mat3& a, double tol) { return norm(a - transpose(a)) <= tol; }

bool is_rotation(const Mat3& a, double tol) {
    return norm(transpose(a) * a - Mat3::identity()) <= tol && det(a) > 0.0;
}

namespace {

// Any unit vector orthogonal to w (|w| = 1), plus w x u.
std::pair<Vec3, Vec3> orthogonal_complement(const Vec3& w) {
    Vec3 u;
    if (std::abs(w[0]) > std::abs(w[1])) {
        const double inv = 1.0 / std::sqrt(w[0] * w[0] + w[2] * w[2]);
        u = {-w[2] * inv, 0.0, w[0] * inv};
    } else {
        const double inv = 1.0 / std::sqrt(w[1] * w[1] + w[2] * w[2]);
        u = {0.0, w[2] * inv, -w[1] * inv};
    }
    return {u, cross(w, u)};
}

// Eigenvector for an eigenvalue of multiplicity one: the best-conditioned
// cross product of two rows of (a - value*I).
Vec3 isolated_eigenvector(const Mat3& a, double value) {
    const Mat3 shifted = a - value * Mat3::identity();
    const Vec3 r0 = shifted.row(0), r1 = shifted.row(1), r2 = shifted.row(2);
    const std::array<Vec3, 3> candidates{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    std::size_t best = 0;
    double best_sq = dot(candidates[0], candidates[0]);
    for (std::size_t k = 1; k < 3; ++k) {
        const double sq = dot(candidates[k], candidates[k]);
        if (sq > best_sq) {
            best_sq = sq;
            best = k;
        }
    }
    if (best_sq == 0.0) return {1.0, 0.0, 0.0};
    return (1.0 / std::sqrt(best_sq)) * candidates[best];
}

// Second eigenvector, solved inside the plane orthogonal to `first`.
Vec3 eigenvector_in_complement(const Mat3& a, const Vec3& first, double value) {
    const auto [u, v] = orthogonal_complement(first);
    const Vec3 au = a * u, av = a * v;
    double m00 = dot(u, au) - value;
    double m01 = dot(u, av);
    double m11 = dot(v, av) - value;
    const double abs00 = std::abs(m00), abs01 = std::abs(m01), abs11 = std::abs(m11);
    if (abs00 >= abs11) {
        if (std::max(abs00, abs01) == 0.0) return u;
        if (abs00 >= abs01) {
            m01 /= m00;
            m00 = 1.0 / std::sqrt(1.0 + m01 * m01);
            m01 *= m00;
        } else {
            m00 /= m01;
            m01 = 1.0 / std::sqrt(1.0 + m00 * m00);
            m00 *= m01;
        }
        return normalized(m01 * u - m00 * v);
    }
    if (std::max(abs11, abs01) == 0.0) return u;
    if (abs11 >= abs01) {
        m01 /= m11;
        m11 = 1.0 / std::sqrt(1.0 + m01 * m01);
        m01 *= m11;
    } else {
        m11 /= m01;
        m01 = 1.0 / std::sqrt(1.0 + m11 * m11);
        m11 *= m01;
    }
    return normalized(m11 * u - m01 * v);
}

// One Newton step on det(a - x I); skipped near repeated roots.
double newton_polish(const Mat3& a, double x) {
    const double c2 = trace(a);
    const double c1 = a(0, 0) * a(1, 1) + a(0, 0) * a(2, 2) + a(1, 1) * a(2, 2) - a(0, 1) * a(1, 0) -
                      a(0, 2) * a(2, 0) - a(1, 2) * a(2, 1);
    const double c0 = det(a);
    const double f = ((-x + c2) * x - c1) * x + c0;
    const double df = (-3.0 * x + 2.0 * c2) * x - c1;
    if (std::abs(df) < 1e-6) return x;
    const double step = f / df;
    return std::abs(step) < 1e-8 ? x - step : x;
}

void canonical_sign(Vec3& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k]) + 1e-12) k = i;
    if (v[k] < 0.0) v = -v;
}

}  // namespace

namespace {

// The closed-form frame loses accuracy when two roots nearly coincide.
// V^T A V is then almost diagonal, and a couple of Jacobi sweeps on it
// restore working precision in both the vectors and the values.
void jacobi_polish(const Mat3& a, std::array<Vec3, 3>& vecs, std::array<double, 3>& vals) {
    Mat3 v = Mat3::from_columns(vecs[0], vecs[1], vecs[2]);
    Mat3 b = transpose(v) * a * v;
    for (int sweep = 0; sweep < 3; ++sweep) {
        for (std::size_t p = 0; p < 2; ++p) {
            for (std::size_t q = p + 1; q < 3; ++q) {
                if (std::abs(b(p, q)) < 1e-300) continue;
                const double theta = (b(q, q) - b(p, p)) / (2.0 * b(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                Mat3 j = Mat3::identity();
                j(p, p) = c;
                j(q, q) = c;
                j(p, q) = sn;
                j(q, p) = -sn;
                b = transpose(j) * b * j;
                v = v * j;
            }
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        vecs[i] = normalized(v.col(i));
        vals[i] = dot(vecs[i], a * vecs[i]);
    }
}

}  // namespace

SymEig3 sym_eigen(const Mat3& s) {
    if (!is_symmetric(s, 1e-10)) throw Error(ErrorCode::NonSymmetric, "sym_eigen: input is not symmetric");
    Mat3 a = 0.5 * (s + transpose(s));

    SymEig3 out;
    out.vectors = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    double scale = 0.0;
    for (double x : a.m) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return out;
    a *= 1.0 / scale;

    const double q = trace(a) / 3.0;
    const Mat3 c = a - q * Mat3::identity();
    const double p2 = norm_sq(c) / 6.0;
    if (p2 < 1e-32) {
        out.values = {q * scale, q * scale, q * scale};
        return out;
    }
    const double p = std::sqrt(p2);
    const double r = std::clamp(det((1.0 / p) * c) / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double hi = q + 2.0 * p * std::cos(phi);
    const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double mid = 3.0 * q - hi - lo;

    std::array<double, 3> vals{newton_polish(a, lo), newton_polish(a, mid), newton_polish(a, hi)};
    std::array<Vec3, 3> vecs;
    if (r >= 0.0) {
        // largest root is the most isolated
        vecs[2] = isolated_eigenvector(a, vals[2]);
        vecs[1] = eigenvector_in_complement(a, vecs[2], vals[1]);
        vecs[0] = normalized(cross(vecs[1], vecs[2]));
    } else {
        vecs[0] = isolated_eigenvector(a, vals[0]);
        vecs[1] = eigenvector_in_complement(a, vecs[0], vals[1]);
        vecs[2] = normalized(cross(vecs[0], vecs[1]));
    }
    jacobi_polish(a, vecs, vals);

    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
    for (std::size_t i = 0; i < 3; ++i) {
        out.values[i] = vals[order[i]] * scale;
        out.vectors[i] = vecs[order[i]];
    }
    canonical_sign(out.vectors[0]);
    canonical_sign(out.vectors[1]);
    if (dot(cross(out.vectors[0], out.vectors[1]), out.vectors[2]) < 0.0) out.vectors[2] = -out.vectors[2];
    return out;
}

std::array<double, 3> singular_values(const Mat3& a) {
    const SymEig3 e = sym_eigen(transpose(a) * a);
    return {std::sqrt(std::max(0.0, e.values[2])), std::sqrt(std::max(0.0, e.values[1])),
            std::sqrt(std::max(0.0, e.values[0]))};
}

double rank_one_defect(const Mat3& h) {
    const double sigma1 = singular_values(h)[0];
    if (sigma1 == 0.0) return 0.0;
    // The largest singular value of cof(H) is sigma1*sigma2; this avoids the
    // sqrt(eps) floor of taking sigma2 directly from H^T H.
    const double sigma12 = singular_values(cofactor(h))[0];
    return sigma12 / (sigma1 * sigma1);
}

Mat3 sym_sqrt(const Mat3& s) {
    const SymEig3 e = sym_eigen(s);
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i)
        out += std::sqrt(std::max(0.0, e.values[i])) * outer(e.vectors[i], e.vectors[i]);
    return out;
}

Polar polar(const Mat3& a) {
    if (!(det(a) > 0.0)) throw Error(ErrorCode::Singular, "polar decomposition needs det > 0");
    const Mat3 stretch = sym_sqrt(transpose(a) * a);
    Mat3 rotation = a * inverse(stretch);
    // One Newton (Higham) sweep removes the residual non-orthogonality.
    rotation = 0.5 * (rotation + transpose(inverse(rotation)));
    return {rotation, transpose(rotation) * a};
}

double distance_to_rotations(const Mat3& a) { return norm(a - polar(a).rotation); }

Mat3 axis_angle(const Vec3& axis, double angle) {
    const Vec3 k = normalized(axis);
    const Mat3 kx{0, -k[2], k[1], k[2], 0, -k[0], -k[1], k[0], 0};
    return Mat3::identity() + std::sin(angle) * kx + (1.0 - std::cos(angle)) * (kx * kx);
}

Mat3 rotation_from_vector(const Vec3& w) {
    const double angle = norm(w);
    if (angle == 0.0) return Mat3::identity();
    return axis_angle(w, angle);
}

}  // namespace nucleus
