#pragma once

// Fixed-size 3-vector / 3x3-matrix arithmetic and the spectral primitives the
// compatibility solvers are built on. Everything here is a value type.

#include <array>
#include <cmath>
#include <cstddef>

namespace nucleus {

// Default slack for predicates on unit-scale matrices.
inline constexpr double kDefaultTol = 1e-10;

struct Vec3 {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

    constexpr double& operator[](std::size_t i) { return v[i]; }
    constexpr double operator[](std::size_t i) const { return v[i]; }

    constexpr Vec3& operator+=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        for (auto& x : v) x *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
// Returns the zero vector unchanged.
Vec3 normalized(const Vec3& a);
bool is_unit(const Vec3& a, double tol = 1e-10);

// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    constexpr Mat3() = default;
    constexpr Mat3(double a00, double a01, double a02, double a10, double a11, double a12, double a20,
                   double a21, double a22)
        : m{a00, a01, a02, a10, a11, a12, a20, a21, a22} {}

    static constexpr Mat3 identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }
    static constexpr Mat3 diag(double a, double b, double c) { return {a, 0, 0, 0, b, 0, 0, 0, c}; }
    static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        return {c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2], c2[2]};
    }
    static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        return {r0[0], r0[1], r0[2], r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]};
    }

    constexpr double& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    constexpr Vec3 row(std::size_t r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }
    constexpr Vec3 col(std::size_t c) const { return {m[c], m[3 + c], m[6 + c]}; }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (std::size_t i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (auto& x : m) x *= s;
        return *this;
    }

    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
constexpr Mat3 operator-(Mat3 a) { return a *= -1.0; }
constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }
constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

constexpr Vec3 operator*(const Mat3& a, const Vec3& x) {
    return {dot(a.row(0), x), dot(a.row(1), x), dot(a.row(2), x)};
}

constexpr Mat3 transpose(const Mat3& a) {
    return {a(0, 0), a(1, 0), a(2, 0), a(0, 1), a(1, 1), a(2, 1), a(0, 2), a(1, 2), a(2, 2)};
}

constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
    return {a[0] * b[0], a[0] * b[1], a[0] * b[2], a[1] * b[0], a[1] * b[1],
            a[1] * b[2], a[2] * b[0], a[2] * b[1], a[2] * b[2]};
}

constexpr double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

constexpr double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Frobenius norm, the norm used throughout (|F|^2 = tr F^T F).
inline double norm(const Mat3& a) {
    double s = 0.0;
    for (double x : a.m) s += x * x;
    return std::sqrt(s);
}
inline double norm_sq(const Mat3& a) {
    double s = 0.0;
    for (double x : a.m) s += x * x;
    return s;
}

// Matrix of signed 2x2 minors; M * cof(M)^T = det(M) * I. Defined for singular M.
Mat3 cofactor(const Mat3& a);

// Throws Error{Singular} when |det| is zero to working precision.
Mat3 inverse(const Mat3& a);

bool is_symmetric(const Mat3& a, double tol = kDefaultTol);
bool is_rotation(const Mat3& a, double tol = kDefaultTol);

struct SymEig3 {
    std::array<double, 3> values{};   // ascending
    std::array<Vec3, 3> vectors{};    // orthonormal, vectors[i] belongs to values[i]

    // Columns are the eigenvectors; right-handed.
    Mat3 basis() const { return Mat3::from_columns(vectors[0], vectors[1], vectors[2]); }
};

// Closed-form symmetric eigensolver (trigonometric roots of the characteristic
// polynomial, Newton-polished). Throws Error{NonSymmetric} if |S - S^T| > 1e-10.
SymEig3 sym_eigen(const Mat3& s);

// Singular values in descending order, via the eigenvalues of A^T A.
std::array<double, 3> singular_values(const Mat3& a);

// sigma_2 / sigma_1, with 0/0 := 0. Zero iff rank(H) <= 1.
double rank_one_defect(const Mat3& h);

// Symmetric square root of a symmetric positive semidefinite matrix.
Mat3 sym_sqrt(const Mat3& s);

struct Polar {
    Mat3 rotation;
    Mat3 stretch;  // symmetric positive definite, a = rotation * stretch
};

// Right polar decomposition; requires det(a) > 0 (Error{Singular} otherwise).
Polar polar(const Mat3& a);

// Frobenius distance from `a` to SO(3).
double distance_to_rotations(const Mat3& a);

// Rotation about a unit axis by `angle` radians.
Mat3 axis_angle(const Vec3& axis, double angle);
// Rotation exp([w]_x) of a rotation vector.
Mat3 rotation_from_vector(const Vec3& w);

}  // namespace nucleus
