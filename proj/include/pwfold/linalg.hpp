#pragma once

#include <cmath>
#include <complex>
#include <utility>

namespace pwfold {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double norm(Vec3 a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }
inline Vec2 planar(Vec3 p) { return {p.x, p.y}; }
inline Vec3 on_sigma(Vec2 p) { return {p.x, p.y, 0.0}; }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
    /// trace^2 - 4 det
    double discriminant() const { return (a - d) * (a - d) + 4.0 * b * c; }

    Mat2 inverse() const {
        const double k = 1.0 / det();
        return {k * d, -k * b, -k * c, k * a};
    }

    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
    }
    friend Mat2 operator-(const Mat2& m, const Mat2& n) {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline double max_abs(const Mat2& m) {
    return std::fmax(std::fmax(std::fabs(m.a), std::fabs(m.b)),
                     std::fmax(std::fabs(m.c), std::fabs(m.d)));
}

/// Eigenvalues of a real 2x2 matrix, ordered by increasing modulus when
/// real (complex pairs come with the positive imaginary part first).
std::pair<std::complex<double>, std::complex<double>> eigenvalues(const Mat2& m);

/// Unit eigenvector for a real eigenvalue, picked from the better conditioned
/// row of (m - lambda I).
Vec2 eigenvector(const Mat2& m, double lambda);

} // namespace pwfold
