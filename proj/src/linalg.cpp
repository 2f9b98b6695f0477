#include "pwfold/linalg.hpp"

#include <cmath>

namespace pwfold {

std::pair<std::complex<double>, std::complex<double>> eigenvalues(const Mat2& m) {
    const double t = m.trace();
    const double disc = m.discriminant();
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        const double big = 0.5 * (t + std::copysign(s, t));
        const double small = big != 0.0 ? m.det() / big : 0.5 * (t - std::copysign(s, t));
        if (std::fabs(small) <= std::fabs(big)) return {small, big};
        return {big, small};
    }
    const double re = 0.5 * t;
    const double im = 0.5 * std::sqrt(-disc);
    return {{re, im}, {re, -im}};
}

Vec2 eigenvector(const Mat2& m, double lambda) {
    // Each row r of (m - lambda I) gives a candidate (-r.y, r.x).
    const Vec2 v1{m.b, lambda - m.a};
    const Vec2 v2{lambda - m.d, m.c};
    Vec2 v = norm(v1) >= norm(v2) ? v1 : v2;
    const double n = norm(v);
    if (n == 0.0) return {1.0, 0.0};
    return (1.0 / n) * v;
}

} // namespace pwfold
