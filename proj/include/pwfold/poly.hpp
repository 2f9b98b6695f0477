#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pwfold/error.hpp"
#include "pwfold/linalg.hpp"

namespace pwfold {

enum class Var { X = 0, Y = 1, Z = 2 };

using Exponent = std::array<int, 3>;

inline constexpr int kDefaultMaxDegree = 8;
inline constexpr int kHardMaxDegree = 32;

/// Polynomial in (x, y, z) with double coefficients.
///
/// Terms are kept sorted by exponent with like terms collected. Only exact
/// zeros are pruned; tolerances belong to the callers. Every polynomial
/// carries a degree cap and any operation producing a term above it throws
/// Error(DegreeCap).
class Poly3 {
public:
    struct Term {
        Exponent exp;
        double coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    Poly3() = default;
    explicit Poly3(double c, int max_degree = kDefaultMaxDegree);

    static Poly3 variable(Var v, int max_degree = kDefaultMaxDegree);
    static Poly3 monomial(Exponent e, double c, int max_degree = kDefaultMaxDegree);
    static Poly3 from_terms(std::span<const Term> terms, int max_degree = kDefaultMaxDegree);
    static Poly3 from_terms(std::initializer_list<Term> terms, int max_degree = kDefaultMaxDegree) {
        return from_terms(std::span<const Term>(terms.begin(), terms.size()), max_degree);
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    /// Lowest total degree among the terms (order of vanishing at the
    /// origin); -1 for the zero polynomial.
    int order() const;
    int max_degree() const { return max_degree_; }
    double coeff(Exponent e) const;
    double max_abs_coeff() const;

    double eval(double x, double y, double z) const;
    double eval(Vec3 p) const { return eval(p.x, p.y, p.z); }

    Poly3 partial(Var v) const;
    /// Substitutes z = 0.
    Poly3 on_sigma() const;
    Poly3 with_max_degree(int max_degree) const;

    Poly3& operator+=(const Poly3& o);
    Poly3& operator-=(const Poly3& o);
    friend Poly3 operator+(Poly3 a, const Poly3& b) { return a += b; }
    friend Poly3 operator-(Poly3 a, const Poly3& b) { return a -= b; }
    friend Poly3 operator-(const Poly3& a);
    friend Poly3 operator*(const Poly3& a, const Poly3& b);
    friend Poly3 operator*(double s, const Poly3& a);
    friend bool operator==(const Poly3& a, const Poly3& b) { return a.terms_ == b.terms_; }

    std::string to_string() const;

private:
    void check_cap() const;

    std::vector<Term> terms_;
    int max_degree_ = kDefaultMaxDegree;
};

/// Polynomial vector field on R^3.
struct VectorField3 {
    Poly3 cx, cy, cz;

    Vec3 eval(Vec3 p) const;
    int degree() const;
    double max_abs_coeff() const;
    friend bool operator==(const VectorField3&, const VectorField3&) = default;
};

/// X . grad(g), exact.
Poly3 lie_derivative(const VectorField3& field, const Poly3& g);

/// (d/dx g, d/dy g) restricted to z = 0.
std::pair<Poly3, Poly3> gradient_on_sigma(const Poly3& g);

} // namespace pwfold
