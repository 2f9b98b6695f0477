#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwfold/poly.hpp"

namespace pwfold {

/// Axis-aligned analysis window.
struct Box {
    double xmin = -1.0, xmax = 1.0;
    double ymin = -1.0, ymax = 1.0;
    double zmin = -1.0, zmax = 1.0;

    bool contains(Vec3 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax && p.z >= zmin &&
               p.z <= zmax;
    }
    bool contains_planar(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Vec3 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax), 0.5 * (zmin + zmax)}; }
    double max_half_width() const;
    double volume() const { return (xmax - xmin) * (ymax - ymin) * (zmax - zmin); }
    /// Area of the slice {z = 0}; zero when the box misses the plane.
    double sigma_area() const;

    static Box centered(double half_width) {
        return {-half_width, half_width, -half_width, half_width, -half_width, half_width};
    }
    friend bool operator==(const Box&, const Box&) = default;
};

/// Z = (X, Y) with X acting on {z > 0}, Y on {z < 0}, switching function f = z.
struct PiecewiseSystem {
    std::string name;
    VectorField3 X;
    VectorField3 Y;
    Box box;

    /// Scale used to build default zero tolerances.
    double coefficient_scale() const;
    friend bool operator==(const PiecewiseSystem&, const PiecewiseSystem&) = default;
};

/// The switching function f(x, y, z) = z.
Poly3 switching_function();

/// Lie derivatives of f up to second order, including the mixed ones.
/// xyf is X(Yf), yxf is Y(Xf).
struct LieDerivatives {
    Poly3 xf, yf;
    Poly3 x2f, y2f;
    Poly3 xyf, yxf;
};

LieDerivatives lie_derivatives(const PiecewiseSystem& z);

PiecewiseSystem load_system(std::string_view json_text);
PiecewiseSystem load_system_file(const std::filesystem::path& path);
std::string serialize(const PiecewiseSystem& z);

/// Higher-order terms added to Y of the fold-fold normal form.
/// fx, fy must vanish at the origin, fz to second order.
struct HigherOrderTerms {
    Poly3 fx, fy, fz;
};

/// X = (alpha, 1, delta y), Y = (gamma + fx, beta + fy, x + fz).
PiecewiseSystem build_normal_form(double alpha, double beta, double gamma, int delta,
                                  const HigherOrderTerms& hot = {});

struct ValidationReport {
    std::vector<std::string> warnings;
    std::optional<Vec2> x_zero;
    std::optional<Vec2> y_zero;

    bool ok() const { return warnings.empty(); }
};

ValidationReport validate(const PiecewiseSystem& z);

} // namespace pwfold
