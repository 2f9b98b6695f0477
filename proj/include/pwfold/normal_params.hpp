#pragma once

#include <cmath>

#include "pwfold/sigma.hpp"

namespace pwfold {

/// Parameters (alpha, beta, gamma, delta) of the fold-fold normal form
///   X = (alpha, 1, delta y),  Y = (gamma + ..., beta + ..., x + ...).
struct NormalParameters {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    int delta = -1;
    FoldFoldSubtype subtype = FoldFoldSubtype::Invisible;

    /// Builds parameters with the subtype implied by (delta, sgn gamma).
    static NormalParameters make(double alpha, double beta, double gamma, int delta);

    /// (e alpha, e beta, e^2 gamma); every verdict is invariant under it.
    NormalParameters rescaled(double e) const;

    /// |alpha| + |beta| + sqrt|gamma|, homogeneous of degree one under rescaling.
    double scale() const { return std::fabs(alpha) + std::fabs(beta) + std::sqrt(std::fabs(gamma)); }

    bool parabolic() const {
        return subtype == FoldFoldSubtype::InvisibleVisible ||
               subtype == FoldFoldSubtype::VisibleInvisible;
    }

    /// A visible-invisible point seen from the invisible-visible side: swapping
    /// the roles of X and Y together with z -> -z maps
    /// (alpha, beta, gamma, delta) to (-beta, alpha, -gamma, -delta).
    NormalParameters invisible_visible_chart() const;
};

/// Relative band around zero used by every parameter-space boundary test.
inline constexpr double kBoundaryBand = 1e-9;

/// Sign of q with |q| <= kBoundaryBand * scale^degree treated as zero.
int banded_sign(double q, double scale, int degree);

} // namespace pwfold
