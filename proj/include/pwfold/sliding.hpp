#pragma once

#include <optional>
#include <vector>

#include "pwfold/normal_params.hpp"
#include "pwfold/system.hpp"

namespace pwfold {

/// Planar polynomial field on Sigma (polynomials in x, y with z = 0).
struct PlanarField {
    Poly3 px, py;

    Vec2 eval(Vec2 q) const { return {px.eval(q.x, q.y, 0.0), py.eval(q.x, q.y, 0.0)}; }
    Mat2 jacobian(Vec2 q) const;
};

/// F_Z = numerator / denominator.
struct SlidingField {
    PlanarField numerator;
    Poly3 denominator;

    /// Throws Error(DenominatorZero) where Yf = Xf.
    Vec2 eval(Vec2 q) const;
};

SlidingField sliding_field(const PiecewiseSystem& z);

/// Yf X - Xf Y restricted to Sigma.
PlanarField normalized_sliding_field(const PiecewiseSystem& z);

/// [[alpha, -delta gamma], [1, -delta beta]]
Mat2 foldfold_sliding_linearization(const NormalParameters& p);

enum class SlidingRegionTag { RE1, RE2, RH1, RH2, RP1, RP2, RP3, RP4, BifurcationBoundary };

struct SlidingRegion {
    SlidingRegionTag tag = SlidingRegionTag::BifurcationBoundary;
    /// Claim number 1..8 describing the sliding dynamics of the region.
    int claim = 8;
    /// True when the point lies inside the boundary band of some region
    /// (as opposed to outside every region).
    bool on_boundary = false;
};

const char* to_string(SlidingRegionTag t);
int claim_of(SlidingRegionTag t);

SlidingRegion sliding_region_class(const NormalParameters& p);

/// Sign facts of the linearization implied by a region tag; false means the
/// parameters contradict their tag.
bool region_spectrum_consistent(SlidingRegionTag tag, const NormalParameters& p);

enum class PseudoEquilibriumType { Saddle, Node, Focus, NonHyperbolic };

const char* to_string(PseudoEquilibriumType t);

struct PseudoEquilibrium {
    Vec2 point;
    PseudoEquilibriumType type = PseudoEquilibriumType::NonHyperbolic;
    /// Jacobian of F_Z (not of the normalized field).
    Mat2 jacobian;
    bool stable_sliding = true;
};

/// Zeros of the normalized sliding field inside the sliding region, found
/// by Newton from a grid of seeds. Zeros on the tangency set are excluded.
std::vector<PseudoEquilibrium> pseudo_equilibria(const PiecewiseSystem& z, const Box& box,
                                                 int grid = 21);

enum class ContactOrder { Transverse, Quadratic, Degenerate };

const char* to_string(ContactOrder c);

/// Contact order of the extended sliding field with the fold or cusp line
/// through p. p must be a fold-regular or cusp-regular point (either side).
ContactOrder boundary_contact(const PiecewiseSystem& z, Vec3 p, double tol);

} // namespace pwfold
