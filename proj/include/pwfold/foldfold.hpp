#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwfold/integrator.hpp"
#include "pwfold/normal_params.hpp"
#include "pwfold/sliding.hpp"

namespace pwfold {

/// Normal parameters at a transversal fold-fold point, normalized so that
/// |X^2 f| = |Y^2 f| = 1 (hence |gamma| = 1).
NormalParameters normal_parameters(const PiecewiseSystem& z, Vec3 p, double tol);
NormalParameters normal_parameters(const PiecewiseSystem& z, Vec3 p);

/// Linear parts of the fold involutions phi_X and phi_Y.
struct Involutions {
    Mat2 ax;
    Mat2 ay;
};

Involutions analytic_involutions(const NormalParameters& p);

enum class FixedPointClass { Saddle, NonHyperbolicComplex, NonHyperbolicUnit, ParabolicBoundary };
enum class EigenLocation { InCrossing, InSliding, OnTangency };

const char* to_string(FixedPointClass c);
const char* to_string(EigenLocation l);

struct EigenDirection {
    double value = 0.0;
    Vec2 vector;
    EigenLocation location = EigenLocation::OnTangency;
};

struct ReturnMapAnalysis {
    /// A_X A_Y.
    Mat2 matrix;
    /// Ordered by modulus; computed from the trace and the exact det = 1.
    std::pair<std::complex<double>, std::complex<double>> eigenvalues;
    double trace = 0.0;
    double det = 1.0;
    FixedPointClass fixed_point_class = FixedPointClass::ParabolicBoundary;
    /// Eigenvalue argument in (0, pi) for NonHyperbolicComplex, else 0.
    double tau = 0.0;
    /// Set for saddles only.
    std::optional<EigenDirection> contracting;
    std::optional<EigenDirection> expanding;
};

/// Requires the Invisible subtype. Eigenvector locations use the chart
/// where the crossing region is {xy < 0}.
ReturnMapAnalysis return_map_analysis(const NormalParameters& p);

/// Location of a direction v at p: InCrossing when Xf Yf > 0 near p + r v.
EigenLocation direction_location(const PiecewiseSystem& z, Vec3 p, Vec2 v, double r);

/// log|lambda| / log|mu|. Throws Precondition unless the class is Saddle.
double demelo_palis(const ReturnMapAnalysis& a);

struct ModuliInfo {
    double tau = 0.0;
    double tau_over_pi = 0.0;
    /// Continued-fraction convergents (p, q) of tau/pi with q <= 1e6.
    std::vector<std::pair<std::int64_t, std::int64_t>> convergents;
    double leaf_id = 0.0;
};

ModuliInfo moduli_info(const ReturnMapAnalysis& a);

struct ConnectionRegion {
    bool exists = false;
    /// alpha inside the boundary band: phi_X(S_Y) is tangent to S_Y.
    bool degenerate = false;
    /// Direction of phi_X(S_Y) in the invisible-visible chart.
    Vec2 direction;
    std::string description;
};

ConnectionRegion connection_region(const NormalParameters& p);

struct TransversalityCoefficients {
    double d_coeff = 0.0;
    double t_coeff = 0.0;
};

/// Leading coefficients of D(x, y) / y^2 and T(y) / y, in the
/// invisible-visible chart.
TransversalityCoefficients parabolic_transversality(const NormalParameters& p);

enum class VerdictKind { Stable, Unstable, BoundaryDegenerate };
enum class UnstableReason {
    NonHyperbolicReturnMap,
    InvariantManifoldInSliding,
    SlidingBifurcation,
    TransversalityFailure,
};
enum class TransversalityWhich { Alpha, D, T };

const char* to_string(VerdictKind k);
const char* to_string(UnstableReason r);
const char* to_string(TransversalityWhich w);

struct StabilityVerdict {
    VerdictKind kind = VerdictKind::BoundaryDegenerate;
    std::optional<UnstableReason> reason;
    std::optional<TransversalityWhich> which;
    /// Comma-separated decided sign conditions (Stable verdicts).
    std::string class_descriptor;
    /// Which boundary was hit (BoundaryDegenerate verdicts).
    std::string witness;
    std::optional<ModuliInfo> moduli;
    std::optional<SlidingRegion> region;
    std::optional<NormalParameters> params;

    /// "Stable", "Unstable(TransversalityFailure(T))", ...
    std::string label() const;
};

StabilityVerdict stability_verdict(const NormalParameters& p);
StabilityVerdict stability_verdict(const PiecewiseSystem& z, Vec3 p, double tol);
StabilityVerdict stability_verdict(const PiecewiseSystem& z, Vec3 p);

enum class CheckStatus { Pass, Fail, NotApplicable };

const char* to_string(CheckStatus s);

struct DiaboloConfig {
    /// Stencil step of the numeric Jacobian, relative to the box half-width.
    double jacobian_step = 1e-4;
    int seeds = 1000;
    /// Seed radius relative to the box half-width.
    double seed_radius = 1e-2;
    int max_iterations = 100;
    /// Bound C in |phi_X(W^u sample) - W^s line| <= C r^2 (relative units).
    double reversibility_constant = 10.0;
    std::uint64_t seed = 1;
};

struct DiaboloReport {
    CheckStatus status = CheckStatus::NotApplicable;
    Mat2 numeric_jacobian;
    bool eigenvectors_in_crossing = false;
    /// max |phi_X(p + r v_u) - W^s line| / r^2 in box-relative units.
    double reversibility_ratio = 0.0;
    int seeds_used = 0;
    int violations = 0;
    std::string detail;
};

/// Numerical check of the invariant cones around a stable T-singularity.
DiaboloReport diabolo_check(const PiecewiseSystem& z, Vec3 p, const IntegratorConfig& icfg,
                            const DiaboloConfig& cfg = {});

struct WebPair {
    int i = 0;
    int j = 0;
    /// Leading t^2 coefficient along the contracting / expanding direction.
    double a_contracting = 0.0;
    double a_expanding = 0.0;
    bool transversal = false;
};

struct WebReport {
    CheckStatus status = CheckStatus::NotApplicable;
    int n = 0;
    double radius = 0.0;
    Vec2 v_contracting;
    Vec2 v_expanding;
    std::vector<WebPair> pairs;
    std::string detail;
};

/// Pairwise transversality of F_i = (phi^{2i})_* F_0, i = 0..n.
WebReport web_scan(const PiecewiseSystem& z, Vec3 p, int n, const IntegratorConfig& icfg);

} // namespace pwfold
