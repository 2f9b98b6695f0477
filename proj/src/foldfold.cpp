#include "pwfold/foldfold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace pwfold {

namespace {

int sgn(double v) { return (v > 0) - (v < 0); }

const char* sign_char(int s) { return s > 0 ? "+" : (s < 0 ? "-" : "0"); }

} // namespace

NormalParameters normal_parameters(const PiecewiseSystem& z, Vec3 p, double tol) {
    const SigmaClassification c = classify_point(z, p, tol);
    if (c.kind != SigmaKind::Tangency) {
        throw Error(ErrorCode::NotFoldFold, std::string("point is ") + to_string(c.kind));
    }
    const TangencyType& t = *c.tangency;
    if (t.kind == TangencyKind::Degenerate) {
        throw Error(ErrorCode::Degenerate, "degenerate tangency has no normal parameters");
    }
    if (t.kind != TangencyKind::FoldFold) {
        throw Error(ErrorCode::NotFoldFold, std::string("point is ") + to_string(t.kind));
    }
    const LieDerivatives d = lie_derivatives(z);
    const double x2 = d.x2f.eval(p), y2 = d.y2f.eval(p);
    if (std::fabs(x2) <= tol || std::fabs(y2) <= tol) {
        throw Error(ErrorCode::Degenerate, "second Lie derivative below tolerance");
    }
    const double n = std::sqrt(std::fabs(x2) * std::fabs(y2));
    const int delta = x2 > 0 ? 1 : -1;
    return NormalParameters::make(d.xyf.eval(p) / n, delta * d.yxf.eval(p) / n, y2 > 0 ? 1.0 : -1.0,
                                  delta);
}

NormalParameters normal_parameters(const PiecewiseSystem& z, Vec3 p) {
    return normal_parameters(z, p, default_tolerance(z));
}

Involutions analytic_involutions(const NormalParameters& p) {
    if (p.gamma == 0.0) throw Error(ErrorCode::Precondition, "gamma must be nonzero");
    return {{1.0, -2.0 * p.alpha, 0.0, -1.0}, {-1.0, 0.0, -2.0 * p.beta / p.gamma, 1.0}};
}

const char* to_string(FixedPointClass c) {
    switch (c) {
    case FixedPointClass::Saddle: return "Saddle";
    case FixedPointClass::NonHyperbolicComplex: return "NonHyperbolicComplex";
    case FixedPointClass::NonHyperbolicUnit: return "NonHyperbolicUnit";
    case FixedPointClass::ParabolicBoundary: return "ParabolicBoundary";
    }
    return "?";
}

const char* to_string(EigenLocation l) {
    switch (l) {
    case EigenLocation::InCrossing: return "InCrossing";
    case EigenLocation::InSliding: return "InSliding";
    case EigenLocation::OnTangency: return "OnTangency";
    }
    return "?";
}

namespace {

EigenLocation chart_location(Vec2 v) {
    const double q = v.x * v.y / (v.x * v.x + v.y * v.y);
    if (std::fabs(q) <= 1e-12) return EigenLocation::OnTangency;
    return q < 0 ? EigenLocation::InCrossing : EigenLocation::InSliding;
}

} // namespace

ReturnMapAnalysis return_map_analysis(const NormalParameters& p) {
    if (p.subtype != FoldFoldSubtype::Invisible) {
        throw Error(ErrorCode::Precondition, "return map needs an invisible-invisible fold-fold");
    }
    ReturnMapAnalysis a;
    const double ab = p.alpha * p.beta;
    a.matrix = {-1.0 + 4.0 * ab / p.gamma, -2.0 * p.alpha, 2.0 * p.beta / p.gamma, -1.0};
    a.trace = 4.0 * ab / p.gamma - 2.0;
    a.det = 1.0;

    const double s = p.scale();
    const int s_ab = banded_sign(ab, s, 2);
    const int s_g = banded_sign(ab - p.gamma, s, 2);
    const double disc = a.trace * a.trace - 4.0;
    if (disc >= 0.0) {
        const double mu = 0.5 * (a.trace + std::copysign(std::sqrt(disc), a.trace));
        a.eigenvalues = {1.0 / mu, mu};
    } else {
        const double re = 0.5 * a.trace, im = 0.5 * std::sqrt(-disc);
        a.eigenvalues = {{re, im}, {re, -im}};
    }
    if (s_g == 0) {
        a.fixed_point_class = FixedPointClass::NonHyperbolicUnit;
    } else if (s_ab == 0) {
        a.fixed_point_class = FixedPointClass::ParabolicBoundary;
    } else if (s_ab * s_g * sgn(p.gamma) > 0) {
        a.fixed_point_class = FixedPointClass::Saddle;
    } else {
        a.fixed_point_class = FixedPointClass::NonHyperbolicComplex;
    }
    if (a.fixed_point_class == FixedPointClass::NonHyperbolicComplex && disc < 0.0) {
        a.tau = std::atan2(std::fabs(a.eigenvalues.first.imag()), a.eigenvalues.first.real());
    }
    if (a.fixed_point_class == FixedPointClass::Saddle && disc > 0.0) {
        const double lam = a.eigenvalues.first.real(), mu = a.eigenvalues.second.real();
        const Vec2 vl = eigenvector(a.matrix, lam), vm = eigenvector(a.matrix, mu);
        a.contracting = EigenDirection{lam, vl, chart_location(vl)};
        a.expanding = EigenDirection{mu, vm, chart_location(vm)};
    }
    return a;
}

EigenLocation direction_location(const PiecewiseSystem& z, Vec3 p, Vec2 v, double r) {
    const LieDerivatives d = lie_derivatives(z);
    const Vec3 q{p.x + r * v.x, p.y + r * v.y, 0.0};
    const auto [gxx, gxy] = gradient_on_sigma(d.xf);
    const auto [gyx, gyy] = gradient_on_sigma(d.yf);
    const double nx = std::hypot(gxx.eval(p), gxy.eval(p));
    const double ny = std::hypot(gyx.eval(p), gyy.eval(p));
    const double ref = r * r * std::max(nx * ny, 1e-300) * (v.x * v.x + v.y * v.y);
    const double q_val = d.xf.eval(q) * d.yf.eval(q) / ref;
    if (std::fabs(q_val) <= 1e-9) return EigenLocation::OnTangency;
    return q_val > 0 ? EigenLocation::InCrossing : EigenLocation::InSliding;
}

double demelo_palis(const ReturnMapAnalysis& a) {
    if (a.fixed_point_class != FixedPointClass::Saddle) {
        throw Error(ErrorCode::Precondition, "de Melo-Palis invariant needs a saddle");
    }
    const double log_mu = std::log(std::abs(a.eigenvalues.second));
    // lambda = det / mu, so log|lambda| is taken through the product.
    const double log_lambda = std::log(std::fabs(a.det)) - log_mu;
    return log_lambda / log_mu;
}

ModuliInfo moduli_info(const ReturnMapAnalysis& a) {
    if (a.fixed_point_class != FixedPointClass::NonHyperbolicComplex) {
        throw Error(ErrorCode::Precondition, "moduli need complex unit eigenvalues");
    }
    ModuliInfo m;
    m.tau = a.tau;
    m.tau_over_pi = a.tau / std::numbers::pi;
    m.leaf_id = a.tau;
    // Convergents h_k / k_k of the continued fraction of tau / pi.
    std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    double x = m.tau_over_pi;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(x);
        const auto ai = static_cast<std::int64_t>(fl);
        const std::int64_t h = ai * h0 + h1, k = ai * k0 + k1;
        if (k > 1000000) break;
        m.convergents.emplace_back(h, k);
        h1 = h0;
        h0 = h;
        k1 = k0;
        k0 = k;
        const double frac = x - fl;
        if (frac < 1e-12) break;
        x = 1.0 / frac;
    }
    return m;
}

ConnectionRegion connection_region(const NormalParameters& params) {
    if (!params.parabolic()) {
        throw Error(ErrorCode::Precondition, "connection region needs a parabolic fold-fold");
    }
    const NormalParameters q = params.invisible_visible_chart();
    ConnectionRegion c;
    c.direction = {-2.0 * q.alpha, -1.0};
    if (banded_sign(q.alpha, q.scale(), 1) == 0) {
        c.degenerate = true;
        c.description = "phi_X(S_Y) tangent to S_Y";
        return c;
    }
    c.exists = q.alpha > 0;
    c.description = c.exists ? "phi_X(S_Y) enters the sliding region; unstable sliding connects to stable sliding"
                             : "phi_X(S_Y) stays in the crossing region; no sliding connections";
    return c;
}

TransversalityCoefficients parabolic_transversality(const NormalParameters& params) {
    if (!params.parabolic()) {
        throw Error(ErrorCode::Precondition, "transversality coefficients need a parabolic fold-fold");
    }
    const NormalParameters q = params.invisible_visible_chart();
    const double a = q.alpha, b = q.beta, g = q.gamma;
    return {-2.0 * (a + b) * (a * b - g), 2.0 * a * (a + b) - g};
}

const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::Stable: return "Stable";
    case VerdictKind::Unstable: return "Unstable";
    case VerdictKind::BoundaryDegenerate: return "BoundaryDegenerate";
    }
    return "?";
}

const char* to_string(UnstableReason r) {
    switch (r) {
    case UnstableReason::NonHyperbolicReturnMap: return "NonHyperbolicReturnMap";
    case UnstableReason::InvariantManifoldInSliding: return "InvariantManifoldInSliding";
    case UnstableReason::SlidingBifurcation: return "SlidingBifurcation";
    case UnstableReason::TransversalityFailure: return "TransversalityFailure";
    }
    return "?";
}

const char* to_string(TransversalityWhich w) {
    switch (w) {
    case TransversalityWhich::Alpha: return "Alpha";
    case TransversalityWhich::D: return "D";
    case TransversalityWhich::T: return "T";
    }
    return "?";
}

std::string StabilityVerdict::label() const {
    std::string s = to_string(kind);
    if (kind != VerdictKind::Unstable || !reason) return s;
    s += "(";
    s += to_string(*reason);
    if (which) {
        s += "(";
        s += to_string(*which);
        s += ")";
    }
    return s + ")";
}

namespace {

StabilityVerdict stable(std::string descriptor) {
    StabilityVerdict v;
    v.kind = VerdictKind::Stable;
    v.class_descriptor = std::move(descriptor);
    return v;
}

StabilityVerdict unstable(UnstableReason r) {
    StabilityVerdict v;
    v.kind = VerdictKind::Unstable;
    v.reason = r;
    return v;
}

StabilityVerdict boundary(std::string witness) {
    StabilityVerdict v;
    v.kind = VerdictKind::BoundaryDegenerate;
    v.witness = std::move(witness);
    return v;
}

StabilityVerdict transversality_failure(TransversalityWhich w) {
    StabilityVerdict v = unstable(UnstableReason::TransversalityFailure);
    v.which = w;
    return v;
}

StabilityVerdict elliptic_verdict(const NormalParameters& p, const SlidingRegion& region) {
    const ReturnMapAnalysis a = return_map_analysis(p);
    switch (a.fixed_point_class) {
    case FixedPointClass::NonHyperbolicUnit: return boundary("alpha*beta = gamma");
    case FixedPointClass::ParabolicBoundary: return boundary("alpha*beta = 0");
    case FixedPointClass::NonHyperbolicComplex: {
        StabilityVerdict v = unstable(UnstableReason::NonHyperbolicReturnMap);
        v.moduli = moduli_info(a);
        return v;
    }
    case FixedPointClass::Saddle: break;
    }
    if (a.contracting->location == EigenLocation::InCrossing &&
        a.expanding->location == EigenLocation::InCrossing) {
        return stable(std::string(to_string(region.tag)) + ",saddle,manifolds:crossing");
    }
    return unstable(UnstableReason::InvariantManifoldInSliding);
}

StabilityVerdict parabolic_verdict(const NormalParameters& params, const SlidingRegion& region) {
    if (region.tag == SlidingRegionTag::BifurcationBoundary) {
        if (region.on_boundary) return boundary("sliding region boundary");
        return unstable(UnstableReason::SlidingBifurcation);
    }
    const NormalParameters q = params.invisible_visible_chart();
    const double s = q.scale();
    const int sa = banded_sign(q.alpha, s, 1);
    if (sa == 0) return transversality_failure(TransversalityWhich::Alpha);
    const int sab = banded_sign(q.alpha + q.beta, s, 1);
    if (sa > 0 && sab == 0) return transversality_failure(TransversalityWhich::D);
    const TransversalityCoefficients tc = parabolic_transversality(params);
    const int st = banded_sign(tc.t_coeff, s, 2);
    if (st == 0) return transversality_failure(TransversalityWhich::T);
    std::string d = to_string(region.tag);
    d += ",alpha:";
    d += sign_char(sa);
    d += ",alpha+beta:";
    d += sign_char(sab);
    d += ",T:";
    d += sign_char(st);
    return stable(std::move(d));
}

} // namespace

StabilityVerdict stability_verdict(const NormalParameters& p) {
    const SlidingRegion region = sliding_region_class(p);
    StabilityVerdict v;
    switch (p.subtype) {
    case FoldFoldSubtype::Invisible: v = elliptic_verdict(p, region); break;
    case FoldFoldSubtype::VisibleVisible:
        v = region.tag == SlidingRegionTag::BifurcationBoundary
                ? boundary("sliding region boundary")
                : stable(to_string(region.tag));
        break;
    case FoldFoldSubtype::InvisibleVisible:
    case FoldFoldSubtype::VisibleInvisible: v = parabolic_verdict(p, region); break;
    }
    v.region = region;
    v.params = p;
    return v;
}

StabilityVerdict stability_verdict(const PiecewiseSystem& z, Vec3 p, double tol) {
    const SigmaClassification c = classify_point(z, p, tol);
    switch (c.kind) {
    case SigmaKind::Crossing: return stable("crossing");
    case SigmaKind::StableSliding:
    case SigmaKind::UnstableSliding: {
        const PlanarField fn = normalized_sliding_field(z);
        const Vec2 q = planar(p);
        if (norm(fn.eval(q)) > tol) return stable("sliding,regular");
        const Mat2 jn = fn.jacobian(q);
        const double k = 1.0 / (c.yf - c.xf);
        const Mat2 j{k * jn.a, k * jn.b, k * jn.c, k * jn.d};
        const double sc = std::max(max_abs(j), 1e-300);
        const bool flat = std::fabs(j.det()) <= 1e-9 * sc * sc ||
                          (j.discriminant() < 0 && std::fabs(j.trace()) <= 1e-9 * sc);
        if (flat) return unstable(UnstableReason::SlidingBifurcation);
        return stable("sliding,hyperbolic pseudo-equilibrium");
    }
    case SigmaKind::Tangency: break;
    }
    const TangencyType& t = *c.tangency;
    switch (t.kind) {
    case TangencyKind::FoldRegular:
    case TangencyKind::RegularFold:
    case TangencyKind::CuspRegular:
    case TangencyKind::RegularCusp: return stable(to_string(t.kind));
    case TangencyKind::Degenerate: return boundary("degenerate tangency");
    case TangencyKind::FoldFold: break;
    }
    return stability_verdict(normal_parameters(z, p, tol));
}

StabilityVerdict stability_verdict(const PiecewiseSystem& z, Vec3 p) {
    return stability_verdict(z, p, default_tolerance(z));
}

const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "Pass";
    case CheckStatus::Fail: return "Fail";
    case CheckStatus::NotApplicable: return "NotApplicable";
    }
    return "?";
}

namespace {

struct NumericSaddle {
    bool ok = false;
    Mat2 jacobian;
    double lambda = 0.0, mu = 0.0;
    Vec2 vs, vu;
    EigenLocation ls = EigenLocation::OnTangency, lu = EigenLocation::OnTangency;
    std::string detail;
};

bool is_t_singularity(const PiecewiseSystem& z, Vec3 p, std::string& detail) {
    const double tol = default_tolerance(z);
    try {
        const TangencyType t = tangency_type(z, p, tol);
        if (t.kind == TangencyKind::FoldFold && t.subtype == FoldFoldSubtype::Invisible) return true;
        detail = std::string("not a T-singularity: ") + to_string(t.kind);
    } catch (const Error& e) {
        detail = e.what();
    }
    return false;
}

NumericSaddle numeric_saddle(const PiecewiseSystem& z, Vec3 p, const IntegratorConfig& icfg,
                             double step) {
    NumericSaddle s;
    const double R = icfg.box.max_half_width();
    const auto phi = [&](Vec2 q) { return return_map_numeric(z, q, icfg); };
    s.jacobian = jacobian_numeric(phi, planar(p), step * R);
    const auto [l1, l2] = eigenvalues(s.jacobian);
    if (l1.imag() != 0.0 || !(std::abs(l1) < 1.0 && std::abs(l2) > 1.0)) {
        s.detail = "numeric return map is not a saddle";
        return s;
    }
    s.lambda = l1.real();
    s.mu = l2.real();
    s.vs = eigenvector(s.jacobian, s.lambda);
    s.vu = eigenvector(s.jacobian, s.mu);
    const double r = 1e-3 * R;
    s.ls = direction_location(z, p, s.vs, r);
    s.lu = direction_location(z, p, s.vu, r);
    s.ok = true;
    return s;
}

} // namespace

DiaboloReport diabolo_check(const PiecewiseSystem& z, Vec3 p, const IntegratorConfig& icfg,
                            const DiaboloConfig& cfg) {
    icfg.check();
    DiaboloReport rep;
    if (!is_t_singularity(z, p, rep.detail)) return rep;
    const NumericSaddle ns = numeric_saddle(z, p, icfg, cfg.jacobian_step);
    rep.numeric_jacobian = ns.jacobian;
    if (!ns.ok) {
        rep.detail = ns.detail;
        return rep;
    }
    rep.eigenvectors_in_crossing =
        ns.ls == EigenLocation::InCrossing && ns.lu == EigenLocation::InCrossing;
    if (!rep.eigenvectors_in_crossing) {
        rep.detail = "an eigen-direction lies outside the crossing region";
        return rep;
    }

    const double R = icfg.box.max_half_width();
    const Vec2 p2 = planar(p);
    for (double rr : {1e-2, 5e-3, 2.5e-3}) {
        const double r = rr * R;
        for (double sg : {1.0, -1.0}) {
            const Vec2 w = fold_map_numeric(z, Side::X, p2 + (sg * r) * ns.vu, icfg);
            const double dist = std::fabs(cross(w - p2, ns.vs));
            rep.reversibility_ratio = std::max(rep.reversibility_ratio, dist * R / (r * r));
        }
    }

    const LieDerivatives d = lie_derivatives(z);
    const double tol = default_tolerance(z);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double rmax = cfg.seed_radius * R;
    int abandoned = 0;
    for (int attempt = 0; rep.seeds_used < cfg.seeds && attempt < 100 * cfg.seeds; ++attempt) {
        const double rho = rmax * std::sqrt(unit(rng));
        const double th = 2.0 * std::numbers::pi * unit(rng);
        Vec2 q{p.x + rho * std::cos(th), p.y + rho * std::sin(th)};
        const double xf = d.xf.eval(q.x, q.y, 0.0), yf = d.yf.eval(q.x, q.y, 0.0);
        if (!(xf > tol && yf < -tol)) continue;
        ++rep.seeds_used;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            try {
                q = return_map_numeric(z, q, icfg);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::Integration) throw;
                ++abandoned;
                break;
            }
            if (!icfg.box.contains_planar(q)) break;
            const double a = d.xf.eval(q.x, q.y, 0.0), b = d.yf.eval(q.x, q.y, 0.0);
            if (a < -tol && b > tol) {
                ++rep.violations;
                break;
            }
        }
    }
    const bool ok = rep.reversibility_ratio <= cfg.reversibility_constant && rep.violations == 0 &&
                    rep.seeds_used > 0;
    rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    rep.detail = "seeds " + std::to_string(rep.seeds_used) + ", violations " +
                 std::to_string(rep.violations) + ", abandoned flights " + std::to_string(abandoned);
    return rep;
}

namespace {

// F_i(q) = D(phi^{2i})(w) F_0(w) with w = phi^{-2i}(q).
Vec2 pushed_field(const PiecewiseSystem& z, const PlanarField& f0, int i, Vec2 q,
                  const IntegratorConfig& icfg, double h) {
    const auto phi = [&](Vec2 u) { return return_map_numeric(z, u, icfg); };
    Vec2 w = q;
    for (int k = 0; k < 2 * i; ++k) {
        w = fold_map_numeric(z, Side::Y, fold_map_numeric(z, Side::X, w, icfg), icfg);
    }
    Mat2 jac = Mat2::identity();
    Vec2 u = w;
    for (int k = 0; k < 2 * i; ++k) {
        jac = jacobian_numeric(phi, u, h) * jac;
        u = phi(u);
    }
    return jac * f0.eval(w);
}

// Least-squares fit d(t) = a t^2 + b t^3 + c t^4; returns a.
double leading_coefficient(const std::vector<double>& ts, const std::vector<double>& ds) {
    std::array<std::array<double, 3>, 3> n{};
    std::array<double, 3> rhs{};
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double t = ts[k];
        const double b[3] = {t * t, t * t * t, t * t * t * t};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += b[r] * ds[k];
            for (int c = 0; c < 3; ++c) n[r][c] += b[r] * b[c];
        }
    }
    // Cramer's rule on the 3x3 normal equations.
    const auto det3 = [](const std::array<std::array<double, 3>, 3>& m) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    auto m0 = n;
    for (int r = 0; r < 3; ++r) m0[r][0] = rhs[r];
    return det3(m0) / det3(n);
}

struct Fit {
    std::vector<double> a_c, a_e; // per pair
    std::vector<double> n_c, n_e; // max |F_i(t v)| / t per field and direction
};

Fit fit_at(const PiecewiseSystem& z, Vec3 p, int n, double r, const NumericSaddle& ns,
           const IntegratorConfig& icfg) {
    const PlanarField f0 = normalized_sliding_field(z);
    const double h = 1e-5 * icfg.box.max_half_width();
    const Vec2 p2 = planar(p);
    Fit fit;
    fit.n_c.assign(n + 1, 0.0);
    fit.n_e.assign(n + 1, 0.0);
    for (const Vec2 v : {ns.vs, ns.vu}) {
        const bool contracting = v == ns.vs;
        std::vector<double>& norms = contracting ? fit.n_c : fit.n_e;
        std::vector<double> ts;
        std::vector<std::vector<Vec2>> f(n + 1);
        for (int k = -4; k <= 4; ++k) {
            if (k == 0) continue;
            const double t = r * k / 4.0;
            ts.push_back(t);
            for (int i = 0; i <= n; ++i) {
                f[i].push_back(pushed_field(z, f0, i, p2 + t * v, icfg, h));
                norms[i] = std::max(norms[i], norm(f[i].back()) / std::fabs(t));
            }
        }
        std::vector<double>& out = contracting ? fit.a_c : fit.a_e;
        for (int i = 0; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                std::vector<double> ds;
                for (std::size_t k = 0; k < ts.size(); ++k) ds.push_back(cross(f[i][k], f[j][k]));
                out.push_back(leading_coefficient(ts, ds));
            }
        }
    }
    return fit;
}

} // namespace

WebReport web_scan(const PiecewiseSystem& z, Vec3 p, int n, const IntegratorConfig& icfg) {
    icfg.check();
    if (n < 0) throw Error(ErrorCode::Precondition, "web order must be non-negative");
    WebReport rep;
    rep.n = n;
    if (!is_t_singularity(z, p, rep.detail)) return rep;
    const NumericSaddle ns = numeric_saddle(z, p, icfg, 1e-4);
    if (!ns.ok) {
        rep.detail = ns.detail;
        return rep;
    }
    if (ns.ls != EigenLocation::InSliding && ns.lu != EigenLocation::InSliding) {
        rep.detail = "no invariant manifold in the sliding region";
        return rep;
    }
    rep.v_contracting = ns.vs;
    rep.v_expanding = ns.vu;
    rep.status = CheckStatus::Pass;
    if (n == 0) {
        rep.detail = "single foliation";
        return rep;
    }
    // phi^{-2n} stretches the contracting direction by mu^{2n}.
    double r = 0.05 * icfg.box.max_half_width() / std::pow(std::fabs(ns.mu), 2 * n);
    for (int attempt = 0;; ++attempt) {
        const Fit full = fit_at(z, p, n, r, ns, icfg);
        const Fit half = fit_at(z, p, n, 0.5 * r, ns, icfg);
        bool stable_fit = true;
        std::size_t k = 0;
        for (int i = 0; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j, ++k) {
                const double sc = full.n_c[i] * full.n_c[j], se = full.n_e[i] * full.n_e[j];
                stable_fit = stable_fit && std::fabs(full.a_c[k] - half.a_c[k]) <= 1e-3 * sc &&
                             std::fabs(full.a_e[k] - half.a_e[k]) <= 1e-3 * se;
            }
        }
        if (stable_fit) {
            rep.radius = r;
            k = 0;
            for (int i = 0; i <= n; ++i) {
                for (int j = i + 1; j <= n; ++j, ++k) {
                    WebPair wp{i, j, full.a_c[k], full.a_e[k], false};
                    const double sc = full.n_c[i] * full.n_c[j], se = full.n_e[i] * full.n_e[j];
                    wp.transversal = std::fabs(wp.a_contracting) > 1e-6 * sc &&
                                     std::fabs(wp.a_expanding) > 1e-6 * se;
                    rep.pairs.push_back(wp);
                }
            }
            return rep;
        }
        if (attempt == 1) throw Error(ErrorCode::Integration, "web fit unstable after widening");
        r *= 4.0;
    }
}

} // namespace pwfold
