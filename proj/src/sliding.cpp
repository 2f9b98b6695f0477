#include "pwfold/sliding.hpp"

#include <algorithm>
#include <cmath>

namespace pwfold {

NormalParameters NormalParameters::make(double alpha, double beta, double gamma, int delta) {
    if (delta != 1 && delta != -1) throw Error(ErrorCode::Precondition, "delta must be +1 or -1");
    if (gamma == 0.0) throw Error(ErrorCode::Precondition, "gamma must be nonzero");
    // delta = sgn X^2 f, sgn gamma = sgn Y^2 f
    return {alpha, beta, gamma, delta, fold_fold_subtype(delta, gamma)};
}

NormalParameters NormalParameters::rescaled(double e) const {
    NormalParameters p = *this;
    p.alpha *= e;
    p.beta *= e;
    p.gamma *= e * e;
    return p;
}

NormalParameters NormalParameters::invisible_visible_chart() const {
    if (subtype != FoldFoldSubtype::VisibleInvisible) return *this;
    return make(-beta, alpha, -gamma, -delta);
}

int banded_sign(double q, double scale, int degree) {
    const double band = kBoundaryBand * std::pow(scale, degree);
    if (q > band) return 1;
    if (q < -band) return -1;
    return 0;
}

Mat2 PlanarField::jacobian(Vec2 q) const {
    const Vec3 p = on_sigma(q);
    return {px.partial(Var::X).eval(p), px.partial(Var::Y).eval(p),
            py.partial(Var::X).eval(p), py.partial(Var::Y).eval(p)};
}

Vec2 SlidingField::eval(Vec2 q) const {
    const double den = denominator.eval(q.x, q.y, 0.0);
    if (den == 0.0) throw Error(ErrorCode::DenominatorZero, "Yf - Xf vanishes");
    return (1.0 / den) * numerator.eval(q);
}

PlanarField normalized_sliding_field(const PiecewiseSystem& z) {
    const LieDerivatives d = lie_derivatives(z);
    return {(d.yf * z.X.cx - d.xf * z.Y.cx).on_sigma(), (d.yf * z.X.cy - d.xf * z.Y.cy).on_sigma()};
}

SlidingField sliding_field(const PiecewiseSystem& z) {
    const LieDerivatives d = lie_derivatives(z);
    return {normalized_sliding_field(z), (d.yf - d.xf).on_sigma()};
}

Mat2 foldfold_sliding_linearization(const NormalParameters& p) {
    const double dl = p.delta;
    return {p.alpha, -dl * p.gamma, 1.0, -dl * p.beta};
}

const char* to_string(SlidingRegionTag t) {
    switch (t) {
    case SlidingRegionTag::RE1: return "RE1";
    case SlidingRegionTag::RE2: return "RE2";
    case SlidingRegionTag::RH1: return "RH1";
    case SlidingRegionTag::RH2: return "RH2";
    case SlidingRegionTag::RP1: return "RP1";
    case SlidingRegionTag::RP2: return "RP2";
    case SlidingRegionTag::RP3: return "RP3";
    case SlidingRegionTag::RP4: return "RP4";
    case SlidingRegionTag::BifurcationBoundary: return "BifurcationBoundary";
    }
    return "?";
}

int claim_of(SlidingRegionTag t) {
    switch (t) {
    case SlidingRegionTag::RE1: return 1;
    case SlidingRegionTag::RE2: return 2;
    case SlidingRegionTag::RH1:
    case SlidingRegionTag::RH2: return 3;
    case SlidingRegionTag::RP1: return 4;
    case SlidingRegionTag::RP2: return 5;
    case SlidingRegionTag::RP3: return 6;
    case SlidingRegionTag::RP4: return 7;
    case SlidingRegionTag::BifurcationBoundary: return 8;
    }
    return 8;
}

namespace {

enum class Membership { Inside, Boundary, Outside };

struct Condition {
    double value; // required > 0
    int degree;
};

Membership membership(std::initializer_list<Condition> conds, double scale) {
    bool band = false;
    for (const auto& c : conds) {
        const int s = banded_sign(c.value, scale, c.degree);
        if (s < 0) return Membership::Outside;
        if (s == 0) band = true;
    }
    return band ? Membership::Boundary : Membership::Inside;
}

SlidingRegion tagged(SlidingRegionTag t, bool boundary = false) {
    return {t, claim_of(t), boundary};
}

// Region = R^1, complement of its closure = R^2, band = boundary.
SlidingRegion two_cell(Membership m, SlidingRegionTag first, SlidingRegionTag second) {
    switch (m) {
    case Membership::Inside: return tagged(first);
    case Membership::Outside: return tagged(second);
    case Membership::Boundary: break;
    }
    return tagged(SlidingRegionTag::BifurcationBoundary, true);
}

} // namespace

SlidingRegion sliding_region_class(const NormalParameters& params) {
    const double s = params.scale();
    switch (params.subtype) {
    case FoldFoldSubtype::Invisible: {
        const double a = params.alpha, b = params.beta, g = params.gamma;
        return two_cell(membership({{a * b - g, 2}, {-a, 1}, {-b, 1}}, s), SlidingRegionTag::RE1,
                        SlidingRegionTag::RE2);
    }
    case FoldFoldSubtype::VisibleVisible: {
        const double a = params.alpha, b = params.beta, g = params.gamma;
        return two_cell(membership({{g - a * b, 2}, {a, 1}, {-b, 1}}, s), SlidingRegionTag::RH1,
                        SlidingRegionTag::RH2);
    }
    case FoldFoldSubtype::InvisibleVisible:
    case FoldFoldSubtype::VisibleInvisible: break;
    }
    const NormalParameters q = params.invisible_visible_chart();
    const double a = q.alpha, b = q.beta, g = q.gamma;
    const double r = std::sqrt(-g);
    const Membership m[4] = {
        membership({{g - a * b, 2}, {b - a + 2.0 * r, 1}}, s),
        membership({{g - a * b, 2}, {a, 1}}, s),
        membership({{a * b - g, 2}, {b + a, 1}, {-(b - a) - 2.0 * r, 1}}, s),
        membership({{a * b - g, 2}, {-(b + a), 1}, {-(b - a) - 2.0 * r, 1}}, s),
    };
    static constexpr SlidingRegionTag tags[4] = {SlidingRegionTag::RP1, SlidingRegionTag::RP2,
                                                 SlidingRegionTag::RP3, SlidingRegionTag::RP4};
    bool boundary = false;
    for (int i = 0; i < 4; ++i) {
        if (m[i] == Membership::Inside) return tagged(tags[i]);
        boundary = boundary || m[i] == Membership::Boundary;
    }
    return tagged(SlidingRegionTag::BifurcationBoundary, boundary);
}

bool region_spectrum_consistent(SlidingRegionTag tag, const NormalParameters& params) {
    const NormalParameters q = params.invisible_visible_chart();
    const Mat2 m = foldfold_sliding_linearization(q);
    const double det = m.det(), tr = m.trace(), disc = m.discriminant();
    switch (tag) {
    case SlidingRegionTag::RE1: return det > 0 && tr < 0 && disc > 0;
    case SlidingRegionTag::RE2: return !(det > 0 && tr < 0);
    case SlidingRegionTag::RH1: return det > 0 && tr > 0 && disc > 0;
    case SlidingRegionTag::RH2: return !(det > 0 && tr > 0);
    // Saddles; the eigenvectors (lambda - beta, 1) lie in the crossing region
    // for RP1 (alpha < beta) and in the sliding region for RP2.
    case SlidingRegionTag::RP1: return det < 0 && q.alpha < q.beta;
    case SlidingRegionTag::RP2: return det < 0 && q.alpha > q.beta;
    case SlidingRegionTag::RP3: return det > 0 && tr > 0 && disc > 0;
    case SlidingRegionTag::RP4: return det > 0 && tr < 0 && disc > 0;
    case SlidingRegionTag::BifurcationBoundary: return true;
    }
    return false;
}

const char* to_string(PseudoEquilibriumType t) {
    switch (t) {
    case PseudoEquilibriumType::Saddle: return "Saddle";
    case PseudoEquilibriumType::Node: return "Node";
    case PseudoEquilibriumType::Focus: return "Focus";
    case PseudoEquilibriumType::NonHyperbolic: return "NonHyperbolic";
    }
    return "?";
}

std::vector<PseudoEquilibrium> pseudo_equilibria(const PiecewiseSystem& z, const Box& box,
                                                 int grid) {
    const PlanarField fn = normalized_sliding_field(z);
    const LieDerivatives d = lie_derivatives(z);
    const double tol = default_tolerance(z);
    const double ztol = 1e-12 * (1.0 + fn.px.max_abs_coeff() + fn.py.max_abs_coeff());
    std::vector<PseudoEquilibrium> out;
    grid = std::max(grid, 2);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Vec2 q{box.xmin + (box.xmax - box.xmin) * i / (grid - 1),
                   box.ymin + (box.ymax - box.ymin) * j / (grid - 1)};
            bool converged = false;
            for (int it = 0; it < 50; ++it) {
                const Vec2 v = fn.eval(q);
                if (norm(v) <= ztol) {
                    converged = true;
                    break;
                }
                const Mat2 jac = fn.jacobian(q);
                if (std::fabs(jac.det()) < 1e-300) break;
                q = q - jac.inverse() * v;
                if (!std::isfinite(q.x) || !std::isfinite(q.y)) break;
            }
            if (!converged || !box.contains_planar(q)) continue;
            const Vec3 p = on_sigma(q);
            const double xf = d.xf.eval(p), yf = d.yf.eval(p);
            if (std::fabs(xf) <= tol || std::fabs(yf) <= tol || xf * yf >= 0.0) continue;
            const bool dup = std::any_of(out.begin(), out.end(), [&](const PseudoEquilibrium& e) {
                return norm(e.point - q) < 1e-8;
            });
            if (dup) continue;
            PseudoEquilibrium e;
            e.point = q;
            const Mat2 jn = fn.jacobian(q);
            const double k = 1.0 / (yf - xf);
            e.jacobian = {k * jn.a, k * jn.b, k * jn.c, k * jn.d};
            e.stable_sliding = xf < 0.0;
            const double sc = std::max(max_abs(e.jacobian), 1e-300);
            const double det = e.jacobian.det(), tr = e.jacobian.trace();
            const double disc = e.jacobian.discriminant();
            if (std::fabs(det) <= 1e-9 * sc * sc) {
                e.type = PseudoEquilibriumType::NonHyperbolic;
            } else if (det < 0.0) {
                e.type = PseudoEquilibriumType::Saddle;
            } else if (disc < 0.0 && std::fabs(tr) <= 1e-9 * sc) {
                e.type = PseudoEquilibriumType::NonHyperbolic;
            } else {
                e.type = disc >= 0.0 ? PseudoEquilibriumType::Node : PseudoEquilibriumType::Focus;
            }
            out.push_back(e);
        }
    }
    return out;
}

const char* to_string(ContactOrder c) {
    switch (c) {
    case ContactOrder::Transverse: return "Transverse";
    case ContactOrder::Quadratic: return "Quadratic";
    case ContactOrder::Degenerate: return "Degenerate";
    }
    return "?";
}

ContactOrder boundary_contact(const PiecewiseSystem& z, Vec3 p, double tol) {
    const TangencyType t = tangency_type(z, p, tol);
    const LieDerivatives d = lie_derivatives(z);
    Poly3 g;
    switch (t.kind) {
    case TangencyKind::FoldRegular:
    case TangencyKind::CuspRegular: g = d.xf.on_sigma(); break;
    case TangencyKind::RegularFold:
    case TangencyKind::RegularCusp: g = d.yf.on_sigma(); break;
    default:
        throw Error(ErrorCode::Precondition, "boundary contact needs a fold-regular or cusp-regular point");
    }
    const PlanarField fn = normalized_sliding_field(z);
    // Derivative of g along the sliding field, then once more.
    const Poly3 h = fn.px * g.partial(Var::X) + fn.py * g.partial(Var::Y);
    const Vec3 q{p.x, p.y, 0.0};
    if (std::fabs(h.eval(q)) > tol) return ContactOrder::Transverse;
    const Poly3 h2 = fn.px * h.partial(Var::X) + fn.py * h.partial(Var::Y);
    if (std::fabs(h2.eval(q)) > tol) return ContactOrder::Quadratic;
    return ContactOrder::Degenerate;
}

} // namespace pwfold
