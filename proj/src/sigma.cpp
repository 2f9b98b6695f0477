#include "pwfold/sigma.hpp"

#include <algorithm>
#include <cmath>

namespace pwfold {

const char* to_string(SigmaKind k) {
    switch (k) {
    case SigmaKind::Crossing: return "Crossing";
    case SigmaKind::StableSliding: return "StableSliding";
    case SigmaKind::UnstableSliding: return "UnstableSliding";
    case SigmaKind::Tangency: return "Tangency";
    }
    return "?";
}

const char* to_string(FoldFoldSubtype s) {
    switch (s) {
    case FoldFoldSubtype::VisibleVisible: return "VisibleVisible";
    case FoldFoldSubtype::InvisibleVisible: return "InvisibleVisible";
    case FoldFoldSubtype::VisibleInvisible: return "VisibleInvisible";
    case FoldFoldSubtype::Invisible: return "Invisible";
    }
    return "?";
}

const char* to_string(TangencyKind k) {
    switch (k) {
    case TangencyKind::FoldRegular: return "FoldRegular";
    case TangencyKind::RegularFold: return "RegularFold";
    case TangencyKind::CuspRegular: return "CuspRegular";
    case TangencyKind::RegularCusp: return "RegularCusp";
    case TangencyKind::FoldFold: return "FoldFold";
    case TangencyKind::Degenerate: return "Degenerate";
    }
    return "?";
}

FoldFoldSubtype fold_fold_subtype(double x2f, double y2f) {
    if (x2f > 0.0) {
        return y2f < 0.0 ? FoldFoldSubtype::VisibleVisible : FoldFoldSubtype::VisibleInvisible;
    }
    return y2f < 0.0 ? FoldFoldSubtype::InvisibleVisible : FoldFoldSubtype::Invisible;
}

double default_tolerance(const PiecewiseSystem& z) {
    return 1e-9 * (1.0 + z.coefficient_scale());
}

SigmaClassification classify_point(const PiecewiseSystem& z, Vec3 p, double tol) {
    if (std::fabs(p.z) > tol) {
        throw Error(ErrorCode::Precondition, "point is not on Sigma");
    }
    const Vec3 q{p.x, p.y, 0.0};
    SigmaClassification c;
    // f = z, so Xf and Yf are the z-components of the fields.
    c.xf = z.X.cz.eval(q);
    c.yf = z.Y.cz.eval(q);
    const bool xz = std::fabs(c.xf) <= tol;
    const bool yz = std::fabs(c.yf) <= tol;
    if (xz || yz) {
        c.kind = SigmaKind::Tangency;
        c.tangency = tangency_type(z, q, tol);
    } else if (c.xf * c.yf > 0.0) {
        c.kind = SigmaKind::Crossing;
    } else if (c.xf < 0.0) {
        c.kind = SigmaKind::StableSliding;
    } else {
        c.kind = SigmaKind::UnstableSliding;
    }
    return c;
}

SigmaClassification classify_point(const PiecewiseSystem& z, Vec3 p) {
    return classify_point(z, p, default_tolerance(z));
}

Transversality fold_transversality(const PiecewiseSystem& z, Vec3 p, double tol) {
    const LieDerivatives d = lie_derivatives(z);
    const auto [xfx, xfy] = gradient_on_sigma(d.xf);
    const auto [yfx, yfy] = gradient_on_sigma(d.yf);
    const Vec3 q{p.x, p.y, 0.0};
    Transversality t;
    t.determinant = xfx.eval(q) * yfy.eval(q) - xfy.eval(q) * yfx.eval(q);
    t.transversal = std::fabs(t.determinant) > tol;
    return t;
}

namespace {

constexpr double kCuspIndependence = 1e-9;

TangencyKind fold_or_cusp(const VectorField3& field, const Poly3& f1, const Poly3& f2, Vec3 p,
                          double tol, TangencyKind fold, TangencyKind cusp) {
    if (std::fabs(f2.eval(p)) > tol) return fold;
    const Poly3 f3 = lie_derivative(field, f2);
    if (std::fabs(f3.eval(p)) <= tol) return TangencyKind::Degenerate;
    // det[df; d(Xf); d(X^2 f)] with df = (0, 0, 1) reduces to the xy minor.
    const double det = f1.partial(Var::X).eval(p) * f2.partial(Var::Y).eval(p) -
                       f1.partial(Var::Y).eval(p) * f2.partial(Var::X).eval(p);
    return std::fabs(det) > kCuspIndependence ? cusp : TangencyKind::Degenerate;
}

} // namespace

TangencyType tangency_type(const PiecewiseSystem& z, Vec3 p, double tol) {
    const LieDerivatives d = lie_derivatives(z);
    const double xf = d.xf.eval(p), yf = d.yf.eval(p);
    const bool xz = std::fabs(xf) <= tol;
    const bool yz = std::fabs(yf) <= tol;
    if (!xz && !yz) throw Error(ErrorCode::Precondition, "point is not a tangency");
    TangencyType t;
    if (xz && yz) {
        const double x2f = d.x2f.eval(p), y2f = d.y2f.eval(p);
        if (std::fabs(x2f) > tol && std::fabs(y2f) > tol &&
            fold_transversality(z, p, tol).transversal) {
            t.kind = TangencyKind::FoldFold;
            t.subtype = fold_fold_subtype(x2f, y2f);
        }
        return t;
    }
    if (xz) {
        t.kind = fold_or_cusp(z.X, d.xf, d.x2f, p, tol, TangencyKind::FoldRegular,
                              TangencyKind::CuspRegular);
    } else {
        t.kind = fold_or_cusp(z.Y, d.yf, d.y2f, p, tol, TangencyKind::RegularFold,
                              TangencyKind::RegularCusp);
    }
    return t;
}

namespace {

struct ZeroTracer {
    Poly3 g, gx, gy;
    Box box;
    double h;
    double gtol;

    double value(Vec2 q) const { return g.eval(q.x, q.y, 0.0); }
    Vec2 grad(Vec2 q) const { return {gx.eval(q.x, q.y, 0.0), gy.eval(q.x, q.y, 0.0)}; }

    // Newton along the gradient; false when it stalls.
    bool correct(Vec2& q) const {
        for (int it = 0; it < 30; ++it) {
            const double v = value(q);
            if (std::fabs(v) <= gtol) return true;
            const Vec2 n = grad(q);
            const double n2 = dot(n, n);
            if (n2 < 1e-24) return false;
            q = q - (v / n2) * n;
        }
        return std::fabs(value(q)) <= gtol;
    }

    // Marches from seed along orientation sign; returns points after the seed.
    std::vector<Vec2> march(Vec2 seed, double sign, bool& partial, bool& closed) const {
        std::vector<Vec2> out;
        Vec2 q = seed;
        Vec2 dir{0.0, 0.0};
        const int max_steps = static_cast<int>(20.0 * (box.xmax - box.xmin + box.ymax - box.ymin) / h) + 100;
        for (int k = 0; k < max_steps; ++k) {
            const Vec2 n = grad(q);
            const double nn = norm(n);
            if (nn < 1e-12) {
                partial = true;
                return out;
            }
            Vec2 t{-n.y / nn, n.x / nn};
            if (k == 0) {
                t = sign * t;
            } else if (dot(t, dir) < 0.0) {
                t = -1.0 * t;
            }
            Vec2 next = q + h * t;
            if (!correct(next)) {
                partial = true;
                return out;
            }
            if (!box.contains_planar(next)) return out;
            dir = next - q;
            out.push_back(next);
            q = next;
            if (k > 2 && norm(q - seed) < 0.5 * h) {
                closed = true;
                return out;
            }
        }
        partial = true;
        return out;
    }
};

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double l2 = dot(ab, ab);
    double s = l2 > 0.0 ? dot(p - a, ab) / l2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return norm(p - (a + s * ab));
}

bool near_polylines(Vec2 p, const std::vector<std::vector<Vec2>>& lines, double d) {
    for (const auto& line : lines) {
        if (line.size() == 1 && norm(p - line[0]) < d) return true;
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (segment_distance(p, line[i - 1], line[i]) < d) return true;
        }
    }
    return false;
}

} // namespace

std::vector<std::vector<Vec2>> trace_zero_set(const Poly3& g, const Box& box, double step,
                                              bool* partial) {
    std::vector<std::vector<Vec2>> lines;
    bool any_partial = false;
    const Poly3 gs = g.on_sigma();
    if (gs.is_zero()) {
        // Identically zero: every point is a tangency; nothing to trace.
        if (partial) *partial = true;
        return lines;
    }
    const double width = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
    ZeroTracer tr{gs, gs.partial(Var::X), gs.partial(Var::Y), box, step * width,
                  1e-13 * (1.0 + gs.max_abs_coeff())};

    const int n = std::max(2, static_cast<int>(std::ceil(1.0 / step)) + 1);
    auto node = [&](int i, int j) {
        return Vec2{box.xmin + (box.xmax - box.xmin) * i / (n - 1),
                    box.ymin + (box.ymax - box.ymin) * j / (n - 1)};
    };
    std::vector<double> val(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) val[i * n + j] = tr.value(node(i, j));

    std::vector<Vec2> seeds;
    auto bisect = [&](Vec2 a, Vec2 b, double va) {
        for (int it = 0; it < 80; ++it) {
            const Vec2 m = 0.5 * (a + b);
            const double vm = tr.value(m);
            if (vm == 0.0) return m;
            if ((vm < 0.0) == (va < 0.0)) {
                a = m;
                va = vm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = val[i * n + j];
            if (std::fabs(v) <= tr.gtol) {
                seeds.push_back(node(i, j));
                continue;
            }
            if (i + 1 < n && v * val[(i + 1) * n + j] < 0.0) seeds.push_back(bisect(node(i, j), node(i + 1, j), v));
            if (j + 1 < n && v * val[i * n + j + 1] < 0.0) seeds.push_back(bisect(node(i, j), node(i, j + 1), v));
        }
    }

    for (Vec2 seed : seeds) {
        if (!tr.correct(seed) || !box.contains_planar(seed)) continue;
        if (near_polylines(seed, lines, 0.25 * tr.h)) continue;
        bool part = false, closed = false;
        std::vector<Vec2> fwd = tr.march(seed, 1.0, part, closed);
        std::vector<Vec2> line;
        if (!closed) {
            std::vector<Vec2> bwd = tr.march(seed, -1.0, part, closed);
            line.assign(bwd.rbegin(), bwd.rend());
        }
        line.push_back(seed);
        line.insert(line.end(), fwd.begin(), fwd.end());
        any_partial = any_partial || part;
        lines.push_back(std::move(line));
    }
    if (partial) *partial = any_partial;
    return lines;
}

TangencyCurves tangency_curves(const PiecewiseSystem& z, const Box& box, double step) {
    const LieDerivatives d = lie_derivatives(z);
    TangencyCurves c;
    c.sx = trace_zero_set(d.xf, box, step, &c.sx_partial);
    c.sy = trace_zero_set(d.yf, box, step, &c.sy_partial);
    return c;
}

} // namespace pwfold
