#include "pwfold/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace pwfold {

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names = {"involutions", "regions", "diabolo"};
    return names;
}

NormalParameters normalized(const NormalParameters& p) {
    NormalParameters q = p.rescaled(1.0 / std::sqrt(std::fabs(p.gamma)));
    q.gamma = p.gamma > 0 ? 1.0 : -1.0;
    return q;
}

namespace {

PropertyResult result(std::string suite, std::string name, bool passed, double residual,
                      std::string detail = {}) {
    return {std::move(suite), std::move(name), passed, residual, std::move(detail)};
}

struct Context {
    const PiecewiseSystem& z;
    const VerifyOptions& opts;
    std::optional<TangencyType> tangency;
    std::optional<NormalParameters> params;
    std::string why_not;
};

Context make_context(const PiecewiseSystem& z, const VerifyOptions& opts) {
    Context c{z, opts, {}, {}, {}};
    const double tol = default_tolerance(z);
    try {
        const SigmaClassification s = classify_point(z, opts.point, tol);
        c.tangency = s.tangency;
        if (s.tangency && s.tangency->kind == TangencyKind::FoldFold) {
            c.params = normal_parameters(z, opts.point, tol);
        } else {
            c.why_not = "point is not a fold-fold";
        }
    } catch (const Error& e) {
        c.why_not = e.what();
    }
    return c;
}

std::vector<Vec2> disc_samples(Vec2 center, double radius, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec2> out;
    for (int i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(u(rng)), th = 2.0 * std::numbers::pi * u(rng);
        out.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
    }
    return out;
}

void roundtrip(const Context& c, std::vector<PropertyResult>& out) {
    if (!c.opts.expect) return;
    if (!c.params) {
        out.push_back(result("involutions", "normal_parameters_roundtrip", false, 0.0, c.why_not));
        return;
    }
    const NormalParameters want = normalized(*c.opts.expect);
    const NormalParameters& got = *c.params;
    const double res = std::max({std::fabs(got.alpha - want.alpha), std::fabs(got.beta - want.beta),
                                 std::fabs(got.gamma - want.gamma)});
    const bool ok = res <= 1e-10 && got.delta == want.delta && got.subtype == want.subtype;
    out.push_back(result("involutions", "normal_parameters_roundtrip", ok, res,
                         std::string("subtype ") + to_string(got.subtype)));
}

void involutions(const Context& c, std::vector<PropertyResult>& out) {
    roundtrip(c, out);
    if (!c.params) return;
    const IntegratorConfig& icfg = c.opts.integrator;
    const double R = icfg.box.max_half_width();
    const Vec2 p = planar(c.opts.point);
    const LieDerivatives d = lie_derivatives(c.z);
    const double x2 = d.x2f.eval(c.opts.point), y2 = d.y2f.eval(c.opts.point);
    for (Side side : {Side::X, Side::Y}) {
        // Only an invisible fold gives a fold map near p.
        const bool invisible = side == Side::X ? x2 < 0 : y2 > 0;
        if (!invisible) continue;
        const std::string tag = side == Side::X ? "X" : "Y";
        double worst = 0.0;
        std::string err;
        try {
            for (Vec2 q : disc_samples(p, 0.05 * R, c.opts.samples, c.opts.seed)) {
                const Vec2 back = fold_map_numeric(c.z, side, fold_map_numeric(c.z, side, q, icfg), icfg);
                worst = std::max(worst, norm(back - q));
            }
        } catch (const Error& e) {
            err = e.what();
        }
        const double bound = std::max(10.0 * icfg.event_tol, 1e3 * icfg.rel_tol * R);
        out.push_back(result("involutions", "fold_map_involution_" + tag, err.empty() && worst <= bound,
                             worst, err));
        try {
            const Mat2 j = jacobian_numeric(
                [&](Vec2 q) { return fold_map_numeric(c.z, side, q, icfg); }, p, 1e-4 * R);
            const double res = std::max(std::fabs(j.det() + 1.0), std::fabs(j.trace()));
            out.push_back(result("involutions", "fold_map_linear_part_" + tag, res <= 1e-4, res,
                                 "det -1 and trace 0"));
        } catch (const Error& e) {
            out.push_back(result("involutions", "fold_map_linear_part_" + tag, false, 0.0, e.what()));
        }
    }
    if (c.params->subtype != FoldFoldSubtype::Invisible) return;
    try {
        const Mat2 j = jacobian_numeric([&](Vec2 q) { return return_map_numeric(c.z, q, icfg); }, p,
                                        1e-4 * R);
        const ReturnMapAnalysis a = return_map_analysis(*c.params);
        const double res = std::max(std::fabs(j.trace() - a.trace) / std::max(1.0, std::fabs(a.trace)),
                                    std::fabs(j.det() - 1.0));
        out.push_back(result("involutions", "return_map_jacobian", res <= 1e-4, res,
                             "trace and det against the closed form"));
    } catch (const Error& e) {
        out.push_back(result("involutions", "return_map_jacobian", false, 0.0, e.what()));
    }
}

void regions(const Context& c, std::vector<PropertyResult>& out) {
    // Tangency of the sliding field, at random points of Sigma.
    const LieDerivatives d = lie_derivatives(c.z);
    const Box& box = c.z.box;
    double worst = 0.0;
    std::mt19937_64 rng(c.opts.seed);
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
    for (int i = 0; i < c.opts.samples; ++i) {
        const Vec3 q{ux(rng), uy(rng), 0.0};
        const double zc = d.yf.eval(q) * c.z.X.cz.eval(q) - d.xf.eval(q) * c.z.Y.cz.eval(q);
        worst = std::max(worst, std::fabs(zc));
    }
    out.push_back(result("regions", "sliding_field_tangent", worst < 1e-12, worst));

    if (!c.params) return;
    const NormalParameters& p = *c.params;
    const SlidingRegion reg = sliding_region_class(p);
    out.push_back(result("regions", "region_spectrum", region_spectrum_consistent(reg.tag, p), 0.0,
                         to_string(reg.tag)));

    const StabilityVerdict v0 = stability_verdict(p);
    bool same = true;
    for (double e : {0.1, 0.5, 2.0, 10.0}) {
        const StabilityVerdict v = stability_verdict(p.rescaled(e));
        same = same && v.label() == v0.label() && v.region->tag == v0.region->tag &&
               v.class_descriptor == v0.class_descriptor;
    }
    out.push_back(result("regions", "rescaling_invariance", same, 0.0, v0.label()));

    // Signs of the sliding linearization survive the normalization.
    const Mat2 lin = foldfold_sliding_linearization(p);
    const PlanarField fn = normalized_sliding_field(c.z);
    const Mat2 num = fn.jacobian(planar(c.opts.point));
    const auto sign3 = [](const Mat2& m) {
        const double s = std::max(max_abs(m), 1e-300);
        return std::array<int, 3>{banded_sign(m.det(), s, 2), banded_sign(m.trace(), s, 1),
                                  banded_sign(m.discriminant(), s, 2)};
    };
    const bool ok = sign3(num) == sign3(lin);
    out.push_back(result("regions", "linearization_signs", ok, 0.0, "det, trace, discriminant"));
}

void diabolo(const Context& c, std::vector<PropertyResult>& out) {
    if (!c.params || c.params->subtype != FoldFoldSubtype::Invisible) {
        out.push_back(result("diabolo", "diabolo_invariance", true, 0.0,
                             "skipped: not a T-singularity"));
        return;
    }
    const StabilityVerdict v = stability_verdict(*c.params);
    if (v.kind != VerdictKind::Stable) {
        out.push_back(result("diabolo", "diabolo_invariance", true, 0.0,
                             "skipped: verdict " + v.label()));
        return;
    }
    DiaboloConfig dc;
    dc.seed = c.opts.seed;
    dc.seeds = std::max(1, c.opts.samples);
    try {
        const DiaboloReport r = diabolo_check(c.z, c.opts.point, c.opts.integrator, dc);
        out.push_back(result("diabolo", "diabolo_invariance", r.status == CheckStatus::Pass,
                             r.violations, std::string(to_string(r.status)) + ": " + r.detail));
        out.push_back(result("diabolo", "reversibility_exchange",
                             r.reversibility_ratio <= dc.reversibility_constant, r.reversibility_ratio));
    } catch (const Error& e) {
        out.push_back(result("diabolo", "diabolo_invariance", false, 0.0, e.what()));
    }
}

} // namespace

std::vector<PropertyResult> run_verification(const PiecewiseSystem& z, const VerifyOptions& opts) {
    std::set<std::string> wanted;
    for (const std::string& s : opts.suites) {
        if (s == "all") {
            wanted.insert(known_suites().begin(), known_suites().end());
        } else if (std::find(known_suites().begin(), known_suites().end(), s) != known_suites().end()) {
            wanted.insert(s);
        } else {
            throw Error(ErrorCode::Precondition, "unknown suite: " + s);
        }
    }
    std::vector<PropertyResult> out;
    if (wanted.empty()) return out;
    opts.integrator.check();
    const Context c = make_context(z, opts);
    if (wanted.count("involutions")) involutions(c, out);
    if (wanted.count("regions")) regions(c, out);
    if (wanted.count("diabolo")) diabolo(c, out);
    return out;
}

} // namespace pwfold
