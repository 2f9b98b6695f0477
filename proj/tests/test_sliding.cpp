#include <doctest.h>

#include <random>

#include "pwfold/sliding.hpp"

using namespace pwfold;

namespace {

Poly3 x() { return Poly3::variable(Var::X); }
Poly3 y() { return Poly3::variable(Var::Y); }

PiecewiseSystem constant_fields(Vec3 a, Vec3 b) {
    PiecewiseSystem s;
    s.X = {Poly3(a.x), Poly3(a.y), Poly3(a.z)};
    s.Y = {Poly3(b.x), Poly3(b.y), Poly3(b.z)};
    return s;
}

bool same(const Mat2& a, const Mat2& b, double tol = 1e-14) { return max_abs(a - b) <= tol; }

} // namespace

TEST_CASE("sliding_field") {
    auto c = constant_fields({1, 0, -1}, {0, 1, 1});
    auto fz = sliding_field(c).eval({0.2, -0.4});
    CHECK(fz.x == doctest::Approx(0.5));
    CHECK(fz.y == doctest::Approx(0.5));
    auto fn = normalized_sliding_field(c).eval({0.2, -0.4});
    CHECK(fn == Vec2{1, 1});

    auto e = build_normal_form(-1, -1, 1, -1);
    CHECK(sliding_field(e).eval({1, 1}) == Vec2{0, 0});
    try {
        sliding_field(e).eval({1, -1});
        FAIL("expected denominator-zero");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::DenominatorZero);
    }
}

TEST_CASE("normalized field linear part matches the closed form") {
    struct Case {
        double a, b, g;
        int d;
        Mat2 expect;
    };
    for (auto c : {Case{-1, -1, 1, -1, {-1, 1, 1, -1}}, Case{1, -1, -1, 1, {1, 1, 1, 1}},
                   Case{-2, -1, 1, -1, {-2, 1, 1, -1}}, Case{1, -1, -0.5, 1, {1, 0.5, 1, 1}}}) {
        auto p = NormalParameters::make(c.a, c.b, c.g, c.d);
        CHECK(same(foldfold_sliding_linearization(p), c.expect));
        auto j = normalized_sliding_field(build_normal_form(c.a, c.b, c.g, c.d)).jacobian({0, 0});
        CHECK(same(j, c.expect));
    }
    auto m = foldfold_sliding_linearization(NormalParameters::make(-1, -1, 1, -1));
    auto ev = eigenvalues(m);
    CHECK(ev.first.real() == doctest::Approx(0.0));
    CHECK(ev.second.real() == doctest::Approx(-2.0));
    auto n = foldfold_sliding_linearization(NormalParameters::make(-2, -1, 1, -1));
    CHECK(n.det() == 1.0);
    CHECK(n.trace() == -3.0);
    CHECK(n.discriminant() > 0);
}

TEST_CASE("sliding_region_class examples") {
    auto r1 = sliding_region_class(NormalParameters::make(-1, -1, 0.5, -1));
    CHECK(r1.tag == SlidingRegionTag::RE1);
    CHECK(r1.claim == 1);
    auto r2 = sliding_region_class(NormalParameters::make(1, 1, 1, -1));
    CHECK(r2.tag == SlidingRegionTag::RE2);
    CHECK(r2.claim == 2);
    auto rp = sliding_region_class(NormalParameters::make(-1, 1.5, -1, -1));
    CHECK(rp.tag == SlidingRegionTag::RP1);
    CHECK(rp.claim == 4);
    auto rb = sliding_region_class(NormalParameters::make(-1, -1, 1, -1));
    CHECK(rb.tag == SlidingRegionTag::BifurcationBoundary);
    CHECK(rb.claim == 8);
    CHECK(rb.on_boundary);
    CHECK(sliding_region_class(NormalParameters::make(-2, -1, 1, -1)).tag == SlidingRegionTag::RE1);
    CHECK(sliding_region_class(NormalParameters::make(2, -1.5, -2, 1)).tag == SlidingRegionTag::RH1);
    CHECK(sliding_region_class(NormalParameters::make(1, 1, -1, 1)).tag == SlidingRegionTag::RH2);
}

TEST_CASE("region tags agree with the linearization spectrum") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_real_distribution<double> g(0.05, 3);
    int seen[9] = {};
    for (int k = 0; k < 40000; ++k) {
        int delta = (k & 1) ? 1 : -1;
        double gamma = (k & 2) ? g(rng) : -g(rng);
        auto p = NormalParameters::make(u(rng), u(rng), gamma, delta);
        auto r = sliding_region_class(p);
        ++seen[int(r.tag)];
        if (r.tag == SlidingRegionTag::BifurcationBoundary) continue;
        CHECK(region_spectrum_consistent(r.tag, p));
    }
    for (int t = 0; t < 8; ++t) CHECK(seen[t] > 0);
}

TEST_CASE("sliding field is tangent to Sigma and rescales the normalized field") {
    auto s = build_normal_form(-2, 0.5, 1.3, -1, {0.2 * x() * y(), -0.1 * x(), 0.4 * y() * y()});
    auto n = normalized_sliding_field(s);
    auto f = sliding_field(s);
    auto d = lie_derivatives(s);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    int ss = 0, us = 0;
    for (int k = 0; k < 3000; ++k) {
        Vec3 p{u(rng), u(rng), 0};
        double xf = d.xf.eval(p), yf = d.yf.eval(p);
        // z component of Yf X - Xf Y on Sigma
        double tz = yf * s.X.cz.eval(p) - xf * s.Y.cz.eval(p);
        CHECK(std::fabs(tz) < 1e-12);
        if (xf * yf >= 0 || std::fabs(yf - xf) < 1e-6) continue;
        Vec2 fn = n.eval(planar(p));
        Vec2 fz = f.eval(planar(p));
        double k2 = yf - xf;
        CHECK(norm(fn - k2 * fz) <= 1e-12 * (1 + norm(fn)));
        if (xf < 0) {
            CHECK(k2 > 0);
            ++ss;
        } else {
            CHECK(k2 < 0);
            ++us;
        }
    }
    CHECK(ss > 100);
    CHECK(us > 100);
}

TEST_CASE("pseudo_equilibria") {
    Box b = Box::centered(1.0);
    CHECK(pseudo_equilibria(build_normal_form(-2, -1, 1, -1), b).empty());
    // alpha beta = gamma: F^N vanishes on the whole diagonal of the sliding quadrant
    auto line = pseudo_equilibria(build_normal_form(-1, -1, 1, -1), b);
    REQUIRE_FALSE(line.empty());
    for (auto& q : line) {
        CHECK(q.point.x == doctest::Approx(q.point.y));
        CHECK(q.type == PseudoEquilibriumType::NonHyperbolic);
    }
    CHECK(pseudo_equilibria(constant_fields({1, 0, -1}, {0, 1, 1}), b).empty());

    // Xf = -1, Yf = 1 everywhere, so Sigma is all stable sliding and
    // F^N = (x - 0.5, y - 0.5).
    auto s = constant_fields({0, 0, -1}, {0, 0, 1});
    s.X.cx = x() - Poly3(0.5);
    s.X.cy = y() - Poly3(0.5);
    auto pe = pseudo_equilibria(s, b);
    REQUIRE(pe.size() == 1);
    CHECK(pe[0].point.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pe[0].point.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pe[0].type == PseudoEquilibriumType::Node);
    CHECK(pe[0].stable_sliding);
    CHECK(same(pe[0].jacobian, {0.5, 0, 0, 0.5}, 1e-12));

    auto sad = s;
    sad.X.cy = Poly3(0.5) - y();
    auto ps = pseudo_equilibria(sad, b);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].type == PseudoEquilibriumType::Saddle);
}

TEST_CASE("boundary_contact") {
    auto fr = constant_fields({0, 1, 0}, {0, 0, 1});
    fr.X.cz = -1.0 * y();
    CHECK(boundary_contact(fr, {0, 0, 0}, 1e-9) == ContactOrder::Transverse);

    auto cusp = constant_fields({1, 0, 0}, {0, 0, 1});
    cusp.X.cz = y() + x() * x();
    CHECK(boundary_contact(cusp, {0, 0, 0}, 1e-9) == ContactOrder::Quadratic);

    CHECK_THROWS_AS(boundary_contact(constant_fields({1, 0, -1}, {0, 1, 1}), {0, 0, 0}, 1e-9), Error);
}

TEST_CASE("banded_sign is scale invariant") {
    auto p = NormalParameters::make(-1, -1, 1, -1);
    for (double e : {0.1, 0.5, 2.0, 10.0}) {
        auto q = p.rescaled(e);
        CHECK(banded_sign(q.alpha * q.beta - q.gamma, q.scale(), 2) == 0);
        CHECK(sliding_region_class(q).tag == SlidingRegionTag::BifurcationBoundary);
    }
}

TEST_CASE("visible-invisible chart") {
    auto p = NormalParameters::make(0.7, -0.3, 1, 1);
    CHECK(p.subtype == FoldFoldSubtype::VisibleInvisible);
    auto q = p.invisible_visible_chart();
    CHECK(q.alpha == 0.3);
    CHECK(q.beta == 0.7);
    CHECK(q.gamma == -1);
    CHECK(q.delta == -1);
    CHECK(q.subtype == FoldFoldSubtype::InvisibleVisible);
    auto lp = foldfold_sliding_linearization(p);
    auto lq = foldfold_sliding_linearization(q);
    CHECK(lp.det() == doctest::Approx(lq.det()));
    CHECK(lp.trace() == doctest::Approx(lq.trace()));
}
