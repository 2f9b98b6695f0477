#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pwfold/foldfold.hpp"

using namespace pwfold;
using std::numbers::pi;

namespace {

Poly3 x() { return Poly3::variable(Var::X); }
Poly3 y() { return Poly3::variable(Var::Y); }
Poly3 z() { return Poly3::variable(Var::Z); }

NormalParameters T(double a, double b, double g) { return NormalParameters::make(a, b, g, -1); }

Mat2 pow(Mat2 m, int n) {
    Mat2 r = Mat2::identity();
    for (int k = 0; k < n; ++k) r = r * m;
    return r;
}

IntegratorConfig small_box(double hw = 0.2) {
    IntegratorConfig c;
    c.box = Box::centered(hw);
    return c;
}

} // namespace

TEST_CASE("normal_parameters extraction") {
    auto p = normal_parameters(build_normal_form(-1, -1, 1, -1), {0, 0, 0});
    CHECK(p.alpha == doctest::Approx(-1));
    CHECK(p.beta == doctest::Approx(-1));
    CHECK(p.gamma == 1);
    CHECK(p.delta == -1);
    CHECK(p.subtype == FoldFoldSubtype::Invisible);

    auto q = normal_parameters(build_normal_form(-1, -1, 0.5, -1), {0, 0, 0});
    CHECK(q.alpha == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q.beta == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q.gamma == 1);
    CHECK(q.alpha * q.beta - q.gamma > 0);

    auto h = normal_parameters(build_normal_form(1, -1, -1, 1), {0, 0, 0});
    CHECK(h.alpha == doctest::Approx(1));
    CHECK(h.beta == doctest::Approx(-1));
    CHECK(h.subtype == FoldFoldSubtype::VisibleVisible);

    PiecewiseSystem c;
    c.X = {Poly3(1.0), Poly3(), Poly3(-1.0)};
    c.Y = {Poly3(), Poly3(1.0), Poly3(1.0)};
    try {
        normal_parameters(c, {0, 0, 0});
        FAIL("expected not-fold-fold");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFoldFold);
    }
}

TEST_CASE("normal_parameters round trip with higher-order terms") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2, 2);
    std::uniform_real_distribution<double> h(-0.5, 0.5);
    for (int k = 0; k < 100; ++k) {
        int delta = (k & 1) ? 1 : -1;
        double gamma = (k & 2) ? 1.0 : -1.0;
        double a = u(rng), b = u(rng);
        HigherOrderTerms hot{h(rng) * x() + h(rng) * y() + h(rng) * x() * y(),
                             h(rng) * x() + h(rng) * z() + h(rng) * y() * y(),
                             h(rng) * x() * x() + h(rng) * x() * y() + h(rng) * z() * y()};
        auto p = normal_parameters(build_normal_form(a, b, gamma, delta, hot), {0, 0, 0});
        // XYf and YXf at the origin do not see the higher-order terms of Yf.
        CHECK(std::fabs(p.alpha - a) <= 1e-10);
        CHECK(std::fabs(p.beta - b) <= 1e-10);
        CHECK(p.gamma == gamma);
        CHECK(p.delta == delta);
    }
}

TEST_CASE("analytic involutions") {
    auto i1 = analytic_involutions(T(-1, -1, 1));
    CHECK(i1.ax == Mat2{1, 2, 0, -1});
    CHECK(i1.ax * i1.ax == Mat2::identity());
    CHECK(i1.ay == Mat2{-1, 0, 2, 1});
    CHECK(i1.ay.det() == -1);
    auto i0 = analytic_involutions(T(0, 1, 1));
    CHECK(i0.ax == Mat2{1, 0, 0, -1});

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 1000; ++k) {
        double g = u(rng);
        if (std::fabs(g) < 0.1) continue;
        auto inv = analytic_involutions(NormalParameters::make(u(rng), u(rng), g, g > 0 ? -1 : 1));
        CHECK(max_abs(inv.ax * inv.ax - Mat2::identity()) <= 1e-12);
        CHECK(max_abs(inv.ay * inv.ay - Mat2::identity()) <= 1e-10);
        CHECK(inv.ax.det() == -1.0);
        CHECK(inv.ay.det() == -1.0);
        Mat2 m = inv.ax * inv.ay;
        for (int n = 1; n <= 3; ++n) {
            Mat2 lhs = pow(m, n) * inv.ax;
            Mat2 rhs = inv.ax * pow(m.inverse(), n);
            CHECK(max_abs(lhs - rhs) <= 1e-10 * (1 + max_abs(lhs)));
        }
    }
}

TEST_CASE("return_map_analysis examples") {
    auto s = return_map_analysis(T(-1, -1, 0.5));
    CHECK(s.matrix == Mat2{7, 2, -4, -1});
    CHECK(s.trace == 6);
    CHECK(s.det == 1);
    CHECK(s.fixed_point_class == FixedPointClass::Saddle);
    CHECK(s.eigenvalues.first.real() == doctest::Approx(3 - 2 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.eigenvalues.second.real() == doctest::Approx(3 + 2 * std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(s.contracting);
    REQUIRE(s.expanding);
    CHECK(s.expanding->vector.y / s.expanding->vector.x == doctest::Approx(-0.585786437626905));
    CHECK(s.contracting->vector.y / s.contracting->vector.x == doctest::Approx(-3.41421356237309));
    CHECK(s.contracting->location == EigenLocation::InCrossing);
    CHECK(s.expanding->location == EigenLocation::InCrossing);

    auto c = return_map_analysis(T(1, 1, 2));
    CHECK(c.matrix == Mat2{1, -2, 1, -1});
    CHECK(c.trace == 0);
    CHECK(c.fixed_point_class == FixedPointClass::NonHyperbolicComplex);
    CHECK(c.tau == doctest::Approx(pi / 2));
    CHECK_FALSE(c.contracting);

    CHECK(return_map_analysis(T(-1, -1, 1)).fixed_point_class == FixedPointClass::NonHyperbolicUnit);
    CHECK(return_map_analysis(T(0, 1, 1)).fixed_point_class == FixedPointClass::ParabolicBoundary);
    CHECK_THROWS_AS(return_map_analysis(NormalParameters::make(1, 1, -1, -1)), Error);
}

TEST_CASE("eigenvector locations follow the sign cell") {
    // (+,+) both sliding, (+,-) contracting crossing, (-,+) contracting
    // sliding, (-,-) both crossing.
    struct Cell {
        double sa, sb;
        EigenLocation c, e;
    };
    const Cell cells[] = {
        {1, 1, EigenLocation::InSliding, EigenLocation::InSliding},
        {1, -1, EigenLocation::InCrossing, EigenLocation::InSliding},
        {-1, 1, EigenLocation::InSliding, EigenLocation::InCrossing},
        {-1, -1, EigenLocation::InCrossing, EigenLocation::InCrossing},
    };
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 3);
    std::uniform_real_distribution<double> ug(0.2, 2);
    for (auto cell : cells) {
        int n = 0;
        while (n < 500) {
            double a = cell.sa * u(rng), b = cell.sb * u(rng), g = ug(rng);
            if (a * b * (a * b - g) <= 1e-3) continue;
            auto r = return_map_analysis(T(a, b, g));
            REQUIRE(r.fixed_point_class == FixedPointClass::Saddle);
            CHECK(r.contracting->location == cell.c);
            CHECK(r.expanding->location == cell.e);
            ++n;
        }
    }
}

TEST_CASE("saddle criterion matches the trace test") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_real_distribution<double> ug(0.01, 3);
    for (int k = 0; k < 100000; ++k) {
        double a = u(rng), b = u(rng), g = ug(rng);
        double q = a * b * (a * b - g);
        double tr = 4 * a * b / g - 2;
        if (std::fabs(std::fabs(tr) - 2) <= 1e-9 || std::fabs(q) <= 1e-9) continue;
        CHECK((std::fabs(tr) > 2) == (q > 0));
    }
}

TEST_CASE("demelo_palis") {
    auto r = return_map_analysis(T(-1, -1, 0.5));
    CHECK(std::fabs(demelo_palis(r) + 1) <= 1e-12);
    ReturnMapAnalysis half;
    half.fixed_point_class = FixedPointClass::Saddle;
    half.eigenvalues = {0.5, 2.0};
    CHECK(std::fabs(demelo_palis(half) + 1) <= 1e-12);
    ReturnMapAnalysis neg = half;
    neg.eigenvalues = {-0.25, -4.0};
    CHECK(std::fabs(demelo_palis(neg) + 1) <= 1e-12);
    CHECK_THROWS_AS(demelo_palis(return_map_analysis(T(1, 1, 2))), Error);
}

TEST_CASE("moduli_info") {
    auto m = moduli_info(return_map_analysis(T(1, 1, 2)));
    CHECK(m.tau == doctest::Approx(pi / 2));
    CHECK(m.tau_over_pi == doctest::Approx(0.5));
    REQUIRE_FALSE(m.convergents.empty());
    CHECK(m.convergents.back() == std::pair<std::int64_t, std::int64_t>{1, 2});
    CHECK(m.leaf_id == m.tau);

    // trace 1: alpha beta / gamma = 3/4
    CHECK(moduli_info(return_map_analysis(T(0.75, 1, 1))).tau == doctest::Approx(pi / 3));
    CHECK(moduli_info(return_map_analysis(T(1e-6, 1, 1))).tau > pi - 1e-2);
}

TEST_CASE("connection_region") {
    auto c1 = connection_region(NormalParameters::make(1, 0.5, -1, -1));
    CHECK(c1.exists);
    CHECK(c1.direction == Vec2{-2, -1});
    CHECK_FALSE(connection_region(NormalParameters::make(-1, 0.5, -1, -1)).exists);
    auto c0 = connection_region(NormalParameters::make(0, 0.5, -1, -1));
    CHECK(c0.degenerate);
    CHECK_FALSE(c0.exists);
    CHECK_THROWS_AS(connection_region(T(1, 1, 1)), Error);
}

TEST_CASE("parabolic_transversality") {
    auto a = parabolic_transversality(NormalParameters::make(1, 1, -1, -1));
    CHECK(a.d_coeff == -8);
    CHECK(a.t_coeff == 5);
    CHECK(parabolic_transversality(NormalParameters::make(1, -1, -1, -1)).d_coeff == 0);
    auto c = parabolic_transversality(NormalParameters::make(-1, 1.5, -1, -1));
    CHECK(c.t_coeff == 0);
    CHECK(c.d_coeff == 0.5);
}

TEST_CASE("stability_verdict from parameters") {
    auto s = stability_verdict(T(-2, -1, 1));
    CHECK(s.kind == VerdictKind::Stable);
    CHECK(s.label() == "Stable");
    CHECK(s.region->tag == SlidingRegionTag::RE1);

    auto nh = stability_verdict(T(1, 1, 2));
    CHECK(nh.label() == "Unstable(NonHyperbolicReturnMap)");
    REQUIRE(nh.moduli);
    CHECK(nh.moduli->tau == doctest::Approx(pi / 2));

    CHECK(stability_verdict(NormalParameters::make(-1, 1.5, -1, -1)).label() ==
          "Unstable(TransversalityFailure(T))");
    CHECK(stability_verdict(T(1, -1, 2)).label() == "Unstable(InvariantManifoldInSliding)");
    CHECK(stability_verdict(T(2, 2, 1)).label() == "Unstable(InvariantManifoldInSliding)");
    auto b = stability_verdict(T(-1, -1, 1));
    CHECK(b.kind == VerdictKind::BoundaryDegenerate);
    CHECK(b.witness == "alpha*beta = gamma");
    CHECK(stability_verdict(T(0, 1, 1)).kind == VerdictKind::BoundaryDegenerate);

    CHECK(stability_verdict(NormalParameters::make(0, -3, -1, -1)).label() ==
          "Unstable(TransversalityFailure(Alpha))");
    CHECK(stability_verdict(NormalParameters::make(2, -2, -1, -1)).label() ==
          "Unstable(TransversalityFailure(D))");
    CHECK(stability_verdict(NormalParameters::make(1, 1, -1, -1)).label() ==
          "Unstable(SlidingBifurcation)");
    auto p = stability_verdict(NormalParameters::make(3, 0.5, -1, -1));
    CHECK(p.kind == VerdictKind::Stable);
    CHECK(p.class_descriptor == "RP3,alpha:+,alpha+beta:+,T:+");
    // the same point seen from the visible-invisible side
    CHECK(stability_verdict(NormalParameters::make(0.5, -3, 1, 1)).class_descriptor ==
          p.class_descriptor);

    CHECK(stability_verdict(NormalParameters::make(1, -1, -2, 1)).kind == VerdictKind::Stable);
}

TEST_CASE("stability_verdict on systems") {
    auto e = build_normal_form(-2, -1, 1, -1);
    CHECK(stability_verdict(e, {0, 0, 0}).kind == VerdictKind::Stable);
    CHECK(stability_verdict(e, {1, -1, 0}).kind == VerdictKind::Stable);
    CHECK(stability_verdict(e, {0.3, 0, 0}).kind == VerdictKind::Stable);
    auto u = build_normal_form(1, 1, 2, -1);
    CHECK(stability_verdict(u, {0, 0, 0}).reason == UnstableReason::NonHyperbolicReturnMap);
    auto p = build_normal_form(-1, 1.5, -1, -1);
    CHECK(stability_verdict(p, {0, 0, 0}).label() == "Unstable(TransversalityFailure(T))");
}

TEST_CASE("verdicts are invariant under rescaling and open") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_real_distribution<double> ug(0.1, 3);
    std::uniform_real_distribution<double> eps(-1e-6, 1e-6);
    int stable = 0;
    for (int k = 0; k < 10000; ++k) {
        int delta = (k & 1) ? 1 : -1;
        double g = (k & 2) ? ug(rng) : -ug(rng);
        auto p = NormalParameters::make(u(rng), u(rng), g, delta);
        auto v = stability_verdict(p);
        for (double e : {0.1, 0.5, 2.0, 10.0}) CHECK(stability_verdict(p.rescaled(e)).label() == v.label());
        if (v.kind != VerdictKind::Stable) continue;
        ++stable;
        auto q = NormalParameters::make(p.alpha + eps(rng), p.beta + eps(rng), p.gamma + eps(rng), delta);
        // Openness holds away from the boundaries; skip draws within the band's reach.
        auto r = sliding_region_class(q);
        if (r.on_boundary) continue;
        CHECK(stability_verdict(q).kind == VerdictKind::Stable);
    }
    CHECK(stable > 1000);
}

TEST_CASE("diabolo_check") {
    auto cfg = small_box();
    auto r = diabolo_check(build_normal_form(-2, -1, 1, -1), {0, 0, 0}, cfg);
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.eigenvectors_in_crossing);
    CHECK(r.violations == 0);
    CHECK(r.seeds_used == 1000);
    CHECK(max_abs(r.numeric_jacobian - Mat2{7, 4, -2, -1}) <= 1e-4);

    CHECK(diabolo_check(build_normal_form(-1, -1, 0.5, -1), {0, 0, 0}, cfg).status == CheckStatus::Pass);
    CHECK(diabolo_check(build_normal_form(1, -1, 2, -1), {0, 0, 0}, cfg).status ==
          CheckStatus::NotApplicable);
}

TEST_CASE("web_scan") {
    auto cfg = small_box();
    auto w = web_scan(build_normal_form(2, 2, 1, -1), {0, 0, 0}, 2, cfg);
    CHECK(w.status == CheckStatus::Pass);
    REQUIRE(w.pairs.size() == 3);
    CHECK(w.pairs[0].i == 0);
    CHECK(w.pairs[0].j == 1);
    CHECK(w.pairs[0].transversal);
    // numpy oracle: det(M^{2i} L M^{-2i} v, M^{2j} L M^{-2j} v) for unit v
    CHECK(w.pairs[0].a_expanding == doctest::Approx(-1.73200).epsilon(1e-3));
    CHECK(w.pairs[1].a_expanding == doctest::Approx(-1.73205).epsilon(1e-3));

    auto w0 = web_scan(build_normal_form(2, 2, 1, -1), {0, 0, 0}, 0, cfg);
    CHECK(w0.status == CheckStatus::Pass);
    CHECK(w0.pairs.empty());
    CHECK(web_scan(build_normal_form(-2, -1, 1, -1), {0, 0, 0}, 2, cfg).status ==
          CheckStatus::NotApplicable);
}
