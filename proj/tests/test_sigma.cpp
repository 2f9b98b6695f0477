#include <doctest.h>

#include <random>

#include "pwfold/sigma.hpp"

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

} // namespace

TEST_CASE("classify_point sign table") {
    auto e = build_normal_form(-1, -1, 1, -1);
    CHECK(classify_point(e, {1, -1, 0}).kind == SigmaKind::Crossing);
    CHECK(classify_point(e, {1, 1, 0}).kind == SigmaKind::StableSliding);
    CHECK(classify_point(e, {-1, -1, 0}).kind == SigmaKind::UnstableSliding);
    auto t = classify_point(e, {0, 0, 0});
    CHECK(t.kind == SigmaKind::Tangency);
    REQUIRE(t.tangency);
    CHECK(t.tangency->kind == TangencyKind::FoldFold);
    CHECK(t.tangency->subtype == FoldFoldSubtype::Invisible);
    CHECK_THROWS_AS(classify_point(e, {0, 0, 0.5}), Error);
}

TEST_CASE("tangency_type") {
    auto fr = constant_fields({0, 1, 0}, {0, 0, 1});
    fr.X.cz = -1.0 * y();
    CHECK(tangency_type(fr, {0, 0, 0}, 1e-9).kind == TangencyKind::FoldRegular);

    auto rf = fr;
    std::swap(rf.X, rf.Y);
    rf.X.cz = Poly3(-1.0);
    rf.Y.cz = y();
    CHECK(tangency_type(rf, {0, 0, 0}, 1e-9).kind == TangencyKind::RegularFold);

    // Xf = y^2: dXf vanishes at the origin.
    auto dg = constant_fields({0, 1, 0}, {0, 0, 1});
    dg.X.cz = y() * y();
    CHECK(tangency_type(dg, {0, 0, 0}, 1e-9).kind == TangencyKind::Degenerate);

    // Xf = y + x^2 along X = (1, 0, .): X^2 f = 2x, X^3 f = 2.
    auto cusp = constant_fields({1, 0, 0}, {0, 0, 1});
    cusp.X.cz = y() + x() * x();
    CHECK(tangency_type(cusp, {0, 0, 0}, 1e-9).kind == TangencyKind::CuspRegular);
}

TEST_CASE("fold-fold subtype follows the normal form for all sign pairs") {
    struct Case {
        int delta;
        double gamma;
        FoldFoldSubtype expect;
    };
    for (auto c : {Case{1, -1, FoldFoldSubtype::VisibleVisible},
                   Case{-1, -1, FoldFoldSubtype::InvisibleVisible},
                   Case{1, 1, FoldFoldSubtype::VisibleInvisible},
                   Case{-1, 1, FoldFoldSubtype::Invisible}}) {
        auto t = tangency_type(build_normal_form(0.3, -0.7, c.gamma, c.delta), {0, 0, 0}, 1e-9);
        CHECK(t.kind == TangencyKind::FoldFold);
        CHECK(t.subtype == c.expect);
        CHECK(fold_fold_subtype(c.delta, c.gamma) == c.expect);
    }
}

TEST_CASE("fold_transversality") {
    auto e = build_normal_form(-1, -1, 1, -1);
    auto t = fold_transversality(e, {0, 0, 0});
    CHECK(t.transversal);
    CHECK(t.determinant == doctest::Approx(1.0));

    auto bad = e;
    bad.Y.cz = y() + x() * x();
    auto tb = fold_transversality(bad, {0, 0, 0});
    CHECK_FALSE(tb.transversal);
    CHECK(tb.determinant == 0.0);

    auto hot = build_normal_form(-1, -1, 1, -1, {Poly3(), Poly3(), x() * y()});
    CHECK(fold_transversality(hot, {0, 0, 0}).determinant == doctest::Approx(1.0));
}

TEST_CASE("tangency_curves") {
    Box b = Box::centered(1.0);
    auto c = tangency_curves(build_normal_form(-1, -1, 1, -1), b);
    REQUIRE_FALSE(c.sx.empty());
    REQUIRE_FALSE(c.sy.empty());
    for (auto& line : c.sx)
        for (auto q : line) CHECK(std::fabs(q.y) <= 1e-10);
    for (auto& line : c.sy)
        for (auto q : line) CHECK(std::fabs(q.x) <= 1e-10);

    auto par = build_normal_form(-1, -1, 1, -1, {Poly3(), Poly3(), y() * y()});
    auto cp = tangency_curves(par, b);
    REQUIRE_FALSE(cp.sy.empty());
    for (auto& line : cp.sy)
        for (auto q : line) CHECK(std::fabs(q.x + q.y * q.y) <= 1e-9);

    auto none = constant_fields({0, 1, 1}, {0, 0, -1});
    CHECK(tangency_curves(none, b).sx.empty());
}

TEST_CASE("partition and swap symmetry") {
    auto e = build_normal_form(-2, -1, 1, -1, {Poly3(), Poly3(), 0.3 * x() * y()});
    PiecewiseSystem sw;
    sw.X = e.Y;
    sw.Y = e.X;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 1000; ++k) {
        Vec3 p{u(rng), u(rng), 0.0};
        auto a = classify_point(e, p);
        auto b = classify_point(sw, p);
        if (a.kind == SigmaKind::StableSliding) CHECK(b.kind == SigmaKind::UnstableSliding);
        else if (a.kind == SigmaKind::UnstableSliding) CHECK(b.kind == SigmaKind::StableSliding);
        else CHECK(b.kind == a.kind);
    }
}
