#include <doctest.h>

#include "pwfold/verify.hpp"

using namespace pwfold;

namespace {

VerifyOptions options(std::vector<std::string> suites) {
    VerifyOptions o;
    o.suites = std::move(suites);
    o.integrator.box = Box::centered(0.2);
    return o;
}

bool all_passed(const std::vector<PropertyResult>& rs) {
    for (auto& r : rs)
        if (!r.passed) return false;
    return true;
}

} // namespace

TEST_CASE("verify passes on a stable T-singularity") {
    auto z = build_normal_form(-1, -1, 0.5, -1);
    auto o = options({"all"});
    o.expect = NormalParameters::make(-1, -1, 0.5, -1);
    auto rs = run_verification(z, o);
    CHECK(rs.size() > 8);
    for (auto& r : rs) {
        INFO(r.suite << "/" << r.name << ": " << r.detail);
        CHECK(r.passed);
    }
    bool diabolo = false;
    for (auto& r : rs) diabolo |= r.suite == "diabolo";
    CHECK(diabolo);
}

TEST_CASE("round trip fails when Y is reversed") {
    // Reversing Y flips the signs of XYf and YXf, so alpha and beta change sign.
    auto z = build_normal_form(-1, -1, 0.5, -1);
    z.Y = {-1.0 * z.Y.cx, -1.0 * z.Y.cy, -1.0 * z.Y.cz};
    auto o = options({"involutions"});
    o.expect = NormalParameters::make(-1, -1, 0.5, -1);
    auto rs = run_verification(z, o);
    CHECK_FALSE(all_passed(rs));
    bool found = false;
    for (auto& r : rs)
        if (r.name == "normal_parameters_roundtrip") {
            found = true;
            CHECK_FALSE(r.passed);
        }
    CHECK(found);
}

TEST_CASE("verify selection") {
    auto z = build_normal_form(-2, -1, 1, -1);
    CHECK(run_verification(z, options({})).empty());
    auto only = run_verification(z, options({"regions"}));
    REQUIRE_FALSE(only.empty());
    for (auto& r : only) CHECK(r.suite == "regions");
    CHECK_THROWS_AS(run_verification(z, options({"nope"})), Error);
    CHECK(known_suites() == std::vector<std::string>{"involutions", "regions", "diabolo"});
}

TEST_CASE("normalized") {
    auto p = normalized(NormalParameters::make(-1, -1, 0.5, -1));
    CHECK(p.alpha == doctest::Approx(-std::sqrt(2.0)));
    CHECK(p.gamma == 1);
}
