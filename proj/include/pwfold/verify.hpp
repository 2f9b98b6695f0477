#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwfold/foldfold.hpp"

namespace pwfold {

struct PropertyResult {
    std::string suite;
    std::string name;
    bool passed = false;
    /// Measured quantity compared against the tolerance (0 for sign checks).
    double residual = 0.0;
    std::string detail;
};

struct VerifyOptions {
    /// Subset of known_suites(), or "all". Empty runs nothing.
    std::vector<std::string> suites;
    Vec3 point;
    /// Expected normal parameters for the round-trip check. Any |gamma| is
    /// accepted; it is normalized before comparison.
    std::optional<NormalParameters> expect;
    IntegratorConfig integrator;
    std::uint64_t seed = 1;
    int samples = 100;
};

const std::vector<std::string>& known_suites();

/// Throws Error(Precondition) on an unknown suite name.
std::vector<PropertyResult> run_verification(const PiecewiseSystem& z, const VerifyOptions& opts);

/// (alpha, beta, gamma) / (1, 1, |gamma|) scaled to |gamma| = 1.
NormalParameters normalized(const NormalParameters& p);

} // namespace pwfold
