#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pwfold/foldfold.hpp"

namespace pwfold {

nlohmann::json to_json(const NormalParameters& p);
nlohmann::json to_json(const ReturnMapAnalysis& a);
nlohmann::json to_json(const StabilityVerdict& v);

/// Aggregated report for a point of Sigma: classification, and for
/// fold-fold points the normal parameters, regions, return map and verdict.
nlohmann::json classify_report(const PiecewiseSystem& z, Vec3 p, double tol);

struct SweepRange {
    double lo = -3.0;
    double hi = 3.0;
    int n = 2;
};

struct SweepSpec {
    SweepRange alpha;
    SweepRange beta;
    double gamma = 1.0;
    int delta = -1;

    /// Throws Error(Precondition) on n < 2, non-finite bounds, gamma = 0 or
    /// delta outside {-1, +1}.
    void check() const;
};

struct SweepRow {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    int delta = -1;
    std::string subtype;
    std::string region;
    int claim = 8;
    /// Return-map cell for elliptic sweeps: saddles in I (alpha > 0 > beta),
    /// II (alpha < 0 < beta), III (both positive), IV (both negative); NH;
    /// or boundary. Empty otherwise.
    std::string cell;
    std::string fixed_point_class;
    std::string verdict;
    std::string reason;
    /// Eigenvalue argument, NaN unless the return map is NonHyperbolicComplex.
    double tau = 0.0;
};

SweepRow sweep_cell(double alpha, double beta, double gamma, int delta);

/// Rows in grid order (alpha outer, beta inner), computed on up to
/// `threads` workers.
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads);

std::string sweep_csv_header();
std::string to_csv(const SweepRow& r);

} // namespace pwfold
