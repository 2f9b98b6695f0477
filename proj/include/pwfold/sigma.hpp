#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwfold/system.hpp"

namespace pwfold {

enum class SigmaKind { Crossing, StableSliding, UnstableSliding, Tangency };

enum class FoldFoldSubtype { VisibleVisible, InvisibleVisible, VisibleInvisible, Invisible };

enum class TangencyKind { FoldRegular, RegularFold, CuspRegular, RegularCusp, FoldFold, Degenerate };

struct TangencyType {
    TangencyKind kind = TangencyKind::Degenerate;
    std::optional<FoldFoldSubtype> subtype; // set iff kind == FoldFold

    friend bool operator==(const TangencyType&, const TangencyType&) = default;
};

struct SigmaClassification {
    SigmaKind kind = SigmaKind::Crossing;
    double xf = 0.0;
    double yf = 0.0;
    std::optional<TangencyType> tangency; // set iff kind == Tangency

    /// Crossing or sliding without tangency.
    bool regular_regular() const { return kind != SigmaKind::Tangency; }
};

const char* to_string(SigmaKind k);
const char* to_string(FoldFoldSubtype s);
const char* to_string(TangencyKind k);

/// Tangency subtype implied by the signs of X^2 f and Y^2 f.
FoldFoldSubtype fold_fold_subtype(double x2f, double y2f);

/// 1e-9 * (1 + largest coefficient magnitude of X and Y).
double default_tolerance(const PiecewiseSystem& z);

SigmaClassification classify_point(const PiecewiseSystem& z, Vec3 p, double tol);
SigmaClassification classify_point(const PiecewiseSystem& z, Vec3 p);

TangencyType tangency_type(const PiecewiseSystem& z, Vec3 p, double tol);

struct Transversality {
    bool transversal = false;
    /// det of the Sigma-gradients of Xf and Yf at p.
    double determinant = 0.0;
};

Transversality fold_transversality(const PiecewiseSystem& z, Vec3 p, double tol = 1e-9);

struct TangencyCurves {
    std::vector<std::vector<Vec2>> sx;
    std::vector<std::vector<Vec2>> sy;
    /// Continuation hit a zero-gradient point or the step cap.
    bool sx_partial = false;
    bool sy_partial = false;
};

/// Zero sets of Xf and Yf on Sigma inside box, traced by predictor-corrector
/// continuation. step is relative to the largest box side.
TangencyCurves tangency_curves(const PiecewiseSystem& z, const Box& box, double step = 1e-2);

/// Zero set of a single polynomial g(x, y, 0) inside box.
std::vector<std::vector<Vec2>> trace_zero_set(const Poly3& g, const Box& box, double step,
                                              bool* partial = nullptr);

} // namespace pwfold
