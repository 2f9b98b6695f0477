#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pwfold/sliding.hpp"
#include "pwfold/system.hpp"

namespace pwfold {

struct IntegratorConfig {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    /// Target |z| at located Sigma events.
    double event_tol = 1e-12;
    double max_time = 50.0;
    Box box;
    /// Flights are abandoned outside the ball of radius
    /// ball_factor * box.max_half_width() around the box center.
    double ball_factor = 1.5;
    int max_segments = 10000;
    int max_steps = 200000;

    /// Throws Error(Precondition) unless every tolerance and limit is positive.
    void check() const;
};

enum class HalfSpace { Plus, Minus };
enum class Side { X, Y };

enum class FlightStatus { Hit, LeftBox, TimeOut, NoReturn };

const char* to_string(FlightStatus s);

struct FlightResult {
    FlightStatus status = FlightStatus::NoReturn;
    Vec3 point;
    /// Elapsed time, positive regardless of the integration direction.
    double time = 0.0;
    /// |z| of the located event before it is projected onto Sigma.
    double residual = 0.0;
};

/// Flies from q0 (on Sigma) into the given half-space and returns the first
/// point where the orbit comes back to Sigma. time_sign = -1 integrates the
/// field backwards.
FlightResult integrate_to_sigma(const VectorField3& field, Vec3 q0, HalfSpace side,
                                const IntegratorConfig& cfg, double time_sign = 1.0);

/// Fold involution of X (through M+) or Y (through M-). Points on the
/// tangency line of that side are returned unchanged. Failed flights throw
/// Error(NoReturn), Error(LeftBox) or Error(TimeOut).
Vec2 fold_map_numeric(const PiecewiseSystem& z, Side side, Vec2 q, const IntegratorConfig& cfg);

/// phi_X(phi_Y(q)).
Vec2 return_map_numeric(const PiecewiseSystem& z, Vec2 q, const IntegratorConfig& cfg);

/// Central-difference Jacobian.
Mat2 jacobian_numeric(const std::function<Vec2(Vec2)>& map, Vec2 q, double h);

enum class SegmentMode { FlowPlus, FlowMinus, Sliding };
enum class TerminalEvent { HitSigma, LeftBox, TimeOut, ReachedTangency, ModeSwitch };
enum class TrajectoryStatus {
    Completed,
    LeftBox,
    UnstableSlidingStop,
    ReachedTangency,
    DenominatorBlowup,
    SegmentCap,
    IntegrationFailure,
};

const char* to_string(SegmentMode m);
const char* to_string(TerminalEvent e);
const char* to_string(TrajectoryStatus s);

struct TrajectorySample {
    double t = 0.0;
    Vec3 p;
    Vec3 v;
};

struct TrajectorySegment {
    SegmentMode mode = SegmentMode::FlowPlus;
    std::vector<TrajectorySample> samples;
    TerminalEvent event = TerminalEvent::TimeOut;
};

struct Trajectory {
    std::vector<TrajectorySegment> segments;
    TrajectoryStatus status = TrajectoryStatus::Completed;
    std::string detail;
};

/// Filippov solution from p0 over [0, T]. Crossing points switch field,
/// stable sliding follows F_Z until it reaches a tangency line, and a
/// transverse exit continues with the field that leaves Sigma there.
Trajectory filippov_trajectory(const PiecewiseSystem& z, Vec3 p0, double T,
                               const IntegratorConfig& cfg);

} // namespace pwfold
