#include "pwfold/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pwfold/sigma.hpp"

namespace pwfold {

void IntegratorConfig::check() const {
    if (!(rel_tol > 0 && abs_tol > 0 && event_tol > 0 && max_time > 0 && ball_factor > 0 &&
          max_segments > 0 && max_steps > 0)) {
        throw Error(ErrorCode::Precondition, "integrator tolerances and limits must be positive");
    }
}

const char* to_string(FlightStatus s) {
    switch (s) {
    case FlightStatus::Hit: return "Hit";
    case FlightStatus::LeftBox: return "LeftBox";
    case FlightStatus::TimeOut: return "TimeOut";
    case FlightStatus::NoReturn: return "NoReturn";
    }
    return "?";
}

const char* to_string(SegmentMode m) {
    switch (m) {
    case SegmentMode::FlowPlus: return "FlowPlus";
    case SegmentMode::FlowMinus: return "FlowMinus";
    case SegmentMode::Sliding: return "Sliding";
    }
    return "?";
}

const char* to_string(TerminalEvent e) {
    switch (e) {
    case TerminalEvent::HitSigma: return "HitSigma";
    case TerminalEvent::LeftBox: return "LeftBox";
    case TerminalEvent::TimeOut: return "TimeOut";
    case TerminalEvent::ReachedTangency: return "ReachedTangency";
    case TerminalEvent::ModeSwitch: return "ModeSwitch";
    }
    return "?";
}

const char* to_string(TrajectoryStatus s) {
    switch (s) {
    case TrajectoryStatus::Completed: return "Completed";
    case TrajectoryStatus::LeftBox: return "LeftBox";
    case TrajectoryStatus::UnstableSlidingStop: return "UnstableSlidingStop";
    case TrajectoryStatus::ReachedTangency: return "ReachedTangency";
    case TrajectoryStatus::DenominatorBlowup: return "DenominatorBlowup";
    case TrajectoryStatus::SegmentCap: return "SegmentCap";
    case TrajectoryStatus::IntegrationFailure: return "IntegrationFailure";
    }
    return "?";
}

namespace {

using Field = std::function<Vec3(Vec3)>;
using EventFn = std::function<double(double, Vec3)>;
using Samples = std::vector<std::pair<double, Vec3>>;

// Dormand-Prince 5(4) with Hairer's continuous extension.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
} // namespace dp

struct Dense {
    double t0 = 0.0, h = 0.0;
    Vec3 r1, r2, r3, r4, r5;

    Vec3 at(double t) const {
        const double th = (t - t0) / h, th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

enum class Stop { Event, Outside, TimeOut, Failure };

struct RunResult {
    Stop stop = Stop::Failure;
    int event = -1;
    double t = 0.0;
    Vec3 y;
    std::string detail;
};

double err_component(double e, double y0, double y1, const IntegratorConfig& cfg) {
    const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y0), std::fabs(y1));
    return e / sk;
}

// Illinois iteration for g(t) on the dense output, g(a) > 0 >= g(b).
double locate(const EventFn& g, const Dense& d, double a, double b) {
    double ga = g(a, d.at(a)), gb = g(b, d.at(b));
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        if (gb == 0.0 || b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(b)) break;
        // g may be 0/0 at t = 0; bisect until the left end moves.
        double t = std::isfinite(ga) ? (a * gb - b * ga) / (gb - ga) : 0.5 * (a + b);
        if (!(t > a && t < b)) t = 0.5 * (a + b);
        const double gt = g(t, d.at(t));
        if (gt > 0.0) {
            a = t;
            ga = gt;
            if (side == 1) gb *= 0.5;
            side = 1;
        } else {
            b = t;
            gb = gt;
            if (side == -1) ga *= 0.5;
            side = -1;
        }
    }
    return std::isfinite(ga) && std::fabs(ga) < std::fabs(gb) ? a : b;
}

RunResult run(const Field& f, Vec3 y, double t_end, const IntegratorConfig& cfg,
              const std::vector<EventFn>& events, const std::function<bool(Vec3)>& inside,
              double length, Samples* samples) {
    using namespace dp;
    RunResult res;
    double t = 0.0;
    Vec3 k1 = f(y);
    double h = std::min(t_end, 1e-3 * length / std::max(norm(k1), 1e-300));
    double facold = 1e-4;
    bool rejected = false;
    if (samples) samples->push_back({0.0, y});
    for (int steps = 0; steps < cfg.max_steps; ++steps) {
        const double speed = norm(k1);
        const double hmax = speed > 0.0 ? 0.1 * length / speed : t_end;
        h = std::min(h, hmax);
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        const Vec3 k2 = f(y + h * (a21 * k1));
        const Vec3 k3 = f(y + h * (a31 * k1 + a32 * k2));
        const Vec3 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec3 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec3 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec3 y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const Vec3 k7 = f(y1);
        const Vec3 e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double ex = err_component(e.x, y.x, y1.x, cfg);
        const double ey = err_component(e.y, y.y, y1.y, cfg);
        const double ez = err_component(e.z, y.z, y1.z, cfg);
        double err = std::sqrt((ex * ex + ey * ey + ez * ez) / 3.0);
        if (!std::isfinite(err) || !std::isfinite(norm(y1))) {
            h *= 0.1;
            rejected = true;
            if (h < 1e-15 * std::max(1.0, t)) break;
            continue;
        }
        const double fac11 = std::pow(err, 0.2 - 0.04 * 0.75);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, 0.04);
            fac = std::clamp(fac / 0.9, 0.1, 5.0);
            double hnew = h / fac;
            if (rejected) hnew = std::min(hnew, h);
            facold = std::max(err, 1e-4);

            Dense d;
            d.t0 = t;
            d.h = h;
            d.r1 = y;
            d.r2 = y1 - y;
            d.r3 = h * k1 - d.r2;
            d.r4 = d.r2 - h * k7 - d.r3;
            d.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            if (!events.empty()) {
                // Probe inside the step to catch a double crossing.
                double ta = t;
                for (double th : {0.25, 0.5, 0.75, 1.0}) {
                    const double tb = th == 1.0 ? t + h : t + th * h;
                    const Vec3 yb = th == 1.0 ? y1 : d.at(tb);
                    int best = -1;
                    double tbest = tb;
                    for (std::size_t i = 0; i < events.size(); ++i) {
                        if (events[i](tb, yb) > 0.0) continue;
                        const double tr = locate(events[i], d, ta, tb);
                        if (best < 0 || tr < tbest) {
                            best = static_cast<int>(i);
                            tbest = tr;
                        }
                    }
                    if (best >= 0) {
                        res.stop = Stop::Event;
                        res.event = best;
                        res.t = tbest;
                        res.y = d.at(tbest);
                        return res;
                    }
                    ta = tb;
                }
            }
            t = last ? t_end : t + h;
            y = y1;
            k1 = k7;
            if (samples) samples->push_back({t, y});
            if (!inside(y)) {
                res.stop = Stop::Outside;
                res.t = t;
                res.y = y;
                return res;
            }
            if (last) {
                res.stop = Stop::TimeOut;
                res.t = t;
                res.y = y;
                return res;
            }
            h = hnew;
            rejected = false;
        } else {
            h /= std::min(5.0, fac11 / 0.9);
            rejected = true;
        }
        if (h < 1e-15 * std::max(1.0, t)) {
            res.detail = "step size underflow";
            res.t = t;
            res.y = y;
            return res;
        }
    }
    res.stop = Stop::Failure;
    if (res.detail.empty()) res.detail = "step limit reached";
    res.t = t;
    res.y = y;
    return res;
}

struct FlightSetup {
    bool ok = false;
    int power = 1;
    double slope = 0.0;
};

// Event g = s (z - z0 - c t) / t^k with g(0+) > 0.
FlightSetup flight_setup(const VectorField3& field, Vec3 q0, double s, double time_sign,
                         double tangent_tol) {
    const double zd = time_sign * field.cz.eval(q0);
    if (s * zd > tangent_tol) return {true, 1, 0.0};
    if (s * zd < -tangent_tol) return {};
    const double zdd = lie_derivative(field, field.cz).eval(q0);
    if (s * zdd <= 0.0) return {};
    return {true, 2, zd};
}

FlightResult flight(const VectorField3& field, Vec3 q0, HalfSpace side, const IntegratorConfig& cfg,
                    double time_sign, double tangent_tol, Samples* samples) {
    FlightResult out;
    out.point = q0;
    const double s = side == HalfSpace::Plus ? 1.0 : -1.0;
    const FlightSetup fs = flight_setup(field, q0, s, time_sign, tangent_tol);
    if (!fs.ok) return out;
    const double z0 = q0.z;
    const EventFn g = [=](double t, Vec3 y) {
        const double num = s * (y.z - z0 - fs.slope * t);
        return fs.power == 1 ? num / t : num / (t * t);
    };
    const Vec3 c = cfg.box.center();
    const double radius = cfg.ball_factor * cfg.box.max_half_width();
    const auto inside = [=](Vec3 y) { return norm(y - c) <= radius; };
    const Field f = [&](Vec3 y) { return time_sign * field.eval(y); };
    const RunResult r = run(f, q0, cfg.max_time, cfg, {g}, inside, radius, samples);
    switch (r.stop) {
    case Stop::Event:
        out.status = FlightStatus::Hit;
        out.residual = std::fabs(r.y.z);
        out.point = {r.y.x, r.y.y, 0.0};
        out.time = r.t;
        return out;
    case Stop::Outside: out.status = FlightStatus::LeftBox; break;
    case Stop::TimeOut: out.status = FlightStatus::TimeOut; break;
    case Stop::Failure: throw Error(ErrorCode::Integration, "flight failed: " + r.detail);
    }
    out.point = r.y;
    out.time = r.t;
    return out;
}

} // namespace

FlightResult integrate_to_sigma(const VectorField3& field, Vec3 q0, HalfSpace side,
                                const IntegratorConfig& cfg, double time_sign) {
    cfg.check();
    if (time_sign != 1.0 && time_sign != -1.0) {
        throw Error(ErrorCode::Precondition, "time_sign must be +1 or -1");
    }
    return flight(field, q0, side, cfg, time_sign, cfg.event_tol, nullptr);
}

Vec2 fold_map_numeric(const PiecewiseSystem& z, Side side, Vec2 q, const IntegratorConfig& cfg) {
    const VectorField3& field = side == Side::X ? z.X : z.Y;
    const Vec3 q3 = on_sigma(q);
    const double v = field.cz.eval(q3);
    if (std::fabs(v) <= cfg.event_tol) return q;
    const HalfSpace hs = side == Side::X ? HalfSpace::Plus : HalfSpace::Minus;
    // X lives in M+, so it is run backwards where it points down; Y mirrors this.
    const double ts = side == Side::X ? (v > 0 ? 1.0 : -1.0) : (v < 0 ? 1.0 : -1.0);
    const FlightResult r = integrate_to_sigma(field, q3, hs, cfg, ts);
    switch (r.status) {
    case FlightStatus::Hit: return planar(r.point);
    case FlightStatus::LeftBox: throw Error(ErrorCode::LeftBox, "fold map orbit left the ball");
    case FlightStatus::TimeOut: throw Error(ErrorCode::TimeOut, "fold map orbit timed out");
    case FlightStatus::NoReturn: break;
    }
    throw Error(ErrorCode::NoReturn, "fold map orbit does not enter its half-space");
}

Vec2 return_map_numeric(const PiecewiseSystem& z, Vec2 q, const IntegratorConfig& cfg) {
    return fold_map_numeric(z, Side::X, fold_map_numeric(z, Side::Y, q, cfg), cfg);
}

Mat2 jacobian_numeric(const std::function<Vec2(Vec2)>& map, Vec2 q, double h) {
    if (!(h > 0)) throw Error(ErrorCode::Precondition, "stencil step must be positive");
    const Vec2 dx = (1.0 / (2.0 * h)) * (map({q.x + h, q.y}) - map({q.x - h, q.y}));
    const Vec2 dy = (1.0 / (2.0 * h)) * (map({q.x, q.y + h}) - map({q.x, q.y - h}));
    return {dx.x, dy.x, dx.y, dy.y};
}

namespace {

struct Dispatch {
    bool stop = false;
    SegmentMode mode = SegmentMode::FlowPlus;
    TrajectoryStatus status = TrajectoryStatus::Completed;
    std::string detail;
};

Dispatch stop_with(TrajectoryStatus s, std::string detail) {
    Dispatch d;
    d.stop = true;
    d.status = s;
    d.detail = std::move(detail);
    return d;
}

Dispatch moving(SegmentMode m) {
    Dispatch d;
    d.mode = m;
    return d;
}

// Next mode at a point of Sigma.
Dispatch dispatch(const LieDerivatives& ld, Vec3 p, double tol) {
    const double xf = ld.xf.eval(p), yf = ld.yf.eval(p);
    const bool x0 = std::fabs(xf) <= tol, y0 = std::fabs(yf) <= tol;
    if (x0 && y0) return stop_with(TrajectoryStatus::ReachedTangency, "two-fold point");
    if (!x0 && !y0) {
        if (xf > 0 && yf > 0) return moving(SegmentMode::FlowPlus);
        if (xf < 0 && yf < 0) return moving(SegmentMode::FlowMinus);
        if (xf < 0) return moving(SegmentMode::Sliding);
        return stop_with(TrajectoryStatus::UnstableSlidingStop, "reached unstable sliding region");
    }
    if (x0) {
        if (yf < 0) return moving(SegmentMode::FlowMinus);
        if (ld.x2f.eval(p) > tol) return moving(SegmentMode::FlowPlus);
        return stop_with(TrajectoryStatus::ReachedTangency, "non-transverse exit at S_X");
    }
    if (xf > 0) return moving(SegmentMode::FlowPlus);
    if (ld.y2f.eval(p) < -tol) return moving(SegmentMode::FlowMinus);
    return stop_with(TrajectoryStatus::ReachedTangency, "non-transverse exit at S_Y");
}

} // namespace

Trajectory filippov_trajectory(const PiecewiseSystem& z, Vec3 p0, double T,
                               const IntegratorConfig& cfg) {
    cfg.check();
    if (!(T > 0) || !std::isfinite(T)) throw Error(ErrorCode::Precondition, "horizon must be positive");
    Trajectory tr;
    const LieDerivatives ld = lie_derivatives(z);
    const SlidingField sf = sliding_field(z);
    const double tol = default_tolerance(z);
    const Box& box = cfg.box;
    const double slack = 1e-12 * (1.0 + box.max_half_width());
    const auto inside = [&](Vec3 y) {
        return y.x >= box.xmin - slack && y.x <= box.xmax + slack && y.y >= box.ymin - slack &&
               y.y <= box.ymax + slack && y.z >= box.zmin - slack && y.z <= box.zmax + slack;
    };
    const double length = box.max_half_width();
    if (!inside(p0)) {
        tr.status = TrajectoryStatus::LeftBox;
        tr.detail = "initial point outside the box";
        return tr;
    }

    double t = 0.0;
    Vec3 p = p0;
    bool on_sigma_now = std::fabs(p.z) <= cfg.event_tol;
    Dispatch next;
    if (on_sigma_now) {
        p.z = 0.0;
        next = dispatch(ld, p, tol);
    } else {
        next = moving(p.z > 0 ? SegmentMode::FlowPlus : SegmentMode::FlowMinus);
    }

    for (int seg = 0;; ++seg) {
        if (next.stop) {
            tr.status = next.status;
            tr.detail = next.detail;
            return tr;
        }
        if (seg >= cfg.max_segments) {
            tr.status = TrajectoryStatus::SegmentCap;
            return tr;
        }
        if (t >= T) {
            tr.status = TrajectoryStatus::Completed;
            return tr;
        }
        TrajectorySegment segment;
        segment.mode = next.mode;
        Samples samples;
        RunResult r;

        if (next.mode == SegmentMode::Sliding) {
            const Field f = [&](Vec3 y) {
                const Vec2 v = sf.eval({y.x, y.y});
                return Vec3{v.x, v.y, 0.0};
            };
            const std::vector<EventFn> events = {
                [&](double, Vec3 y) { return -ld.xf.eval(y.x, y.y, 0.0); },
                [&](double, Vec3 y) { return ld.yf.eval(y.x, y.y, 0.0); },
            };
            try {
                r = run(f, p, T - t, cfg, events, inside, length, &samples);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DenominatorZero) throw;
                tr.status = TrajectoryStatus::DenominatorBlowup;
                tr.detail = e.what();
                return tr;
            }
            if (r.stop == Stop::Event) r.y.z = 0.0;
            for (auto& [ts, y] : samples) segment.samples.push_back({t + ts, y, f(y)});
            if (r.stop == Stop::Event) segment.samples.push_back({t + r.t, r.y, f(r.y)});
        } else {
            const bool plus = next.mode == SegmentMode::FlowPlus;
            const VectorField3& field = plus ? z.X : z.Y;
            const double s = plus ? 1.0 : -1.0;
            EventFn g;
            if (on_sigma_now) {
                const FlightSetup fs = flight_setup(field, p, s, 1.0, tol);
                if (!fs.ok) {
                    tr.status = TrajectoryStatus::ReachedTangency;
                    tr.detail = "flight cannot leave Sigma";
                    return tr;
                }
                g = [=](double tt, Vec3 y) {
                    const double num = s * (y.z - fs.slope * tt);
                    return fs.power == 1 ? num / tt : num / (tt * tt);
                };
            } else {
                g = [=](double, Vec3 y) { return s * y.z; };
            }
            const Field f = [&](Vec3 y) { return field.eval(y); };
            r = run(f, p, T - t, cfg, {g}, inside, length, &samples);
            if (r.stop == Stop::Event) r.y.z = 0.0;
            for (auto& [ts, y] : samples) segment.samples.push_back({t + ts, y, f(y)});
            if (r.stop == Stop::Event) segment.samples.push_back({t + r.t, r.y, f(r.y)});
        }

        t += r.t;
        p = r.y;
        switch (r.stop) {
        case Stop::Event:
            segment.event =
                segment.mode == SegmentMode::Sliding ? TerminalEvent::ModeSwitch : TerminalEvent::HitSigma;
            on_sigma_now = true;
            next = dispatch(ld, p, tol);
            if (next.stop && next.status == TrajectoryStatus::ReachedTangency) {
                segment.event = TerminalEvent::ReachedTangency;
            }
            tr.segments.push_back(std::move(segment));
            break;
        case Stop::Outside:
            segment.event = TerminalEvent::LeftBox;
            tr.segments.push_back(std::move(segment));
            tr.status = TrajectoryStatus::LeftBox;
            return tr;
        case Stop::TimeOut:
            segment.event = TerminalEvent::TimeOut;
            tr.segments.push_back(std::move(segment));
            tr.status = TrajectoryStatus::Completed;
            return tr;
        case Stop::Failure:
            tr.segments.push_back(std::move(segment));
            tr.status = TrajectoryStatus::IntegrationFailure;
            tr.detail = r.detail;
            return tr;
        }
    }
}

} // namespace pwfold
