#pragma once

// Closed-loop trajectory integration: fixed-step RK4 with the control frozen
// over each step, origin clamping in the Filippov sense for the discontinuous
// laws, and trajectory monitors (settling, overshoot, override intervals).

#include <functional>
#include <optional>

#include "homsafe/safety.hpp"

namespace homsafe {

enum class ControllerKind { Linear, Homogeneous, Mixed, Filtered };

struct Nominal {
    enum class Kind { Zero, Constant, Sinusoid, PaperV };
    Kind kind = Kind::Zero;
    double value = 0.0;                       // Constant
    double amp = 0.0, freq = 0.0, offset = 0.0;  // Sinusoid: amp*sin(freq*t)+offset

    [[nodiscard]] double eval(double t, const Vec& x) const;
};

struct Scenario {
    int n = 2;
    Vec x0;
    ControllerKind controller = ControllerKind::Homogeneous;
    FilterConfig filter;
    Nominal nominal;
    double settling_time = 1.0;  // T
    double radius = 1.0;         // r
    std::optional<double> alpha;
    std::optional<double> lambda;  // defaults to max(1, ceil of the conservative bound)
    double t_end = 10.0;
    double dt = 1e-3;
    double eps_origin = 1e-6;          // clamp radius in the design's weighted norm
    double invariance_slack = 1e-6;    // tolerance used by the membership monitors
};

struct Sample {
    double t = 0;
    Vec x;
    double u = 0;
    double u_nom = 0;
    double homnorm = 0;  // ||x / r_t||_d
    double r_t = 0;
    Vec phi;
    bool in_omega = false;
    bool in_omega_r = false;
    bool in_theta = false;
    bool override_active = false;
    bool at_origin = false;
};

struct Trajectory {
    std::vector<Sample> samples;
    LinearDesign lin;
    HomDesign hom;
    Scenario scenario;
};

/// Integrate the scenario's closed loop. Throws DivergenceDetected when the
/// state leaves the finite range, with the time stamp in the message.
Trajectory integrate(const Scenario& s);

/// First time from which the weighted norm stays below eps for the rest of
/// the horizon; empty when that never happens.
std::optional<double> detect_settling(const Trajectory& tr, double eps);

/// Largest first state component over the run (nonovershoot means <= 0 up to
/// tolerance).
double max_overshoot(const Trajectory& tr);

struct OverrideInterval {
    double start = 0;
    double end = 0;
    /// First time at or after the interval start where the trajectory reaches
    /// the safe-set boundary (clamped at the origin or first component at 0).
    std::optional<double> boundary_time;
};

std::vector<OverrideInterval> override_intervals(const Trajectory& tr);

}  // namespace homsafe
