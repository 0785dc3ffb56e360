#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hsp/eos.hpp"
#include "hsp/kernels.hpp"
#include "hsp/state.hpp"

// v_t - u_x = 0,  u_t + p(v)_x = 0
namespace hsp::psystem {

struct SmoothConfig {
    PressureParams params{1e-2, 2.0, 1.0, 2.0};
    Grid grid{-4.0, 8.0 / 1023, 1024};
    double t_end = 1.0;
    double cfl_safety = 0.5;
    // breakdown when max(|v_x|, |u_x|) exceeds gradient_growth * g0 (g0 the initial max
    // gradient) or sqrt(g0 * osc / dx), osc the initial range of v and u, whichever is smaller.
    // The second grows without bound as dx -> 0 but slower than the grid gradient at a
    // blow-up point, so the trigger time converges to the blow-up time.
    double gradient_growth = 1e6;
    bool grid_cap = true;
    // breakdown when v - 1 < v_floor_margin * (min_volume_bound - 1)
    double v_floor_margin = 0.5;
    std::size_t snapshots = 20;
    Boundary boundary = Boundary::ConstantExtension;
    kernels::Backend backend = kernels::Backend::OpenMP;
};

void validate(const SmoothConfig& c);

enum class BreakdownMode { GradientBlowup, FloorViolation, DtUnderflow };
std::string to_string(BreakdownMode m);

struct Thresholds {
    double gradient;
    double v_excess_floor;
    double dt_min;
};

Thresholds resolve_thresholds(const SmoothConfig& c, const LagrangianState& s0);

struct BreakdownRecord {
    double t_star_numeric;  // first time a trigger fired
    double t_last_good;     // the C1 time is bracketed by [t_last_good, t_star_numeric]
    std::size_t location;
    BreakdownMode mode;
    LagrangianState last_good_snapshot;
};

struct SmoothResult {
    LagrangianTrajectory traj;  // ends with the triggering state when a breakdown occurred
    std::optional<BreakdownRecord> breakdown;
    Thresholds thresholds;
};

SmoothResult run_smooth(const SmoothConfig& c, const Field& v0, const Field& u0);

enum class Direction { Forward, Backward };  // dx/dt = +c or -c

struct Trace {
    std::vector<double> t, x;
    std::vector<double> a_integral;  // int_0^t a(v(s, x(s))) ds
    bool truncated = false;          // left the grid or hit an undefined state
};

// RK4 along the characteristic; v is interpolated cubically in x and linearly in t.
// substeps per snapshot interval defaults to one per cell crossed (at least 4).
Trace trace_characteristic(const LagrangianTrajectory& traj, double x_star, Direction dir,
                           std::size_t substeps = 0);

enum class PredictionStatus { NoBlowup, Reached, Extrapolated };
std::string to_string(PredictionStatus s);

struct Prediction {
    double t_star;  // +inf when nothing is compressive
    PredictionStatus status;
    double x_star = 0.0;
    Direction direction = Direction::Forward;
    double riccati0 = 0.0;           // y or q at (0, x_star)
    double accumulated = 0.0;        // int a reached along the trace
};

// first t with int_0^t a = -1/y(0,x*) (forward) or -1/q(0,x*) (backward), min over
// every stride-th grid point. When the trajectory ends first the remaining
// integral is extrapolated with the last value of a and the status says so.
Prediction predict_blowup_time(const LagrangianTrajectory& traj, std::size_t stride = 1);
// frozen-coefficient version from the state alone: -1/(a(v0) y0)
Prediction predict_blowup_time(const LagrangianState& s0, const PressureParams& p);

struct LowerBound {
    double t;     // +inf for rarefactive data
    double K2;    // sup of a * eps^beta over [v_lo, v_hi]
    double beta;
    double v_lo, v_hi;
    std::size_t argmin = 0;
};

// inf over x* of eps^beta / (K2 sqrt(c0) max(-w0_x, -z0_x)).
// K2 is sampled over [min_volume_bound, v_hi_factor * max v0].
LowerBound blowup_lower_bound(const LagrangianState& s0, const PressureParams& p, double v_hi_factor = 4.0);

std::optional<BreakdownRecord> detect_breakdown(const LagrangianTrajectory& traj, const Thresholds& th);

// per-cell a(v)
Field riccati_coefficient_field(const LagrangianState& s, const PressureParams& p);

}  // namespace hsp::psystem
