#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsp/eos.hpp"
#include "hsp/psystem.hpp"
#include "hsp/report.hpp"
#include "hsp/state.hpp"
#include "hsp/viscous.hpp"

namespace hsp::limits {

// Initial data. Lagrangian bases: plateau, dip, bump. Eulerian bases: theta_bump,
// density_bump, riemann. Velocity terms add up.
struct InitialProfileSpec {
    std::string base = "dip";
    double v_pm = 2.0;          // far-field volume
    double alpha = 0.5;         // dip: v - 1 = eps^alpha in the core
    double M1 = 2.0;            // floor v - 1 >= (eps/M1)^{1/(gamma-1)}
    double center = 0.0;
    double core = 0.5;          // dip core half-width, or bump width
    double transition = 1.0;    // dip: width of the log-space blend
    double dilation = 1.1;      // dip: u_x = dilation * |d_x theta(v0)|
    double amplitude = 0.0;     // bump height (v, rho or Theta units)
    double compression = 0.0;   // -A tanh(xi) exp(-xi^2/8), xi = (x - xc)/w
    double compression_center = 3.0;
    double compression_width = 0.5;
    double rarefaction = 0.0;   // +A tanh((x - center)/velocity_width)
    double velocity_width = 1.0;
    double rho_left = 0.5, rho_right = 0.25, u_left = 0.0, u_right = 0.0;  // riemann
    // verifier limits
    double M2_cap = 100.0;
    double compression_cap = 10.0;
};

void validate(const InitialProfileSpec& s, const PressureParams& p);

struct AssumptionCheck {
    std::string name;
    bool pass;
    double value;
    double limit;
};

struct AssumptionReport {
    double M1 = 0, M2 = 0, Y0 = 0, Q0 = 0;
    double compression_constant = 0;  // sup (eps/(v-1)^{gamma+1})^{1/4}([w_x]_- + [z_x]_-) / eps^beta
    double ell_star = 0, v_under = 0;
    bool rarefactive = false;
    std::vector<AssumptionCheck> checks;

    bool pass() const;
    ojson to_json() const;
};

// raw factory, no verification
LagrangianState lagrangian_initial(const InitialProfileSpec& s, const PressureParams& p, const Grid& g);
EulerianState eulerian_initial(const InitialProfileSpec& s, const PressureParams& p, const Grid& g);

// named checks: congestion_floor, bounded_c1, riccati_upper,
// compression_near_congestion, far_field_volume
AssumptionReport verify_assumptions(const LagrangianState& s, const PressureParams& p, const InitialProfileSpec& spec);

struct Prepared {
    LagrangianState state;
    AssumptionReport report;
};

// lagrangian_initial + verify; throws ValidationError naming the first failed check
Prepared well_prepared_initial(const InitialProfileSpec& s, const PressureParams& p, const Grid& g);

struct FitResult {
    double slope, intercept, r2;
};
FitResult scaling_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// int_0^T int_{-L}^{L} p(v), trapezoid in t, exact integral of the linear interpolant in x
double pressure_l1(const LagrangianTrajectory& traj, double L, const PressureParams& p);
// the same window for eps/(v-1)^{gamma-1}; q = gamma/(gamma-1) gives the L^q norm
double exclusion_residual(const LagrangianTrajectory& traj, double L, const PressureParams& p, double q = 1.0);

struct Incompressibility {
    double congested_measure;
    double sup_dxu;  // over t > 0 snapshots
};
Incompressibility incompressibility_diagnostic(const LagrangianTrajectory& traj, const PressureParams& p, double band);

// mass coordinate counted from the left end of the grid, starting at mass_origin;
// monotone cubic resampling onto a uniform mass grid. Trajectories share one grid,
// the span every snapshot covers.
LagrangianTrajectory eulerian_to_lagrangian(const EulerianTrajectory& traj, double rho_floor = 1e-6,
                                            double mass_origin = 0.0);
LagrangianState eulerian_to_lagrangian(const EulerianState& s, double rho_floor = 1e-6, double mass_origin = 0.0);
EulerianTrajectory lagrangian_to_eulerian(const LagrangianTrajectory& traj, double x0 = 0.0);
EulerianState lagrangian_to_eulerian(const LagrangianState& s, double x0 = 0.0);

enum class Experiment { MaxDensity, Blowup, Exclusion, PressureL1, Incompressibility };
std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct SweepConfig {
    InitialProfileSpec profile;
    PressureParams params;            // epsilon replaced per run
    psystem::SmoothConfig smooth;     // Lagrangian experiments
    viscous::Config viscous;          // MaxDensity
    bool require_well_prepared = true;
    double window_L = 2.0;
    double band_factor = 10.0;        // congested set {v - 1 < band_factor (min v0 - 1)}
    double c_guard = 0.5;             // dx |d_x v0|/(v0 - 1) <= c_guard (or rho/(1-rho) for Eulerian)
    double slope_tolerance = 0.15;
    double noise_tolerance = 0.10;
    double lower_bound_fraction = 0.8;
};

struct SweepResult {
    ExperimentReport report;
    std::vector<LagrangianTrajectory> lagrangian;
    std::vector<EulerianTrajectory> eulerian;
};

// eps_list strictly decreasing, at least 3 values; runs are spread over workers
SweepResult epsilon_sweep(const SweepConfig& cfg, const std::vector<double>& eps_list, Experiment e, int workers = 1);

// dx |d_x log(v0 - 1)|, max over the grid
double relative_resolution(const LagrangianState& s);
double relative_resolution(const EulerianState& s);

}  // namespace hsp::limits
