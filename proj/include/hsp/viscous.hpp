#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "hsp/eos.hpp"
#include "hsp/kernels.hpp"
#include "hsp/report.hpp"
#include "hsp/state.hpp"

// rho_t + m_x = mu rho_xx,  m_t + (m^2/rho + p(rho))_x = mu m_xx
namespace hsp::viscous {

struct Config {
    double mu = 1e-2;
    PressureParams params;
    Grid grid{-1.0, 2.0 / 511, 512};
    double t_end = 0.5;
    double cfl_safety = 0.45;
    std::size_t snapshots = 20;  // equal intervals of [0, t_end]
    Boundary boundary = Boundary::ConstantExtension;
    double rho_floor = 1e-12;
    double floor_scale = 1e-3;  // mollifier floor a_mu = mu * floor_scale
    bool mollify = false;
    kernels::Backend backend = kernels::Backend::OpenMP;
};

void validate(const Config& c);

struct Mollified {
    Field rho, m;
    double half_width;
    double floor;
};

// convolution with a normalised C-infinity bump of half-width max(3 dx, sqrt(mu)),
// then rho += mu * floor_scale
Mollified mollify_initial(const Field& rho0, const Field& m0, double mu, const Grid& grid, double floor_scale = 1e-3,
                          Boundary b = Boundary::ConstantExtension);

struct StepResult {
    EulerianState state;
    double dt;
    int retries;
};

double stable_dt(const EulerianState& s, const Config& c);

// dt_cap clips the CFL step, e.g. to land on a snapshot time
StepResult step(const EulerianState& s, const Config& c, double dt_cap = std::numeric_limits<double>::infinity(),
                double t_now = 0.0);

EulerianTrajectory run(const Config& c, const Field& rho0, const Field& m0);

// Runs every mu on the base grid and reports successive L1 differences of rho
// at t_end, dissipation totals and mu^2-weighted gradient integrals.
ExperimentReport vanishing_viscosity_sweep(const Config& base, const std::vector<double>& mus, const Field& rho0,
                                           const Field& m0, int workers = 1);

}  // namespace hsp::viscous
