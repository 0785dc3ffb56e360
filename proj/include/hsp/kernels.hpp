#pragma once

#include <cstddef>

#include "hsp/eos.hpp"
#include "hsp/state.hpp"

// Explicit stencil kernels. `serial` is the reference implementation the tests
// compare against; `omp` is the OpenMP version the solvers use by default.
// Inputs with ghosts carry `g` extra cells on each side. No kernel throws:
// invalid densities or volumes come back as NaN and are caught by the caller.
namespace hsp::kernels {

enum class Backend { Serial, OpenMP };

Field pad(const Field& f, std::size_t g, Boundary b);

struct ViscousStep {
    double dx, dt, mu, rho_floor;
};

namespace serial {
// 4th-order central interior, 2nd order on the two cells next to each edge
void gradient(const double* f, std::size_t n, double dx, double* out);
// max |u| + sqrt(p'(rho))
double max_speed_eulerian(const Field& rho, const Field& m, const PressureParams& p, double rho_floor);
// one explicit Euler step, LLF convection + centred diffusion; rho_g, m_g have one ghost
void viscous_update(const PressureParams& p, const Field& rho_g, const Field& m_g, const ViscousStep& s, Field& rho,
                    Field& m);
double max_sound_speed(const Field& v, const PressureParams& p);
// p-system right-hand side, 4th-order central; v_g, u_g have two ghosts
void psystem_rhs(const PressureParams& p, const Field& v_g, const Field& u_g, double dx, Field& dv, Field& du);
}  // namespace serial

namespace omp {
// 4th-order central interior, 2nd order on the two cells next to each edge
void gradient(const double* f, std::size_t n, double dx, double* out);
// max |u| + sqrt(p'(rho))
double max_speed_eulerian(const Field& rho, const Field& m, const PressureParams& p, double rho_floor);
// one explicit Euler step, LLF convection + centred diffusion; rho_g, m_g have one ghost
void viscous_update(const PressureParams& p, const Field& rho_g, const Field& m_g, const ViscousStep& s, Field& rho,
                    Field& m);
double max_sound_speed(const Field& v, const PressureParams& p);
// p-system right-hand side, 4th-order central; v_g, u_g have two ghosts
void psystem_rhs(const PressureParams& p, const Field& v_g, const Field& u_g, double dx, Field& dv, Field& du);
}  // namespace omp

void gradient(Backend b, const double* f, std::size_t n, double dx, double* out);
Field gradient(const Field& f, double dx, Backend b = Backend::OpenMP);

}  // namespace hsp::kernels
