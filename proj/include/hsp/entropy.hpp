#pragma once

#include <vector>

#include "hsp/eos.hpp"
#include "hsp/state.hpp"

namespace hsp::entropy {

struct Pair {
    double eta, q;
};

// int_0^rho p(s)/s^2 ds and int_0^rho p(s)^2/s^2 ds
double pressure_integral(double rho, const PressureParams& p);
double pressure_square_integral(double rho, const PressureParams& p);
// the same over [a, b], computed directly so that short intervals keep their digits
double pressure_integral(double a, double b, const PressureParams& p);
double pressure_square_integral(double a, double b, const PressureParams& p);

// pairs 1..4: mass, momentum, energy, and the cubic one
Pair entropy_pair(int id, double rho, double m, const PressureParams& p);
Pair relative_entropy_pair(int id, double rho, double m, double rho_bar, double m_bar, const PressureParams& p);

// gradient of eta_i in (rho, m), analytic
struct Gradient {
    double d_rho, d_m;
};
Gradient entropy_gradient(int id, double rho, double m, const PressureParams& p);

struct Direction {
    double rho = 1.0, u = 0.7;
};

// Fitted order in delta of the remainder after subtracting the quadratic
// part of (eta~_i, q~_i), i in {3,4}; the smaller of the two orders.
// +inf when the remainder is at rounding level for every delta.
double taylor_expansion_residual(int id, double rho_bar, double u_bar, double delta, const PressureParams& p,
                                 Direction dir = {});

// discrete L2(t,x) norm of d_t eta_i + d_x q_i on the snapshot lattice
double entropy_residual(const EulerianTrajectory& traj, int id);

struct Dissipation {
    double total = 0.0;                 // int int mu (p'/rho)(rho_x)^2 + mu rho (u_x)^2
    double mu2_grad_rho = 0.0;          // mu^2 int int (rho_x)^2
    double mu2_grad_u = 0.0;            // mu^2 int int rho (u_x)^2
    std::vector<Field> pointwise;       // density per snapshot
};

Dissipation entropy_dissipation(const EulerianTrajectory& traj);
// int mu (p'/rho)(rho_x)^2 + mu rho (u_x)^2 dx at one instant
double dissipation_rate(const EulerianState& s, const PressureParams& p, double mu);

struct CoefficientSet {
    double rho_bar;
    double A1, A2, A3, A4;
    double B1, B2, B3;
    double C1, C2, C3;                  // composite
    double C1_closed, C2_closed, C3_closed;
    double max_rel_error;
};

CoefficientSet coefficient_identities(double rho_bar, const PressureParams& p);

}  // namespace hsp::entropy
