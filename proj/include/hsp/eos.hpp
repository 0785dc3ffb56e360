#pragma once

#include <optional>
#include <string>

namespace hsp {

// p(rho) = eps (rho/(1-rho))^gamma + kappa rho^gamma_tilde, and in specific volume
// p(v) = eps/(v-1)^gamma + kappa/v^gamma_tilde.
struct PressureParams {
    double epsilon = 1e-2;
    double gamma = 2.0;
    double kappa = 0.0;
    double gamma_tilde = 2.0;  // unused when kappa == 0
};

enum class ParamMode { Smooth, Weak };

// Throws ValidationError naming the violated constraint.
void validate(const PressureParams& p, ParamMode mode = ParamMode::Smooth);

namespace eos {

// v - 1, passed directly when it is too small to survive the subtraction
struct Excess {
    double value;
};

inline constexpr double kVolumeGuard = 1e-14;

struct LagrangianPressure {
    double total;
    double singular;
    double isentropic;
};

struct PressureDerivatives {
    double dp;   // < 0
    double d2p;  // > 0
};

double pressure_eulerian(double rho, const PressureParams& p);
double pressure_eulerian_derivative(double rho, const PressureParams& p);
double pressure_eulerian_second_derivative(double rho, const PressureParams& p);

LagrangianPressure pressure_lagrangian(double v, const PressureParams& p);
LagrangianPressure pressure_lagrangian(Excess d, const PressureParams& p);

PressureDerivatives pressure_derivatives_lagrangian(double v, const PressureParams& p);
PressureDerivatives pressure_derivatives_lagrangian(Excess d, const PressureParams& p);

double sound_speed(double v, const PressureParams& p);
double sound_speed(Excess d, const PressureParams& p);

// theta(v) = int_v^inf c(tau) dtau
double theta_lagrangian(double v, const PressureParams& p);
double theta_lagrangian(Excess d, const PressureParams& p);
// plain quadrature of c, no closed-form pieces
double theta_lagrangian_quadrature(Excess d, const PressureParams& p);

// Theta(rho) = int_0^rho sqrt(p'(s))/s ds, weak mode only
double theta_eulerian(double rho, const PressureParams& p);
double theta_eulerian_quadrature(double rho, const PressureParams& p);

double internal_energy(double rho, const PressureParams& p);

// a = -c'/(2 c^{3/2}) = p''/(4 (-p')^{5/4})
double riccati_coefficient(double v, const PressureParams& p);
double riccati_coefficient(Excess d, const PressureParams& p);
// kappa = 0 closed form
double riccati_coefficient_closed(Excess d, const PressureParams& p);

enum class RegimeTag { NearCongestion, Intermediate, Far };

struct Regime {
    RegimeTag tag;
    std::optional<double> alpha;  // v - 1 = eps^alpha; unset for Far
};

std::string to_string(RegimeTag t);

Regime classify_regime(double v, const PressureParams& p);
Regime classify_regime(Excess d, const PressureParams& p);

// blow-up exponent beta of the lower bound on T*
double blowup_exponent(double gamma);

}  // namespace eos
}  // namespace hsp
