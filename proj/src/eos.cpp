#include "hsp/eos.hpp"

#include <cmath>
#include <sstream>

#include "hsp/errors.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

void validate(const PressureParams& p, ParamMode mode) {
    if (!(p.epsilon > 0) || !std::isfinite(p.epsilon)) throw ValidationError("epsilon must be positive");
    if (!(p.gamma > 1) || !std::isfinite(p.gamma)) throw ValidationError("gamma must exceed 1");
    if (!(p.kappa >= 0) || !std::isfinite(p.kappa)) throw ValidationError("kappa must be nonnegative");
    if (p.kappa > 0 && !(p.gamma_tilde > 1 && p.gamma_tilde < 3))
        throw ValidationError("gamma_tilde must lie in (1,3) when kappa > 0");
    if (mode == ParamMode::Weak) {
        if (p.kappa != 0) throw ValidationError("weak mode requires kappa = 0");
        if (p.gamma > 3) throw ValidationError("weak mode requires gamma <= 3");
    }
}

namespace eos {
namespace {

void check_rho(double rho) {
    if (!(rho >= 0 && rho < 1)) {
        std::ostringstream os;
        os << "density " << rho << " outside [0,1)";
        throw DomainError(os.str());
    }
}

Excess to_excess(double v) {
    if (!(v > 1 + kVolumeGuard) || !std::isfinite(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "specific volume " << v << " not above 1 + 1e-14";
        throw DomainError(os.str());
    }
    return Excess{v - 1};
}

void check_excess(Excess d) {
    if (!(d.value > 0) || !std::isfinite(d.value)) {
        std::ostringstream os;
        os << "volume excess " << d.value << " not positive";
        throw DomainError(os.str());
    }
}

void require_weak(const PressureParams& p) {
    if (p.kappa != 0) throw DomainError("operation defined for kappa = 0 only");
}

double theta_singular(double d, const PressureParams& p) {
    return std::sqrt(p.epsilon * p.gamma) * 2.0 / (p.gamma - 1) * std::pow(d, -(p.gamma - 1) / 2);
}

double theta_isentropic(double v, const PressureParams& p) {
    return std::sqrt(p.kappa * p.gamma_tilde) * 2.0 / (p.gamma_tilde - 1) * std::pow(v, -(p.gamma_tilde - 1) / 2);
}

// c^2 dtau/dt squared, split into singular and isentropic parts, under
// tau = 1 + d/t^k. Both are bounded on [0,1] for this k.
struct MappedSpeed {
    double d, k;
    const PressureParams& p;
    double singular(double t) const {
        return p.epsilon * p.gamma * k * k * std::pow(d, 1 - p.gamma) * std::pow(t, k * (p.gamma - 1) - 2);
    }
    double isentropic(double t) const {
        if (p.kappa == 0) return 0.0;
        double tk = std::pow(t, k);
        return p.kappa * p.gamma_tilde * d * d * k * k * std::pow(t, k * (p.gamma_tilde - 1) - 2) /
               std::pow(tk + d, p.gamma_tilde + 1);
    }
};

double map_exponent(const PressureParams& p) {
    double g = p.kappa > 0 ? std::min(p.gamma, p.gamma_tilde) : p.gamma;
    return 2.0 / (g - 1);
}

}  // namespace

double pressure_eulerian(double rho, const PressureParams& p) {
    check_rho(rho);
    double r = p.epsilon * std::pow(rho / (1 - rho), p.gamma);
    if (p.kappa > 0) r += p.kappa * std::pow(rho, p.gamma_tilde);
    return r;
}

double pressure_eulerian_derivative(double rho, const PressureParams& p) {
    check_rho(rho);
    double r = p.epsilon * p.gamma * std::pow(rho, p.gamma - 1) / std::pow(1 - rho, p.gamma + 1);
    if (p.kappa > 0) r += p.kappa * p.gamma_tilde * std::pow(rho, p.gamma_tilde - 1);
    return r;
}

double pressure_eulerian_second_derivative(double rho, const PressureParams& p) {
    check_rho(rho);
    double r = p.epsilon * p.gamma * std::pow(rho, p.gamma - 2) * (p.gamma - 1 + 2 * rho) /
               std::pow(1 - rho, p.gamma + 2);
    if (p.kappa > 0) r += p.kappa * p.gamma_tilde * (p.gamma_tilde - 1) * std::pow(rho, p.gamma_tilde - 2);
    return r;
}

LagrangianPressure pressure_lagrangian(Excess d, const PressureParams& p) {
    check_excess(d);
    double s = p.epsilon * std::pow(d.value, -p.gamma);
    double i = p.kappa > 0 ? p.kappa * std::pow(1 + d.value, -p.gamma_tilde) : 0.0;
    return {s + i, s, i};
}

LagrangianPressure pressure_lagrangian(double v, const PressureParams& p) {
    return pressure_lagrangian(to_excess(v), p);
}

PressureDerivatives pressure_derivatives_lagrangian(Excess d, const PressureParams& p) {
    check_excess(d);
    double v = 1 + d.value;
    double dp = -p.epsilon * p.gamma * std::pow(d.value, -(p.gamma + 1));
    double d2p = p.epsilon * p.gamma * (p.gamma + 1) * std::pow(d.value, -(p.gamma + 2));
    if (p.kappa > 0) {
        dp -= p.kappa * p.gamma_tilde * std::pow(v, -(p.gamma_tilde + 1));
        d2p += p.kappa * p.gamma_tilde * (p.gamma_tilde + 1) * std::pow(v, -(p.gamma_tilde + 2));
    }
    return {dp, d2p};
}

PressureDerivatives pressure_derivatives_lagrangian(double v, const PressureParams& p) {
    return pressure_derivatives_lagrangian(to_excess(v), p);
}

double sound_speed(Excess d, const PressureParams& p) {
    return std::sqrt(-pressure_derivatives_lagrangian(d, p).dp);
}

double sound_speed(double v, const PressureParams& p) { return sound_speed(to_excess(v), p); }

double theta_lagrangian(Excess d, const PressureParams& p) {
    check_excess(d);
    double th = theta_singular(d.value, p);
    if (p.kappa == 0) return th;
    th += theta_isentropic(1 + d.value, p);
    // sqrt(A) + sqrt(B) - sqrt(A+B), written without cancellation
    MappedSpeed ms{d.value, map_exponent(p), p};
    auto cross = [&](double t) {
        double a = ms.singular(t), b = ms.isentropic(t);
        double sa = std::sqrt(a), sb = std::sqrt(b);
        double den = sa + sb + std::sqrt(a + b);
        return den > 0 ? 2 * sa * sb / den : 0.0;
    };
    return th - quad::integrate(cross, 0.0, 1.0, "theta cross term");
}

double theta_lagrangian(double v, const PressureParams& p) { return theta_lagrangian(to_excess(v), p); }

double theta_lagrangian_quadrature(Excess d, const PressureParams& p) {
    check_excess(d);
    MappedSpeed ms{d.value, map_exponent(p), p};
    return quad::integrate([&](double t) { return std::sqrt(ms.singular(t) + ms.isentropic(t)); }, 0.0, 1.0,
                           "theta");
}

double theta_eulerian(double rho, const PressureParams& p) {
    check_rho(rho);
    require_weak(p);
    return std::sqrt(p.epsilon * p.gamma) * 2.0 / (p.gamma - 1) * std::pow(rho / (1 - rho), (p.gamma - 1) / 2);
}

double theta_eulerian_quadrature(double rho, const PressureParams& p) {
    check_rho(rho);
    require_weak(p);
    if (rho == 0) return 0.0;
    // s = rho t^k turns s^{(gamma-3)/2} ds into a constant multiple of dt
    double k = 2.0 / (p.gamma - 1);
    double pre = std::sqrt(p.epsilon * p.gamma) * std::pow(rho, (p.gamma - 1) / 2) * k;
    return quad::integrate(
        [&](double t) { return pre * std::pow(1 - rho * std::pow(t, k), -(p.gamma + 1) / 2); }, 0.0, 1.0,
        "Theta");
}

double internal_energy(double rho, const PressureParams& p) {
    check_rho(rho);
    require_weak(p);
    return p.epsilon / (p.gamma - 1) * std::pow(rho, p.gamma) / std::pow(1 - rho, p.gamma - 1);
}

double riccati_coefficient(Excess d, const PressureParams& p) {
    // -c'/(2 c^{3/2}) with c = sqrt(-p'); this is what drives y' = -a y^2
    auto pd = pressure_derivatives_lagrangian(d, p);
    return pd.d2p / (4 * std::pow(-pd.dp, 1.25));
}

double riccati_coefficient(double v, const PressureParams& p) { return riccati_coefficient(to_excess(v), p); }

double riccati_coefficient_closed(Excess d, const PressureParams& p) {
    check_excess(d);
    require_weak(p);
    return (p.gamma + 1) / (4 * std::pow(p.epsilon * p.gamma, 0.25)) * std::pow(d.value, (p.gamma - 3) / 4);
}

std::string to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::NearCongestion: return "NearCongestion";
        case RegimeTag::Intermediate: return "Intermediate";
        case RegimeTag::Far: return "Far";
    }
    return "?";
}

Regime classify_regime(Excess d, const PressureParams& p) {
    check_excess(d);
    constexpr double band = 1e-9;
    if (d.value >= 1 || p.epsilon >= 1) return {RegimeTag::Far, std::nullopt};
    double alpha = std::log(d.value) / std::log(p.epsilon);
    if (alpha >= 1 / (p.gamma + 1) - band) return {RegimeTag::NearCongestion, alpha};
    if (alpha > 1 / (p.gamma + 2) + band) return {RegimeTag::Intermediate, alpha};
    return {RegimeTag::Far, std::nullopt};
}

Regime classify_regime(double v, const PressureParams& p) { return classify_regime(to_excess(v), p); }

double blowup_exponent(double gamma) {
    if (gamma < 3) return 1 / (2 * (gamma - 1));
    if (gamma == 3) return 0.25;
    return 1 / (gamma + 1);
}

}  // namespace eos
}  // namespace hsp
