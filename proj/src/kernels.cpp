#include "hsp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsp::kernels {
namespace {

// Unchecked pressure formulas. Out-of-range input yields NaN, never throws,
// so they are safe inside parallel regions.
inline double p_eul(double r, const PressureParams& p) {
    double s = p.epsilon * std::pow(r / (1 - r), p.gamma);
    return p.kappa > 0 ? s + p.kappa * std::pow(r, p.gamma_tilde) : s;
}

inline double dp_eul(double r, const PressureParams& p) {
    double s = p.epsilon * p.gamma * std::pow(r, p.gamma - 1) / std::pow(1 - r, p.gamma + 1);
    return p.kappa > 0 ? s + p.kappa * p.gamma_tilde * std::pow(r, p.gamma_tilde - 1) : s;
}

inline double p_lag(double v, const PressureParams& p) {
    double s = p.epsilon * std::pow(v - 1, -p.gamma);
    return p.kappa > 0 ? s + p.kappa * std::pow(v, -p.gamma_tilde) : s;
}

inline double c_lag(double v, const PressureParams& p) {
    double s = p.epsilon * p.gamma * std::pow(v - 1, -(p.gamma + 1));
    if (p.kappa > 0) s += p.kappa * p.gamma_tilde * std::pow(v, -(p.gamma_tilde + 1));
    return std::sqrt(s);
}

inline double speed(double r, double m, const PressureParams& p, double floor) {
    double u = r > floor ? m / r : 0.0;
    return std::abs(u) + std::sqrt(dp_eul(r, p));
}

struct Flux {
    double mass, momentum;
};

inline Flux llf(double rl, double ml, double rr, double mr, const PressureParams& p, double floor) {
    double ul = rl > floor ? ml / rl : 0.0;
    double ur = rr > floor ? mr / rr : 0.0;
    double al = std::abs(ul) + std::sqrt(dp_eul(rl, p));
    double ar = std::abs(ur) + std::sqrt(dp_eul(rr, p));
    double a = std::max(al, ar);
    if (std::isnan(al) || std::isnan(ar)) a = std::numeric_limits<double>::quiet_NaN();
    return {0.5 * (ml + mr) - 0.5 * a * (rr - rl),
            0.5 * (ml * ul + p_eul(rl, p) + mr * ur + p_eul(rr, p)) - 0.5 * a * (mr - ml)};
}

inline double d4(const double* f, std::size_t j, double inv12dx) {
    return (8 * (f[j + 1] - f[j - 1]) - (f[j + 2] - f[j - 2])) * inv12dx;  // differences first: constants give exact 0
}

inline double edge_gradient(const double* f, std::size_t n, double dx, std::size_t i) {
    if (i == 0) return (4 * (f[1] - f[0]) - (f[2] - f[0])) / (2 * dx);
    if (i == n - 1) return (4 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2 * dx);
    return (f[i + 1] - f[i - 1]) / (2 * dx);
}

// NaN-propagating max
inline double nanmax(double a, double b) { return (std::isnan(a) || a > b) ? a : b; }

}  // namespace

Field pad(const Field& f, std::size_t g, Boundary b) {
    std::size_t n = f.size();
    Field out(n + 2 * g);
    std::copy(f.begin(), f.end(), out.begin() + static_cast<std::ptrdiff_t>(g));
    for (std::size_t k = 0; k < g; ++k) {
        if (b == Boundary::Periodic) {
            out[g - 1 - k] = f[n - 1 - k];
            out[g + n + k] = f[k];
        } else {
            out[g - 1 - k] = f.front();
            out[g + n + k] = f.back();
        }
    }
    return out;
}

namespace serial {

void gradient(const double* f, std::size_t n, double dx, double* out) {
    const double inv = 1.0 / (12 * dx);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (i >= 2 && i + 2 < n) ? d4(f, i, inv) : edge_gradient(f, n, dx, i);
}

double max_speed_eulerian(const Field& rho, const Field& m, const PressureParams& p, double rho_floor) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) s = nanmax(speed(rho[i], m[i], p, rho_floor), s);
    return s;
}

void viscous_update(const PressureParams& p, const Field& rho_g, const Field& m_g, const ViscousStep& s, Field& rho,
                    Field& m) {
    const std::size_t n = rho_g.size() - 2;
    std::vector<Flux> face(n + 1);
    for (std::size_t f = 0; f <= n; ++f) face[f] = llf(rho_g[f], m_g[f], rho_g[f + 1], m_g[f + 1], p, s.rho_floor);
    const double c = s.dt / s.dx, d = s.dt * s.mu / (s.dx * s.dx);
    rho.resize(n);
    m.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + 1;
        rho[i] = rho_g[j] - c * (face[i + 1].mass - face[i].mass) + d * (rho_g[j + 1] - 2 * rho_g[j] + rho_g[j - 1]);
        m[i] = m_g[j] - c * (face[i + 1].momentum - face[i].momentum) + d * (m_g[j + 1] - 2 * m_g[j] + m_g[j - 1]);
    }
}

double max_sound_speed(const Field& v, const PressureParams& p) {
    double s = 0.0;
    for (double x : v) s = nanmax(c_lag(x, p), s);
    return s;
}

void psystem_rhs(const PressureParams& p, const Field& v_g, const Field& u_g, double dx, Field& dv, Field& du) {
    const std::size_t n = v_g.size() - 4;
    Field pg(v_g.size());
    for (std::size_t j = 0; j < v_g.size(); ++j) pg[j] = p_lag(v_g[j], p);
    const double inv = 1.0 / (12 * dx);
    dv.resize(n);
    du.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dv[i] = d4(u_g.data(), i + 2, inv);
        du[i] = -d4(pg.data(), i + 2, inv);
    }
}

}  // namespace serial

namespace omp {

void gradient(const double* f, std::size_t n, double dx, double* out) {
    const double inv = 1.0 / (12 * dx);
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nn; ++i) {
        auto k = static_cast<std::size_t>(i);
        out[k] = (k >= 2 && k + 2 < n) ? d4(f, k, inv) : edge_gradient(f, n, dx, k);
    }
}

double max_speed_eulerian(const Field& rho, const Field& m, const PressureParams& p, double rho_floor) {
    const long n = static_cast<long>(rho.size());
    double s = 0.0;
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(max : s) reduction(|| : bad)
    for (long i = 0; i < n; ++i) {
        double a = speed(rho[i], m[i], p, rho_floor);
        if (std::isnan(a)) bad = true;
        else s = std::max(s, a);
    }
    return bad ? std::numeric_limits<double>::quiet_NaN() : s;
}

void viscous_update(const PressureParams& p, const Field& rho_g, const Field& m_g, const ViscousStep& s, Field& rho,
                    Field& m) {
    const std::size_t n = rho_g.size() - 2;
    const double c = s.dt / s.dx, d = s.dt * s.mu / (s.dx * s.dx);
    rho.resize(n);
    m.resize(n);
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long ii = 0; ii < nn; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const std::size_t j = i + 1;
        Flux left = llf(rho_g[j - 1], m_g[j - 1], rho_g[j], m_g[j], p, s.rho_floor);
        Flux right = llf(rho_g[j], m_g[j], rho_g[j + 1], m_g[j + 1], p, s.rho_floor);
        rho[i] = rho_g[j] - c * (right.mass - left.mass) + d * (rho_g[j + 1] - 2 * rho_g[j] + rho_g[j - 1]);
        m[i] = m_g[j] - c * (right.momentum - left.momentum) + d * (m_g[j + 1] - 2 * m_g[j] + m_g[j - 1]);
    }
}

double max_sound_speed(const Field& v, const PressureParams& p) {
    const long n = static_cast<long>(v.size());
    double s = 0.0;
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(max : s) reduction(|| : bad)
    for (long i = 0; i < n; ++i) {
        double a = c_lag(v[i], p);
        if (std::isnan(a)) bad = true;
        else s = std::max(s, a);
    }
    return bad ? std::numeric_limits<double>::quiet_NaN() : s;
}

void psystem_rhs(const PressureParams& p, const Field& v_g, const Field& u_g, double dx, Field& dv, Field& du) {
    const std::size_t n = v_g.size() - 4;
    Field pg(v_g.size());
    const double inv = 1.0 / (12 * dx);
    dv.resize(n);
    du.resize(n);
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (long j = 0; j < static_cast<long>(v_g.size()); ++j) pg[j] = p_lag(v_g[j], p);
#pragma omp for schedule(static)
        for (long ii = 0; ii < static_cast<long>(n); ++ii) {
            auto i = static_cast<std::size_t>(ii);
            dv[i] = d4(u_g.data(), i + 2, inv);
            du[i] = -d4(pg.data(), i + 2, inv);
        }
    }
}

}  // namespace omp

void gradient(Backend b, const double* f, std::size_t n, double dx, double* out) {
    if (b == Backend::Serial) serial::gradient(f, n, dx, out);
    else omp::gradient(f, n, dx, out);
}

Field gradient(const Field& f, double dx, Backend b) {
    Field out(f.size());
    gradient(b, f.data(), f.size(), dx, out.data());
    return out;
}

}  // namespace hsp::kernels
