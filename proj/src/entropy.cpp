#include "hsp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hsp/errors.hpp"
#include "hsp/kernels.hpp"
#include "hsp/quadrature.hpp"

namespace hsp::entropy {
namespace {

void check_id(int id) {
    if (id < 1 || id > 4) throw DomainError("entropy pair index must be 1..4, got " + std::to_string(id));
}

void check_state(double rho, double m) {
    if (!(rho >= 0 && rho < 1)) throw DomainError("density outside [0,1)");
    if (rho == 0 && m != 0) throw DomainError("vacuum state with nonzero momentum");
}

double slope_of_logs(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = std::log(x[i]) - mx;
        sxy += a * (std::log(y[i]) - my);
        sxx += a * a;
    }
    return sxy / sxx;
}

}  // namespace

double pressure_integral(double rho, const PressureParams& p) {
    validate(p, ParamMode::Weak);
    if (!(rho >= 0 && rho < 1)) throw DomainError("density outside [0,1)");
    if (rho == 0) return 0.0;
    // s = rho t^k with k = 1/(gamma-1) absorbs the s^{gamma-2} factor
    const double k = 1 / (p.gamma - 1);
    const double pre = p.epsilon * std::pow(rho, p.gamma - 1) * k;
    return quad::integrate([&](double t) { return pre * std::pow(1 - rho * std::pow(t, k), -p.gamma); }, 0.0, 1.0,
                           "int p/s^2");
}

double pressure_square_integral(double rho, const PressureParams& p) {
    validate(p, ParamMode::Weak);
    if (!(rho >= 0 && rho < 1)) throw DomainError("density outside [0,1)");
    if (rho == 0) return 0.0;
    const double e2 = p.epsilon * p.epsilon;
    return quad::integrate(
        [&](double t) {
            double s = rho * t;
            return rho * e2 * std::pow(s, 2 * p.gamma - 2) * std::pow(1 - s, -2 * p.gamma);
        },
        0.0, 1.0, "int p^2/s^2");
}

double pressure_integral(double a, double b, const PressureParams& p) {
    if (a == b) return 0.0;
    if (std::min(a, b) < 0.5 * std::max(a, b)) return pressure_integral(b, p) - pressure_integral(a, p);
    validate(p, ParamMode::Weak);
    return quad::integrate([&](double s) { return eos::pressure_eulerian(s, p) / (s * s); }, a, b, "int p/s^2");
}

double pressure_square_integral(double a, double b, const PressureParams& p) {
    if (a == b) return 0.0;
    if (std::min(a, b) < 0.5 * std::max(a, b)) return pressure_square_integral(b, p) - pressure_square_integral(a, p);
    validate(p, ParamMode::Weak);
    return quad::integrate(
        [&](double s) {
            double q = eos::pressure_eulerian(s, p) / s;
            return q * q;
        },
        a, b, "int p^2/s^2");
}

Pair entropy_pair(int id, double rho, double m, const PressureParams& p) {
    check_id(id);
    check_state(rho, m);
    if (id == 1) return {rho, m};
    if (rho == 0) return {0.0, 0.0};
    const double u = m / rho;
    const double pr = eos::pressure_eulerian(rho, p);
    if (id == 2) return {m, m * u + pr};
    const double I1 = pressure_integral(rho, p);
    if (id == 3) return {0.5 * m * u + rho * I1, 0.5 * m * u * u + m * (pr / rho + I1)};
    const double I2 = pressure_square_integral(rho, p);
    return {m * u * u + 6 * m * I1, m * u * u * u + 3 * m * u * (pr / rho + 2 * I1) + 6 * (pr * I1 - I2)};
}

Gradient entropy_gradient(int id, double rho, double m, const PressureParams& p) {
    check_id(id);
    check_state(rho, m);
    if (id == 1) return {1.0, 0.0};
    if (id == 2) return {0.0, 1.0};
    if (rho == 0) throw DomainError("entropy gradient undefined at vacuum");
    const double u = m / rho;
    const double pr = eos::pressure_eulerian(rho, p);
    const double I1 = pressure_integral(rho, p);
    if (id == 3) return {-0.5 * u * u + I1 + pr / rho, u};
    return {-2 * u * u * u + 6 * u * pr / rho, 3 * u * u + 6 * I1};
}

Pair relative_entropy_pair(int id, double rho, double m, double rho_bar, double m_bar, const PressureParams& p) {
    check_id(id);
    if (!(rho > 0 && rho < 1 && rho_bar > 0 && rho_bar < 1))
        throw DomainError("relative pairs need both densities in (0,1)");
    const double pr = eos::pressure_eulerian(rho, p);
    const double pb = eos::pressure_eulerian(rho_bar, p);
    switch (id) {
        case 1: return {rho - rho_bar, m - m_bar};
        case 2: return {m - m_bar, (m * m / rho + pr) - (m_bar * m_bar / rho_bar + pb)};
        default: break;
    }
    const double u = m / rho, ub = m_bar / rho_bar, du = u - ub, dr = rho - rho_bar;
    const double J1 = pressure_integral(rho_bar, rho, p);
    if (id == 3) {
        // rho I1(rho) - rho_bar I1(rho_bar) - I1(rho_bar) dr == rho J1, kept in that form
        double eta = 0.5 * rho * du * du + rho * J1 - pb / rho_bar * dr;
        double q = 0.5 * m * du * du + du * (pr - pb) + u * (rho * J1 - pb / rho_bar * dr);
        return {eta, q};
    }
    const double J2 = pressure_square_integral(rho_bar, rho, p);
    double eta = 6 * m * J1 + rho * du * du * (u + 2 * ub) - 6 * m_bar / (rho_bar * rho_bar) * pb * dr;
    double q = 6 * (m * m / rho + pr) * J1 - 6 * J2 + 3 * pr * (u * u - ub * ub) + m * du * du * (u + 2 * ub) -
               6 * pb * m_bar / (rho_bar * rho_bar) * (m - m_bar);
    return {eta, q};
}

double taylor_expansion_residual(int id, double rho_bar, double u_bar, double delta, const PressureParams& p,
                                 Direction dir) {
    if (id != 3 && id != 4) throw DomainError("Taylor expansion is defined for pairs 3 and 4");
    const double pb = eos::pressure_eulerian(rho_bar, p);
    const double dpb = eos::pressure_eulerian_derivative(rho_bar, p);
    const double m_bar = rho_bar * u_bar;

    std::vector<double> ds, re, rq;
    double scale_e = 0, scale_q = 0, max_e = 0, max_q = 0;
    for (int j = 0; j < 6; ++j) {
        const double d = delta / std::pow(2.0, j);
        const double dr = d * dir.rho, du = d * dir.u;
        const double rho = rho_bar + dr, u = u_bar + du;
        Pair rel = relative_entropy_pair(id, rho, rho * u, rho_bar, m_bar, p);
        double qe, qq;
        if (id == 3) {
            qe = 0.5 * rho_bar * du * du + dpb / (2 * rho_bar) * dr * dr;
            qq = 0.5 * rho_bar * u_bar * du * du + 0.5 * dpb / rho_bar * u_bar * dr * dr + dpb * du * dr;
        } else {
            qe = 3 * rho_bar * u_bar * du * du + 3 * u_bar * dpb / rho_bar * dr * dr + 6 * pb / rho_bar * du * dr;
            const double e = pb + rho_bar * u_bar * u_bar;
            qq = 3 * e * du * du + 3 * dpb / (rho_bar * rho_bar) * e * dr * dr + 6 * (pb / rho_bar + dpb) * u_bar * du * dr;
        }
        ds.push_back(d);
        re.push_back(std::abs(rel.eta - qe));
        rq.push_back(std::abs(rel.q - qq));
        scale_e = std::max(scale_e, std::abs(rel.eta) + std::abs(qe));
        scale_q = std::max(scale_q, std::abs(rel.q) + std::abs(qq));
        max_e = std::max(max_e, re.back());
        max_q = std::max(max_q, rq.back());
    }
    auto order = [&](const std::vector<double>& r, double mx, double scale) {
        if (mx <= 1e-12 * scale) return std::numeric_limits<double>::infinity();
        std::vector<double> x, y;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] > 0) x.push_back(ds[i]), y.push_back(r[i]);
        if (x.size() < 3) return std::numeric_limits<double>::infinity();
        return slope_of_logs(x, y);
    };
    return std::min(order(re, max_e, scale_e), order(rq, max_q, scale_q));
}

double entropy_residual(const EulerianTrajectory& traj, int id) {
    check_id(id);
    const std::size_t K = traj.size();
    if (K < 3) throw DomainError("entropy residual needs at least 3 snapshots");
    const Grid& g = traj.states.front().grid;
    const std::size_t n = g.n;
    const double dt = traj.t[1] - traj.t[0];
    for (std::size_t k = 1; k < K; ++k)
        if (std::abs((traj.t[k] - traj.t[k - 1]) - dt) > 1e-9 * std::max(1.0, dt) + 1e-6 * dt)
            throw DomainError("entropy residual needs uniform snapshot spacing");

    std::vector<Field> eta(K, Field(n)), q(K, Field(n));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            Pair e = entropy_pair(id, traj.states[k].rho[i], traj.states[k].m[i], traj.params);
            eta[k][i] = e.eta;
            q[k][i] = e.q;
        }
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < K; ++k)
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double r = (eta[k + 1][i] - eta[k - 1][i]) / (2 * dt) + (q[k][i + 1] - q[k][i - 1]) / (2 * g.dx);
            sum += r * r;
        }
    return std::sqrt(sum * dt * g.dx);
}

Dissipation entropy_dissipation(const EulerianTrajectory& traj) {
    if (!traj.mu) throw DomainError("entropy dissipation needs a viscous trajectory (mu missing)");
    const double mu = *traj.mu;
    constexpr double floor = 1e-12;
    Dissipation d;
    std::vector<double> tot(traj.size()), gr(traj.size()), gu(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const EulerianState& s = traj.states[k];
        const std::size_t n = s.rho.size();
        Field u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = s.rho[i] > floor ? s.m[i] / s.rho[i] : 0.0;
        Field rx = kernels::gradient(s.rho, s.grid.dx), ux = kernels::gradient(u, s.grid.dx);
        Field dens(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (s.rho[i] <= floor) continue;
            double dp = eos::pressure_eulerian_derivative(s.rho[i], traj.params);
            dens[i] = mu * (dp / s.rho[i]) * rx[i] * rx[i] + mu * s.rho[i] * ux[i] * ux[i];
            tot[k] += dens[i] * s.grid.dx;
            gr[k] += mu * mu * rx[i] * rx[i] * s.grid.dx;
            gu[k] += mu * mu * s.rho[i] * ux[i] * ux[i] * s.grid.dx;
        }
        d.pointwise.push_back(std::move(dens));
    }
    for (std::size_t k = 1; k < traj.size(); ++k) {
        double h = 0.5 * (traj.t[k] - traj.t[k - 1]);
        d.total += h * (tot[k] + tot[k - 1]);
        d.mu2_grad_rho += h * (gr[k] + gr[k - 1]);
        d.mu2_grad_u += h * (gu[k] + gu[k - 1]);
    }
    return d;
}

double dissipation_rate(const EulerianState& s, const PressureParams& p, double mu) {
    constexpr double floor = 1e-12;
    const std::size_t n = s.rho.size();
    Field u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = s.rho[i] > floor ? s.m[i] / s.rho[i] : 0.0;
    Field rx = kernels::gradient(s.rho, s.grid.dx), ux = kernels::gradient(u, s.grid.dx);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (s.rho[i] <= floor) continue;
        double dp = eos::pressure_eulerian_derivative(s.rho[i], p);
        r += (mu * (dp / s.rho[i]) * rx[i] * rx[i] + mu * s.rho[i] * ux[i] * ux[i]) * s.grid.dx;
    }
    return r;
}

CoefficientSet coefficient_identities(double rho_bar, const PressureParams& p) {
    validate(p, ParamMode::Weak);
    if (!(rho_bar > 0 && rho_bar < 1)) throw DomainError("rho_bar must lie in (0,1)");
    const double r = rho_bar;
    const double P = eos::pressure_eulerian(r, p);
    const double D = eos::pressure_eulerian_derivative(r, p);
    const double D2 = eos::pressure_eulerian_second_derivative(r, p);
    const double e = p.epsilon, g = p.gamma;

    CoefficientSet c{};
    c.rho_bar = r;
    c.A1 = (2 * D * D - P * D2) / (2 * r * r) - D * P / (r * r * r);
    c.A2 = 3 * P * D2 / (2 * r * r);
    c.A3 = 3 * P / r + 3 * P * D2 / (2 * D);
    c.A4 = 3 * r * P / D;
    c.B1 = 3 * r * P / 2;
    c.B2 = 3 * P * D * D / (2 * r * r * r);
    c.B3 = 3 * P * D / r;
    const double t1 = c.B3 * r * r / c.A3, t2 = c.B3 * c.A1 / c.A3;
    c.C1 = c.B1 - t1;
    c.C2 = t2 + c.B2;
    c.C3 = 2 * c.B3;
    c.C1_closed = e * (3 - g) / (2 * (g + 1)) * std::pow(r, g + 1) / std::pow(1 - r, g);
    c.C2_closed = e * e * e * g * g * (5 * g + 1) / (2 * (g + 1)) * std::pow(r, 3 * g - 5) / std::pow(1 - r, 3 * g + 2);
    c.C3_closed = 6 * g * e * e * std::pow(r, 2 * (g - 1)) / std::pow(1 - r, 2 * g + 1);

    auto rel = [](double a, double b, double scale) {
        return std::abs(a - b) / std::max({std::abs(b), scale, std::numeric_limits<double>::min()});
    };
    c.max_rel_error = std::max({rel(c.C1, c.C1_closed, std::max(std::abs(c.B1), std::abs(t1))),
                                rel(c.C2, c.C2_closed, std::max(std::abs(t2), std::abs(c.B2))),
                                rel(c.C3, c.C3_closed, 0.0)});
    return c;
}

}  // namespace hsp::entropy
