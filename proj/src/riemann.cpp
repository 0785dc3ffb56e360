#include "hsp/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsp/errors.hpp"

namespace hsp::riemann {

Invariants riemann_invariants_eulerian(const EulerianState& s, const PressureParams& p) {
    validate(p, ParamMode::Weak);
    const std::size_t n = s.rho.size();
    Invariants r{Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (s.rho[i] == 0) {
            if (s.m[i] != 0) {
                std::ostringstream os;
                os << "vacuum cell " << i << " carries momentum " << s.m[i];
                throw DomainError(os.str());
            }
            continue;
        }
        double u = s.m[i] / s.rho[i];
        double th = eos::theta_eulerian(s.rho[i], p);
        r.w[i] = u + th;
        r.z[i] = u - th;
    }
    return r;
}

Invariants riemann_invariants_lagrangian(const LagrangianState& s, const PressureParams& p) {
    const std::size_t n = s.v.size();
    Invariants r{Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double th = eos::theta_lagrangian(s.v[i], p);
        r.w[i] = s.u[i] + th;
        r.z[i] = s.u[i] - th;
    }
    return r;
}

Riccati riccati_variables(const LagrangianState& s, const PressureParams& p, kernels::Backend b) {
    const std::size_t n = s.v.size();
    if (n < 5) throw DomainError("riccati_variables needs at least 5 points");
    // d_x w = d_x u - c d_x v since theta' = -c; avoids a quadrature per cell
    Field dv = kernels::gradient(s.v, s.grid.dx, b);
    Field du = kernels::gradient(s.u, s.grid.dx, b);
    Riccati r{Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double c = eos::sound_speed(s.v[i], p);
        double sc = std::sqrt(c);
        r.y[i] = sc * (du[i] - c * dv[i]);
        r.q[i] = sc * (du[i] + c * dv[i]);
    }
    return r;
}

RegionBound RegionBound::of(const Invariants& inv) {
    RegionBound b;
    for (double w : inv.w) b.sup_w = std::max(b.sup_w, std::abs(w));
    for (double z : inv.z) b.sup_z = std::max(b.sup_z, std::abs(z));
    b.M = std::max(b.sup_w, b.sup_z);
    return b;
}

RegionBound RegionBound::from_initial(const EulerianState& s, const PressureParams& p) {
    return of(riemann_invariants_eulerian(s, p));
}

RegionBound RegionBound::from_initial(const LagrangianState& s, const PressureParams& p) {
    return of(riemann_invariants_lagrangian(s, p));
}

Membership in_invariant_region(const Invariants& inv, const RegionBound& b) {
    double wmax = -INFINITY, zmin = INFINITY;
    for (double w : inv.w) wmax = std::max(wmax, w);
    for (double z : inv.z) zmin = std::min(zmin, z);
    double margin = std::min(b.M - wmax, b.M + zmin);
    return {margin >= 0, margin};
}

Membership in_invariant_region(const EulerianState& s, const RegionBound& b, const PressureParams& p) {
    return in_invariant_region(riemann_invariants_eulerian(s, p), b);
}

double max_density_bound(const RegionBound& b, const PressureParams& p) {
    validate(p, ParamMode::Weak);
    double lo = 0.0, hi = 1.0;
    // Theta is increasing and unbounded; bisect until the bracket stops shrinking
    for (int it = 0; it < 2000; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (eos::theta_eulerian(mid, p) < b.M) lo = mid;
        else hi = mid;
    }
    return lo;
}

double min_volume_excess(const RegionBound& b, const PressureParams& p) {
    validate(p);
    const double target = 2 * b.M;
    if (!(target > 0)) throw DomainError("min_volume_bound needs M > 0");
    auto th = [&](double d) { return eos::theta_lagrangian(eos::Excess{d}, p); };
    double lo = 1.0, hi = 1.0;
    while (th(lo) <= target) lo *= 0.5;
    while (th(hi) > target) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi) break;
        if (th(mid) > target) lo = mid;
        else hi = mid;
        if (hi / lo - 1 < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

double min_volume_bound(const RegionBound& b, const PressureParams& p) { return 1 + min_volume_excess(b, p); }

// Sign of the invariant gradients read off as monotonicity of w and z between
// neighbouring cells. A high-order stencil undershoots at the foot of a steep
// monotone profile and would call such data compressive.
DatumClass classify_initial_datum(const LagrangianState& s, const PressureParams& p) {
    const std::size_t n = s.v.size();
    const auto inv = riemann_invariants_lagrangian(s, p);
    Field gw(n > 0 ? n - 1 : 0), gz(gw.size());
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        gw[i] = (inv.w[i + 1] - inv.w[i]) / s.grid.dx;
        gz[i] = (inv.z[i + 1] - inv.z[i]) / s.grid.dx;
        scale = std::max({scale, std::abs(gw[i]), std::abs(gz[i])});
    }
    const double tol = 1e-10 * scale + 1e-14;
    DatumClass r{true};
    double worst = 0.0;
    for (std::size_t i = 0; i < gw.size(); ++i) {
        double g = std::min(gw[i], gz[i]);
        if (g < -tol && g < worst) {
            worst = g;
            r = {false, i, g};
        }
    }
    return r;
}

Field volume_upper_bound(double t, const LagrangianState& s0, double Ybar, double Qbar, const PressureParams& p) {
    if (!(p.kappa > 0)) throw DomainError("volume_upper_bound needs kappa > 0");
    if (!(p.gamma_tilde > 1 && p.gamma_tilde < 3)) throw DomainError("volume_upper_bound needs gamma_tilde in (1,3)");
    const double e = (3 - p.gamma_tilde) / 4;
    const double K = std::pow(p.kappa * p.gamma_tilde, -0.25) / 2;
    Field r(s0.v.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::pow(std::pow(s0.v[i], e) + K * (Ybar + Qbar) * t, 1 / e);
    return r;
}

}  // namespace hsp::riemann
