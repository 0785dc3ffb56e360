#include "hsp/limits.hpp"

#include <algorithm>
#include <cmath>
// boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <exception>
#include <limits>
#include <sstream>

#include "hsp/errors.hpp"
#include "hsp/riemann.hpp"

namespace hsp::limits {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// C-infinity step from 0 at t<=0 to 1 at t>=1
double bump_f(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
double step(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = bump_f(t), b = bump_f(1 - t);
    return a / (a + b);
}
double step_prime(double t) {
    if (t <= 0 || t >= 1) return 0.0;
    double a = bump_f(t), b = bump_f(1 - t);
    double da = a / (t * t), db = b / ((1 - t) * (1 - t));
    return (da * b + a * db) / ((a + b) * (a + b));
}

struct Dip {
    double lo, hi, center, core, width;

    // v - 1 and its x-derivative
    double excess(double x) const {
        double t = (std::abs(x - center) - core) / width;
        return std::exp(lo + (hi - lo) * step(t));
    }
    double excess_prime(double x) const {
        double r = x - center;
        double t = (std::abs(r) - core) / width;
        double sp = step_prime(t);
        if (sp == 0.0) return 0.0;
        return excess(x) * (hi - lo) * sp * (r < 0 ? -1.0 : 1.0) / width;
    }
};

double extra_velocity(const InitialProfileSpec& s, double x) {
    double u = 0.0;
    if (s.compression != 0.0) {
        double xi = (x - s.compression_center) / s.compression_width;
        u -= s.compression * std::tanh(xi) * std::exp(-xi * xi / 8);
    }
    if (s.rarefaction != 0.0) u += s.rarefaction * std::tanh((x - s.center) / s.velocity_width);
    return u;
}

double core_excess(const InitialProfileSpec& s, const PressureParams& p) {
    double floor = std::pow(p.epsilon / s.M1, 1.0 / (p.gamma - 1));
    return std::max(std::pow(p.epsilon, s.alpha), floor);
}

// integral of the piecewise linear interpolant of f from x0 to a
struct Primitive {
    const Grid& g;
    const Field& f;
    Field cum;

    Primitive(const Grid& g, const Field& f) : g(g), f(f), cum(f.size(), 0.0) {
        for (std::size_t i = 1; i < f.size(); ++i) cum[i] = cum[i - 1] + 0.5 * g.dx * (f[i - 1] + f[i]);
    }
    double operator()(double a) const {
        double r = (a - g.x0) / g.dx;
        auto j = static_cast<std::size_t>(std::clamp(std::floor(r), 0.0, static_cast<double>(g.n - 2)));
        double s = r - static_cast<double>(j);
        return cum[j] + g.dx * (s * f[j] + 0.5 * s * s * (f[j + 1] - f[j]));
    }
};

void check_window(const Grid& g, double L) {
    if (!(L > 0)) throw ValidationError("window half-width must be positive");
    const double tol = 1e-9 * g.dx;
    if (g.x0 > -L + tol || g.x_end() < L - tol) {
        std::ostringstream os;
        os << "window [-" << L << ", " << L << "] exceeds grid [" << g.x0 << ", " << g.x_end() << "]";
        throw ValidationError(os.str());
    }
}

template <class F>
double space_time(const LagrangianTrajectory& traj, double L, F&& f) {
    if (traj.size() == 0) throw ValidationError("empty trajectory");
    std::vector<double> per(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        check_window(s.grid, L);
        Field vals(s.v.size());
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f(s.v[i]);
        Primitive P(s.grid, vals);
        per[k] = P(L) - P(-L);
    }
    double tot = 0.0;
    for (std::size_t k = 1; k < per.size(); ++k) tot += 0.5 * (traj.t[k] - traj.t[k - 1]) * (per[k] + per[k - 1]);
    return tot;
}

Field resample(const Field& xs, const Field& ys, const Grid& g) {
    using boost::math::interpolators::pchip;
    pchip<Field> spline{Field(xs), Field(ys)};
    Field out(g.n);
    const double lo = xs.front(), hi = xs.back();
    for (std::size_t i = 0; i < g.n; ++i) out[i] = spline(std::clamp(g.x(i), lo, hi));
    return out;
}

}  // namespace

void validate(const InitialProfileSpec& s, const PressureParams& p) {
    static const char* bases[] = {"plateau", "dip", "bump", "theta_bump", "density_bump", "riemann"};
    if (std::find(std::begin(bases), std::end(bases), s.base) == std::end(bases))
        throw ValidationError("unknown profile base '" + s.base + "'");
    if (!(s.v_pm > 1)) throw ValidationError("v_pm must exceed 1");
    if (s.base == "dip") {
        if (!(s.alpha >= 0 && s.alpha <= 1 / (p.gamma - 1) + 1e-12))
            throw ValidationError("alpha must lie in [0, 1/(gamma-1)]");
        if (!(s.core >= 0)) throw ValidationError("core must be nonnegative");
        if (!(s.transition > 0)) throw ValidationError("transition must be positive");
        if (!(s.dilation >= 0)) throw ValidationError("dilation must be nonnegative");
        if (!(s.M1 > 0)) throw ValidationError("M1 must be positive");
    }
    if ((s.base == "bump" || s.base == "theta_bump" || s.base == "density_bump") && !(s.core > 0))
        throw ValidationError("core (bump width) must be positive");
    if (!(s.compression_width > 0) || !(s.velocity_width > 0)) throw ValidationError("velocity widths must be positive");
    if (s.base == "riemann" && !(s.rho_left > 0 && s.rho_left < 1 && s.rho_right > 0 && s.rho_right < 1))
        throw ValidationError("riemann densities must lie in (0,1)");
}

LagrangianState lagrangian_initial(const InitialProfileSpec& s, const PressureParams& p, const Grid& g) {
    validate(s, p);
    LagrangianState st{g, Field(g.n), Field(g.n, 0.0)};
    if (s.base == "plateau") {
        std::fill(st.v.begin(), st.v.end(), s.v_pm);
    } else if (s.base == "bump") {
        for (std::size_t i = 0; i < g.n; ++i) {
            double xi = (g.x(i) - s.center) / s.core;
            st.v[i] = s.v_pm + s.amplitude * std::exp(-xi * xi / 2);
            if (!(st.v[i] > 1)) throw ValidationError("bump amplitude pushes v below 1");
        }
    } else if (s.base == "dip") {
        Dip dip{std::log(core_excess(s, p)), std::log(s.v_pm - 1), s.center, s.core, s.transition};
        for (std::size_t i = 0; i < g.n; ++i) st.v[i] = 1.0 + dip.excess(g.x(i));
        if (s.dilation > 0) {
            auto ux = [&](double x) {
                return s.dilation * eos::sound_speed(eos::Excess{dip.excess(x)}, p) * std::abs(dip.excess_prime(x));
            };
            // u odd about the center; fixed 15-point Gauss per cell, accumulated outward
            const double a = s.center + s.core, b = s.center + s.core + s.transition;
            auto piece = [&](double lo, double hi) {
                lo = std::clamp(lo, a, b);
                hi = std::clamp(hi, a, b);
                return hi > lo ? boost::math::quadrature::gauss<double, 15>::integrate(ux, lo, hi) : 0.0;
            };
            // distances from the center of every node, sorted, share one running sum
            std::vector<std::size_t> order(g.n);
            for (std::size_t i = 0; i < g.n; ++i) order[i] = i;
            auto dist = [&](std::size_t i) { return std::abs(g.x(i) - s.center); };
            std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return dist(i) < dist(j); });
            double r_prev = 0.0, acc = 0.0;
            for (std::size_t i : order) {
                double r = dist(i);
                acc += piece(s.center + r_prev, s.center + r);
                r_prev = r;
                st.u[i] = (g.x(i) >= s.center ? 1.0 : -1.0) * acc;
            }
        }
    } else {
        throw ValidationError("profile base '" + s.base + "' is Eulerian");
    }
    for (std::size_t i = 0; i < g.n; ++i) st.u[i] += extra_velocity(s, g.x(i));
    return st;
}

EulerianState eulerian_initial(const InitialProfileSpec& s, const PressureParams& p, const Grid& g) {
    validate(s, p);
    EulerianState st{g, Field(g.n), Field(g.n)};
    Field u(g.n, 0.0);
    if (s.base == "theta_bump") {
        if (p.kappa != 0) throw ValidationError("theta_bump needs kappa = 0");
        const double th_far = eos::theta_eulerian(1.0 / s.v_pm, p);
        const double k = 2.0 / (p.gamma - 1);
        for (std::size_t i = 0; i < g.n; ++i) {
            double xi = (g.x(i) - s.center) / s.core;
            double th = th_far + s.amplitude * std::exp(-xi * xi / 2);
            double X = std::pow(th * (p.gamma - 1) / (2 * std::sqrt(p.epsilon * p.gamma)), k);
            st.rho[i] = X / (1 + X);
        }
    } else if (s.base == "density_bump") {
        for (std::size_t i = 0; i < g.n; ++i) {
            double xi = (g.x(i) - s.center) / s.core;
            st.rho[i] = 1.0 / s.v_pm + s.amplitude * std::exp(-xi * xi / 2);
        }
    } else if (s.base == "riemann") {
        for (std::size_t i = 0; i < g.n; ++i) {
            bool left = g.x(i) < s.center;
            st.rho[i] = left ? s.rho_left : s.rho_right;
            u[i] = left ? s.u_left : s.u_right;
        }
    } else {
        throw ValidationError("profile base '" + s.base + "' is Lagrangian");
    }
    for (std::size_t i = 0; i < g.n; ++i) {
        if (!(st.rho[i] > 0 && st.rho[i] < 1)) throw ValidationError("initial density outside (0,1)");
        st.m[i] = st.rho[i] * (u[i] + extra_velocity(s, g.x(i)));
    }
    return st;
}

bool AssumptionReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ojson AssumptionReport::to_json() const {
    ojson j;
    j["M1"] = M1;
    j["M2"] = M2;
    j["Y0"] = Y0;
    j["Q0"] = Q0;
    j["compression_constant"] = compression_constant;
    j["ell_star"] = ell_star;
    j["v_under"] = v_under;
    j["rarefactive"] = rarefactive;
    j["checks"] = ojson::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value},
                               {"limit", std::isfinite(c.limit) ? ojson(c.limit) : ojson("inf")}});
    return j;
}

AssumptionReport verify_assumptions(const LagrangianState& s, const PressureParams& p, const InitialProfileSpec& spec) {
    const std::size_t n = s.v.size();
    const Grid& g = s.grid;
    Field dv = kernels::gradient(s.v, g.dx, kernels::Backend::Serial);
    Field du = kernels::gradient(s.u, g.dx, kernels::Backend::Serial);
    AssumptionReport r;
    const double eps = p.epsilon, beta = eos::blowup_exponent(p.gamma);
    double sup0 = 0, sup1 = 0, scale = 0;
    Field wx(n), zx(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = eos::sound_speed(s.v[i], p);
        wx[i] = du[i] - c[i] * dv[i];
        zx[i] = du[i] + c[i] * dv[i];
        scale = std::max({scale, std::abs(wx[i]), std::abs(zx[i])});
    }
    const double tol = 1e-10 * scale + 1e-14;
    r.Y0 = r.Q0 = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = s.v[i] - 1.0;
        r.M1 = std::max(r.M1, eps / std::pow(d, p.gamma - 1));
        sup0 = std::max({sup0, std::abs(s.v[i]), std::abs(s.u[i])});
        sup1 = std::max({sup1, std::abs(dv[i]), std::abs(du[i])});
        const double sc = std::sqrt(c[i]);
        r.Y0 = std::max(r.Y0, sc * wx[i]);
        r.Q0 = std::max(r.Q0, sc * zx[i]);
        double neg = (wx[i] < -tol ? -wx[i] : 0.0) + (zx[i] < -tol ? -zx[i] : 0.0);
        if (neg > 0) {
            double w = std::exp(0.25 * (std::log(eps) - (p.gamma + 1) * std::log(d)) - beta * std::log(eps));
            r.compression_constant = std::max(r.compression_constant, w * neg);
        }
    }
    r.M2 = sup0 + sup1;
    r.rarefactive = riemann::classify_initial_datum(s, p).rarefactive;

    // far field and window means over [-l, l]
    const double target = 1 + 0.5 * (spec.v_pm - 1);
    bool ends = std::abs(s.v.front() - spec.v_pm) <= 1e-3 * (spec.v_pm - 1) &&
                std::abs(s.v.back() - spec.v_pm) <= 1e-3 * (spec.v_pm - 1);
    const double lmax = std::min(-g.x0, g.x_end());
    r.ell_star = kInf;
    r.v_under = kInf;
    if (lmax > 0) {
        Primitive P(g, s.v);
        std::vector<double> ls, means;
        for (double l = g.dx; l <= lmax + 1e-12; l += g.dx) {
            double le = std::min(l, lmax);
            ls.push_back(le);
            means.push_back((P(le) - P(-le)) / (2 * le));
        }
        // smallest l after which every mean stays above target
        std::size_t k = ls.size();
        while (k > 0 && means[k - 1] >= target) --k;
        if (k < ls.size()) {
            r.ell_star = ls[k];
            r.v_under = *std::min_element(means.begin() + static_cast<long>(k), means.end());
        }
    }

    r.checks.push_back({"congestion_floor", r.M1 <= spec.M1 * (1 + 1e-9), r.M1, spec.M1});
    r.checks.push_back({"bounded_c1", r.M2 <= spec.M2_cap, r.M2, spec.M2_cap});
    r.checks.push_back({"riccati_upper", std::isfinite(r.Y0) && std::isfinite(r.Q0), std::max(r.Y0, r.Q0), kInf});
    r.checks.push_back({"compression_near_congestion", r.compression_constant <= spec.compression_cap,
                        r.compression_constant, spec.compression_cap});
    r.checks.push_back({"far_field_volume", ends && std::isfinite(r.ell_star) && r.v_under > 1,
                        std::isfinite(r.v_under) ? r.v_under : 0.0, 1.0});
    return r;
}

Prepared well_prepared_initial(const InitialProfileSpec& s, const PressureParams& p, const Grid& g) {
    Prepared out{lagrangian_initial(s, p, g), {}};
    out.report = verify_assumptions(out.state, p, s);
    for (const auto& c : out.report.checks) {
        if (!c.pass) {
            std::ostringstream os;
            os << "initial data rejected: assumption " << c.name << " violated (measured " << c.value << ", limit "
               << c.limit << ")";
            throw ValidationError(os.str());
        }
    }
    return out;
}

FitResult scaling_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ValidationError("fit needs matching x and y lists");
    if (xs.size() < 3) throw ValidationError("fit requires ≥ 3 points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0) || !(ys[i] > 0)) throw ValidationError("fit needs positive values");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0)) throw ValidationError("fit needs distinct x values");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double res = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (f.intercept + f.slope * lx[i]);
        res += e * e;
    }
    f.r2 = syy > 0 ? std::clamp(1 - res / syy, 0.0, 1.0) : 1.0;
    return f;
}

double pressure_l1(const LagrangianTrajectory& traj, double L, const PressureParams& p) {
    return space_time(traj, L, [&](double v) { return eos::pressure_lagrangian(eos::Excess{v - 1}, p).total; });
}

double exclusion_residual(const LagrangianTrajectory& traj, double L, const PressureParams& p, double q) {
    if (!(q >= 1)) throw ValidationError("norm exponent must be at least 1");
    double r = space_time(traj, L, [&](double v) { return std::pow(p.epsilon / std::pow(v - 1, p.gamma - 1), q); });
    return std::pow(r, 1 / q);
}

Incompressibility incompressibility_diagnostic(const LagrangianTrajectory& traj, const PressureParams&, double band) {
    Incompressibility r{0.0, 0.0};
    std::vector<double> meas(traj.size(), 0.0);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        Field du = k > 0 ? kernels::gradient(s.u, s.grid.dx, kernels::Backend::Serial) : Field{};
        for (std::size_t i = 0; i < s.v.size(); ++i) {
            if (s.v[i] - 1 < band) {
                meas[k] += s.grid.dx;
                if (k > 0) r.sup_dxu = std::max(r.sup_dxu, std::abs(du[i]));
            }
        }
    }
    for (std::size_t k = 1; k < meas.size(); ++k) r.congested_measure += 0.5 * (traj.t[k] - traj.t[k - 1]) * (meas[k] + meas[k - 1]);
    return r;
}

namespace {

// node positions in the other frame, plus the transformed fields on those nodes
struct Mapped {
    Field X, a, b;
};

Mapped to_mass(const EulerianState& s, double rho_floor, double mass_origin) {
    const std::size_t n = s.rho.size();
    Mapped r{Field(n), Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.rho[i] > rho_floor)) {
            std::ostringstream os;
            os << "vacuum at cell " << i << " (rho = " << s.rho[i] << ")";
            throw DomainError(os.str());
        }
        r.a[i] = 1.0 / s.rho[i];
        r.b[i] = s.m[i] / s.rho[i];
        r.X[i] = i == 0 ? mass_origin : r.X[i - 1] + 0.5 * s.grid.dx * (s.rho[i - 1] + s.rho[i]);
    }
    return r;
}

Mapped to_space(const LagrangianState& s, double x0) {
    const std::size_t n = s.v.size();
    Mapped r{Field(n), Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        r.a[i] = 1.0 / s.v[i];
        r.b[i] = s.u[i] / s.v[i];
        r.X[i] = i == 0 ? x0 : r.X[i - 1] + 0.5 * s.grid.dx * (s.v[i - 1] + s.v[i]);
    }
    return r;
}

// one grid for every snapshot: the span all of them cover
Grid common_span(const std::vector<Mapped>& ms) {
    double lo = -kInf, hi = kInf;
    for (const auto& m : ms) {
        lo = std::max(lo, m.X.front());
        hi = std::min(hi, m.X.back());
    }
    return Grid::span(lo, hi, ms.front().X.size());
}

}  // namespace

LagrangianState eulerian_to_lagrangian(const EulerianState& s, double rho_floor, double mass_origin) {
    Mapped m = to_mass(s, rho_floor, mass_origin);
    Grid g = Grid::span(m.X.front(), m.X.back(), m.X.size());
    return {g, resample(m.X, m.a, g), resample(m.X, m.b, g)};
}

EulerianState lagrangian_to_eulerian(const LagrangianState& s, double x0) {
    Mapped m = to_space(s, x0);
    Grid g = Grid::span(m.X.front(), m.X.back(), m.X.size());
    return {g, resample(m.X, m.a, g), resample(m.X, m.b, g)};
}

LagrangianTrajectory eulerian_to_lagrangian(const EulerianTrajectory& traj, double rho_floor, double mass_origin) {
    LagrangianTrajectory out;
    out.params = traj.params;
    out.mu = traj.mu;
    out.t = traj.t;
    std::vector<Mapped> ms;
    for (const auto& st : traj.states) ms.push_back(to_mass(st, rho_floor, mass_origin));
    const Grid g = common_span(ms);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out.states.push_back({g, resample(ms[k].X, ms[k].a, g), resample(ms[k].X, ms[k].b, g)});
        SnapshotDiagnostics d = k < traj.diag.size() ? traj.diag[k] : SnapshotDiagnostics{};
        const auto& s = out.states.back();
        d.mass = 0;
        for (double v : s.v) d.mass += v * s.grid.dx;
        d.extreme = *std::min_element(s.v.begin(), s.v.end());
        out.diag.push_back(d);
    }
    return out;
}

EulerianTrajectory lagrangian_to_eulerian(const LagrangianTrajectory& traj, double x0) {
    EulerianTrajectory out;
    out.params = traj.params;
    out.mu = traj.mu;
    out.t = traj.t;
    std::vector<Mapped> ms;
    for (const auto& st : traj.states) ms.push_back(to_space(st, x0));
    const Grid g = common_span(ms);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out.states.push_back({g, resample(ms[k].X, ms[k].a, g), resample(ms[k].X, ms[k].b, g)});
        SnapshotDiagnostics d = k < traj.diag.size() ? traj.diag[k] : SnapshotDiagnostics{};
        const auto& s = out.states.back();
        d.mass = 0;
        for (double r : s.rho) d.mass += r * s.grid.dx;
        d.extreme = *std::max_element(s.rho.begin(), s.rho.end());
        out.diag.push_back(d);
    }
    return out;
}

double relative_resolution(const LagrangianState& s) {
    Field dv = kernels::gradient(s.v, s.grid.dx, kernels::Backend::Serial);
    double r = 0;
    for (std::size_t i = 0; i < dv.size(); ++i) r = std::max(r, s.grid.dx * std::abs(dv[i]) / (s.v[i] - 1));
    return r;
}

double relative_resolution(const EulerianState& s) {
    Field dr = kernels::gradient(s.rho, s.grid.dx, kernels::Backend::Serial);
    double r = 0;
    for (std::size_t i = 0; i < dr.size(); ++i)
        r = std::max(r, s.grid.dx * std::abs(dr[i]) / std::min(s.rho[i], 1 - s.rho[i]));
    return r;
}

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::MaxDensity: return "MaxDensity";
        case Experiment::Blowup: return "Blowup";
        case Experiment::Exclusion: return "Exclusion";
        case Experiment::PressureL1: return "PressureL1";
        case Experiment::Incompressibility: return "Incompressibility";
    }
    return "?";
}

Experiment experiment_from_string(const std::string& s) {
    for (Experiment e : {Experiment::MaxDensity, Experiment::Blowup, Experiment::Exclusion, Experiment::PressureL1,
                         Experiment::Incompressibility})
        if (to_string(e) == s) return e;
    throw ValidationError("unknown experiment '" + s + "'");
}

namespace {

struct RunOut {
    EpsilonRecord rec;
    LagrangianTrajectory lag;
    EulerianTrajectory eul;
    bool rarefactive = false;
    bool broke_down = false;
    std::string mode;
    double max_gradient = 0.0;
};

void add_fit(ExperimentReport& rep, const std::string& name, const std::vector<double>& xs,
             const std::vector<double>& ys) {
    FitResult f = scaling_fit(xs, ys);
    rep.fits.push_back({name, f.slope, f.intercept, f.r2});
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

SweepResult epsilon_sweep(const SweepConfig& cfg, const std::vector<double>& eps_list, Experiment e, int workers) {
    if (eps_list.size() < 3) throw ValidationError("fit requires ≥ 3 points");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0)) throw ValidationError("every epsilon must be positive");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw ValidationError("epsilon list must be strictly decreasing");
    }
    const bool eulerian = e == Experiment::MaxDensity;
    const std::size_t N = eps_list.size();

    // build and guard every initial datum before any run starts
    std::vector<LagrangianState> lag0(N);
    std::vector<EulerianState> eul0(N);
    std::vector<ojson> assumptions(N);
    for (std::size_t k = 0; k < N; ++k) {
        PressureParams p = cfg.params;
        p.epsilon = eps_list[k];
        double res;
        if (eulerian) {
            hsp::validate(p, ParamMode::Weak);
            eul0[k] = eulerian_initial(cfg.profile, p, cfg.viscous.grid);
            res = relative_resolution(eul0[k]);
        } else {
            hsp::validate(p, ParamMode::Smooth);
            if (cfg.require_well_prepared) {
                Prepared pr = well_prepared_initial(cfg.profile, p, cfg.smooth.grid);
                lag0[k] = std::move(pr.state);
                assumptions[k] = pr.report.to_json();
            } else {
                lag0[k] = lagrangian_initial(cfg.profile, p, cfg.smooth.grid);
                assumptions[k] = verify_assumptions(lag0[k], p, cfg.profile).to_json();
            }
            res = relative_resolution(lag0[k]);
        }
        if (res > cfg.c_guard) {
            std::ostringstream os;
            os << "resolution guard: dx |d_x log(v0 - 1)| = " << res << " > c_guard = " << cfg.c_guard
               << " at epsilon = " << eps_list[k];
            throw ValidationError(os.str());
        }
    }

    std::vector<RunOut> out(N);
    std::vector<std::exception_ptr> errs(N);
    const long nrun = static_cast<long>(N);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (long kk = 0; kk < nrun; ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        try {
            PressureParams p = cfg.params;
            p.epsilon = eps_list[k];
            RunOut& o = out[k];
            o.rec.epsilon = p.epsilon;
            if (eulerian) {
                viscous::Config vc = cfg.viscous;
                vc.params = p;
                o.eul = viscous::run(vc, eul0[k].rho, eul0[k].m);
                double mx = 0;
                for (const auto& d : o.eul.diag) mx = std::max(mx, d.peak);
                o.rec.max_rho = mx;
                o.rec.mu = vc.mu;
                o.rec.extra["one_minus_max_rho"] = 1 - mx;
                o.rec.extra["margin_min"] = std::min_element(o.eul.diag.begin(), o.eul.diag.end(), [](auto& a, auto& b) {
                                                return a.margin < b.margin;
                                            })->margin;
            } else {
                psystem::SmoothConfig sc = cfg.smooth;
                sc.params = p;
                const auto& s0 = lag0[k];
                auto res = psystem::run_smooth(sc, s0.v, s0.u);
                o.lag = std::move(res.traj);
                double mn = kInf;
                for (const auto& d : o.lag.diag) {
                    mn = std::min(mn, d.extreme);
                    o.max_gradient = std::max(o.max_gradient, d.max_gradient);
                }
                o.rec.min_v = mn;
                o.rarefactive = riemann::classify_initial_datum(s0, p).rarefactive;
                if (res.breakdown) {
                    o.broke_down = true;
                    o.mode = psystem::to_string(res.breakdown->mode);
                    o.rec.t_star_numeric = res.breakdown->t_star_numeric;
                    o.rec.extra["t_last_good"] = res.breakdown->t_last_good;
                    o.rec.extra["breakdown_mode"] = o.mode;
                    o.rec.extra["breakdown_x"] = s0.grid.x(res.breakdown->location);
                }
                auto lb = psystem::blowup_lower_bound(s0, p);
                if (std::isfinite(lb.t)) o.rec.t_star_lower_bound = lb.t;
                o.rec.extra["K2"] = lb.K2;
                o.rec.extra["max_gradient"] = o.max_gradient;
                o.rec.extra["t_window"] = o.lag.t.back();
                o.rec.pressure_L1 = pressure_l1(o.lag, cfg.window_L, p);
                o.rec.exclusion_residual = exclusion_residual(o.lag, cfg.window_L, p);
                o.rec.extra["exclusion_residual_Lq"] = exclusion_residual(o.lag, cfg.window_L, p, p.gamma / (p.gamma - 1));
                double v0min = *std::min_element(s0.v.begin(), s0.v.end());
                double band = cfg.band_factor * (v0min - 1);
                auto inc = incompressibility_diagnostic(o.lag, p, band);
                o.rec.congested_measure = inc.congested_measure;
                o.rec.incompressibility_sup = inc.sup_dxu;
                o.rec.extra["band"] = band;
                if (e == Experiment::Blowup && o.broke_down) {
                    auto pr = psystem::predict_blowup_time(o.lag, 4);
                    o.rec.extra["t_star_predicted"] = pr.t_star;
                    o.rec.extra["prediction_status"] = psystem::to_string(pr.status);
                }
                o.rec.extra["assumptions"] = assumptions[k];
            }
        } catch (...) {
            errs[k] = std::current_exception();
        }
    }
    for (auto& x : errs)
        if (x) std::rethrow_exception(x);

    SweepResult sr;
    ExperimentReport& rep = sr.report;
    rep.experiment = to_string(e);
    for (auto& o : out) rep.records.push_back(o.rec);
    const double g = cfg.params.gamma, tol = cfg.slope_tolerance;
    std::vector<double> eps(eps_list.begin(), eps_list.end()), ys;

    switch (e) {
        case Experiment::MaxDensity: {
            for (auto& o : out) ys.push_back(1 - *o.rec.max_rho);
            add_fit(rep, "one_minus_max_rho", eps, ys);
            const double want = 1 / (g - 1);
            rep.flags.push_back({"max_density_slope", std::abs(rep.fits.back().slope - want) <= tol,
                                 "slope " + fmt(rep.fits.back().slope) + ", expected " + fmt(want) + " +- " + fmt(tol)});
            break;
        }
        case Experiment::Blowup: {
            bool all_raref = true, none = true, all_grad = true, above = true;
            double min_t = kInf, max_lb = 0, gmin = kInf, gmax = 0;
            for (auto& o : out) {
                all_raref = all_raref && o.rarefactive;
                none = none && !o.broke_down;
                all_grad = all_grad && o.broke_down && o.mode == "GradientBlowup";
                gmin = std::min(gmin, o.max_gradient);
                gmax = std::max(gmax, o.max_gradient);
                if (o.rec.t_star_numeric) min_t = std::min(min_t, *o.rec.t_star_numeric);
                if (o.rec.t_star_lower_bound) {
                    max_lb = std::max(max_lb, *o.rec.t_star_lower_bound);
                    if (o.rec.t_star_numeric && *o.rec.t_star_numeric < *o.rec.t_star_lower_bound) above = false;
                }
            }
            if (all_raref) {
                rep.flags.push_back({"no_breakdown", none, none ? "no breakdown" : "breakdown on rarefactive data"});
                rep.flags.push_back({"gradient_envelope", gmax < 2 * gmin, "max/min of max gradient = " + fmt(gmax / gmin)});
                add_fit(rep, "max_gradient", eps, [&] {
                    std::vector<double> v;
                    for (auto& o : out) v.push_back(o.max_gradient);
                    return v;
                }());
            } else {
                rep.flags.push_back({"breakdown_every_eps", all_grad, "GradientBlowup in every run required"});
                rep.flags.push_back({"above_lower_bound", above, "t_star_numeric >= lower bound in every run"});
                rep.flags.push_back({"uniform_existence", all_grad && min_t >= cfg.lower_bound_fraction * max_lb,
                                     "min t* = " + fmt(min_t) + ", " + fmt(cfg.lower_bound_fraction) +
                                         " x max lower bound = " + fmt(cfg.lower_bound_fraction * max_lb)});
                if (all_grad) {
                    for (auto& o : out) ys.push_back(*o.rec.t_star_numeric);
                    add_fit(rep, "t_star_numeric", eps, ys);
                }
            }
            break;
        }
        case Experiment::Exclusion: {
            for (auto& o : out) ys.push_back(*o.rec.exclusion_residual);
            add_fit(rep, "exclusion_residual", eps, ys);
            const double want = 1 / g - tol;
            rep.flags.push_back({"exclusion_slope", rep.fits.back().slope >= want,
                                 "slope " + fmt(rep.fits.back().slope) + ", required >= " + fmt(want)});
            break;
        }
        case Experiment::PressureL1: {
            for (auto& o : out) ys.push_back(*o.rec.pressure_L1);
            add_fit(rep, "pressure_L1", eps, ys);
            rep.flags.push_back({"pressure_uniform", std::abs(rep.fits.back().slope) <= tol,
                                 "slope " + fmt(rep.fits.back().slope) + ", expected 0 +- " + fmt(tol)});
            break;
        }
        case Experiment::Incompressibility: {
            bool mono = true;
            std::string detail;
            for (std::size_t k = 1; k < N; ++k) {
                double a = *out[k - 1].rec.incompressibility_sup, b = *out[k].rec.incompressibility_sup;
                if (b > (1 + cfg.noise_tolerance) * a) mono = false;
                detail += (k > 1 ? ", " : "") + fmt(b / a);
            }
            rep.flags.push_back({"sup_dxu_nonincreasing", mono, "successive ratios " + detail});
            rep.flags.push_back({"congested_set_nonempty", *out.back().rec.congested_measure > 0,
                                 "measure " + fmt(*out.back().rec.congested_measure) + " at smallest epsilon"});
            bool pos = true;
            for (auto& o : out) pos = pos && *o.rec.incompressibility_sup > 0;
            if (pos) {
                for (auto& o : out) ys.push_back(*o.rec.incompressibility_sup);
                add_fit(rep, "incompressibility_sup", eps, ys);
            }
            break;
        }
    }
    for (auto& o : out) {
        sr.lagrangian.push_back(std::move(o.lag));
        sr.eulerian.push_back(std::move(o.eul));
    }
    return sr;
}

}  // namespace hsp::limits
