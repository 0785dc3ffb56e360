#include "hsp/psystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsp/errors.hpp"
#include "hsp/riemann.hpp"

namespace hsp::psystem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Scan {
    double max_gradient = 0.0;
    std::size_t grad_at = 0;
    double min_excess = kInf;
    std::size_t min_at = 0;
    bool finite = true;
};

Scan scan(const LagrangianState& s, kernels::Backend b) {
    Scan r;
    Field gv = kernels::gradient(s.v, s.grid.dx, b), gu = kernels::gradient(s.u, s.grid.dx, b);
    for (std::size_t i = 0; i < s.v.size(); ++i) {
        if (!std::isfinite(s.v[i]) || !std::isfinite(s.u[i])) r.finite = false;
        double g = std::max(std::abs(gv[i]), std::abs(gu[i]));
        if (g > r.max_gradient || std::isnan(g)) {
            r.max_gradient = std::isnan(g) ? kInf : g;
            r.grad_at = i;
        }
        double e = s.v[i] - 1.0;
        if (e < r.min_excess) {
            r.min_excess = e;
            r.min_at = i;
        }
    }
    return r;
}

SnapshotDiagnostics diagnose(const LagrangianState& s, const Scan& sc, double bound_excess, double dt) {
    SnapshotDiagnostics d;
    d.margin = sc.min_excess - bound_excess;
    for (double v : s.v) d.mass += v * s.grid.dx;
    d.extreme = 1.0 + sc.min_excess;
    d.max_gradient = sc.max_gradient;
    d.dt = dt;
    return d;
}

void rhs(const SmoothConfig& c, const Field& v, const Field& u, Field& dv, Field& du) {
    Field vg = kernels::pad(v, 2, c.boundary), ug = kernels::pad(u, 2, c.boundary);
    if (c.backend == kernels::Backend::Serial)
        kernels::serial::psystem_rhs(c.params, vg, ug, c.grid.dx, dv, du);
    else
        kernels::omp::psystem_rhs(c.params, vg, ug, c.grid.dx, dv, du);
}

LagrangianState rk4(const SmoothConfig& c, const LagrangianState& s, double dt) {
    const std::size_t n = s.v.size();
    Field k1v(n), k1u(n), k2v(n), k2u(n), k3v(n), k3u(n), k4v(n), k4u(n), tv(n), tu(n);
    rhs(c, s.v, s.u, k1v, k1u);
    for (std::size_t i = 0; i < n; ++i) tv[i] = s.v[i] + 0.5 * dt * k1v[i], tu[i] = s.u[i] + 0.5 * dt * k1u[i];
    rhs(c, tv, tu, k2v, k2u);
    for (std::size_t i = 0; i < n; ++i) tv[i] = s.v[i] + 0.5 * dt * k2v[i], tu[i] = s.u[i] + 0.5 * dt * k2u[i];
    rhs(c, tv, tu, k3v, k3u);
    for (std::size_t i = 0; i < n; ++i) tv[i] = s.v[i] + dt * k3v[i], tu[i] = s.u[i] + dt * k3u[i];
    rhs(c, tv, tu, k4v, k4u);
    LagrangianState out{s.grid, Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.v[i] = s.v[i] + dt / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
        out.u[i] = s.u[i] + dt / 6 * (k1u[i] + 2 * k2u[i] + 2 * k3u[i] + k4u[i]);
    }
    return out;
}

double max_c(const LagrangianState& s, const PressureParams& p, kernels::Backend b) {
    return b == kernels::Backend::Serial ? kernels::serial::max_sound_speed(s.v, p) : kernels::omp::max_sound_speed(s.v, p);
}

}  // namespace

void validate(const SmoothConfig& c) {
    hsp::validate(c.params, ParamMode::Smooth);
    if (c.grid.n < 16) throw ValidationError("grid needs at least 16 points");
    if (!(c.grid.dx > 0)) throw ValidationError("dx must be positive");
    if (!(c.t_end > 0)) throw ValidationError("t_end must be positive");
    if (!(c.cfl_safety > 0 && c.cfl_safety <= 1.5)) throw ValidationError("cfl_safety must lie in (0,1.5]");
    if (!(c.gradient_growth > 1)) throw ValidationError("gradient_growth must exceed 1");
    if (!(c.v_floor_margin > 0 && c.v_floor_margin < 1)) throw ValidationError("v_floor_margin must lie in (0,1)");
    if (c.snapshots < 1) throw ValidationError("snapshots must be at least 1");
}

std::string to_string(BreakdownMode m) {
    switch (m) {
        case BreakdownMode::GradientBlowup: return "GradientBlowup";
        case BreakdownMode::FloorViolation: return "FloorViolation";
        case BreakdownMode::DtUnderflow: return "DtUnderflow";
    }
    return "?";
}

std::string to_string(PredictionStatus s) {
    switch (s) {
        case PredictionStatus::NoBlowup: return "NoBlowup";
        case PredictionStatus::Reached: return "Reached";
        case PredictionStatus::Extrapolated: return "Extrapolated";
    }
    return "?";
}

Thresholds resolve_thresholds(const SmoothConfig& c, const LagrangianState& s0) {
    Scan sc = scan(s0, c.backend);
    auto [vlo, vhi] = std::minmax_element(s0.v.begin(), s0.v.end());
    auto [ulo, uhi] = std::minmax_element(s0.u.begin(), s0.u.end());
    double osc = std::max(*vhi - *vlo, *uhi - *ulo);
    double g = sc.max_gradient > 0 ? c.gradient_growth * sc.max_gradient : kInf;
    if (c.grid_cap && osc > 0 && sc.max_gradient > 0) g = std::min(g, std::sqrt(sc.max_gradient * osc / c.grid.dx));
    auto bound = riemann::RegionBound::from_initial(s0, c.params);
    double ex = riemann::min_volume_excess(bound, c.params);
    return {g, c.v_floor_margin * ex, 1e-10 * c.t_end};
}

SmoothResult run_smooth(const SmoothConfig& c, const Field& v0, const Field& u0) {
    validate(c);
    if (v0.size() != c.grid.n || u0.size() != c.grid.n) throw ValidationError("initial fields do not match the grid");
    for (std::size_t i = 0; i < v0.size(); ++i) {
        if (!(v0[i] > 1) || !std::isfinite(v0[i])) throw ValidationError("initial volume must exceed 1 at cell " + std::to_string(i));
        if (!std::isfinite(u0[i])) throw ValidationError("initial velocity not finite at cell " + std::to_string(i));
    }
    LagrangianState s{c.grid, v0, u0};
    SmoothResult res;
    res.thresholds = resolve_thresholds(c, s);
    const Thresholds& th = res.thresholds;
    const double bound_excess = th.v_excess_floor / c.v_floor_margin;
    auto& traj = res.traj;
    traj.params = c.params;

    auto push = [&](double t, const LagrangianState& st, const Scan& sc, double dt) {
        traj.t.push_back(t);
        traj.states.push_back(st);
        traj.diag.push_back(diagnose(st, sc, bound_excess, dt));
    };
    push(0.0, s, scan(s, c.backend), 0.0);

    double t = 0.0, last_dt = 0.0;
    for (std::size_t k = 1; k <= c.snapshots; ++k) {
        const double target = c.t_end * static_cast<double>(k) / static_cast<double>(c.snapshots);
        while (t < target) {
            double dt = std::min(c.cfl_safety * c.grid.dx / max_c(s, c.params, c.backend), target - t);
            LagrangianState next;
            Scan sc;
            for (;;) {
                if (!(dt >= th.dt_min)) {
                    Scan s0 = scan(s, c.backend);
                    if (traj.t.back() < t) push(t, s, s0, dt);
                    else traj.diag.back().dt = dt;
                    res.breakdown = BreakdownRecord{t, t, s0.min_at, BreakdownMode::DtUnderflow, s};
                    return res;
                }
                next = rk4(c, s, dt);
                sc = scan(next, c.backend);
                if (sc.finite && sc.min_excess > 0) break;
                dt *= 0.5;
            }
            const double t_new = (dt == target - t) ? target : t + dt;
            std::optional<BreakdownMode> mode;
            std::size_t at = 0;
            if (sc.max_gradient > th.gradient) mode = BreakdownMode::GradientBlowup, at = sc.grad_at;
            else if (sc.min_excess < th.v_excess_floor) mode = BreakdownMode::FloorViolation, at = sc.min_at;
            if (mode) {
                if (traj.t.back() < t) push(t, s, scan(s, c.backend), last_dt);
                push(t_new, next, sc, dt);
                res.breakdown = BreakdownRecord{t_new, t, at, *mode, s};
                return res;
            }
            s = std::move(next);
            t = t_new;
            last_dt = dt;
        }
        push(target, s, scan(s, c.backend), last_dt);
    }
    return res;
}

std::optional<BreakdownRecord> detect_breakdown(const LagrangianTrajectory& traj, const Thresholds& th) {
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& d = traj.diag[k];
        std::optional<BreakdownMode> mode;
        std::size_t at = 0;
        Scan sc = scan(traj.states[k], kernels::Backend::Serial);
        if (d.max_gradient > th.gradient) mode = BreakdownMode::GradientBlowup, at = sc.grad_at;
        else if (d.extreme - 1.0 < th.v_excess_floor) mode = BreakdownMode::FloorViolation, at = sc.min_at;
        else if (k > 0 && d.dt > 0 && d.dt < th.dt_min) mode = BreakdownMode::DtUnderflow, at = sc.min_at;
        if (mode) {
            std::size_t g = k > 0 && *mode != BreakdownMode::DtUnderflow ? k - 1 : k;
            return BreakdownRecord{traj.t[k], traj.t[g], at, *mode, traj.states[g]};
        }
    }
    return std::nullopt;
}

Field riccati_coefficient_field(const LagrangianState& s, const PressureParams& p) {
    Field a(s.v.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = eos::riccati_coefficient(s.v[i], p);
    return a;
}

namespace {

// cubic Lagrange through the four nodes around x; linear if the cubic leaves v > 1
bool sample(const LagrangianState& s, double x, double& v) {
    const Grid& g = s.grid;
    const double f = (x - g.x0) / g.dx;
    if (!(f >= 0 && f <= static_cast<double>(g.n - 1))) return false;
    long i = static_cast<long>(std::floor(f));
    const long n = static_cast<long>(g.n);
    if (i >= n - 1) i = n - 2;
    const double r = f - static_cast<double>(i);
    long j0 = std::clamp(i - 1, 0L, n - 4);
    double acc = 0.0;
    for (long j = j0; j < j0 + 4; ++j) {
        double w = 1.0;
        for (long m = j0; m < j0 + 4; ++m)
            if (m != j) w *= (f - static_cast<double>(m)) / static_cast<double>(j - m);
        acc += w * s.v[j];
    }
    const double lin = (1 - r) * s.v[i] + r * s.v[i + 1];
    v = (std::isfinite(acc) && acc > 1.0) ? acc : lin;
    return v > 1.0;
}

struct Field2 {
    const LagrangianTrajectory& traj;
    std::size_t k;  // interval [t_k, t_k+1]

    bool v_at(double t, double x, double& v) const {
        const double t0 = traj.t[k], t1 = traj.t[k + 1];
        const double th = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
        double a, b;
        if (!sample(traj.states[k], x, a) || !sample(traj.states[k + 1], x, b)) return false;
        v = (1 - th) * a + th * b;
        return v > 1.0;
    }
};

}  // namespace

Trace trace_characteristic(const LagrangianTrajectory& traj, double x_star, Direction dir, std::size_t substeps) {
    if (traj.size() == 0) throw ValidationError("empty trajectory");
    const PressureParams& p = traj.params;
    const double sgn = dir == Direction::Forward ? 1.0 : -1.0;
    Trace tr;
    double v;
    if (!sample(traj.states[0], x_star, v)) {
        tr.truncated = true;
        return tr;
    }
    tr.t.push_back(traj.t[0]);
    tr.x.push_back(x_star);
    tr.a_integral.push_back(0.0);
    double x = x_star, A = 0.0;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        const double t0 = traj.t[k], t1 = traj.t[k + 1];
        if (!(t1 > t0)) continue;
        std::size_t m = substeps;
        if (m == 0) {
            const auto& st = traj.states[k];
            double cm = kernels::serial::max_sound_speed(st.v, p);
            m = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((t1 - t0) * cm / st.grid.dx)));
        }
        const double h = (t1 - t0) / static_cast<double>(m);
        Field2 fld{traj, k};
        auto f = [&](double t, double xx, double& dx, double& da) {
            double vv;
            if (!fld.v_at(t, xx, vv)) return false;
            dx = sgn * eos::sound_speed(vv, p);
            da = eos::riccati_coefficient(vv, p);
            return std::isfinite(dx) && std::isfinite(da);
        };
        for (std::size_t j = 0; j < m; ++j) {
            const double t = t0 + static_cast<double>(j) * h;
            double x1, a1, x2, a2, x3, a3, x4, a4;
            bool ok = f(t, x, x1, a1) && f(t + h / 2, x + h / 2 * x1, x2, a2) && f(t + h / 2, x + h / 2 * x2, x3, a3) &&
                      f(t + h, x + h * x3, x4, a4);
            if (!ok) {
                tr.truncated = true;
                return tr;
            }
            x += h / 6 * (x1 + 2 * x2 + 2 * x3 + x4);
            A += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
            tr.t.push_back(j + 1 == m ? t1 : t + h);
            tr.x.push_back(x);
            tr.a_integral.push_back(A);
        }
    }
    return tr;
}

namespace {

// time at which the trace's integral reaches target; false if it never does
Prediction cross(const LagrangianTrajectory& traj, const Trace& tr, double target) {
    Prediction pr{kInf, PredictionStatus::Reached};
    for (std::size_t j = 1; j < tr.t.size(); ++j) {
        if (tr.a_integral[j] >= target) {
            double a0 = tr.a_integral[j - 1], a1 = tr.a_integral[j];
            double r = a1 > a0 ? (target - a0) / (a1 - a0) : 1.0;
            pr.t_star = tr.t[j - 1] + r * (tr.t[j] - tr.t[j - 1]);
            pr.accumulated = target;
            return pr;
        }
    }
    // ran out of trajectory: continue with the last value of a
    pr.status = PredictionStatus::Extrapolated;
    if (tr.t.empty()) return pr;
    const double A = tr.a_integral.back();
    pr.accumulated = A;
    double a_last = 0.0;
    const std::size_t j = tr.t.size() - 1;
    if (j > 0) a_last = (tr.a_integral[j] - tr.a_integral[j - 1]) / (tr.t[j] - tr.t[j - 1]);
    else {
        double v;
        if (sample(traj.states[0], tr.x[0], v)) a_last = eos::riccati_coefficient(v, traj.params);
    }
    if (a_last > 0) pr.t_star = tr.t.back() + (target - A) / a_last;
    return pr;
}

}  // namespace

Prediction predict_blowup_time(const LagrangianTrajectory& traj, std::size_t stride) {
    if (traj.size() == 0) throw ValidationError("empty trajectory");
    if (stride == 0) stride = 1;
    const auto& s0 = traj.states[0];
    const auto ric = riemann::riccati_variables(s0, traj.params, kernels::Backend::Serial);
    const long n = static_cast<long>(s0.v.size());
    Prediction best{kInf, PredictionStatus::NoBlowup};
    std::vector<Prediction> found(static_cast<std::size_t>(n), best);
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; i += static_cast<long>(stride)) {
        Prediction loc{kInf, PredictionStatus::NoBlowup};
        const double x = s0.grid.x(static_cast<std::size_t>(i));
        for (Direction d : {Direction::Forward, Direction::Backward}) {
            const double r0 = d == Direction::Forward ? ric.y[i] : ric.q[i];
            if (!(r0 < 0)) continue;
            Trace tr = trace_characteristic(traj, x, d);
            Prediction pr = cross(traj, tr, -1.0 / r0);
            pr.x_star = x;
            pr.direction = d;
            pr.riccati0 = r0;
            if (pr.t_star < loc.t_star || loc.status == PredictionStatus::NoBlowup) loc = pr;
        }
        found[static_cast<std::size_t>(i)] = loc;
    }
    for (const auto& pr : found)
        if (pr.status != PredictionStatus::NoBlowup && (best.status == PredictionStatus::NoBlowup || pr.t_star < best.t_star))
            best = pr;
    return best;
}

Prediction predict_blowup_time(const LagrangianState& s0, const PressureParams& p) {
    const auto ric = riemann::riccati_variables(s0, p, kernels::Backend::Serial);
    Prediction best{kInf, PredictionStatus::NoBlowup};
    for (std::size_t i = 0; i < s0.v.size(); ++i) {
        const double a = eos::riccati_coefficient(s0.v[i], p);
        for (Direction d : {Direction::Forward, Direction::Backward}) {
            const double r0 = d == Direction::Forward ? ric.y[i] : ric.q[i];
            if (!(r0 < 0)) continue;
            const double t = -1.0 / (a * r0);
            if (t < best.t_star) best = Prediction{t, PredictionStatus::Reached, s0.grid.x(i), d, r0, -1.0 / r0};
        }
    }
    return best;
}

LowerBound blowup_lower_bound(const LagrangianState& s0, const PressureParams& p, double v_hi_factor) {
    LowerBound lb{kInf, 0.0, eos::blowup_exponent(p.gamma), 0.0, 0.0};
    const auto ric = riemann::riccati_variables(s0, p, kernels::Backend::Serial);
    double worst = 0.0;
    for (std::size_t i = 0; i < s0.v.size(); ++i) {
        double m = std::max(-ric.y[i], -ric.q[i]);
        if (m > worst) worst = m, lb.argmin = i;
    }
    const auto bound = riemann::RegionBound::from_initial(s0, p);
    const double d_lo = riemann::min_volume_excess(bound, p);
    const double d_hi = v_hi_factor * *std::max_element(s0.v.begin(), s0.v.end()) - 1.0;
    lb.v_lo = 1.0 + d_lo;
    lb.v_hi = 1.0 + d_hi;
    const double scale = std::pow(p.epsilon, lb.beta);
    constexpr int kSamples = 4001;
    const double l0 = std::log(d_lo), l1 = std::log(d_hi);
    for (int j = 0; j < kSamples; ++j) {
        double d = std::exp(l0 + (l1 - l0) * j / (kSamples - 1));
        lb.K2 = std::max(lb.K2, eos::riccati_coefficient(eos::Excess{d}, p) * scale);
    }
    if (worst > 0) lb.t = scale / (lb.K2 * worst);
    return lb;
}

}  // namespace hsp::psystem
