#include "hsp/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "hsp/entropy.hpp"
#include "hsp/errors.hpp"
#include "hsp/riemann.hpp"

namespace hsp::viscous {

void validate(const Config& c) {
    hsp::validate(c.params, ParamMode::Weak);
    if (!(c.mu > 0)) throw ValidationError("mu must be positive");
    if (!(c.cfl_safety > 0 && c.cfl_safety < 1)) throw ValidationError("cfl_safety must lie in (0,1)");
    if (c.grid.n < 16) throw ValidationError("grid needs at least 16 points");
    if (!(c.grid.dx > 0)) throw ValidationError("dx must be positive");
    if (!(c.t_end > 0)) throw ValidationError("t_end must be positive");
    if (c.snapshots < 1) throw ValidationError("snapshots must be at least 1");
}

Mollified mollify_initial(const Field& rho0, const Field& m0, double mu, const Grid& grid, double floor_scale,
                          Boundary b) {
    const std::size_t n = rho0.size();
    if (m0.size() != n || n != grid.n) throw ValidationError("initial fields do not match the grid");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho0[i] >= 0 && rho0[i] < 1)) throw ValidationError("initial density outside [0,1) at cell " + std::to_string(i));
        if (rho0[i] == 0 && m0[i] != 0) throw ValidationError("initial momentum on vacuum at cell " + std::to_string(i));
    }
    const double hw = std::max(3 * grid.dx, std::sqrt(mu));
    const auto r = static_cast<std::size_t>(std::floor(hw / grid.dx));
    std::vector<double> w(2 * r + 1);
    double sum = 0;
    for (std::size_t j = 0; j <= 2 * r; ++j) {
        double s = (static_cast<double>(j) - static_cast<double>(r)) * grid.dx / hw;
        w[j] = std::abs(s) < 1 ? std::exp(-1 / (1 - s * s)) : 0.0;
        sum += w[j];
    }
    for (double& x : w) x /= sum;
    Field rg = kernels::pad(rho0, r, b), mg = kernels::pad(m0, r, b);
    Mollified out{Field(n), Field(n), hw, mu * floor_scale};
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0, c = 0;
        for (std::size_t j = 0; j <= 2 * r; ++j) {
            a += w[j] * rg[i + j];
            c += w[j] * mg[i + j];
        }
        out.rho[i] = a + out.floor;
        out.m[i] = c;
    }
    return out;
}

double stable_dt(const EulerianState& s, const Config& c) {
    const double lam = c.backend == kernels::Backend::Serial
                           ? kernels::serial::max_speed_eulerian(s.rho, s.m, c.params, c.rho_floor)
                           : kernels::omp::max_speed_eulerian(s.rho, s.m, c.params, c.rho_floor);
    if (std::isnan(lam)) throw SolverError("CongestionOverflow", 0.0, -1, "wave speed undefined");
    const double dx = s.grid.dx;
    double dt = dx * dx / (2 * c.mu);
    if (lam > 0) dt = std::min(dt, dx / lam);
    return c.cfl_safety * dt;
}

StepResult step(const EulerianState& s, const Config& c, double dt_cap, double t_now) {
    const std::size_t n = s.rho.size();
    double dt = std::min(stable_dt(s, c), dt_cap);
    Field rg = kernels::pad(s.rho, 1, c.boundary), mg = kernels::pad(s.m, 1, c.boundary);
    StepResult r{EulerianState{s.grid, {}, {}}, dt, 0};
    for (int attempt = 0; attempt <= 20; ++attempt) {
        kernels::ViscousStep ks{s.grid.dx, dt, c.mu, c.rho_floor};
        if (c.backend == kernels::Backend::Serial)
            kernels::serial::viscous_update(c.params, rg, mg, ks, r.state.rho, r.state.m);
        else
            kernels::omp::viscous_update(c.params, rg, mg, ks, r.state.rho, r.state.m);
        long bad = -1;
        for (std::size_t i = 0; i < n; ++i) {
            double x = r.state.rho[i];
            if (std::isnan(x) || std::isnan(r.state.m[i]) || x < 0 || (x < c.rho_floor && s.rho[i] >= c.rho_floor)) {
                bad = static_cast<long>(i);
                break;
            }
        }
        if (bad >= 0) {
            if (attempt == 20)
                throw SolverError("NonPositiveDensity", t_now, bad, "density below floor after 20 halvings");
            dt *= 0.5;
            r.retries = attempt + 1;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (r.state.rho[i] >= 1 - 1e-12) {
                std::ostringstream os;
                os.precision(17);
                os << "density " << r.state.rho[i] << " reached the congestion limit";
                throw SolverError("CongestionOverflow", t_now + dt, static_cast<long>(i), os.str());
            }
            if (r.state.rho[i] < c.rho_floor) r.state.m[i] = 0.0;
        }
        r.dt = dt;
        return r;
    }
    throw SolverError("NonPositiveDensity", t_now, -1, "retry budget exhausted");
}

namespace {

SnapshotDiagnostics diagnose(const EulerianState& s, const riemann::RegionBound& bound, const Config& c) {
    SnapshotDiagnostics d;
    d.margin = riemann::in_invariant_region(s, bound, c.params).margin;
    for (double r : s.rho) {
        d.mass += r * s.grid.dx;
        d.extreme = std::max(d.extreme, r);
    }
    Field gr = kernels::gradient(s.rho, s.grid.dx, c.backend), gm = kernels::gradient(s.m, s.grid.dx, c.backend);
    for (std::size_t i = 0; i < gr.size(); ++i) d.max_gradient = std::max({d.max_gradient, std::abs(gr[i]), std::abs(gm[i])});
    return d;
}

}  // namespace

EulerianTrajectory run(const Config& c, const Field& rho0, const Field& m0) {
    validate(c);
    EulerianState s{c.grid, rho0, m0};
    if (c.mollify) {
        Mollified mo = mollify_initial(rho0, m0, c.mu, c.grid, c.floor_scale, c.boundary);
        s.rho = std::move(mo.rho);
        s.m = std::move(mo.m);
    }
    if (s.rho.size() != c.grid.n || s.m.size() != c.grid.n) throw ValidationError("initial fields do not match the grid");
    for (std::size_t i = 0; i < s.rho.size(); ++i)
        if (!(s.rho[i] >= 0 && s.rho[i] < 1)) throw ValidationError("initial density outside [0,1) at cell " + std::to_string(i));

    const auto bound = riemann::RegionBound::from_initial(s, c.params);
    EulerianTrajectory traj;
    traj.params = c.params;
    traj.mu = c.mu;
    double rate = entropy::dissipation_rate(s, c.params, c.mu);
    double peak = 0.0, last_dt = 0.0;
    auto record = [&](double t) {
        SnapshotDiagnostics d = diagnose(s, bound, c);
        d.peak = std::max(peak, d.extreme);
        d.dt = last_dt;
        peak = d.extreme;
        if (!traj.t.empty()) {
            double r1 = entropy::dissipation_rate(s, c.params, c.mu);
            d.dissipation = traj.diag.back().dissipation + 0.5 * (t - traj.t.back()) * (rate + r1);
            rate = r1;
        }
        traj.t.push_back(t);
        traj.states.push_back(s);
        traj.diag.push_back(d);
    };
    record(0.0);
    double t = 0.0;
    for (std::size_t k = 1; k <= c.snapshots; ++k) {
        const double target = c.t_end * static_cast<double>(k) / static_cast<double>(c.snapshots);
        while (t < target) {
            StepResult r = step(s, c, target - t, t);
            if (r.dt < 1e-14 * c.t_end) throw SolverError("DtUnderflow", t, -1, "time step collapsed");
            s = std::move(r.state);
            t = (r.dt == target - t) ? target : t + r.dt;
            last_dt = r.dt;
            peak = std::max(peak, *std::max_element(s.rho.begin(), s.rho.end()));
        }
        record(target);
    }
    return traj;
}

ExperimentReport vanishing_viscosity_sweep(const Config& base, const std::vector<double>& mus, const Field& rho0,
                                           const Field& m0, int workers) {
    if (mus.empty()) throw ValidationError("mu list is empty");
    for (std::size_t k = 0; k < mus.size(); ++k) {
        if (!(mus[k] > 0)) throw ValidationError("every mu must be positive");
        if (k > 0 && !(mus[k] <= mus[k - 1])) throw ValidationError("mu list must be decreasing");
    }
    const double mu_min = mus.back();
    if (base.grid.dx > mu_min / 4) {
        std::ostringstream os;
        os << "grid too coarse for the sweep: dx = " << base.grid.dx << " > min(mu)/4 = " << mu_min / 4;
        throw ValidationError(os.str());
    }
    const long nrun = static_cast<long>(mus.size());
    std::vector<EulerianTrajectory> runs(mus.size());
    std::vector<std::exception_ptr> errs(mus.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (long k = 0; k < nrun; ++k) {
        try {
            Config c = base;
            c.mu = mus[k];
            runs[k] = run(c, rho0, m0);
        } catch (...) {
            errs[k] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);

    ExperimentReport rep;
    rep.experiment = "VanishingViscosity";
    std::vector<double> diff, total, g_rho;
    for (std::size_t k = 0; k < mus.size(); ++k) {
        EpsilonRecord r;
        r.epsilon = base.params.epsilon;
        r.mu = mus[k];
        const auto& fin = runs[k].back();
        r.max_rho = *std::max_element(fin.rho.begin(), fin.rho.end());
        auto dis = entropy::entropy_dissipation(runs[k]);
        r.extra["dissipation_total"] = dis.total;
        r.extra["mu2_grad_rho"] = dis.mu2_grad_rho;
        r.extra["mu2_grad_u"] = dis.mu2_grad_u;
        total.push_back(dis.total);
        g_rho.push_back(dis.mu2_grad_rho);
        if (k > 0) {
            const auto& prev = runs[k - 1].back();
            double l1 = 0;
            for (std::size_t i = 0; i < fin.rho.size(); ++i) l1 += std::abs(fin.rho[i] - prev.rho[i]) * fin.grid.dx;
            r.extra["l1_successive_difference"] = l1;
            diff.push_back(l1);
        }
        rep.records.push_back(r);
    }
    bool cauchy = true;
    for (std::size_t k = 1; k < diff.size(); ++k) cauchy = cauchy && diff[k] <= diff[k - 1];
    double tmax = *std::max_element(total.begin(), total.end());
    double tmin = *std::min_element(total.begin(), total.end());
    bool vanish = true;
    for (std::size_t k = 1; k < g_rho.size(); ++k) vanish = vanish && g_rho[k] < g_rho[k - 1];
    rep.flags.push_back({"successive_differences_decrease", cauchy, ""});
    rep.flags.push_back({"dissipation_bounded", tmin > 0 && tmax / tmin < 10,
                         "max/min = " + std::to_string(tmin > 0 ? tmax / tmin : INFINITY)});
    rep.flags.push_back({"mu2_gradients_decrease", vanish, ""});
    return rep;
}

}  // namespace hsp::viscous
