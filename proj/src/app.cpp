#include "hsp/app.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "hsp/entropy.hpp"
#include "hsp/errors.hpp"
#include "hsp/limits.hpp"
#include "hsp/psystem.hpp"
#include "hsp/riemann.hpp"
#include "hsp/viscous.hpp"

namespace hsp::app {

using config::RunConfig;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Flags {
    ojson list = ojson::array();
    bool pass = true;
    void add(const std::string& name, bool ok, const std::string& detail) {
        list.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
        pass = pass && ok;
    }
    void add(const ExperimentReport& r) {
        for (const auto& f : r.flags) add(f.name, f.pass, f.detail);
    }
};

std::string fmt(double x) { return io::number(x); }

double rel(double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

// central difference, one Richardson step
template <class F>
double derivative(F&& f, double x, double h) {
    auto D = [&](double k) { return (f(x + k) - f(x - k)) / (2 * k); };
    return (4 * D(h / 2) - D(h)) / 3;
}

std::vector<std::size_t> resolutions(const std::vector<std::size_t>& r, const config::GridSpec& g) {
    return r.empty() ? std::vector<std::size_t>{g.n} : r;
}

// ---- eos-table

void eos_table(const RunConfig& c, io::Writer* out, Flags& fl, ojson& res) {
    const auto& e = c.eos_table;
    const PressureParams& P = c.params;
    if (out) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < e.n; ++k) {
            double d = e.excess_min * std::pow(e.excess_max / e.excess_min, double(k) / double(e.n - 1));
            eos::Excess x{d};
            auto pd = eos::pressure_derivatives_lagrangian(x, P);
            auto reg = eos::classify_regime(x, P);
            rows.push_back({fmt(d), fmt(1 + d), fmt(eos::pressure_lagrangian(x, P).total), fmt(pd.dp), fmt(pd.d2p),
                            fmt(eos::sound_speed(x, P)), fmt(eos::theta_lagrangian(x, P)),
                            fmt(eos::riccati_coefficient(x, P)), eos::to_string(reg.tag),
                            reg.alpha ? fmt(*reg.alpha) : ""});
        }
        out->csv("eos_lagrangian.csv", {"excess", "v", "p", "dp", "d2p", "c", "theta", "a", "regime", "alpha"}, rows);
        if (P.kappa == 0 && P.gamma <= 3) {
            std::vector<std::vector<double>> er;
            for (std::size_t k = 0; k < e.n; ++k) {
                double r = e.rho_min + (e.rho_max - e.rho_min) * double(k) / double(e.n - 1);
                er.push_back({r, eos::pressure_eulerian(r, P), eos::pressure_eulerian_derivative(r, P),
                              eos::internal_energy(r, P), eos::theta_eulerian(r, P)});
            }
            out->csv("eos_eulerian.csv", {"rho", "p", "dp", "H", "Theta"}, er);
        }
    }

    // identity suite at random parameters and states
    std::mt19937_64 rng(e.seed);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto logU = [&](double a, double b) { return std::exp(U(std::log(a), std::log(b))); };
    double err_H = 0, err_theta = 0, err_closed = 0;
    for (std::size_t i = 0; i < e.samples; ++i) {
        PressureParams w{logU(1e-4, 1e-1), U(1.1, 3.0), 0.0, 2.0};
        const double rho = U(0.05, 0.95);
        auto H = [&](double r) { return eos::internal_energy(r, w); };
        double dH = derivative(H, rho, 2e-3 * std::min(rho, 1 - rho));
        err_H = std::max(err_H, rel(rho * dH - H(rho), eos::pressure_eulerian(rho, w)));

        PressureParams s{logU(1e-4, 1e-1), U(1.1, 4.0), U(0.0, 2.0), U(1.1, 2.9)};
        const double d = logU(1e-3, 10.0);
        auto th = [&](double x) { return eos::theta_lagrangian(eos::Excess{x}, s); };
        double dth = derivative(th, d, 2e-3 * d);
        err_theta = std::max(err_theta, rel(-dth, eos::sound_speed(eos::Excess{d}, s)));

        const double dz = logU(1e-3, 10.0);
        err_closed = std::max({err_closed,
                               rel(eos::theta_lagrangian(eos::Excess{dz}, w),
                                   eos::theta_lagrangian_quadrature(eos::Excess{dz}, w)),
                               rel(eos::theta_eulerian(rho, w), eos::theta_eulerian_quadrature(rho, w)),
                               rel(eos::riccati_coefficient_closed(eos::Excess{dz}, w),
                                   eos::riccati_coefficient(eos::Excess{dz}, w))});
    }
    res["identities"] = {{"samples", e.samples},
                         {"rho_dH_minus_H_vs_p", err_H},
                         {"dtheta_plus_c", err_theta},
                         {"closed_vs_generic", err_closed}};
    fl.add("identity_H", err_H < e.identity_tolerance, "max rel error " + fmt(err_H));
    fl.add("identity_theta", err_theta < e.identity_tolerance, "max rel error " + fmt(err_theta));
    fl.add("closed_forms", err_closed < e.closed_form_tolerance, "max rel error " + fmt(err_closed));

    if (e.riccati_gammas.empty()) return;
    // a_eps along v - 1 = eps^alpha, alpha at the middle of each range
    std::vector<double> eps;
    const int m = 13;
    for (int k = 0; k < m; ++k)
        eps.push_back(e.riccati_eps_max * std::pow(e.riccati_eps_min / e.riccati_eps_max, double(k) / (m - 1)));
    ojson fits = ojson::array();
    bool ok = true;
    double worst = 0;
    for (double g : e.riccati_gammas) {
        struct Case {
            const char* name;
            double alpha, kappa;
            eos::RegimeTag tag;
        };
        const Case cases[] = {
            {"near_congestion", 0.5 * (1 / (g + 1) + 1 / (g - 1)), 0.0, eos::RegimeTag::NearCongestion},
            {"intermediate", 0.5 * (1 / (g + 2) + 1 / (g + 1)), 0.0, eos::RegimeTag::Intermediate},
            {"near_congestion", 0.5 * (1 / (g + 1) + 1 / (g - 1)), 1.0, eos::RegimeTag::NearCongestion},
        };
        for (const auto& cs : cases) {
            PressureParams p{1e-3, g, cs.kappa, 2.0};
            std::vector<double> a;
            bool tags = true;
            for (double ep : eps) {
                p.epsilon = ep;
                eos::Excess d{std::pow(ep, cs.alpha)};
                a.push_back(eos::riccati_coefficient(d, p));
                tags = tags && eos::classify_regime(d, p).tag == cs.tag;
            }
            auto f = limits::scaling_fit(eps, a);
            const double want = -(1 + cs.alpha * (3 - g)) / 4;
            const double dev = std::abs(f.slope - want);
            worst = std::max(worst, dev);
            ok = ok && dev <= e.riccati_slope_tolerance && tags;
            fits.push_back({{"gamma", g},
                            {"kappa", cs.kappa},
                            {"regime", cs.name},
                            {"alpha", cs.alpha},
                            {"slope", f.slope},
                            {"expected", want},
                            {"r2", f.r2},
                            {"regime_tags_match", tags}});
        }
    }
    res["riccati_fits"] = fits;
    fl.add("riccati_slopes", ok, "max |slope - expected| = " + fmt(worst));
}

// ---- coeff-check

void coeff_check(const RunConfig& c, Flags& fl, ojson& res) {
    const auto& k = c.coeff;
    std::mt19937_64 rng(k.seed);
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    double worst = 0, worst_c1 = 0;
    bool closed_zero = true;
    ojson at = ojson::object();
    for (std::size_t i = 0; i < k.samples; ++i) {
        const double rho = U(k.rho_min, k.rho_max);
        const double eps = std::exp(U(std::log(k.eps_min), std::log(k.eps_max)));
        const double g = k.gamma_max - U(0.0, 1.0) * (k.gamma_max - k.gamma_min);  // (min, max]
        auto cs = entropy::coefficient_identities(rho, PressureParams{eps, g, 0.0, 2.0});
        if (cs.max_rel_error > worst) {
            worst = cs.max_rel_error;
            at = {{"rho_bar", rho}, {"epsilon", eps}, {"gamma", g}};
        }
        auto c3 = entropy::coefficient_identities(rho, PressureParams{eps, 3.0, 0.0, 2.0});
        closed_zero = closed_zero && c3.C1_closed == 0.0;
        worst_c1 = std::max(worst_c1, std::abs(c3.C1) / std::max(std::abs(c3.B1), 1e-300));
    }
    res["samples"] = k.samples;
    res["max_rel_error"] = worst;
    res["worst_point"] = at;
    res["gamma3_C1_over_B1"] = worst_c1;
    fl.add("composite_matches_closed", worst < k.tolerance, "max rel error " + fmt(worst));
    fl.add("C1_zero_at_gamma3", closed_zero && worst_c1 < k.tolerance,
           "closed form exactly 0: " + std::string(closed_zero ? "yes" : "no") + ", composite |C1|/|B1| <= " +
               fmt(worst_c1));
}

// ---- simulate-euler

double frame_error(const RunConfig& c, const viscous::Config& vc, const EulerianState& e0,
                   const EulerianTrajectory& et, ojson& rec) {
    auto l0 = limits::eulerian_to_lagrangian(e0);
    psystem::SmoothConfig sc = c.smooth;
    sc.params = vc.params;
    sc.grid = l0.grid;
    sc.t_end = vc.t_end;
    auto lr = psystem::run_smooth(sc, l0.v, l0.u);
    rec["lagrangian_breakdown"] = lr.breakdown.has_value();
    auto lt = limits::eulerian_to_lagrangian(et.states.back());
    const auto& L = lr.traj.states.back();
    double err = 0;
    for (std::size_t i = 0; i < L.v.size(); ++i) {
        double f = (L.grid.x(i) - lt.grid.x0) / lt.grid.dx;
        if (f < 0 || f > double(lt.grid.n - 1)) continue;
        auto j = std::min<std::size_t>(std::size_t(f), lt.grid.n - 2);
        double w = f - double(j);
        err += std::abs((1 - w) * lt.v[j] + w * lt.v[j + 1] - L.v[i]) * L.grid.dx;
    }
    return lr.breakdown ? kInf : err;
}

void simulate_euler(const RunConfig& c, io::Writer* out, Flags& fl, ojson& res) {
    const auto& E = c.euler;
    const auto ns = resolutions(E.resolutions, c.grid);
    // one series per viscosity; with mu_per_dx, a single series refining both
    std::vector<double> mus = E.mus.empty() ? std::vector<double>{c.viscous.mu} : E.mus;
    if (E.mu_per_dx > 0) mus = {-1.0};
    ojson runs = ojson::array();
    bool floor_ok = true, order_ok = true, frame_ok = true;
    std::string order_detail, frame_detail;
    for (double mu_fixed : mus) {
        std::vector<double> dxs, deficits, frame;
        for (std::size_t n : ns) {
            viscous::Config vc = c.viscous;
            vc.params = c.params;
            vc.grid = c.grid.grid(n);
            vc.mu = mu_fixed > 0 ? mu_fixed : E.mu_per_dx * vc.grid.dx;
            auto e0 = limits::eulerian_initial(c.profile, c.params, vc.grid);
            auto tr = viscous::run(vc, e0.rho, e0.m);
            double mn = kInf, peak = 0;
            for (const auto& d : tr.diag) {
                mn = std::min(mn, d.margin);
                peak = std::max(peak, d.peak);
            }
            const double limit = -E.margin_factor * vc.grid.dx;
            floor_ok = floor_ok && mn >= limit;
            dxs.push_back(vc.grid.dx);
            deficits.push_back(std::max(0.0, -mn));
            ojson rec{{"n", n},
                      {"dx", vc.grid.dx},
                      {"mu", vc.mu},
                      {"min_margin", mn},
                      {"margin_limit", limit},
                      {"max_rho", peak},
                      {"mass_drift", tr.diag.back().mass - tr.diag.front().mass}};
            if (E.frame_check) {
                double err = frame_error(c, vc, e0, tr, rec);
                rec["frame_L1"] = err;
                frame.push_back(err);
            }
            if (out) out->csv("euler_n" + std::to_string(n) + "_mu" + fmt(vc.mu) + ".csv", io::kEulerianHeader,
                              io::eulerian_rows(tr));
            runs.push_back(rec);
        }
        // deficit must shrink at order >= 1 unless it is rounding noise throughout
        for (std::size_t k = 1; k < deficits.size(); ++k) {
            double a = deficits[k - 1], b = deficits[k];
            if (b <= E.rounding_level) continue;
            if (a <= E.rounding_level) {
                order_ok = false;
                order_detail += " deficit appears under refinement at n=" + std::to_string(ns[k]) + ";";
                continue;
            }
            double ord = std::log(a / b) / std::log(dxs[k - 1] / dxs[k]);
            order_ok = order_ok && ord >= 1.0;
            order_detail += " order " + fmt(ord) + ";";
        }
        for (std::size_t k = 1; k < frame.size(); ++k) {
            frame_ok = frame_ok && frame[k] < frame[k - 1];
            frame_detail += (frame_detail.empty() ? "" : ", ") + fmt(frame[k - 1] / frame[k]);
        }
    }
    res["runs"] = runs;
    fl.add("margin_floor", floor_ok, "min margin >= -" + fmt(E.margin_factor) + " dx in every run");
    if (ns.size() > 1)
        fl.add("margin_deficit_order", order_ok,
               order_detail.empty() ? "deficit at rounding level (<= " + fmt(E.rounding_level) + ") everywhere"
                                    : order_detail);
    if (E.frame_check && ns.size() > 1)
        fl.add("frame_error_decreases", frame_ok, "successive error ratios " + frame_detail);
}

// ---- simulate-psystem

ojson breakdown_json(const psystem::SmoothResult& r) {
    if (!r.breakdown) return nullptr;
    const auto& b = *r.breakdown;
    return {{"mode", psystem::to_string(b.mode)},
            {"t_star_numeric", b.t_star_numeric},
            {"t_last_good", b.t_last_good},
            {"x", r.traj.states.front().grid.x(b.location)}};
}

void simulate_psystem(const RunConfig& c, io::Writer* out, Flags&, ojson& res) {
    psystem::SmoothConfig sc = c.smooth;
    sc.params = c.params;
    sc.grid = c.grid.grid();
    auto s0 = limits::lagrangian_initial(c.profile, c.params, sc.grid);
    auto r = psystem::run_smooth(sc, s0.v, s0.u);
    auto lb = psystem::blowup_lower_bound(s0, c.params);
    res["assumptions"] = limits::verify_assumptions(s0, c.params, c.profile).to_json();
    res["rarefactive"] = riemann::classify_initial_datum(s0, c.params).rarefactive;
    res["thresholds"] = {{"gradient", r.thresholds.gradient},
                         {"v_excess_floor", r.thresholds.v_excess_floor},
                         {"dt_min", r.thresholds.dt_min}};
    res["breakdown"] = breakdown_json(r);
    res["lower_bound"] = {{"t", lb.t}, {"K2", lb.K2}, {"beta", lb.beta}};
    res["t_final"] = r.traj.t.back();
    if (out) out->csv("snapshots.csv", io::kLagrangianHeader, io::lagrangian_rows(r.traj));
}

// ---- blowup-study

void blowup_study(const RunConfig& c, io::Writer* out, Flags& fl, ojson& res) {
    const auto& B = c.blowup;
    const auto ns = resolutions(B.resolutions, c.grid);
    ojson runs = ojson::array();
    bool any = false, all = true, above = true;
    double t_fine = kInf, pred_fine = kInf, exact = kInf;
    for (std::size_t n : ns) {
        psystem::SmoothConfig sc = c.smooth;
        sc.params = c.params;
        sc.grid = c.grid.grid(n);
        auto s0 = limits::lagrangian_initial(c.profile, c.params, sc.grid);
        auto r = psystem::run_smooth(sc, s0.v, s0.u);
        auto lb = psystem::blowup_lower_bound(s0, c.params);
        auto frozen = psystem::predict_blowup_time(s0, c.params);
        exact = frozen.t_star;
        ojson rec{{"n", n}, {"dx", sc.grid.dx}, {"breakdown", breakdown_json(r)}, {"lower_bound", lb.t}};
        rec["frozen_prediction"] = frozen.t_star;
        const bool grad = r.breakdown && r.breakdown->mode == psystem::BreakdownMode::GradientBlowup;
        any = any || r.breakdown.has_value();
        all = all && grad;
        t_fine = r.breakdown ? r.breakdown->t_star_numeric : kInf;
        if (r.breakdown) {
            auto pr = psystem::predict_blowup_time(r.traj, B.stride);
            pred_fine = pr.t_star;
            rec["prediction"] = {{"t_star", pr.t_star},
                                 {"status", psystem::to_string(pr.status)},
                                 {"x_star", pr.x_star}};
            if (std::isfinite(lb.t) && r.breakdown->t_star_numeric < lb.t) above = false;
        }
        runs.push_back(rec);
        if (out && n == ns.back()) out->csv("snapshots.csv", io::kLagrangianHeader, io::lagrangian_rows(r.traj));
    }
    res["runs"] = runs;
    if (!any) {
        res["summary"] = "no breakdown";
        return;
    }
    fl.add("breakdown_every_resolution", all, "GradientBlowup required at every resolution");
    if (B.lower_bound_check) fl.add("above_lower_bound", above, "t_star_numeric >= lower bound at every resolution");
    const double dev = rel(pred_fine, t_fine);
    fl.add("prediction_agrees", std::abs(pred_fine - t_fine) <= B.prediction_tolerance * t_fine,
           "finest: predicted " + fmt(pred_fine) + " vs numeric " + fmt(t_fine) + " (rel " + fmt(dev) + ")");
    if (B.exact_reference)
        fl.add("exact_reference", std::abs(t_fine - exact) <= B.exact_tolerance * exact,
               "finest " + fmt(t_fine) + " vs exact " + fmt(exact));
}

// ---- epsilon-sweep

void epsilon_sweep(const RunConfig& c, io::Writer* out, Flags& fl, ojson& res) {
    const auto& S = c.sweep;
    limits::SweepConfig sc;
    sc.profile = c.profile;
    sc.params = c.params;
    sc.smooth = c.smooth;
    sc.smooth.params = c.params;
    sc.smooth.grid = c.grid.grid();
    sc.viscous = c.viscous;
    sc.viscous.params = c.params;
    sc.viscous.grid = c.grid.grid();
    sc.require_well_prepared = S.require_well_prepared;
    sc.window_L = S.window_L;
    sc.band_factor = S.band_factor;
    sc.c_guard = S.c_guard;
    sc.slope_tolerance = S.slope_tolerance;
    sc.noise_tolerance = S.noise_tolerance;
    sc.lower_bound_fraction = S.lower_bound_fraction;
    auto e = limits::experiment_from_string(S.experiment);
    auto r = limits::epsilon_sweep(sc, S.epsilons, e, c.workers);
    res["sweep"] = to_json(r.report);
    fl.add(r.report);
    if (!out) return;
    out->csv("sweep_long.csv", {"metric", "epsilon", "value"}, io::long_rows(r.report));
    if (!S.write_runs) return;
    for (std::size_t k = 0; k < S.epsilons.size(); ++k) {
        const std::string name = "run_eps" + fmt(S.epsilons[k]) + ".csv";
        if (k < r.lagrangian.size() && r.lagrangian[k].size())
            out->csv(name, io::kLagrangianHeader, io::lagrangian_rows(r.lagrangian[k]));
        else if (k < r.eulerian.size() && r.eulerian[k].size())
            out->csv(name, io::kEulerianHeader, io::eulerian_rows(r.eulerian[k]));
    }
}

// ---- entropy-check

void entropy_check(const RunConfig& c, io::Writer* out, Flags& fl, ojson& res) {
    const auto& S = c.entropy;
    ojson runs = ojson::array();
    std::vector<std::array<double, 4>> resid;
    std::vector<double> dxs;
    for (std::size_t n : S.resolutions) {
        psystem::SmoothConfig sc = c.smooth;
        sc.params = c.params;
        sc.grid = c.grid.grid(n);
        sc.snapshots = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::llround(sc.t_end / (S.snapshot_spacing * sc.grid.dx))));
        auto s0 = limits::lagrangian_initial(c.profile, c.params, sc.grid);
        auto r = psystem::run_smooth(sc, s0.v, s0.u);
        if (r.breakdown)
            throw SolverError("Breakdown", r.breakdown->t_star_numeric, long(r.breakdown->location),
                              "entropy residual needs a smooth run; shorten t_end");
        // left end placed so that the far field sits symmetric about 0
        auto et = limits::lagrangian_to_eulerian(r.traj, s0.v.front() * sc.grid.x0);
        std::array<double, 4> v{};
        ojson rec{{"n", n}, {"dx", sc.grid.dx}, {"snapshots", sc.snapshots}};
        for (int id = 1; id <= 4; ++id) {
            v[id - 1] = entropy::entropy_residual(et, id);
            rec["residual_" + std::to_string(id)] = v[id - 1];
        }
        resid.push_back(v);
        dxs.push_back(sc.grid.dx);
        runs.push_back(rec);
    }
    double min_order = kInf;
    for (std::size_t k = 1; k < resid.size(); ++k)
        for (int id = 0; id < 4; ++id) {
            double ord = std::log(resid[k - 1][id] / resid[k][id]) / std::log(dxs[k - 1] / dxs[k]);
            runs[k]["order_" + std::to_string(id + 1)] = ord;
            min_order = std::min(min_order, ord);
        }
    res["residual_runs"] = runs;
    fl.add("residual_order", min_order >= S.min_order,
           "min observed order " + fmt(min_order) + ", required >= " + fmt(S.min_order));

    if (S.mus.empty()) return;
    viscous::Config vc = c.viscous;
    vc.params = c.params;
    vc.grid = S.dissipation_grid.grid();
    vc.t_end = S.dissipation_t_end;
    auto e0 = limits::eulerian_initial(S.dissipation_profile, c.params, vc.grid);
    auto rep = viscous::vanishing_viscosity_sweep(vc, S.mus, e0.rho, e0.m, c.workers);
    res["dissipation"] = to_json(rep);
    fl.add(rep);
    if (out) out->csv("dissipation_long.csv", {"metric", "epsilon", "value"}, io::long_rows(rep));
}

}  // namespace

Outcome execute(const RunConfig& c, io::Writer* out) {
    config::validate(c);
    Flags fl;
    ojson res = ojson::object();
    const auto& cmd = c.command;
    if (cmd == "eos-table") eos_table(c, out, fl, res);
    else if (cmd == "coeff-check") coeff_check(c, fl, res);
    else if (cmd == "simulate-euler") simulate_euler(c, out, fl, res);
    else if (cmd == "simulate-psystem") simulate_psystem(c, out, fl, res);
    else if (cmd == "blowup-study") blowup_study(c, out, fl, res);
    else if (cmd == "epsilon-sweep") epsilon_sweep(c, out, fl, res);
    else if (cmd == "entropy-check") entropy_check(c, out, fl, res);

    Outcome o;
    o.pass = fl.pass;
    o.report["command"] = cmd;
    o.report["pass"] = fl.pass;
    o.report["flags"] = fl.list;
    o.report["results"] = res;
    o.report["config"] = config::to_json(c);
    if (out) out->json("report.json", o.report);
    return o;
}

}  // namespace hsp::app
