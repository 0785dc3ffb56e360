#include <cmath>

#include "doctest.h"
#include "hsp/kernels.hpp"
#include "hsp/psystem.hpp"
#include "hsp/riemann.hpp"

using namespace hsp;
using doctest::Approx;

namespace {
psystem::SmoothConfig base(std::size_t n = 401, double t_end = 0.5) {
    psystem::SmoothConfig c;
    c.params = {1e-2, 2, 1, 2};
    c.grid = Grid::span(-4, 4, n);
    c.t_end = t_end;
    c.snapshots = 10;
    return c;
}
Field tanh_u(const Grid& g, double s) {
    Field u(g.n);
    for (std::size_t i = 0; i < g.n; ++i) u[i] = s * std::tanh(g.x(i));
    return u;
}
}  // namespace

TEST_CASE("constant state is steady") {
    auto c = base(101);
    auto r = psystem::run_smooth(c, Field(101, 2.0), Field(101, 0.3));
    CHECK_FALSE(r.breakdown);
    for (const auto& s : r.traj.states)
        for (std::size_t i = 0; i < 101; ++i) {
            CHECK(s.v[i] == Approx(2.0).epsilon(1e-14));
            CHECK(s.u[i] == Approx(0.3).epsilon(1e-14));
        }
    CHECK_FALSE(psystem::detect_breakdown(r.traj, r.thresholds));
}

TEST_CASE("characteristics of a constant state are straight") {
    auto c = base(201, 1.0);
    c.params = {0.03, 3, 0, 2};  // c(2) = 0.3
    auto r = psystem::run_smooth(c, Field(201, 2.0), Field(201, 0.0));
    auto fw = psystem::trace_characteristic(r.traj, -1.0, psystem::Direction::Forward);
    auto bw = psystem::trace_characteristic(r.traj, 1.0, psystem::Direction::Backward);
    REQUIRE(fw.t.size() > 2);
    CHECK_FALSE(fw.truncated);
    for (std::size_t k = 0; k < fw.t.size(); ++k) {
        CHECK(fw.x[k] == Approx(-1.0 + 0.3 * fw.t[k]).epsilon(1e-10));
        CHECK(fw.a_integral[k] == Approx(eos::riccati_coefficient(2.0, c.params) * fw.t[k]).epsilon(1e-10));
    }
    CHECK(bw.x.back() == Approx(1.0 - 0.3 * bw.t.back()).epsilon(1e-10));
}

TEST_CASE("rarefactive data: no blow-up predicted, no lower bound") {
    auto c = base();
    Field v(c.grid.n, 2.0);
    auto u = tanh_u(c.grid, 0.2);
    LagrangianState s{c.grid, v, u};
    CHECK(std::isinf(psystem::predict_blowup_time(s, c.params).t_star));
    CHECK(std::isinf(psystem::blowup_lower_bound(s, c.params).t));
    auto r = psystem::run_smooth(c, v, u);
    CHECK_FALSE(r.breakdown);
    CHECK(std::isinf(psystem::predict_blowup_time(r.traj).t_star));
}

TEST_CASE("constant coefficient: T* = -1/(a y0)") {
    // gamma = 3: a = 10 at eps = 1/30000; v = 1.1 gives c = 1, so y0 = u_x(0) = -0.1
    PressureParams p{1.0 / 30000, 3, 0, 2};
    Grid g = Grid::span(-4, 4, 801);
    LagrangianState s{g, Field(g.n, 1.1), tanh_u(g, -0.1)};
    CHECK(eos::sound_speed(1.1, p) == Approx(1.0).epsilon(1e-12));
    auto pr = psystem::predict_blowup_time(s, p);
    CHECK(pr.t_star == Approx(1.0).epsilon(1e-6));
    CHECK(pr.x_star == Approx(0.0).scale(1));
    // the lower bound is sharp here
    CHECK(psystem::blowup_lower_bound(s, p).t == Approx(1.0).epsilon(1e-6));

    psystem::SmoothConfig c;
    c.params = p;
    c.grid = g;
    c.t_end = 1.5;
    c.snapshots = 60;
    auto r = psystem::run_smooth(c, s.v, s.u);
    REQUIRE(r.breakdown);
    CHECK(r.breakdown->mode == psystem::BreakdownMode::GradientBlowup);
    CHECK(r.breakdown->t_star_numeric == Approx(1.0).epsilon(0.05));
    CHECK(r.breakdown->t_last_good <= r.breakdown->t_star_numeric);
    // the trajectory ends with the triggering state
    CHECK(r.traj.t.back() == r.breakdown->t_star_numeric);
    auto again = psystem::detect_breakdown(r.traj, r.thresholds);
    REQUIRE(again);
    CHECK(again->t_star_numeric == r.breakdown->t_star_numeric);
    CHECK(again->location == r.breakdown->location);
}

TEST_CASE("serial and OpenMP backends give the same run") {
    auto c = base(401, 0.3);
    Field v(c.grid.n), u = tanh_u(c.grid, -0.2);
    for (std::size_t i = 0; i < c.grid.n; ++i) v[i] = 2.0 - 0.5 * std::exp(-c.grid.x(i) * c.grid.x(i));
    c.backend = kernels::Backend::Serial;
    auto a = psystem::run_smooth(c, v, u);
    c.backend = kernels::Backend::OpenMP;
    auto b = psystem::run_smooth(c, v, u);
    REQUIRE(a.traj.size() == b.traj.size());
    for (std::size_t i = 0; i < c.grid.n; ++i) {
        CHECK(a.traj.back().v[i] == b.traj.back().v[i]);
        CHECK(a.traj.back().u[i] == b.traj.back().u[i]);
    }
}

TEST_CASE("rhs kernels: serial reference equals OpenMP") {
    PressureParams p{1e-2, 2, 1, 2};
    const std::size_t n = 257;
    Field v(n), u(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.5 + 0.4 * std::sin(0.03 * double(i));
        u[i] = 0.2 * std::cos(0.05 * double(i));
    }
    auto vg = kernels::pad(v, 2, Boundary::Periodic), ug = kernels::pad(u, 2, Boundary::Periodic);
    Field a(n), b(n), c(n), d(n);
    kernels::serial::psystem_rhs(p, vg, ug, 0.01, a, b);
    kernels::omp::psystem_rhs(p, vg, ug, 0.01, c, d);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(a[i] == c[i]);
        CHECK(b[i] == d[i]);
    }
    CHECK(kernels::serial::max_sound_speed(v, p) == kernels::omp::max_sound_speed(v, p));
}

TEST_CASE("mass in the volume field is conserved on periodic runs") {
    auto c = base(400, 0.3);
    c.boundary = Boundary::Periodic;
    c.grid = {-4.0, 8.0 / 400, 400};
    Field v(c.grid.n), u(c.grid.n);
    for (std::size_t i = 0; i < c.grid.n; ++i) {
        double x = c.grid.x(i);
        v[i] = 2.0 + 0.3 * std::sin(M_PI * x / 4);
        u[i] = 0.1 * std::cos(M_PI * x / 4);
    }
    auto r = psystem::run_smooth(c, v, u);
    for (const auto& d : r.traj.diag) CHECK(d.mass == Approx(r.traj.diag.front().mass).epsilon(1e-12));
}

TEST_CASE("breakdown time converges under refinement, generic data") {
    auto run = [](std::size_t n) {
        auto c = base(n, 5.0);
        c.snapshots = 50;
        Field v(n, 2.0), u(n);
        for (std::size_t i = 0; i < n; ++i) {
            double xi = c.grid.x(i) / 0.5;
            u[i] = -0.5 * std::tanh(xi) * std::exp(-xi * xi / 8);
        }
        auto r = psystem::run_smooth(c, v, u);
        REQUIRE(r.breakdown);
        LagrangianState s0{c.grid, v, u};
        CHECK(r.breakdown->t_star_numeric >= psystem::blowup_lower_bound(s0, c.params).t);
        return r.breakdown->t_star_numeric;
    };
    double t1 = run(401), t2 = run(801), t3 = run(1601);
    CHECK(std::abs(t3 - t2) < std::abs(t2 - t1));
}
