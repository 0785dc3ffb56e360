#include <cmath>
#include <numeric>

#include "doctest.h"
#include "hsp/kernels.hpp"
#include "hsp/riemann.hpp"
#include "hsp/viscous.hpp"

using namespace hsp;
using doctest::Approx;

namespace {
viscous::Config base(std::size_t n = 201) {
    viscous::Config c;
    c.params = {1e-2, 2, 0, 2};
    c.grid = Grid::span(-1, 1, n);
    c.mu = 1e-2;
    c.t_end = 0.1;
    c.snapshots = 4;
    return c;
}
void bump(const Grid& g, Field& rho, Field& m, double amp = 0.3) {
    rho.assign(g.n, 0.4);
    m.assign(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        double x = g.x(i);
        rho[i] += amp * std::exp(-x * x / 0.02);
        m[i] = -0.2 * rho[i] * std::tanh(x / 0.1);
    }
}
}  // namespace

TEST_CASE("constant state is a fixed point") {
    auto c = base();
    EulerianState s{c.grid, Field(c.grid.n, 0.3), Field(c.grid.n, 0.06)};
    auto r = viscous::step(s, c);
    CHECK(r.dt > 0);
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        CHECK(r.state.rho[i] == Approx(0.3).epsilon(1e-14));
        CHECK(r.state.m[i] == Approx(0.06).epsilon(1e-14));
    }
}

TEST_CASE("vacuum stays vacuum") {
    auto c = base(51);
    auto tr = viscous::run(c, Field(51, 0.0), Field(51, 0.0));
    for (const auto& s : tr.states)
        for (std::size_t i = 0; i < 51; ++i) {
            CHECK(s.rho[i] == 0.0);
            CHECK(s.m[i] == 0.0);
        }
}

TEST_CASE("mollifier keeps constants and mass") {
    auto c = base();
    auto k = viscous::mollify_initial(Field(c.grid.n, 0.5), Field(c.grid.n, -0.1), 1e-2, c.grid, 0.0);
    for (std::size_t i = 0; i < c.grid.n; ++i) {
        CHECK(k.rho[i] == Approx(0.5).epsilon(1e-13));
        CHECK(k.m[i] == Approx(-0.1).epsilon(1e-13));
    }
    Field rho, m;
    bump(c.grid, rho, m);
    auto b = viscous::mollify_initial(rho, m, 1e-3, c.grid, 0.0, Boundary::Periodic);
    double m0 = std::accumulate(rho.begin(), rho.end(), 0.0), m1 = std::accumulate(b.rho.begin(), b.rho.end(), 0.0);
    CHECK(m1 == Approx(m0).epsilon(1e-12));
}

TEST_CASE("periodic runs conserve mass") {
    auto c = base();
    c.boundary = Boundary::Periodic;
    Field rho, m;
    bump(c.grid, rho, m);
    auto tr = viscous::run(c, rho, m);
    REQUIRE(tr.size() == 5);
    for (const auto& d : tr.diag) CHECK(d.mass == Approx(tr.diag.front().mass).epsilon(1e-12));
}

TEST_CASE("serial and OpenMP backends give the same run") {
    auto c = base();
    Field rho, m;
    bump(c.grid, rho, m);
    c.backend = kernels::Backend::Serial;
    auto a = viscous::run(c, rho, m);
    c.backend = kernels::Backend::OpenMP;
    auto b = viscous::run(c, rho, m);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.t[k] == b.t[k]);
        for (std::size_t i = 0; i < c.grid.n; ++i) {
            CHECK(a.states[k].rho[i] == Approx(b.states[k].rho[i]).epsilon(1e-14));
            CHECK(a.states[k].m[i] == Approx(b.states[k].m[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("kernels: serial reference equals OpenMP") {
    PressureParams p{1e-2, 2, 0, 2};
    const std::size_t n = 300;
    Field rho(n), m(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = 0.4 + 0.3 * std::sin(0.05 * double(i));
        m[i] = 0.1 * std::cos(0.07 * double(i));
    }
    CHECK(kernels::serial::max_speed_eulerian(rho, m, p, 1e-12) ==
          kernels::omp::max_speed_eulerian(rho, m, p, 1e-12));
    auto rg = kernels::pad(rho, 1, Boundary::ConstantExtension), mg = kernels::pad(m, 1, Boundary::ConstantExtension);
    kernels::ViscousStep st{0.01, 1e-4, 1e-2, 1e-12};
    Field r1(n), m1(n), r2(n), m2(n);
    kernels::serial::viscous_update(p, rg, mg, st, r1, m1);
    kernels::omp::viscous_update(p, rg, mg, st, r2, m2);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(r1[i] == r2[i]);
        CHECK(m1[i] == m2[i]);
    }
    Field ga(n), gb(n);
    kernels::serial::gradient(rho.data(), n, 0.01, ga.data());
    kernels::omp::gradient(rho.data(), n, 0.01, gb.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(ga[i] == gb[i]);
}

TEST_CASE("gradient is exact on cubics in the interior") {
    const std::size_t n = 40;
    const double dx = 0.1;
    Field f(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = dx * double(i);
        f[i] = x * x * x - 2 * x;
    }
    auto g = kernels::gradient(f, dx, kernels::Backend::Serial);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double x = dx * double(i);
        CHECK(g[i] == Approx(3 * x * x - 2).epsilon(1e-11));
    }
}

TEST_CASE("viscous run stays in the invariant region") {
    auto c = base(401);
    Field rho, m;
    bump(c.grid, rho, m);
    auto tr = viscous::run(c, rho, m);
    for (const auto& d : tr.diag) CHECK(d.margin >= -5 * c.grid.dx);
    auto b = riemann::RegionBound::from_initial(tr.states.front(), c.params);
    double A = riemann::max_density_bound(b, c.params);
    for (const auto& d : tr.diag) CHECK(d.peak <= A + 1e-9);
}

TEST_CASE("vanishing viscosity sweep: identical viscosities give zero difference") {
    auto c = base(201);
    c.grid = Grid::span(-0.1, 0.1, 201);  // dx <= mu/4
    c.t_end = 0.01;
    Field rho, m;
    bump(c.grid, rho, m);
    auto r = viscous::vanishing_viscosity_sweep(c, {1e-2, 1e-2, 1e-2}, rho, m);
    REQUIRE(r.records.size() == 3);
    auto j = to_json(r);
    bool found = false;
    for (const auto& rec : j["records"])
        if (rec.contains("extra") && rec["extra"].contains("l1_successive_difference")) {
            found = true;
            CHECK(rec["extra"]["l1_successive_difference"].get<double>() == 0.0);
        }
    CHECK(found);
}
