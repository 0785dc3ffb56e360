#include <cmath>
#include <random>

#include "doctest.h"
#include "hsp/errors.hpp"
#include "hsp/limits.hpp"
#include "hsp/riemann.hpp"

using namespace hsp;
using doctest::Approx;

TEST_CASE("scaling fit on synthetic power laws") {
    std::vector<double> xs{1e-4, 1e-3, 1e-2, 1e-1, 1.0}, sq, one, root;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (double x : xs) {
        sq.push_back(x * x);
        one.push_back(3.0);
        root.push_back(std::sqrt(x) * (1 + noise(rng)));
    }
    auto a = limits::scaling_fit(xs, sq);
    CHECK(a.slope == Approx(2.0).epsilon(1e-12));
    CHECK(a.r2 == Approx(1.0).epsilon(1e-12));
    CHECK(limits::scaling_fit(xs, one).slope == Approx(0.0).scale(1));
    auto r = limits::scaling_fit(xs, root).slope;
    CHECK(r >= 0.45);
    CHECK(r <= 0.55);
    CHECK_THROWS_WITH_AS(limits::scaling_fit({1.0}, {2.0}), "fit requires ≥ 3 points", ValidationError);
}

TEST_CASE("sweep with one epsilon is rejected") {
    limits::SweepConfig c;
    CHECK_THROWS_WITH_AS(limits::epsilon_sweep(c, {1e-2}, limits::Experiment::PressureL1), "fit requires ≥ 3 points",
                         ValidationError);
    CHECK_THROWS_AS(limits::epsilon_sweep(c, {1e-3, 1e-2, 1e-1}, limits::Experiment::PressureL1), ValidationError);
}

TEST_CASE("well-prepared data without compression is rarefactive") {
    limits::InitialProfileSpec s;  // dip with dilation
    PressureParams p{1e-2, 2, 1, 2};
    auto pr = limits::well_prepared_initial(s, p, Grid::span(-4, 4, 801));
    CHECK(pr.report.pass());
    CHECK(pr.report.rarefactive);
    CHECK(riemann::classify_initial_datum(pr.state, p).rarefactive);
    // the core sits at v - 1 = eps^alpha
    double vmin = *std::min_element(pr.state.v.begin(), pr.state.v.end());
    CHECK(vmin - 1 == Approx(std::sqrt(1e-2)).epsilon(1e-3));
}

TEST_CASE("infeasible preparation names the assumption") {
    limits::InitialProfileSpec s;
    s.compression = 2.0;
    s.compression_center = 0.0;
    s.compression_width = 0.3;
    PressureParams p{1e-4, 2, 1, 2};
    try {
        limits::well_prepared_initial(s, p, Grid::span(-4, 4, 801));
        FAIL("expected a rejection");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("compression_near_congestion") != std::string::npos);
    }
}

TEST_CASE("window diagnostics on a constant trajectory") {
    PressureParams p{1e-2, 2, 1, 2};
    LagrangianTrajectory tr;
    tr.params = p;
    Grid g = Grid::span(-4, 4, 81);
    for (int k = 0; k < 3; ++k) {
        tr.t.push_back(0.25 * k);
        tr.states.push_back({g, Field(81, 1.5), Field(81, 0.0)});
        tr.diag.push_back({});
    }
    const double pv = eos::pressure_lagrangian(1.5, p).total;
    CHECK(limits::pressure_l1(tr, 2.0, p) == Approx(4.0 * 0.5 * pv).epsilon(1e-12));
    CHECK(limits::exclusion_residual(tr, 2.0, p) == Approx(4.0 * 0.5 * 1e-2 / 0.5).epsilon(1e-12));
    auto inc = limits::incompressibility_diagnostic(tr, p, 0.1);
    CHECK(inc.congested_measure == 0.0);
    CHECK(inc.sup_dxu == 0.0);
}

TEST_CASE("frame transforms") {
    PressureParams p{1e-2, 2, 0, 2};
    // round trip is second order on smooth data
    auto err = [&](std::size_t n) {
        Grid g = Grid::span(-4, 4, n);
        LagrangianState s{g, Field(n), Field(n)};
        for (std::size_t i = 0; i < n; ++i) {
            double x = g.x(i);
            s.v[i] = 2.0 - 0.6 * std::exp(-x * x);
            s.u[i] = 0.3 * std::sin(x);
        }
        auto e = limits::lagrangian_to_eulerian(s, -8.0);
        auto back = limits::eulerian_to_lagrangian(e, 1e-6, s.grid.x0);
        double l1 = 0;
        for (std::size_t i = 0; i < back.grid.n; ++i) {
            double m = back.grid.x(i), x = m;
            double want = 2.0 - 0.6 * std::exp(-x * x);
            if (m < -3.5 || m > 3.5) continue;
            l1 += std::abs(back.v[i] - want) * back.grid.dx;
        }
        return l1;
    };
    double e1 = err(101), e2 = err(201), e3 = err(401);
    CHECK(std::log2(e1 / e2) >= 1.8);
    CHECK(std::log2(e2 / e3) >= 1.8);

    // total mass is the Lagrangian length
    Grid g = Grid::span(0, 1, 11);
    EulerianState es{g, Field(11, 0.5), Field(11, 0.0)};
    auto ls = limits::eulerian_to_lagrangian(es);
    CHECK(ls.grid.x_end() - ls.grid.x0 == Approx(0.5).epsilon(1e-12));
    for (double v : ls.v) CHECK(v == Approx(2.0).epsilon(1e-12));

    es.rho[4] = 0.0;
    CHECK_THROWS(limits::eulerian_to_lagrangian(es));
}

TEST_CASE("profile factory") {
    PressureParams p{1e-2, 2, 0, 2};
    limits::InitialProfileSpec s;
    s.base = "riemann";
    auto e = limits::eulerian_initial(s, p, Grid::span(-1, 1, 21));
    CHECK(e.rho.front() == Approx(0.5));
    CHECK(e.rho.back() == Approx(0.25));
    s.base = "nope";
    CHECK_THROWS_AS(limits::validate(s, p), ValidationError);
}
