#include <cmath>

#include "doctest.h"
#include "hsp/entropy.hpp"
#include "hsp/eos.hpp"

using namespace hsp;
using doctest::Approx;

TEST_CASE("entropy pairs at hand-evaluated points") {
    PressureParams p{0.1, 2, 0, 2};
    auto m = entropy::entropy_pair(1, 0.37, -0.2, p);
    CHECK(m.eta == 0.37);
    CHECK(m.q == -0.2);
    CHECK(entropy::entropy_pair(2, 0.5, 0.25, p).q == Approx(0.225).epsilon(1e-12));
    // energy at rest is the internal energy
    CHECK(entropy::entropy_pair(3, 0.5, 0.0, p).eta == Approx(eos::internal_energy(0.5, p)).epsilon(1e-10));
    for (int id = 1; id <= 4; ++id) {
        auto r = entropy::relative_entropy_pair(id, 0.4, 0.1, 0.4, 0.1, p);
        CHECK(r.eta == Approx(0.0).scale(1));
        CHECK(r.q == Approx(0.0).scale(1));
    }
}

TEST_CASE("pressure integrals against closed forms") {
    // I1 = eps/(g-1) X^{g-1}, I2 = eps^2/(2g-1) X^{2g-1}, X = rho/(1-rho)
    for (double g : {1.5, 2.0, 3.0}) {
        PressureParams p{0.05, g, 0, 2};
        for (double r : {0.1, 0.5, 0.9}) {
            double X = r / (1 - r);
            CHECK(entropy::pressure_integral(r, p) == Approx(0.05 / (g - 1) * std::pow(X, g - 1)).epsilon(1e-10));
            CHECK(entropy::pressure_square_integral(r, p) ==
                  Approx(0.0025 / (2 * g - 1) * std::pow(X, 2 * g - 1)).epsilon(1e-10));
            CHECK(entropy::pressure_integral(0.05, r, p) ==
                  Approx(entropy::pressure_integral(r, p) - entropy::pressure_integral(0.05, p)).epsilon(1e-10));
        }
    }
}

TEST_CASE("entropy gradients match differences of eta") {
    PressureParams p{0.05, 2.5, 0, 2};
    const double rho = 0.6, m = 0.3;
    for (int id = 1; id <= 4; ++id) {
        auto g = entropy::entropy_gradient(id, rho, m, p);
        auto eta = [&](double r, double mm) { return entropy::entropy_pair(id, r, mm, p).eta; };
        double h = 1e-5;
        CHECK(g.d_rho == Approx((eta(rho + h, m) - eta(rho - h, m)) / (2 * h)).epsilon(1e-6).scale(1));
        CHECK(g.d_m == Approx((eta(rho, m + h) - eta(rho, m - h)) / (2 * h)).epsilon(1e-6).scale(1));
    }
}

TEST_CASE("flux compatibility: q' = eta' F' along smooth states") {
    // d_t eta + d_x q = 0 for smooth solutions means grad q = grad eta . DF
    PressureParams p{0.05, 2, 0, 2};
    const double rho = 0.45, m = 0.2, h = 1e-5;
    for (int id = 1; id <= 4; ++id) {
        auto ge = entropy::entropy_gradient(id, rho, m, p);
        auto q = [&](double r, double mm) { return entropy::entropy_pair(id, r, mm, p).q; };
        double qr = (q(rho + h, m) - q(rho - h, m)) / (2 * h);
        double qm = (q(rho, m + h) - q(rho, m - h)) / (2 * h);
        const double u = m / rho, dp = eos::pressure_eulerian_derivative(rho, p);
        // DF = [[0, 1], [dp - u^2, 2u]]
        CHECK(qr == Approx(ge.d_m * (dp - u * u)).epsilon(1e-6).scale(1));
        CHECK(qm == Approx(ge.d_rho + ge.d_m * 2 * u).epsilon(1e-6).scale(1));
    }
}

TEST_CASE("taylor remainder is third order") {
    PressureParams p{0.1, 2, 0, 2};
    for (int id : {3, 4}) {
        double ord = entropy::taylor_expansion_residual(id, 0.5, 0.0, 1e-2, p);
        CHECK(ord >= 2.8);
        CHECK(ord <= 3.2);
        double moving = entropy::taylor_expansion_residual(id, 0.4, 0.3, 1e-2, p);
        CHECK(moving >= 2.8);
    }
}

TEST_CASE("constant states: zero residual and zero dissipation") {
    EulerianTrajectory tr;
    tr.params = {0.1, 2, 0, 2};
    tr.mu = 1e-2;
    Grid g = Grid::span(0, 1, 21);
    for (int k = 0; k < 5; ++k) {
        tr.t.push_back(0.1 * k);
        tr.states.push_back({g, Field(21, 0.4), Field(21, 0.1)});
        tr.diag.push_back({});
    }
    for (int id = 1; id <= 4; ++id) CHECK(entropy::entropy_residual(tr, id) == 0.0);
    CHECK(entropy::entropy_dissipation(tr).total == 0.0);
    CHECK(entropy::dissipation_rate(tr.states[0], tr.params, 1e-2) == 0.0);
}

TEST_CASE("coefficient identities") {
    for (double g : {1.3, 2.0, 2.9, 3.0})
        for (double r : {0.05, 0.5, 0.95}) {
            auto c = entropy::coefficient_identities(r, {1e-3, g, 0, 2});
            CHECK(c.max_rel_error < 1e-10);
        }
    auto c3 = entropy::coefficient_identities(0.3, {0.02, 3, 0, 2});
    CHECK(c3.C1_closed == 0.0);
    CHECK(std::abs(c3.C1) <= 1e-14 * std::abs(c3.B1));
}
