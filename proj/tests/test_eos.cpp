#include <cmath>
#include <vector>

#include "doctest.h"
#include "hsp/eos.hpp"
#include "hsp/errors.hpp"
#include "hsp/limits.hpp"

using namespace hsp;
using doctest::Approx;

TEST_CASE("pressure laws at hand-evaluated points") {
    CHECK(eos::pressure_eulerian(0.0, {0.3, 2.5, 1.0, 2.0}) == 0.0);
    CHECK(eos::pressure_eulerian(0.5, {0.1, 2, 0, 2}) == Approx(0.1).epsilon(1e-14));
    CHECK(eos::pressure_eulerian(0.75, {0.01, 3, 0, 2}) == Approx(0.27).epsilon(1e-14));

    auto lp = eos::pressure_lagrangian(2.0, {0.1, 2, 1, 2});
    CHECK(lp.total == Approx(0.35).epsilon(1e-14));
    CHECK(lp.singular == Approx(0.10).epsilon(1e-14));
    CHECK(lp.isentropic == Approx(0.25).epsilon(1e-14));
    auto l3 = eos::pressure_lagrangian(1.5, {0.01, 3, 0, 2});
    CHECK(l3.total == Approx(0.08).epsilon(1e-14));
    CHECK(l3.isentropic == 0.0);
    CHECK(eos::pressure_lagrangian(1e8, {0.01, 2, 0, 2}).total < 1e-17);
}

TEST_CASE("pressure derivatives and sound speed") {
    auto d = eos::pressure_derivatives_lagrangian(2.0, {0.1, 2, 0, 2});
    CHECK(d.dp == Approx(-0.2).epsilon(1e-14));
    CHECK(d.d2p == Approx(0.6).epsilon(1e-14));
    CHECK(eos::pressure_derivatives_lagrangian(2.0, {0.1, 2, 1, 2}).dp == Approx(-0.45).epsilon(1e-14));
    CHECK(eos::sound_speed(2.0, {0.1, 2, 1, 2}) == Approx(std::sqrt(0.45)).epsilon(1e-14));
    CHECK(eos::sound_speed(2.0, {0.03, 3, 0, 2}) == Approx(0.3).epsilon(1e-14));

    // derivatives against differences of p itself
    PressureParams p{0.02, 2.5, 0.7, 1.6};
    for (double v : {1.05, 1.3, 2.0, 5.0}) {
        double h = 1e-4 * (v - 1);
        auto P = [&](double x) { return eos::pressure_lagrangian(x, p).total; };
        double dp = (P(v + h) - P(v - h)) / (2 * h);
        double d2p = (P(v + h) - 2 * P(v) + P(v - h)) / (h * h);
        auto an = eos::pressure_derivatives_lagrangian(v, p);
        CHECK(an.dp == Approx(dp).epsilon(1e-7));
        CHECK(an.d2p == Approx(d2p).epsilon(1e-4));
    }
}

TEST_CASE("theta closed-form oracles") {
    PressureParams p{0.01, 3, 0, 2};
    CHECK(eos::theta_lagrangian(2.0, p) == Approx(std::sqrt(0.03)).epsilon(1e-12));
    CHECK(eos::theta_lagrangian(1.25, p) == Approx(std::sqrt(0.03) / 0.25).epsilon(1e-12));
    CHECK(eos::theta_lagrangian(1e6, {0.01, 2, 1, 2}) < 1e-2);

    PressureParams q{0.03, 3, 0, 2};
    CHECK(eos::theta_eulerian(0.5, q) == Approx(0.3).epsilon(1e-12));
    CHECK(eos::theta_eulerian(0.9, q) == Approx(2.7).epsilon(1e-12));
    CHECK(eos::theta_eulerian(0.0, q) == 0.0);
    CHECK(eos::internal_energy(0.5, {0.1, 2, 0, 2}) == Approx(0.05).epsilon(1e-14));
}

TEST_CASE("theta derivative is minus the sound speed, kappa > 0") {
    for (PressureParams p : {PressureParams{1e-2, 2, 1, 2}, PressureParams{1e-4, 3.5, 0.5, 1.4},
                             PressureParams{0.05, 1.5, 2, 2.8}}) {
        for (double d : {1e-3, 0.02, 0.5, 3.0}) {
            auto th = [&](double x) { return eos::theta_lagrangian(eos::Excess{x}, p); };
            double h = 2e-3 * d;
            auto D = [&](double k) { return (th(d + k) - th(d - k)) / (2 * k); };
            double dth = (4 * D(h / 2) - D(h)) / 3;
            CHECK(-dth == Approx(eos::sound_speed(eos::Excess{d}, p)).epsilon(1e-8));
        }
    }
}

TEST_CASE("generic paths agree with kappa = 0 closed forms") {
    for (double g : {1.2, 2.0, 2.7, 3.0}) {
        PressureParams p{3e-3, g, 0, 2};
        for (double d : {1e-6, 1e-3, 0.1, 4.0})
            CHECK(eos::theta_lagrangian_quadrature(eos::Excess{d}, p) ==
                  Approx(eos::theta_lagrangian(eos::Excess{d}, p)).epsilon(1e-10));
        for (double r : {0.01, 0.4, 0.97})
            CHECK(eos::theta_eulerian_quadrature(r, p) == Approx(eos::theta_eulerian(r, p)).epsilon(1e-10));
    }
}

TEST_CASE("riccati coefficient") {
    // constant at gamma = 3: (gamma+1)/(4 (3 eps)^{1/4}) = 10 at eps = 1/30000
    PressureParams p{1.0 / 30000, 3, 0, 2};
    for (double v : {1.01, 1.1, 2.0, 7.0}) CHECK(eos::riccati_coefficient(v, p) == Approx(10.0).epsilon(1e-12));

    // a = -c'/(2 c^{3/2}) from differences of c
    PressureParams q{0.01, 2, 1, 2};
    for (double v : {1.02, 1.5, 3.0}) {
        double h = 1e-5 * (v - 1);
        double dc = (eos::sound_speed(v + h, q) - eos::sound_speed(v - h, q)) / (2 * h);
        double c = eos::sound_speed(v, q);
        CHECK(eos::riccati_coefficient(v, q) == Approx(-dc / (2 * c * std::sqrt(c))).epsilon(1e-7));
    }

    // v - 1 = eps^{1/3}, gamma = 2: slope -1/3
    std::vector<double> eps, a;
    for (double e = 1e-12; e <= 1.0001e-6; e *= 10) {
        eps.push_back(e);
        a.push_back(eos::riccati_coefficient(eos::Excess{std::cbrt(e)}, {e, 2, 0, 2}));
    }
    CHECK(limits::scaling_fit(eps, a).slope == Approx(-1.0 / 3).epsilon(1e-6));
}

TEST_CASE("regime classification") {
    PressureParams p{1e-6, 2, 0, 2};
    CHECK(eos::classify_regime(eos::Excess{std::pow(1e-6, 0.5)}, p).tag == eos::RegimeTag::NearCongestion);
    CHECK(eos::classify_regime(eos::Excess{std::pow(1e-6, 0.3)}, p).tag == eos::RegimeTag::Intermediate);
    CHECK(eos::classify_regime(1.5, p).tag == eos::RegimeTag::Far);
    // the closed ends of the near-congestion range
    CHECK(eos::classify_regime(eos::Excess{std::pow(1e-6, 1.0 / 3)}, p).tag == eos::RegimeTag::NearCongestion);
    auto r = eos::classify_regime(eos::Excess{std::pow(1e-6, 0.5)}, p);
    REQUIRE(r.alpha);
    CHECK(*r.alpha == Approx(0.5));
}

TEST_CASE("parameter and domain errors") {
    CHECK_THROWS_WITH_AS(validate(PressureParams{0.1, 0.5, 0, 2}), "gamma must exceed 1", ValidationError);
    CHECK_THROWS_AS(validate(PressureParams{-1, 2, 0, 2}), ValidationError);
    CHECK_THROWS_AS(validate(PressureParams{0.1, 2, 1, 3.5}), ValidationError);
    CHECK_THROWS_AS(validate(PressureParams{0.1, 2, 1, 2}, ParamMode::Weak), ValidationError);
    CHECK_THROWS_AS(eos::sound_speed(1.0, {0.1, 2, 0, 2}), DomainError);
    CHECK_THROWS_AS(eos::pressure_eulerian(1.0, {0.1, 2, 0, 2}), DomainError);
    // the excess form survives where v itself cannot
    CHECK(std::isfinite(eos::theta_lagrangian(eos::Excess{1e-18}, {1e-12, 2, 1, 2})));
}
