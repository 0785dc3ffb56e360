#include <cmath>

#include "doctest.h"
#include "hsp/riemann.hpp"

using namespace hsp;
using doctest::Approx;

namespace {
const Grid g5 = Grid::span(0, 1, 5);
EulerianState euler(double rho, double m) { return {g5, Field(5, rho), Field(5, m)}; }
LagrangianState lag(double v, double u) { return {g5, Field(5, v), Field(5, u)}; }
LagrangianState lag_tanh(double v, double s, std::size_t n = 201) {
    LagrangianState st{Grid::span(-4, 4, n), Field(n, v), Field(n)};
    for (std::size_t i = 0; i < n; ++i) st.u[i] = s * std::tanh(st.grid.x(i));
    return st;
}
}  // namespace

TEST_CASE("eulerian invariants") {
    PressureParams p{0.03, 3, 0, 2};
    auto a = riemann::riemann_invariants_eulerian(euler(0.5, 0), p);
    CHECK(a.w[2] == Approx(0.3).epsilon(1e-12));
    CHECK(a.z[2] == Approx(-0.3).epsilon(1e-12));
    auto b = riemann::riemann_invariants_eulerian(euler(0.5, 0.25), p);
    CHECK(b.w[0] == Approx(0.8).epsilon(1e-12));
    CHECK(b.z[0] == Approx(0.2).epsilon(1e-12));
    auto v = riemann::riemann_invariants_eulerian(euler(0, 0), p);
    CHECK(v.w[1] == 0.0);
    CHECK(v.z[1] == 0.0);
}

TEST_CASE("lagrangian invariants and riccati variables") {
    PressureParams p{0.01, 3, 0, 2};
    auto a = riemann::riemann_invariants_lagrangian(lag(2, 0), p);
    CHECK(a.w[3] == Approx(0.1732051).epsilon(1e-6));
    CHECK(a.z[3] == Approx(-0.1732051).epsilon(1e-6));
    CHECK(riemann::riemann_invariants_lagrangian(lag(2, 1), p).w[0] == Approx(1.1732051).epsilon(1e-6));

    auto r = riemann::riccati_variables(lag(2, 0), p);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(r.y[i] == 0.0);
        CHECK(r.q[i] == 0.0);
    }
}

TEST_CASE("riccati variables: serial and OpenMP kernels agree") {
    PressureParams p{0.01, 2, 1, 2};
    auto s = lag_tanh(1.7, -0.3, 401);
    for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] += 0.2 * std::exp(-s.grid.x(i) * s.grid.x(i));
    auto a = riemann::riccati_variables(s, p, kernels::Backend::Serial);
    auto b = riemann::riccati_variables(s, p, kernels::Backend::OpenMP);
    for (std::size_t i = 0; i < s.v.size(); ++i) {
        CHECK(a.y[i] == b.y[i]);
        CHECK(a.q[i] == b.q[i]);
    }
}

TEST_CASE("invariant region membership") {
    PressureParams p{0.03, 3, 0, 2};
    riemann::RegionBound b1;
    b1.M = 1;
    auto vac = riemann::in_invariant_region(euler(0, 0), b1, p);
    CHECK(vac.inside);
    CHECK(vac.margin == Approx(1.0));

    riemann::RegionBound b;
    b.M = 0.3;
    auto edge = riemann::in_invariant_region(euler(0.5, 0), b, p);
    CHECK(edge.inside);
    CHECK(edge.margin == Approx(0.0).epsilon(1e-12));

    auto s = euler(0.5, 0);
    s.m[2] = 0.05;  // u = 0.1 in one cell: w = 0.4
    auto out = riemann::in_invariant_region(s, b, p);
    CHECK_FALSE(out.inside);
    CHECK(out.margin == Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("density and volume bounds") {
    riemann::RegionBound b;
    b.M = 0.3;
    CHECK(riemann::max_density_bound(b, {0.03, 3, 0, 2}) == Approx(0.5).epsilon(1e-10));
    b.M = 1;
    CHECK(riemann::min_volume_bound(b, {1.0 / 3, 3, 0, 2}) == Approx(1.5).epsilon(1e-10));
    CHECK(riemann::min_volume_excess(b, {1.0 / 3, 3, 0, 2}) == Approx(0.5).epsilon(1e-10));
    // 1 - A scales like eps^{1/(gamma-1)}
    b.M = 0.5;
    double r1 = 1 - riemann::max_density_bound(b, {1e-4, 2, 0, 2});
    double r2 = 1 - riemann::max_density_bound(b, {1e-6, 2, 0, 2});
    CHECK(std::log(r1 / r2) / std::log(100.0) == Approx(1.0).epsilon(0.02));
}

TEST_CASE("initial datum classification") {
    PressureParams p{0.01, 2, 1, 2};
    CHECK(riemann::classify_initial_datum(lag(2, 0.3), p).rarefactive);
    CHECK(riemann::classify_initial_datum(lag_tanh(2, 1), p).rarefactive);
    auto c = riemann::classify_initial_datum(lag_tanh(2, -1), p);
    CHECK_FALSE(c.rarefactive);
    CHECK((c.witness == 99 || c.witness == 100));  // steepest at x = 0
    CHECK(c.witness_gradient < 0);
}

TEST_CASE("volume upper bound") {
    PressureParams p{0.01, 2, 1, 2};
    auto s = lag(2, 0);
    auto same = riemann::volume_upper_bound(3.0, s, 0, 0, p);
    for (double v : same) CHECK(v == Approx(2.0).epsilon(1e-14));
    // (2^{1/4} + 2^{-1/4} / 2 * 2)^4, K = (kappa gt)^{-1/4} / 2
    double want = std::pow(std::pow(2.0, 0.25) + std::pow(2.0, -0.25), 4);
    auto v = riemann::volume_upper_bound(1.0, s, 1.5, 0.5, p);
    CHECK(v[0] == Approx(want).epsilon(1e-12));
}
