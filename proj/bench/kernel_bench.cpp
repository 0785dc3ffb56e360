// serial reference kernels against their OpenMP versions
#include <benchmark/benchmark.h>

#include <cmath>

#include "hsp/kernels.hpp"

using namespace hsp;

namespace {

const PressureParams kEuler{1e-2, 2, 0, 2};
const PressureParams kLag{1e-2, 2, 1, 2};

struct EulerData {
    Field rho_g, m_g, rho, m;
    explicit EulerData(std::size_t n) : rho(n), m(n) {
        for (std::size_t i = 0; i < n; ++i) {
            rho[i] = 0.4 + 0.3 * std::sin(0.01 * double(i));
            m[i] = 0.1 * std::cos(0.013 * double(i));
        }
        rho_g = kernels::pad(rho, 1, Boundary::ConstantExtension);
        m_g = kernels::pad(m, 1, Boundary::ConstantExtension);
    }
};

struct LagData {
    Field v_g, u_g, dv, du;
    explicit LagData(std::size_t n) : dv(n), du(n) {
        Field v(n), u(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = 1.5 + 0.4 * std::sin(0.01 * double(i));
            u[i] = 0.2 * std::cos(0.017 * double(i));
        }
        v_g = kernels::pad(v, 2, Boundary::Periodic);
        u_g = kernels::pad(u, 2, Boundary::Periodic);
    }
};

template <auto Update>
void BM_viscous_update(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    EulerData d(n);
    Field r(n), m(n);
    kernels::ViscousStep s{1e-3, 1e-6, 1e-2, 1e-12};
    for (auto _ : st) {
        Update(kEuler, d.rho_g, d.m_g, s, r, m);
        benchmark::DoNotOptimize(r.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Rhs>
void BM_psystem_rhs(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    LagData d(n);
    for (auto _ : st) {
        Rhs(kLag, d.v_g, d.u_g, 1e-3, d.dv, d.du);
        benchmark::DoNotOptimize(d.dv.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Speed>
void BM_max_speed(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    EulerData d(n);
    for (auto _ : st) benchmark::DoNotOptimize(Speed(d.rho, d.m, kEuler, 1e-12));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Grad>
void BM_gradient(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    EulerData d(n);
    Field out(n);
    for (auto _ : st) {
        Grad(d.rho.data(), n, 1e-3, out.data());
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_viscous_update<kernels::serial::viscous_update>)->Name("viscous_update/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_viscous_update<kernels::omp::viscous_update>)->Name("viscous_update/omp")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_psystem_rhs<kernels::serial::psystem_rhs>)->Name("psystem_rhs/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_psystem_rhs<kernels::omp::psystem_rhs>)->Name("psystem_rhs/omp")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_max_speed<kernels::serial::max_speed_eulerian>)->Name("max_speed/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_max_speed<kernels::omp::max_speed_eulerian>)->Name("max_speed/omp")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_gradient<kernels::serial::gradient>)->Name("gradient/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_gradient<kernels::omp::gradient>)->Name("gradient/omp")->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();
