#pragma once

#include <cstddef>

#include "hsp/eos.hpp"
#include "hsp/kernels.hpp"
#include "hsp/state.hpp"

namespace hsp::riemann {

struct Invariants {
    Field w, z;
};

// w = m/rho + Theta(rho), z = m/rho - Theta(rho); w = z = 0 on vacuum
Invariants riemann_invariants_eulerian(const EulerianState& s, const PressureParams& p);
// w = u + theta(v), z = u - theta(v)
Invariants riemann_invariants_lagrangian(const LagrangianState& s, const PressureParams& p);

struct Riccati {
    Field y, q;
};

// y = sqrt(c) d_x w, q = sqrt(c) d_x z
Riccati riccati_variables(const LagrangianState& s, const PressureParams& p,
                          kernels::Backend b = kernels::Backend::OpenMP);

// Sigma = {w <= M, z >= -M}. M is the larger of the two initial sup norms;
// both are kept.
struct RegionBound {
    double M = 0.0;
    double sup_w = 0.0;
    double sup_z = 0.0;

    static RegionBound of(const Invariants& inv);
    static RegionBound from_initial(const EulerianState& s, const PressureParams& p);
    static RegionBound from_initial(const LagrangianState& s, const PressureParams& p);
};

struct Membership {
    bool inside;
    double margin;  // min(M - max w, M + min z)
};

Membership in_invariant_region(const EulerianState& s, const RegionBound& b, const PressureParams& p);
Membership in_invariant_region(const Invariants& inv, const RegionBound& b);

// A with Theta(A) = M
double max_density_bound(const RegionBound& b, const PressureParams& p);
// v_min with theta(v_min) = 2M; the excess form keeps the digits of v_min - 1
double min_volume_bound(const RegionBound& b, const PressureParams& p);
double min_volume_excess(const RegionBound& b, const PressureParams& p);

struct DatumClass {
    bool rarefactive;
    std::size_t witness = 0;  // cell i of the most negative difference (i, i+1), if compressive
    double witness_gradient = 0.0;
};

DatumClass classify_initial_datum(const LagrangianState& s, const PressureParams& p);

// pointwise (v0^{(3-gt)/4} + K (Ybar + Qbar) t)^{4/(3-gt)}, K = (kappa gt)^{-1/4} / 2
Field volume_upper_bound(double t, const LagrangianState& s0, double Ybar, double Qbar, const PressureParams& p);

}  // namespace hsp::riemann
