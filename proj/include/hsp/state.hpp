#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hsp/eos.hpp"

namespace hsp {

using Field = std::vector<double>;

struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_end() const { return x(n - 1); }
    static Grid span(double a, double b, std::size_t n) { return {a, (b - a) / static_cast<double>(n - 1), n}; }
};

enum class Boundary { ConstantExtension, Periodic };

struct EulerianState {
    Grid grid;
    Field rho, m;
};

struct LagrangianState {
    Grid grid;
    Field v, u;
};

struct SnapshotDiagnostics {
    double margin = 0.0;        // invariant-region margin (Eulerian) or lower-volume margin
    double mass = 0.0;          // sum rho dx, or sum v dx
    double extreme = 0.0;       // max rho, or min v
    double max_gradient = 0.0;  // max |d_x| over the state fields
    double dissipation = 0.0;   // accumulated entropy dissipation (viscous runs)
    double dt = 0.0;            // last step taken before the snapshot
    double peak = 0.0;          // max rho over every step since the previous snapshot (viscous runs)
};

template <class State>
struct Trajectory {
    PressureParams params;
    std::optional<double> mu;  // set for viscous runs
    std::vector<double> t;
    std::vector<State> states;
    std::vector<SnapshotDiagnostics> diag;

    std::size_t size() const { return t.size(); }
    const State& back() const { return states.back(); }
};

using EulerianTrajectory = Trajectory<EulerianState>;
using LagrangianTrajectory = Trajectory<LagrangianState>;

}  // namespace hsp
