#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsp/limits.hpp"
#include "hsp/psystem.hpp"
#include "hsp/report.hpp"
#include "hsp/viscous.hpp"

// Run configuration for the command-line front end. The JSON form of the
// defaults doubles as the schema: a key that is not in it is an error.
namespace hsp::config {

struct GridSpec {
    double x_min = -4.0, x_max = 4.0;
    std::size_t n = 801;
    Grid grid() const;
    Grid grid(std::size_t n_override) const;
};

struct EosTableSpec {
    double excess_min = 1e-6, excess_max = 10.0;  // v - 1, log-spaced
    std::size_t n = 200;
    double rho_min = 1e-3, rho_max = 0.999;       // Eulerian table, kappa = 0 only
    // identity suite
    std::size_t samples = 100;
    std::uint64_t seed = 12345;
    double identity_tolerance = 1e-8;
    double closed_form_tolerance = 1e-10;
    // Riccati exponent fits; empty skips them
    std::vector<double> riccati_gammas;
    double riccati_eps_min = 1e-12, riccati_eps_max = 1e-6;
    double riccati_slope_tolerance = 0.02;
};

struct EulerSpec {
    std::vector<std::size_t> resolutions;  // empty: grid.n only
    std::vector<double> mus;               // empty: viscous.mu only
    double mu_per_dx = 0.0;                // > 0: mu = mu_per_dx * dx, overrides mus
    double margin_factor = 5.0;            // margin >= -margin_factor * dx
    double rounding_level = 1e-12;         // deficits below this count as exact
    bool frame_check = false;              // compare with the Lagrangian solver
};

struct BlowupSpec {
    std::vector<std::size_t> resolutions;  // empty: grid.n only
    std::size_t stride = 1;                // x* sampling for the prediction
    double prediction_tolerance = 0.2;
    bool lower_bound_check = true;         // t_star_numeric >= lower bound; off where the bound is sharp
    bool exact_reference = false;          // compare with -1/(a y0) of the initial state
    double exact_tolerance = 0.1;
};

struct SweepSpec {
    std::string experiment = "PressureL1";
    std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4};
    bool require_well_prepared = true;
    double window_L = 2.0;
    double band_factor = 10.0;
    double c_guard = 0.5;
    double slope_tolerance = 0.15;
    double noise_tolerance = 0.10;
    double lower_bound_fraction = 0.8;
    bool write_runs = true;  // one snapshot CSV per epsilon
};

struct EntropySpec {
    std::vector<std::size_t> resolutions{201, 401, 801, 1601};
    double snapshot_spacing = 0.5;  // snapshot interval / dx
    double min_order = 1.5;
    // dissipation over a viscosity sweep; empty mus skips it
    std::vector<double> mus;
    limits::InitialProfileSpec dissipation_profile;
    GridSpec dissipation_grid{-0.25, 0.25, 2001};
    double dissipation_t_end = 0.05;
};

struct CoeffSpec {
    std::size_t samples = 100;
    std::uint64_t seed = 2024;
    double rho_min = 0.05, rho_max = 0.95;
    double eps_min = 1e-4, eps_max = 1e-1;
    double gamma_min = 1.0, gamma_max = 3.0;  // (gamma_min, gamma_max]
    double tolerance = 1e-10;
};

struct RunConfig {
    std::string command = "simulate-psystem";
    PressureParams params;
    GridSpec grid;
    limits::InitialProfileSpec profile;
    viscous::Config viscous;          // grid and params come from the top level
    psystem::SmoothConfig smooth;     // likewise
    EosTableSpec eos_table;
    EulerSpec euler;
    BlowupSpec blowup;
    SweepSpec sweep;
    EntropySpec entropy;
    CoeffSpec coeff;
    int workers = 1;
};

inline const std::vector<std::string> kCommands{"eos-table",     "simulate-euler", "simulate-psystem", "blowup-study",
                                                "epsilon-sweep", "entropy-check",  "coeff-check"};

ojson to_json(const RunConfig& c);

// Overlays `patch` on `base`. Every key must exist in the defaults at the same
// path with a compatible type; otherwise throws ValidationError naming the key
// and, when one is close, the key that was probably meant.
RunConfig merge(const RunConfig& base, const ojson& patch);

// parse + merge onto the defaults + validate; parse errors keep the line
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const std::string& text, const RunConfig& base);

void validate(const RunConfig& c);

std::size_t edit_distance(const std::string& a, const std::string& b);

// bundled presets, one or more per acceptance criterion
std::vector<std::string> preset_names();
const std::string& preset_text(const std::string& name);  // ValidationError if unknown
RunConfig preset(const std::string& name);

}  // namespace hsp::config
