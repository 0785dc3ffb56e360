#include "hsp/config.hpp"

#include <algorithm>
#include <map>
#include <type_traits>

#include "hsp/errors.hpp"

namespace hsp::config {

static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seeds are read as size_t");

namespace detail {
// generated from presets/*.json at configure time
extern const std::vector<std::pair<std::string, std::string>> kPresetData;
}  // namespace detail

Grid GridSpec::grid() const { return grid(n); }
Grid GridSpec::grid(std::size_t m) const {
    if (m < 5) throw ValidationError("grid needs at least 5 points");
    if (!(x_max > x_min)) throw ValidationError("grid x_max must exceed x_min");
    return Grid::span(x_min, x_max, m);
}

// field lists; names are the JSON keys
template <class V>
void fields(V& f, PressureParams& p) {
    f("epsilon", p.epsilon);
    f("gamma", p.gamma);
    f("kappa", p.kappa);
    f("gamma_tilde", p.gamma_tilde);
}

template <class V>
void fields(V& f, GridSpec& g) {
    f("x_min", g.x_min);
    f("x_max", g.x_max);
    f("n", g.n);
}

template <class V>
void fields(V& f, limits::InitialProfileSpec& s) {
    f("base", s.base);
    f("v_pm", s.v_pm);
    f("alpha", s.alpha);
    f("M1", s.M1);
    f("center", s.center);
    f("core", s.core);
    f("transition", s.transition);
    f("dilation", s.dilation);
    f("amplitude", s.amplitude);
    f("compression", s.compression);
    f("compression_center", s.compression_center);
    f("compression_width", s.compression_width);
    f("rarefaction", s.rarefaction);
    f("velocity_width", s.velocity_width);
    f("rho_left", s.rho_left);
    f("rho_right", s.rho_right);
    f("u_left", s.u_left);
    f("u_right", s.u_right);
    f("M2_cap", s.M2_cap);
    f("compression_cap", s.compression_cap);
}

template <class V>
void fields(V& f, viscous::Config& c) {
    f("mu", c.mu);
    f("t_end", c.t_end);
    f("cfl_safety", c.cfl_safety);
    f("snapshots", c.snapshots);
    f("boundary", c.boundary);
    f("rho_floor", c.rho_floor);
    f("floor_scale", c.floor_scale);
    f("mollify", c.mollify);
    f("backend", c.backend);
}

template <class V>
void fields(V& f, psystem::SmoothConfig& c) {
    f("t_end", c.t_end);
    f("cfl_safety", c.cfl_safety);
    f("gradient_growth", c.gradient_growth);
    f("grid_cap", c.grid_cap);
    f("v_floor_margin", c.v_floor_margin);
    f("snapshots", c.snapshots);
    f("boundary", c.boundary);
    f("backend", c.backend);
}

template <class V>
void fields(V& f, EosTableSpec& s) {
    f("excess_min", s.excess_min);
    f("excess_max", s.excess_max);
    f("n", s.n);
    f("rho_min", s.rho_min);
    f("rho_max", s.rho_max);
    f("samples", s.samples);
    f("seed", s.seed);
    f("identity_tolerance", s.identity_tolerance);
    f("closed_form_tolerance", s.closed_form_tolerance);
    f("riccati_gammas", s.riccati_gammas);
    f("riccati_eps_min", s.riccati_eps_min);
    f("riccati_eps_max", s.riccati_eps_max);
    f("riccati_slope_tolerance", s.riccati_slope_tolerance);
}

template <class V>
void fields(V& f, EulerSpec& s) {
    f("resolutions", s.resolutions);
    f("mus", s.mus);
    f("mu_per_dx", s.mu_per_dx);
    f("margin_factor", s.margin_factor);
    f("rounding_level", s.rounding_level);
    f("frame_check", s.frame_check);
}

template <class V>
void fields(V& f, BlowupSpec& s) {
    f("resolutions", s.resolutions);
    f("stride", s.stride);
    f("prediction_tolerance", s.prediction_tolerance);
    f("lower_bound_check", s.lower_bound_check);
    f("exact_reference", s.exact_reference);
    f("exact_tolerance", s.exact_tolerance);
}

template <class V>
void fields(V& f, SweepSpec& s) {
    f("experiment", s.experiment);
    f("epsilons", s.epsilons);
    f("require_well_prepared", s.require_well_prepared);
    f("window_L", s.window_L);
    f("band_factor", s.band_factor);
    f("c_guard", s.c_guard);
    f("slope_tolerance", s.slope_tolerance);
    f("noise_tolerance", s.noise_tolerance);
    f("lower_bound_fraction", s.lower_bound_fraction);
    f("write_runs", s.write_runs);
}

template <class V>
void fields(V& f, EntropySpec& s) {
    f("resolutions", s.resolutions);
    f("snapshot_spacing", s.snapshot_spacing);
    f("min_order", s.min_order);
    f("mus", s.mus);
    f("dissipation_profile", s.dissipation_profile);
    f("dissipation_grid", s.dissipation_grid);
    f("dissipation_t_end", s.dissipation_t_end);
}

template <class V>
void fields(V& f, CoeffSpec& s) {
    f("samples", s.samples);
    f("seed", s.seed);
    f("rho_min", s.rho_min);
    f("rho_max", s.rho_max);
    f("eps_min", s.eps_min);
    f("eps_max", s.eps_max);
    f("gamma_min", s.gamma_min);
    f("gamma_max", s.gamma_max);
    f("tolerance", s.tolerance);
}

template <class V>
void fields(V& f, RunConfig& c) {
    f("command", c.command);
    f("params", c.params);
    f("grid", c.grid);
    f("profile", c.profile);
    f("viscous", c.viscous);
    f("smooth", c.smooth);
    f("eos_table", c.eos_table);
    f("euler", c.euler);
    f("blowup", c.blowup);
    f("sweep", c.sweep);
    f("entropy", c.entropy);
    f("coeff", c.coeff);
    f("workers", c.workers);
}

namespace {

std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "constant_extension"; }
std::string to_string(kernels::Backend b) { return b == kernels::Backend::Serial ? "serial" : "openmp"; }

// Field visitors: one list per struct drives both directions.
struct Out {
    ojson& j;
    template <class T>
    void operator()(const char* k, const T& v) { put(j[k], v); }

    static void put(ojson& o, double v) { o = v; }
    static void put(ojson& o, int v) { o = v; }
    static void put(ojson& o, std::size_t v) { o = v; }
    static void put(ojson& o, bool v) { o = v; }
    static void put(ojson& o, const std::string& v) { o = v; }
    static void put(ojson& o, Boundary v) { o = to_string(v); }
    static void put(ojson& o, kernels::Backend v) { o = to_string(v); }
    template <class T>
    static void put(ojson& o, const std::vector<T>& v) {
        o = ojson::array();
        for (const auto& x : v) {
            ojson e;
            put(e, x);
            o.push_back(e);
        }
    }
    template <class T>
    static void put(ojson& o, const T& v) requires requires(Out& w, T& t) { fields(w, t); }
    {
        o = ojson::object();
        Out w{o};
        fields(w, const_cast<T&>(v));
    }
};

struct In {
    const ojson& j;
    std::string path;
    template <class T>
    void operator()(const char* k, T& v) {
        if (j.contains(k)) get(j.at(k), v, path + k);
    }

    [[noreturn]] static void bad(const std::string& key, const char* want) {
        throw ValidationError("config key '" + key + "' must be " + want);
    }
    static void get(const ojson& o, double& v, const std::string& k) {
        if (!o.is_number()) bad(k, "a number");
        v = o.get<double>();
    }
    static void get(const ojson& o, int& v, const std::string& k) {
        if (!o.is_number_integer()) bad(k, "an integer");
        v = o.get<int>();
    }
    static void get(const ojson& o, std::size_t& v, const std::string& k) {
        if (!o.is_number_unsigned() && !(o.is_number_integer() && o.get<long long>() >= 0))
            bad(k, "a nonnegative integer");
        v = o.get<std::size_t>();
    }
    static void get(const ojson& o, bool& v, const std::string& k) {
        if (!o.is_boolean()) bad(k, "true or false");
        v = o.get<bool>();
    }
    static void get(const ojson& o, std::string& v, const std::string& k) {
        if (!o.is_string()) bad(k, "a string");
        v = o.get<std::string>();
    }
    static void get(const ojson& o, Boundary& v, const std::string& k) {
        std::string s;
        get(o, s, k);
        if (s == "periodic") v = Boundary::Periodic;
        else if (s == "constant_extension") v = Boundary::ConstantExtension;
        else bad(k, "\"periodic\" or \"constant_extension\"");
    }
    static void get(const ojson& o, kernels::Backend& v, const std::string& k) {
        std::string s;
        get(o, s, k);
        if (s == "serial") v = kernels::Backend::Serial;
        else if (s == "openmp") v = kernels::Backend::OpenMP;
        else bad(k, "\"serial\" or \"openmp\"");
    }
    template <class T>
    static void get(const ojson& o, std::vector<T>& v, const std::string& k) {
        if (!o.is_array()) bad(k, "an array");
        v.clear();
        for (std::size_t i = 0; i < o.size(); ++i) {
            T x{};
            get(o[i], x, k + "[" + std::to_string(i) + "]");
            v.push_back(x);
        }
    }
    template <class T>
    static void get(const ojson& o, T& v, const std::string& k) requires requires(In& r, T& t) { fields(r, t); }
    {
        if (!o.is_object()) bad(k, "an object");
        In r{o, k.empty() ? k : k + "."};
        fields(r, v);
    }
};

}  // namespace

ojson to_json(const RunConfig& c) {
    ojson j;
    Out::put(j, c);
    return j;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

namespace {

// every key of `patch` must appear in `schema`, recursively through objects
void check_keys(const ojson& schema, const ojson& patch, const std::string& path) {
    if (!patch.is_object()) throw ValidationError((path.empty() ? "config" : "'" + path + "'") + " must be an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string& k = it.key();
        if (!schema.contains(k)) {
            std::string best;
            std::size_t bd = 0;
            for (auto s = schema.begin(); s != schema.end(); ++s) {
                std::size_t d = edit_distance(k, s.key());
                if (best.empty() || d < bd) best = s.key(), bd = d;
            }
            std::string msg = "unknown config key '" + path + k + "'";
            if (!best.empty() && bd <= std::max<std::size_t>(2, k.size() / 3)) msg += "; did you mean '" + path + best + "'?";
            throw ValidationError(msg);
        }
        if (schema.at(k).is_object()) check_keys(schema.at(k), it.value(), path + k + ".");
    }
}

}  // namespace

RunConfig merge(const RunConfig& base, const ojson& patch) {
    check_keys(to_json(RunConfig{}), patch, "");
    RunConfig c = base;
    In::get(patch, c, "");
    return c;
}

RunConfig parse_config(const std::string& text) { return parse_config(text, RunConfig{}); }

RunConfig parse_config(const std::string& text, const RunConfig& base) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    RunConfig c = merge(base, j);
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
        std::string msg = "unknown command '" + c.command + "'";
        std::string best;
        std::size_t bd = 0;
        for (const auto& k : kCommands) {
            std::size_t d = edit_distance(c.command, k);
            if (best.empty() || d < bd) best = k, bd = d;
        }
        if (bd <= 3) msg += "; did you mean '" + best + "'?";
        throw ValidationError(msg);
    }
    if (c.workers < 1) throw ValidationError("workers must be at least 1");
    c.grid.grid();
    const bool weak = c.command == "simulate-euler" || c.command == "entropy-check" || c.command == "coeff-check" ||
                      (c.command == "epsilon-sweep" && c.sweep.experiment == "MaxDensity");
    hsp::validate(c.params, weak ? ParamMode::Weak : ParamMode::Smooth);
    if (c.command == "simulate-euler") {
        viscous::Config v = c.viscous;
        v.params = c.params;
        v.grid = c.grid.grid();
        viscous::validate(v);
        if (c.euler.mu_per_dx < 0) throw ValidationError("euler.mu_per_dx must be nonnegative");
    }
    if (c.command == "simulate-psystem" || c.command == "blowup-study" || c.command == "epsilon-sweep") {
        psystem::SmoothConfig s = c.smooth;
        s.params = c.params;
        s.grid = c.grid.grid();
        psystem::validate(s);
    }
    if (c.command != "eos-table" && c.command != "coeff-check") limits::validate(c.profile, c.params);
    if (c.command == "epsilon-sweep") limits::experiment_from_string(c.sweep.experiment);
    if (c.command == "eos-table") {
        const auto& e = c.eos_table;
        if (!(e.excess_min > 0 && e.excess_max > e.excess_min)) throw ValidationError("eos_table excess range is empty");
        if (e.n < 2) throw ValidationError("eos_table.n must be at least 2");
        if (!(e.rho_min >= 0 && e.rho_max < 1 && e.rho_max > e.rho_min))
            throw ValidationError("eos_table rho range must lie in [0,1)");
        if (!(e.riccati_eps_min > 0 && e.riccati_eps_max > e.riccati_eps_min))
            throw ValidationError("eos_table riccati epsilon range is empty");
    }
    if (c.command == "coeff-check") {
        const auto& k = c.coeff;
        if (!(k.rho_min > 0 && k.rho_max < 1 && k.rho_max > k.rho_min)) throw ValidationError("coeff rho range must lie in (0,1)");
        if (!(k.eps_min > 0 && k.eps_max >= k.eps_min)) throw ValidationError("coeff epsilon range is empty");
        if (!(k.gamma_min >= 1 && k.gamma_max <= 3 && k.gamma_max > k.gamma_min))
            throw ValidationError("coeff gamma range must lie in (1,3]");
    }
    if (c.command == "entropy-check" && c.entropy.resolutions.size() < 2)
        throw ValidationError("entropy.resolutions needs at least 2 entries");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : detail::kPresetData) out.push_back(p.first);
    return out;
}

const std::string& preset_text(const std::string& name) {
    for (const auto& p : detail::kPresetData)
        if (p.first == name) return p.second;
    std::string msg = "unknown preset '" + name + "'";
    std::string best;
    std::size_t bd = 0;
    for (const auto& p : detail::kPresetData) {
        std::size_t d = edit_distance(name, p.first);
        if (best.empty() || d < bd) best = p.first, bd = d;
    }
    if (!best.empty() && bd <= 4) msg += "; did you mean '" + best + "'?";
    throw ValidationError(msg);
}

RunConfig preset(const std::string& name) { return parse_config(preset_text(name)); }

}  // namespace hsp::config
