#include "hsp/report.hpp"

namespace hsp {
namespace {

ojson opt(const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); }

}  // namespace

ojson to_json(const EpsilonRecord& r) {
    ojson j;
    j["epsilon"] = r.epsilon;
    if (r.mu) j["mu"] = *r.mu;
    j["max_rho"] = opt(r.max_rho);
    j["min_v"] = opt(r.min_v);
    j["t_star_numeric"] = opt(r.t_star_numeric);
    j["t_star_lower_bound"] = opt(r.t_star_lower_bound);
    j["pressure_L1"] = opt(r.pressure_L1);
    j["exclusion_residual"] = opt(r.exclusion_residual);
    j["congested_measure"] = opt(r.congested_measure);
    j["incompressibility_sup"] = opt(r.incompressibility_sup);
    if (!r.extra.empty()) j["extra"] = r.extra;
    return j;
}

ojson to_json(const Fit& f) {
    return ojson{{"name", f.name}, {"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

ojson to_json(const ExperimentReport& r) {
    ojson j;
    j["experiment"] = r.experiment;
    j["records"] = ojson::array();
    for (const auto& x : r.records) j["records"].push_back(to_json(x));
    j["fits"] = ojson::array();
    for (const auto& f : r.fits) j["fits"].push_back(to_json(f));
    j["flags"] = ojson::array();
    for (const auto& f : r.flags) j["flags"].push_back({{"name", f.name}, {"pass", f.pass}, {"detail", f.detail}});
    j["pass"] = r.pass();
    if (!r.extra.empty()) j["extra"] = r.extra;
    return j;
}

}  // namespace hsp
