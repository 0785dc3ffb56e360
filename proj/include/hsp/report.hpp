#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hsp {

using ojson = nlohmann::ordered_json;

struct EpsilonRecord {
    double epsilon = 0.0;
    std::optional<double> mu;
    std::optional<double> max_rho;
    std::optional<double> min_v;
    std::optional<double> t_star_numeric;
    std::optional<double> t_star_lower_bound;
    std::optional<double> pressure_L1;
    std::optional<double> exclusion_residual;
    std::optional<double> congested_measure;
    std::optional<double> incompressibility_sup;
    ojson extra = ojson::object();
};

struct Fit {
    std::string name;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct Flag {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<EpsilonRecord> records;  // sorted by epsilon (or mu) descending
    std::vector<Fit> fits;
    std::vector<Flag> flags;
    ojson extra = ojson::object();

    bool pass() const {
        for (const auto& f : flags)
            if (!f.pass) return false;
        return true;
    }
};

ojson to_json(const EpsilonRecord& r);
ojson to_json(const Fit& f);
ojson to_json(const ExperimentReport& r);

}  // namespace hsp
