#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsp/eos.hpp"
#include "hsp/report.hpp"
#include "hsp/state.hpp"

namespace hsp::io {

std::string sha256_hex(const std::string& bytes);

// shortest text that reads back to the same double
std::string number(double x);

// Writes files under one directory and remembers each one for the manifest.
class Writer {
public:
    explicit Writer(std::filesystem::path dir);

    void text(const std::string& name, const std::string& content);
    void json(const std::string& name, const ojson& j);  // 2-space indent, trailing newline
    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows);
    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows);

    // manifest.json: {"files": [{"path", "bytes", "sha256"}]} sorted by path
    void manifest();

    const std::filesystem::path& dir() const { return dir_; }

private:
    struct Entry {
        std::string path;
        std::size_t bytes;
        std::string sha;
    };
    std::filesystem::path dir_;
    std::vector<Entry> written_;
};

// t,x,rho,m,u,w,z,margin, one block of rows per snapshot
std::vector<std::vector<double>> eulerian_rows(const EulerianTrajectory& traj);
inline const std::vector<std::string> kEulerianHeader{"t", "x", "rho", "m", "u", "w", "z", "margin"};

// t,x,v,u,w,z,y,q,a_eps
std::vector<std::vector<double>> lagrangian_rows(const LagrangianTrajectory& traj);
inline const std::vector<std::string> kLagrangianHeader{"t", "x", "v", "u", "w", "z", "y", "q", "a_eps"};

// metric,epsilon,value from the non-null scalar fields of every record
std::vector<std::vector<std::string>> long_rows(const ExperimentReport& r);

}  // namespace hsp::io
