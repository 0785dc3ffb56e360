#include "hsp/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "hsp/riemann.hpp"

namespace hsp::io {

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf;
    auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), r.ptr);
}

Writer::Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

void Writer::text(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    f.close();
    if (!f) throw std::runtime_error("write failed: " + path.string());
    auto it = std::find_if(written_.begin(), written_.end(), [&](const Entry& e) { return e.path == name; });
    Entry e{name, content.size(), sha256_hex(content)};
    if (it != written_.end()) *it = e;
    else written_.push_back(e);
}

void Writer::json(const std::string& name, const ojson& j) { text(name, j.dump(2) + "\n"); }

void Writer::csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t k = 0; k < header.size(); ++k) s += (k ? "," : "") + header[k];
    s += "\n";
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) s += ',';
            s += number(r[k]);
        }
        s += "\n";
    }
    text(name, s);
}

void Writer::csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::string s;
    for (std::size_t k = 0; k < header.size(); ++k) s += (k ? "," : "") + header[k];
    s += "\n";
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) s += (k ? "," : "") + r[k];
        s += "\n";
    }
    text(name, s);
}

void Writer::manifest() {
    auto files = written_;
    std::sort(files.begin(), files.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
    ojson j;
    j["files"] = ojson::array();
    for (const auto& e : files) j["files"].push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha}});
    const std::string content = j.dump(2) + "\n";
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write manifest.json");
}

std::vector<std::vector<double>> eulerian_rows(const EulerianTrajectory& traj) {
    std::vector<std::vector<double>> rows;
    if (traj.size() == 0) return rows;
    const auto bound = riemann::RegionBound::from_initial(traj.states.front(), traj.params);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        const auto inv = riemann::riemann_invariants_eulerian(s, traj.params);
        for (std::size_t i = 0; i < s.rho.size(); ++i) {
            double u = s.rho[i] > 0 ? s.m[i] / s.rho[i] : 0.0;
            double margin = std::min(bound.M - inv.w[i], bound.M + inv.z[i]);
            rows.push_back({traj.t[k], s.grid.x(i), s.rho[i], s.m[i], u, inv.w[i], inv.z[i], margin});
        }
    }
    return rows;
}

std::vector<std::vector<double>> lagrangian_rows(const LagrangianTrajectory& traj) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        const auto inv = riemann::riemann_invariants_lagrangian(s, traj.params);
        const auto ric = riemann::riccati_variables(s, traj.params, kernels::Backend::Serial);
        for (std::size_t i = 0; i < s.v.size(); ++i)
            rows.push_back({traj.t[k], s.grid.x(i), s.v[i], s.u[i], inv.w[i], inv.z[i], ric.y[i], ric.q[i],
                            eos::riccati_coefficient(s.v[i], traj.params)});
    }
    return rows;
}

std::vector<std::vector<std::string>> long_rows(const ExperimentReport& r) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& rec : r.records) {
        const ojson j = to_json(rec);
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "epsilon" || !it.value().is_number()) continue;
            rows.push_back({it.key(), number(rec.epsilon), number(it.value().get<double>())});
        }
        if (rec.extra.is_object())
            for (auto it = rec.extra.begin(); it != rec.extra.end(); ++it)
                if (it.value().is_number()) rows.push_back({it.key(), number(rec.epsilon), number(it.value().get<double>())});
    }
    return rows;
}

}  // namespace hsp::io
