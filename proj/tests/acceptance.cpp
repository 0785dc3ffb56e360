// One line per acceptance criterion, each backed by one or more bundled presets.
// Exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "hsp/app.hpp"

namespace {

struct Criterion {
    int id;
    const char* title;
    std::vector<std::string> presets;
};

const std::vector<Criterion> kCriteria{
    {1, "EOS identities and closed forms", {"ac1"}},
    {2, "Riccati coefficient regime exponents", {"ac2"}},
    {3, "entropy coefficient identities", {"ac3"}},
    {4, "invariant region under viscosity", {"ac4"}},
    {5, "maximal density scaling", {"ac5"}},
    {6, "rarefactive / compressive dichotomy", {"ac6-rarefactive", "ac6-compressive"}},
    {7, "blow-up time", {"ac7-constant-a", "ac7-generic"}},
    {8, "epsilon-uniform existence time", {"ac8"}},
    {9, "uniform pressure control", {"ac9"}},
    {10, "exclusion constraint", {"ac10"}},
    {11, "incompressibility on the congested set", {"ac11"}},
    {12, "entropy residual and dissipation", {"ac12"}},
    {13, "Eulerian / Lagrangian frame consistency", {"ac13"}},
};

}  // namespace

int main() {
    int failed = 0;
    for (const auto& c : kCriteria) {
        bool ok = true;
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto& name : c.presets) {
            try {
                auto o = hsp::app::execute(hsp::config::preset(name));
                ok = ok && o.pass;
                for (const auto& f : o.report["flags"])
                    if (!f["pass"].get<bool>())
                        detail += " [" + name + ": " + f["name"].get<std::string>() + " " +
                                  f["detail"].get<std::string>() + "]";
            } catch (const std::exception& e) {
                ok = false;
                detail += " [" + name + " error: " + e.what() + "]";
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("AC%-2d %-42s %s  (%.1fs)%s\n", c.id, c.title, ok ? "PASS" : "FAIL", secs, detail.c_str());
        std::fflush(stdout);
        failed += ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", int(kCriteria.size()) - failed, kCriteria.size());
    return failed ? 1 : 0;
}
