// hsplab <command> [--config f.json] [--preset name] [--out dir] [--workers n]
// exit 0: ran and every check passed; 1: ran, some check failed; 2: error
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hsp/app.hpp"
#include "hsp/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw hsp::ValidationError("cannot read config file " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Hard-sphere congestion experiments"};
    cli.require_subcommand(0, 1);
    std::string config_path, preset, out_dir = "out";
    int workers = 0;
    bool list = false;
    cli.add_option("--config", config_path, "JSON config, overlaid on the preset if both are given");
    cli.add_option("--preset", preset, "bundled config by name");
    cli.add_option("--out", out_dir, "output directory")->capture_default_str();
    cli.add_option("--workers", workers, "parallel runs (overrides the config)")->check(CLI::PositiveNumber);
    cli.add_flag("--list-presets", list, "print the bundled preset names");
    for (const auto& name : hsp::config::kCommands) cli.add_subcommand(name, "run " + name)->fallthrough();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e) == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& p : hsp::config::preset_names()) std::cout << p << "\n";
        return 0;
    }

    try {
        hsp::config::RunConfig cfg;
        if (!preset.empty()) cfg = hsp::config::preset(preset);
        if (!config_path.empty()) cfg = hsp::config::parse_config(slurp(config_path), cfg);
        if (!cli.get_subcommands().empty()) cfg.command = cli.get_subcommands().front()->get_name();
        else if (preset.empty() && config_path.empty()) throw hsp::ValidationError("give a command, --config or --preset");
        if (workers > 0) cfg.workers = workers;

        hsp::io::Writer out(out_dir);
        auto o = hsp::app::execute(cfg, &out);
        out.manifest();
        for (const auto& f : o.report["flags"])
            std::cout << (f["pass"].get<bool>() ? "PASS " : "FAIL ") << f["name"].get<std::string>() << ": "
                      << f["detail"].get<std::string>() << "\n";
        std::cout << cfg.command << ": " << (o.pass ? "pass" : "FAIL") << " (" << out_dir << "/report.json)\n";
        return o.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
