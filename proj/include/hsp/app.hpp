#pragma once

#include "hsp/config.hpp"
#include "hsp/io.hpp"

namespace hsp::app {

struct Outcome {
    ojson report;  // command, pass, flags, results, config
    bool pass = true;
};

// Runs c.command. With a writer, report.json and the command's CSVs go through
// it; the manifest is left to the caller.
Outcome execute(const config::RunConfig& c, io::Writer* out = nullptr);

}  // namespace hsp::app
