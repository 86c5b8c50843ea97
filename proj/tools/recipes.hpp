#pragma once

#include <string>
#include <vector>

#include "stepprop/config.hpp"

namespace stepprop::tools {

struct CommandOutput {
    std::string body;
    json meta = json::object();
};

// Runs one non-recipe command. Throws ValidationError / NumericalError.
CommandOutput execute(const RunConfig& cfg);

// Figure recipes fig1 .. fig18: write plot-ready CSVs and a gnuplot stub into
// params["out_dir"] and return a manifest.
CommandOutput reproduce(const RunConfig& cfg);
std::vector<std::string> recipe_names();

}  // namespace stepprop::tools
