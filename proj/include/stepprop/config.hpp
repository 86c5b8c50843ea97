#pragma once

#include <json.hpp>
#include <set>
#include <string>

#include "stepprop/oracle.hpp"
#include "stepprop/potential.hpp"
#include "stepprop/propagator.hpp"
#include "stepprop/spectroscopy.hpp"

namespace stepprop {

using json = nlohmann::json;

enum class OutputFormat { Csv, Json };
std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

// Reads keys from a JSON object and rejects whatever was not consumed.
class ParamReader {
public:
    ParamReader(const json& obj, std::string where);

    double number(const std::string& key, double fallback);
    double number(const std::string& key);
    int integer(const std::string& key, int fallback);
    std::string text(const std::string& key, const std::string& fallback);
    bool has(const std::string& key) const;
    const json& raw(const std::string& key);

    // Throws ValidationError naming the first unknown key.
    void finish() const;

private:
    const json& obj_;
    std::string where_;
    std::set<std::string> used_;
};

json to_json(const StepModel& model);
StepModel model_from_json(const json& j);
json to_json(const QuadratureConfig& cfg);
QuadratureConfig quadrature_from_json(const json& j);
json to_json(const OmegaWindow& w);
OmegaWindow window_from_json(const json& j);
json to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);

struct RunConfig {
    std::string command;
    StepModel model;
    json params = json::object();
    std::string output;  // empty: stdout
    OutputFormat format = OutputFormat::Csv;
    int threads = 1;
};

json to_json(const RunConfig& c);
// Schema check of the top level and the model block. Command parameters are
// checked by the command that consumes them.
RunConfig run_config_from_json(const json& j);
RunConfig parse_run_config(const std::string& text);

}  // namespace stepprop
