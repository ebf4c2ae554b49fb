#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "paramix/analysis.hpp"
#include "paramix/isolator.hpp"
#include "paramix/mixer.hpp"
#include "paramix/parity.hpp"

namespace paramix::config {

using json = nlohmann::json;

// JSON pointer -> 1-based line where that value starts.
using LineMap = std::map<std::string, int>;
LineMap line_map(const std::string& text);

struct Issue {
    std::string pointer;
    std::string message;
};

// The embedded "paramix/1" schema.
const json& schema();
// Validates `doc` against the schema node at `def` ("" for the root).
std::vector<Issue> check(const json& doc, const std::string& def = "");

struct Document {
    std::string path;
    json value;
    LineMap lines;
};

// Parses and validates a run configuration. Throws ConfigError with
// "path:line: pointer: message" text.
Document load(const std::string& path);
Document parse(const std::string& text, const std::string& path = "<config>");
// Prefixes a "/pointer: message" error with the document path and line.
std::string locate(const Document& doc, const std::string& message);

// Throws Error if an emitted document does not match its output schema.
void check_output(const json& doc, const std::string& def);

JpcParams stage_from(const json& j, JpcParams base = {});
JisConfig jis_from(const json& j);
JrmParams jrm_from(const json& j);
std::vector<double> grid_from(const json& j);
ReadoutChainRecord record_from(const json& j);
PumpPort pump_port_from(const std::string& s);
std::string pump_port_name(PumpPort p);
Parity parity_from(const std::string& s);

}  // namespace paramix::config
