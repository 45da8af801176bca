#pragma once

#include "syzlab/k3.hpp"
#include "syzlab/report.hpp"
#include "syzlab/sheaf.hpp"
#include "syzlab/topology.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace syzlab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kScenarioVersion = "1";

struct Settings {
    int grid = 16;      // fibre quadrature points per axis
    double tol = 1e-8;
    std::uint64_t seed = 0;
};

// Command-line overrides applied on top of the scenario's own settings.
struct SettingsOverride {
    std::optional<int> grid;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

struct Scenario {
    std::string version;
    std::string name;
    std::string kind;  // semiflat-check, dualize, hitchin, yukawa, fibre, sheaf, k3
    Settings settings;
    nlohmann::json payload;
};

// Throws Errc::Parse on malformed JSON and Errc::Schema on unknown or missing fields.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct RunReport {
    nlohmann::json scenario;  // echo of the effective scenario
    Report report;
    nlohmann::json outputs = nlohmann::json::object();  // computed groups, classes, tables
    std::vector<std::pair<std::string, double>> timings;  // seconds
    std::string error;  // set when a module rejected its input
};

RunReport run_scenario(Scenario s, const SettingsOverride& o = {});
// Exit code: 0 if every check passes, 1 otherwise.
int exit_code(const RunReport& r);

nlohmann::json report_json(const RunReport& r, bool with_timings = true);
std::string report_text(const RunReport& r);
// Aligned table of checks.
std::string checks_table(const Report& r);
nlohmann::json checks_json(const Report& r);

// Payload readers shared with the CLI and the Python module.
K3MirrorInput k3_input_from_json(const nlohmann::json& j);
LocalSystem local_system_from_json(const nlohmann::json& j);
E2Table e2_table_from_json(const nlohmann::json& j);
nlohmann::json group_json(const AbelianGroup& g);

nlohmann::json qvector_json(const QVector& v);

struct ModelRow {
    std::string name;
    std::string description;
    int b1, b2;
};
std::vector<ModelRow> list_models(std::optional<std::pair<int, int>> type = std::nullopt);

struct Convention {
    std::string key;
    std::string statement;
};
std::vector<Convention> conventions();

}  // namespace syzlab
