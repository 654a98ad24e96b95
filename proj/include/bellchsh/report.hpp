#pragma once

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace bellchsh {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kArtifactVersion = "1.0.0";

enum class Experiment { Bounds, Angular, PhaseSpace, Weyl, All };
enum class OutputFormat { Json, Csv };

std::string_view to_string(Experiment e);
std::string_view to_string(OutputFormat f);
std::optional<Experiment> parse_experiment(std::string_view name);
std::optional<OutputFormat> parse_format(std::string_view name);

struct RunConfig {
    Experiment experiment = Experiment::All;
    OutputFormat format = OutputFormat::Json;
    std::string output_path = "-";  ///< "-" is standard output
    std::uint64_t rng_seed = 0;
    std::optional<std::size_t> budget;  ///< replaces every optimizer budget
    std::optional<double> tolerance;    ///< replaces every optimizer tolerance
};

struct RunOutcome {
    Json report;
    std::vector<std::string> failed_assertions;

    bool ok() const { return failed_assertions.empty(); }
};

/// Runs the selected experiments and assembles the report. Hard assertions
/// (Tsirelson ceiling, oracle agreement, exact bounds) are collected rather
/// than thrown.
RunOutcome run_experiments(const RunConfig& config);

/// JSON text with every number printed to 17 significant digits.
std::string to_json_text(const Json& report);

/// One row per (experiment, quantity); nested fields are joined with dots.
std::string to_csv(const Json& report);

/// Field layout of the JSON report.
Json report_schema();

/// Structural check of a report against `report_schema()`. Returns the
/// problems found, empty when the report conforms.
std::vector<std::string> validate_report(const Json& report);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int assertion = 3;
inline constexpr int io = 4;
}  // namespace exit_code

/// run_experiments plus serialization to `config.output_path`.
int run(const RunConfig& config, std::ostream& diagnostics);

}  // namespace bellchsh
