#include "bellchsh/report.hpp"

#include "bellchsh/angular.hpp"
#include "bellchsh/correlator.hpp"
#include "bellchsh/phase_space.hpp"
#include "bellchsh/weyl.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace bellchsh {

namespace {

constexpr double kOracleTolerance = 1e-9;
constexpr double kOracleAgreement = 1e-6;
constexpr int kAngularSeeds = 16;
constexpr std::size_t kAngularBudget = 16 * 4000;
constexpr double kAngularTolerance = 1e-12;

Json vector_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json optimizer_settings(int seeds, std::size_t budget, double tol, const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper) {
    return {{"seed_count", seeds},
            {"budget", budget},
            {"tolerance", tol},
            {"lower", vector_json(lower)},
            {"upper", vector_json(upper)}};
}

Json phase_json(const PhaseSetting& s) {
    return {{"alpha", s.alpha}, {"alpha_prime", s.alpha_prime}, {"beta", s.beta}, {"beta_prime", s.beta_prime}};
}

struct Context {
    const RunConfig& config;
    std::vector<std::string>& failures;

    std::size_t budget_or(std::size_t fallback) const { return config.budget.value_or(fallback); }
    double tolerance_or(double fallback) const { return config.tolerance.value_or(fallback); }
    void require(bool condition, std::string what) const {
        if (!condition) failures.push_back(std::move(what));
    }
};

Json run_bounds(const Context& ctx) {
    const double dichotomic = dichotomic_classical_max();
    const PhaseScan free_scan = unconstrained_phase_max();
    const PhaseScan real_scan = real_constrained_phase_max();
    const bool ceiling = free_scan.max_modulus <= kTsirelsonBound + kBoundTolerance;

    ctx.require(dichotomic == 2.0, "bounds: dichotomic maximum differs from 2");
    ctx.require(std::abs(free_scan.max_modulus - kTsirelsonBound) <= 1e-6,
                "bounds: unconstrained phase maximum differs from 2*sqrt(2)");
    ctx.require(std::abs(real_scan.max_modulus - 2.0) <= 1e-12, "bounds: real-constrained maximum differs from 2");
    ctx.require(ceiling, "bounds: Tsirelson ceiling");

    return {{"dichotomic_max", dichotomic},
            {"unconstrained_phase_max", free_scan.max_modulus},
            {"unconstrained_argmax", phase_json(free_scan.argmax)},
            {"unconstrained_evaluations", free_scan.evaluations},
            {"real_constrained_phase_max", real_scan.max_modulus},
            {"real_constrained_argmax", phase_json(real_scan.argmax)},
            {"grid_step", std::numbers::pi / 64.0},
            {"tsirelson_ok", ceiling}};
}

Json run_angular(const Context& ctx) {
    const AngularMaximum best = maximize_angular(ctx.config.rng_seed, kAngularSeeds, ctx.budget_or(kAngularBudget),
                                                 ctx.tolerance_or(kAngularTolerance));
    const bool ceiling = std::abs(best.value) <= kTsirelsonBound + kBoundTolerance;
    ctx.require(ceiling, "angular: Tsirelson ceiling");
    ctx.require(!best.violation, "angular: commuting correlator flagged as a violation");

    const AngularSetting& s = best.setting;
    return {{"maximum", best.value},
            {"angles",
             {{"alpha", s.alpha}, {"alpha_prime", s.alpha_prime}, {"beta", s.beta}, {"beta_prime", s.beta_prime}}},
            {"violation", best.violation},
            {"classical_bound", kTsirelsonBound},
            {"rationale", std::string(kCommutingRationale)},
            {"staggered_set_value", angular_chsh(staggered_angles())},
            {"maximizing_set_value", angular_chsh(maximizing_angles())},
            {"evaluations", best.report.evaluations_used},
            {"converged_starts", best.report.converged_count()},
            {"starts", best.report.seed_results.size()},
            {"tsirelson_ok", ceiling}};
}

Json run_phase_space(const Context& ctx) {
    PhaseSpaceSearch search = PhaseSpaceSearch::standard();
    search.budget = ctx.budget_or(search.budget);
    search.tolerance = ctx.tolerance_or(search.tolerance);
    const PhaseSpaceMaximum best = maximize_phase_space(search, ctx.config.rng_seed);

    Json residuals = Json::object();
    double worst = 0.0;
    const std::pair<const char*, CorrelatorPair> pairs[] = {
        {"ab", CorrelatorPair::AB}, {"apb", CorrelatorPair::ApB},
        {"abp", CorrelatorPair::ABp}, {"apbp", CorrelatorPair::ApBp}};
    for (const auto& [name, pair] : pairs) {
        const QuadratureResult oracle = correlator_oracle(best.setting, pair, kOracleTolerance);
        const double residual = std::abs(oracle.value - phase_space_correlator(best.setting, pair));
        residuals[name] = residual;
        worst = std::max(worst, residual);
        ctx.require(oracle.converged(), std::string("phasespace: oracle did not converge for ") + name);
    }
    residuals["max"] = worst;
    residuals["tolerance"] = kOracleAgreement;
    ctx.require(worst <= kOracleAgreement, "phasespace: closed form disagrees with quadrature");

    const BellWavefunction w = unit_wavefunction(best.setting.ratio);
    const QuadratureResult norm = normalization_by_quadrature(w, kOracleTolerance);
    const double norm_residual = std::abs(norm.value - 1.0);
    ctx.require(norm_residual <= kOracleAgreement, "phasespace: wavefunction normalization");
    ctx.require(best.tsirelson_ok, "phasespace: Tsirelson ceiling");

    const PhaseSpaceSetting& s = best.setting;
    return {{"best_value", best.result.value.real()},
            {"magnitude", best.result.magnitude},
            {"classification", std::string(to_string(best.result.classification))},
            {"classical_bound", best.result.classical_bound_used},
            {"parameters",
             {{"a", s.a}, {"a_prime", s.a_prime}, {"b", s.b}, {"b_prime", s.b_prime}, {"ratio", s.ratio}}},
            {"degraded", best.degraded},
            {"converged_starts", best.report.converged_count()},
            {"starts", best.report.seed_results.size()},
            {"evaluations", best.report.evaluations_used},
            {"oracle_residuals", residuals},
            {"normalization_residual", norm_residual},
            {"settings", optimizer_settings(search.seed_count, search.budget, search.tolerance, search.lower,
                                            search.upper)},
            {"tsirelson_ok", best.tsirelson_ok}};
}

Json weyl_parameters(const WeylSetting& s) {
    return {{"eta", s.eta}, {"eta_prime", s.eta_prime}, {"lambda", s.lambda}, {"a", s.a}, {"b", s.b}};
}

Json run_weyl(const Context& ctx) {
    const WeylSetting ref = reference_weyl_setting();
    const ChshResult ref_result = chsh_weyl(ref);
    const auto norms = weyl_norms(ref);
    const CorrelatorQuad terms = weyl_correlators(ref);

    WeylSearch search = WeylSearch::standard();
    search.budget = ctx.budget_or(search.budget);
    search.tolerance = ctx.tolerance_or(search.tolerance);
    const WeylMaximum best = maximize_weyl(search, ctx.config.rng_seed);

    const bool ceiling = best.tsirelson_ok && tsirelson_ceiling(ref_result);
    ctx.require(ceiling, "weyl: Tsirelson ceiling");

    return {{"reference",
             {{"parameters", weyl_parameters(ref)},
              {"value", ref_result.value.real()},
              {"classification", std::string(to_string(ref_result.classification))},
              {"terms", {terms.ab.real(), terms.apb.real(), terms.abp.real(), terms.apbp.real()}},
              {"norms", {norms[0], norms[1], norms[2], norms[3]}}}},
            {"optimizer",
             {{"best_value", best.result.value.real()},
              {"magnitude", best.result.magnitude},
              {"classification", std::string(to_string(best.result.classification))},
              {"parameters", weyl_parameters(best.setting)},
              {"degraded", best.degraded},
              {"converged_starts", best.report.converged_count()},
              {"starts", best.report.seed_results.size()},
              {"evaluations", best.report.evaluations_used},
              {"exceeds_reference", best.result.magnitude > ref_result.magnitude}}},
            {"settings", optimizer_settings(search.seed_count, search.budget, search.tolerance, search.lower,
                                            search.upper)},
            {"tsirelson_ok", ceiling}};
}

bool selected(Experiment chosen, Experiment e) { return chosen == Experiment::All || chosen == e; }

void write_json(std::ostream& os, const Json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close_pad(2 * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(key).dump() << ": ";
                write_json(os, value, depth + 1);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) os << ",\n";
                os << pad;
                write_json(os, j[i], depth + 1);
            }
            os << "\n" << close_pad << "]";
            return;
        }
        case Json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            os << buf;
            return;
        }
        default: os << j.dump();
    }
}

std::string scalar_text(const Json& j) {
    if (j.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
        return buf;
    }
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else {
        rows.emplace_back(prefix, scalar_text(j));
    }
}

bool type_matches(const Json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "number") return value.is_number() && (!value.is_number_float() || std::isfinite(value.get<double>()));
    if (type == "integer") return value.is_number_integer();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    return false;
}

void check(const Json& value, const Json& schema, const std::string& path, std::vector<std::string>& problems) {
    if (schema.contains("type") && !type_matches(value, schema["type"].get<std::string>())) {
        problems.push_back(path + ": expected " + schema["type"].get<std::string>());
        return;
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) problems.push_back(path + ": missing " + key.get<std::string>());
        }
    }
    if (schema.contains("properties") && value.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (value.contains(key)) check(value[key], sub, path + "." + key, problems);
        }
    }
    if (schema.contains("items") && value.is_array()) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            check(value[i], schema["items"], path + "[" + std::to_string(i) + "]", problems);
        }
    }
}

Json typed(const char* type) { return {{"type", type}}; }

Json object_of(std::initializer_list<std::pair<const char*, Json>> fields) {
    Json props = Json::object();
    Json required = Json::array();
    for (const auto& [name, sub] : fields) {
        props[name] = sub;
        required.push_back(name);
    }
    return {{"type", "object"}, {"required", required}, {"properties", props}};
}

Json array_of(const char* type) { return {{"type", "array"}, {"items", typed(type)}}; }

}  // namespace

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::Bounds: return "bounds";
        case Experiment::Angular: return "angular";
        case Experiment::PhaseSpace: return "phasespace";
        case Experiment::Weyl: return "weyl";
        case Experiment::All: return "all";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (Experiment e : {Experiment::Bounds, Experiment::Angular, Experiment::PhaseSpace, Experiment::Weyl,
                         Experiment::All}) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

RunOutcome run_experiments(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome outcome;
    const Context ctx{config, outcome.failed_assertions};

    Json results = Json::object();
    if (selected(config.experiment, Experiment::Bounds)) results["bounds"] = run_bounds(ctx);
    if (selected(config.experiment, Experiment::Angular)) results["angular"] = run_angular(ctx);
    if (selected(config.experiment, Experiment::PhaseSpace)) results["phasespace"] = run_phase_space(ctx);
    if (selected(config.experiment, Experiment::Weyl)) results["weyl"] = run_weyl(ctx);

    const PhaseSpaceSearch ps = PhaseSpaceSearch::standard();
    const WeylSearch ws = WeylSearch::standard();
    Json defaults = {
        {"angular", optimizer_settings(kAngularSeeds, kAngularBudget, kAngularTolerance,
                                       Eigen::VectorXd::Zero(4),
                                       Eigen::VectorXd::Constant(4, 2.0 * std::numbers::pi))},
        {"phasespace", optimizer_settings(ps.seed_count, ps.budget, ps.tolerance, ps.lower, ps.upper)},
        {"weyl", optimizer_settings(ws.seed_count, ws.budget, ws.tolerance, ws.lower, ws.upper)},
        {"oracle_tolerance", kOracleTolerance},
        {"oracle_agreement", kOracleAgreement},
        {"bound_tolerance", kBoundTolerance}};

    Json& r = outcome.report;
    r["experiment"] = std::string(to_string(config.experiment));
    r["artifact_version"] = std::string(kArtifactVersion);
    r["config"] = {{"experiment", std::string(to_string(config.experiment))},
                   {"format", std::string(to_string(config.format))},
                   {"output_path", config.output_path},
                   {"rng_seed", config.rng_seed},
                   {"budget_override", config.budget ? Json(*config.budget) : Json(nullptr)},
                   {"tolerance_override", config.tolerance ? Json(*config.tolerance) : Json(nullptr)},
                   {"defaults", defaults}};
    r["results"] = results;
    Json failures = Json::array();
    for (const auto& f : outcome.failed_assertions) failures.push_back(f);
    r["assertions"] = {{"passed", outcome.ok()}, {"failures", failures}};
    r["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

std::string to_json_text(const Json& report) {
    std::ostringstream os;
    write_json(os, report, 0);
    os << "\n";
    return os.str();
}

std::string to_csv(const Json& report) {
    std::ostringstream os;
    os << "experiment,quantity,value\n";
    if (report.contains("results")) {
        for (const auto& [experiment, body] : report["results"].items()) {
            std::vector<std::pair<std::string, std::string>> rows;
            flatten(body, "", rows);
            for (const auto& [quantity, value] : rows) {
                os << csv_field(experiment) << "," << csv_field(quantity) << "," << csv_field(value) << "\n";
            }
        }
    }
    if (report.contains("wall_time_seconds")) {
        os << "run,wall_time_seconds," << scalar_text(report["wall_time_seconds"]) << "\n";
    }
    return os.str();
}

Json report_schema() {
    const Json optimizer_block = object_of({{"seed_count", typed("integer")},
                                            {"budget", typed("integer")},
                                            {"tolerance", typed("number")},
                                            {"lower", array_of("number")},
                                            {"upper", array_of("number")}});
    const Json angles = object_of({{"alpha", typed("number")},
                                   {"alpha_prime", typed("number")},
                                   {"beta", typed("number")},
                                   {"beta_prime", typed("number")}});
    const Json weyl_params = object_of({{"eta", typed("number")},
                                        {"eta_prime", typed("number")},
                                        {"lambda", typed("number")},
                                        {"a", typed("number")},
                                        {"b", typed("number")}});

    Json bounds = object_of({{"dichotomic_max", typed("number")},
                             {"unconstrained_phase_max", typed("number")},
                             {"unconstrained_argmax", angles},
                             {"unconstrained_evaluations", typed("integer")},
                             {"real_constrained_phase_max", typed("number")},
                             {"real_constrained_argmax", angles},
                             {"grid_step", typed("number")},
                             {"tsirelson_ok", typed("boolean")}});
    Json angular = object_of({{"maximum", typed("number")},
                              {"angles", angles},
                              {"violation", typed("boolean")},
                              {"classical_bound", typed("number")},
                              {"rationale", typed("string")},
                              {"staggered_set_value", typed("number")},
                              {"maximizing_set_value", typed("number")},
                              {"evaluations", typed("integer")},
                              {"converged_starts", typed("integer")},
                              {"starts", typed("integer")},
                              {"tsirelson_ok", typed("boolean")}});
    Json residuals = object_of({{"ab", typed("number")},
                                {"apb", typed("number")},
                                {"abp", typed("number")},
                                {"apbp", typed("number")},
                                {"max", typed("number")},
                                {"tolerance", typed("number")}});
    Json phasespace = object_of({{"best_value", typed("number")},
                                 {"magnitude", typed("number")},
                                 {"classification", typed("string")},
                                 {"classical_bound", typed("number")},
                                 {"parameters", object_of({{"a", typed("number")},
                                                           {"a_prime", typed("number")},
                                                           {"b", typed("number")},
                                                           {"b_prime", typed("number")},
                                                           {"ratio", typed("number")}})},
                                 {"degraded", typed("boolean")},
                                 {"converged_starts", typed("integer")},
                                 {"starts", typed("integer")},
                                 {"evaluations", typed("integer")},
                                 {"oracle_residuals", residuals},
                                 {"normalization_residual", typed("number")},
                                 {"settings", optimizer_block},
                                 {"tsirelson_ok", typed("boolean")}});
    Json weyl = object_of({{"reference", object_of({{"parameters", weyl_params},
                                                    {"value", typed("number")},
                                                    {"classification", typed("string")},
                                                    {"terms", array_of("number")},
                                                    {"norms", array_of("number")}})},
                           {"optimizer", object_of({{"best_value", typed("number")},
                                                    {"magnitude", typed("number")},
                                                    {"classification", typed("string")},
                                                    {"parameters", weyl_params},
                                                    {"degraded", typed("boolean")},
                                                    {"converged_starts", typed("integer")},
                                                    {"starts", typed("integer")},
                                                    {"evaluations", typed("integer")},
                                                    {"exceeds_reference", typed("boolean")}})},
                           {"settings", optimizer_block},
                           {"tsirelson_ok", typed("boolean")}});

    // Experiments appear only when selected, so none of them is required.
    Json results = {{"type", "object"},
                    {"properties", {{"bounds", bounds}, {"angular", angular}, {"phasespace", phasespace}, {"weyl", weyl}}}};
    Json config = object_of({{"experiment", typed("string")},
                             {"format", typed("string")},
                             {"output_path", typed("string")},
                             {"rng_seed", typed("integer")},
                             {"defaults", typed("object")}});
    config["properties"]["budget_override"] = Json::object();
    config["properties"]["tolerance_override"] = Json::object();

    return object_of({{"experiment", typed("string")},
                      {"artifact_version", typed("string")},
                      {"config", config},
                      {"results", results},
                      {"assertions", object_of({{"passed", typed("boolean")}, {"failures", array_of("string")}})},
                      {"wall_time_seconds", typed("number")}});
}

std::vector<std::string> validate_report(const Json& report) {
    std::vector<std::string> problems;
    check(report, report_schema(), "$", problems);
    return problems;
}

int run(const RunConfig& config, std::ostream& diagnostics) {
    RunOutcome outcome;
    try {
        outcome = run_experiments(config);
    } catch (const std::invalid_argument& e) {
        diagnostics << "error: " << e.what() << "\n";
        return exit_code::usage;
    }
    const std::string text =
        config.format == OutputFormat::Json ? to_json_text(outcome.report) : to_csv(outcome.report);
    if (config.output_path == "-") {
        std::cout << text;
        std::cout.flush();
    } else {
        std::ofstream out(config.output_path, std::ios::binary);
        out << text;
        if (!out) {
            diagnostics << "error: cannot write " << config.output_path << "\n";
            return exit_code::io;
        }
    }
    for (const auto& f : outcome.failed_assertions) diagnostics << "assertion failed: " << f << "\n";
    return outcome.ok() ? exit_code::ok : exit_code::assertion;
}

}  // namespace bellchsh
