#include "bellchsh/report.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Bell-CHSH correlator experiments"};

    std::string experiment = "all";
    std::string format = "json";
    bellchsh::RunConfig config;
    std::size_t budget = 0;
    double tolerance = 0.0;
    bool schema = false;

    app.add_option("--experiment", experiment, "bounds, angular, phasespace, weyl or all")
        ->check(CLI::IsMember({"bounds", "angular", "phasespace", "weyl", "all"}));
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", config.output_path, "output file, - for stdout");
    app.add_option("--seed", config.rng_seed, "random seed for optimizer starts");
    auto* budget_opt = app.add_option("--budget", budget, "evaluation budget for every optimizer")
                           ->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tol", tolerance, "convergence tolerance for every optimizer")
                        ->check(CLI::PositiveNumber);
    app.add_flag("--schema", schema, "print the report schema and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bellchsh::exit_code::usage;
    }

    if (schema) {
        std::cout << bellchsh::report_schema().dump(2) << "\n";
        return bellchsh::exit_code::ok;
    }

    config.experiment = *bellchsh::parse_experiment(experiment);
    config.format = *bellchsh::parse_format(format);
    if (*budget_opt) config.budget = budget;
    if (*tol_opt) config.tolerance = tolerance;
    return bellchsh::run(config, std::cerr);
}
