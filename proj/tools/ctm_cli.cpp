// Command-line front end: generate default curves from a chain, reconstruct
// a transition matrix from curves, forward-predict, run consistency tables,
// and report expected times to default.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctm/csv_io.hpp"
#include "ctm/errors.hpp"

namespace {

struct CommonOptions {
    double tolerance = 1e-4;
    int max_iters = 200000;
    bool percent = false;
    bool strict_monotone = false;
    int seed = 0; // reserved; the solver is deterministic
};

void add_solver_flags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--tolerance", opts.tolerance, "Gradient-norm stopping threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", opts.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "Reserved; the solver is deterministic");
}

void add_curve_flags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_flag("--percent", opts.percent, "Curve values are percentages");
    cmd->add_flag("--strict-monotone", opts.strict_monotone,
                  "Reject non-monotone cumulative curves instead of warning");
}

ctm::SolverConfig make_config(const CommonOptions& opts) {
    ctm::SolverConfig config;
    config.tolerance = opts.tolerance;
    config.max_iterations = opts.max_iters;
    return config;
}

std::string default_report_path(const std::string& out) {
    std::filesystem::path p(out);
    p.replace_extension(".report.json");
    return p.string();
}

// Matches the slack policy of the validation pipeline: a reconstructed
// matrix read back from disk may overshoot row sums by the solve residual.
constexpr double kReadbackRowSlack = 0.05;
constexpr double kReadbackExcess = 0.02;

int run_gen_data(const std::string& chain_path, int horizon, const std::string& out) {
    auto chain = ctm::read_chain(chain_path);
    auto table = ctm::cumulative_default_curves(chain, horizon);
    ctm::write_default_curves(out, table);
    std::cout << "wrote " << table.scale().transient_count() << " curves over " << horizon
              << " years to " << out << "\n";
    return 0;
}

int run_solve(const std::string& curves_path, int years, const std::string& constraints_path,
              const CommonOptions& opts, const std::string& out, std::string report_path) {
    auto table = ctm::read_default_curves(curves_path, {opts.percent, opts.strict_monotone});
    auto box = constraints_path.empty()
                   ? ctm::BoxConstraints::unit(table.scale().transient_count() *
                                               table.scale().transient_count())
                   : ctm::read_constraints(constraints_path, table.scale());
    auto system = ctm::assemble_system(table, years, box);
    auto config = make_config(opts);
    auto sol = ctm::solve(system, config);

    double slack = std::max(ctm::kStochasticTol, 1.01 * sol.gradient_norm + 1e-12);
    auto q_star = ctm::matrix_from_vector(sol.x_star, table.scale(), slack);
    ctm::write_transition_matrix(out, q_star, table.scale());

    ctm::RunReport report{sol.converged,
                          sol.iterations,
                          sol.gradient_norm,
                          ctm::residual(system, sol.x_star),
                          sol.dual_value,
                          ctm::entropy(sol.x_star, system.box),
                          q_star,
                          table.scale(),
                          years,
                          config,
                          {}};
    report.input_digests[curves_path] = ctm::file_digest(curves_path);
    if (!constraints_path.empty())
        report.input_digests[constraints_path] = ctm::file_digest(constraints_path);
    if (report_path.empty()) report_path = default_report_path(out);
    ctm::write_text_atomic(report_path, ctm::run_report_json(report));

    std::cout << (sol.converged ? "converged" : "stopped") << " after " << sol.iterations
              << " iterations, reconstruction error " << sol.gradient_norm << "\n"
              << "wrote " << out << " and " << report_path << "\n";
    return sol.converged ? 0 : 3;
}

int run_predict(const std::string& qstar_path, const std::string& curves_path, int horizon,
                const CommonOptions& opts, const std::string& out) {
    auto table = ctm::read_default_curves(curves_path, {opts.percent, opts.strict_monotone});
    auto labeled = ctm::read_transition_matrix(qstar_path);
    for (int i = 0; i < table.scale().transient_count(); ++i)
        if (labeled.labels[i] != table.scale().label(i))
            throw ctm::input_error("transition matrix labels do not match the curve file");
    ctm::SubstochasticMatrix q(labeled.entries, kReadbackRowSlack);
    auto chain = ctm::augment(q, table.column(1), table.scale(), kReadbackExcess);
    auto predicted = ctm::cumulative_default_curves(chain, horizon);
    ctm::write_default_curves(out, predicted);
    std::cout << "wrote predicted curves for years 1.." << horizon << " to " << out << "\n";
    return 0;
}

int run_validate(const std::string& reference_path, const std::string& data_years,
                 const std::string& predict_years, const std::string& constraints_path,
                 const CommonOptions& opts, const std::string& out) {
    auto reference =
        ctm::read_default_curves(reference_path, {opts.percent, opts.strict_monotone});
    auto box = constraints_path.empty()
                   ? ctm::BoxConstraints::unit(reference.scale().transient_count() *
                                               reference.scale().transient_count())
                   : ctm::read_constraints(constraints_path, reference.scale());
    auto table = ctm::consistency_table(reference, ctm::parse_year_list(data_years),
                                        ctm::parse_year_list(predict_years), box,
                                        make_config(opts));
    ctm::write_prediction_errors(out, table);
    std::cout << "wrote " << table.years_of_data.size() << "x" << table.prediction_years.size()
              << " prediction-error table to " << out << "\n";
    return 0;
}

int run_mean_times(const std::string& qstar_path, const std::string& out) {
    auto labeled = ctm::read_transition_matrix(qstar_path);
    ctm::SubstochasticMatrix q(labeled.entries, kReadbackRowSlack);
    auto fundamental = ctm::fundamental_matrix(q);
    auto times = ctm::mean_time_to_default(q);
    ctm::write_mean_times(out, fundamental, times, labeled.labels);
    std::cout << "wrote expected visit counts and times to default to " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Credit transition matrices from cumulative default curves"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string chain_path, curves_path, qstar_path, reference_path;
    std::string constraints_path, out, report_path;
    std::string data_years, predict_years;
    int horizon = 0, years = 0;

    auto* gen = app.add_subcommand("gen-data", "Cumulative default curves from a full chain");
    gen->add_option("--chain", chain_path, "K x K labeled chain CSV")->required();
    gen->add_option("--horizon", horizon, "Years to generate")->required()->check(CLI::PositiveNumber);
    gen->add_option("--out", out, "Output curve CSV")->required();

    auto* solve = app.add_subcommand("solve", "Reconstruct a transition matrix from curves");
    solve->add_option("--curves", curves_path, "Cumulative default curve CSV")->required();
    solve->add_option("--years", years, "Years of data to use")->required()->check(CLI::PositiveNumber);
    solve->add_option("--constraints", constraints_path, "Bounds file (default: [0,1] everywhere)");
    solve->add_option("--out", out, "Output transition matrix CSV")->required();
    solve->add_option("--report", report_path, "Report JSON path (default: next to --out)");
    add_curve_flags(solve, opts);
    add_solver_flags(solve, opts);

    auto* predict = app.add_subcommand("predict", "Forward-predict curves from a reconstruction");
    predict->add_option("--qstar", qstar_path, "Transition matrix CSV")->required();
    predict->add_option("--curves", curves_path, "Curve CSV supplying the year-1 column")->required();
    predict->add_option("--horizon", horizon, "Years to predict")->required()->check(CLI::PositiveNumber);
    predict->add_option("--out", out, "Output curve CSV")->required();
    add_curve_flags(predict, opts);

    auto* validate = app.add_subcommand("validate", "Prediction-error table against a reference");
    validate->add_option("--reference", reference_path, "Reference curve CSV")->required();
    validate->add_option("--data-years", data_years, "Rows, e.g. 4,5,6,7")->required();
    validate->add_option("--predict-years", predict_years, "Columns, e.g. 10-20")->required();
    validate->add_option("--constraints", constraints_path, "Bounds file");
    validate->add_option("--out", out, "Output CSV")->required();
    add_curve_flags(validate, opts);
    add_solver_flags(validate, opts);

    auto* mean = app.add_subcommand("mean-times", "Expected years to default from a matrix");
    mean->add_option("--qstar", qstar_path, "Transition matrix CSV")->required();
    mean->add_option("--out", out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_gen_data(chain_path, horizon, out);
        if (solve->parsed())
            return run_solve(curves_path, years, constraints_path, opts, out, report_path);
        if (predict->parsed())
            return run_predict(qstar_path, curves_path, horizon, opts, out);
        if (validate->parsed())
            return run_validate(reference_path, data_years, predict_years, constraints_path,
                                opts, out);
        if (mean->parsed()) return run_mean_times(qstar_path, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
