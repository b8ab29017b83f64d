#include "ctm/validation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

AbsorbingChain augment(const SubstochasticMatrix& q_star, const Vector& first_year,
                       const RatingScale& scale, double max_excess) {
    return AbsorbingChain::from_reconstruction(scale, q_star, first_year, max_excess);
}

double l1_curve_error(const DefaultCurveTable& reference, const DefaultCurveTable& predicted,
                      int year) {
    if (!(reference.scale() == predicted.scale()))
        throw std::invalid_argument("l1_curve_error: tables use different rating scales");
    if (year < 1 || year > reference.horizon() || year > predicted.horizon())
        throw std::out_of_range("l1_curve_error: year not covered by both tables");
    return (reference.column(year) - predicted.column(year)).lpNorm<1>();
}

PredictionErrorTable consistency_table(const DefaultCurveTable& reference,
                                       const std::vector<int>& data_years,
                                       const std::vector<int>& predict_years,
                                       const BoxConstraints& box_spec,
                                       const SolverConfig& config) {
    if (data_years.empty() || predict_years.empty())
        throw std::invalid_argument("consistency_table: empty year list");
    for (int n : data_years)
        if (n < 1) throw std::out_of_range("consistency_table: data years must be >= 1");
    int max_predict = 0;
    for (int y : predict_years) {
        if (y < 1 || y > reference.horizon())
            throw std::out_of_range("consistency_table: prediction year outside reference horizon");
        max_predict = std::max(max_predict, y);
    }

    const int rows = static_cast<int>(data_years.size());
    const int cols = static_cast<int>(predict_years.size());
    PredictionErrorTable table;
    table.years_of_data = data_years;
    table.prediction_years = predict_years;
    table.errors = Matrix::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
    table.row_converged.assign(rows, false);

    for (int r = 0; r < rows; ++r) {
        try {
            LinearSystem system = assemble_system(reference, data_years[r], box_spec);
            DualSolution sol = solve(system, config);
            double slack = std::max(kStochasticTol, 1.01 * sol.gradient_norm + 1e-12);
            SubstochasticMatrix q_star =
                matrix_from_vector(sol.x_star, reference.scale(), slack);
            AbsorbingChain chain = augment(q_star, reference.column(1), reference.scale(),
                                           std::max(1e-6, 1.01 * sol.gradient_norm + 1e-12));
            DefaultCurveTable predicted = cumulative_default_curves(chain, max_predict);
            for (int c = 0; c < cols; ++c)
                table.errors(r, c) = l1_curve_error(reference, predicted, predict_years[c]);
            table.row_converged[r] = sol.converged;
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "consistency table: row for " << data_years[r] << " years of data failed: "
               << e.what();
            warn(os.str());
        }
    }

    // More data should not predict worse; surfaced as a warning, not a hard rule.
    for (int c = 0; c < cols; ++c)
        for (int r = 1; r < rows; ++r) {
            if (!table.row_converged[r - 1] || !table.row_converged[r]) continue;
            if (data_years[r - 1] < data_years[r] &&
                table.errors(r, c) > table.errors(r - 1, c) + 1e-12) {
                std::ostringstream os;
                os << "consistency table: prediction error for year " << predict_years[c]
                   << " grows from " << table.errors(r - 1, c) << " to " << table.errors(r, c)
                   << " when data years increase " << data_years[r - 1] << " -> "
                   << data_years[r];
                warn(os.str());
            }
        }
    return table;
}

} // namespace ctm
