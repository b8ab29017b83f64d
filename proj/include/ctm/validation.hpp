#ifndef CTM_VALIDATION_HPP
#define CTM_VALIDATION_HPP

#include <vector>

#include "ctm/entropic_solver.hpp"

namespace ctm {

/// Grid of l1 prediction errors: one row per amount of data used, one
/// column per forecast year.
struct PredictionErrorTable {
    std::vector<int> years_of_data;   // row labels
    std::vector<int> prediction_years; // column labels
    Matrix errors;                     // rows x cols, >= 0
    std::vector<bool> row_converged;   // solve outcome per row
};

/// Rebuild the full chain from a reconstructed Q and the observed year-1
/// default column. Rows may undershoot 1 (by the solve residual); an
/// excess beyond max_excess is an inconsistency error. Nothing is
/// renormalized beyond the 1e-9 exactness window.
AbsorbingChain augment(const SubstochasticMatrix& q_star, const Vector& first_year,
                       const RatingScale& scale, double max_excess = 1e-6);

/// l1 norm of the difference of one year's columns.
double l1_curve_error(const DefaultCurveTable& reference, const DefaultCurveTable& predicted,
                      int year);

/// For each N in data_years: assemble from the first N years of the
/// reference, solve, augment, forward-predict, and tabulate l1 errors at
/// each prediction year. A failed solve marks its row instead of aborting.
PredictionErrorTable consistency_table(const DefaultCurveTable& reference,
                                       const std::vector<int>& data_years,
                                       const std::vector<int>& predict_years,
                                       const BoxConstraints& box_spec,
                                       const SolverConfig& config);

} // namespace ctm

#endif
