#ifndef CTM_ENTROPIC_SOLVER_HPP
#define CTM_ENTROPIC_SOLVER_HPP

#include "ctm/assembly.hpp"

namespace ctm {

/// Settings for the dual ascent. The two-point (Barzilai-Borwein) step is
/// clamped to [min_step, max_step]; the first iteration uses initial_step
/// and a degenerate BB ratio falls back to fallback_step.
struct SolverConfig {
    double tolerance = 1e-4;       // stop when ||grad|| (= reconstruction error) drops below
    int max_iterations = 200000;
    Vector initial_lambda;         // empty = zeros
    double initial_step = 1e-2;
    double min_step = 1e-8;
    double max_step = 1e8;
    double fallback_step = 1e-2;
};

struct DualSolution {
    Vector lambda_star;   // N(K-1) multipliers at the best iterate
    Vector x_star;        // (K-1)^2 recovered primal, inside the box
    double gradient_norm; // ||y - A x*||, the reconstruction error
    int iterations;
    double dual_value;    // dual objective at lambda_star (pinned terms folded out)
    bool converged;
};

/// Fermi-Dirac type entropy over the box; pinned coordinates are omitted.
/// Throws std::domain_error if any free coordinate sits on or outside its
/// bounds.
double entropy(const Vector& x, const BoxConstraints& box);

/// M(tau) = sum_j ln(e^{a_j tau_j} + e^{b_j tau_j}), evaluated in
/// log-sum-exp form.
double dual_m(const Vector& tau, const BoxConstraints& box);

/// <lambda, y> - M(A^t lambda); concave in lambda.
double dual_objective(const LinearSystem& system, const Vector& lambda);

/// y - A x(lambda), with x(lambda) the closed-form primal below.
Vector dual_gradient(const LinearSystem& system, const Vector& lambda);

/// x_j = a_j + (b_j - a_j) * sigmoid((b_j - a_j) tau_j), tau = A^t lambda.
/// Strictly inside (a_j, b_j) wherever a_j < b_j; equals a_j on pinned
/// coordinates.
Vector primal_from_dual(const LinearSystem& system, const Vector& lambda);

/// Maximize the dual with BB steps and recover the primal. Non-convergence
/// is reported through the flag, not thrown; the best iterate seen (by
/// gradient norm) is returned either way.
DualSolution solve(const LinearSystem& system, const SolverConfig& config = {});

} // namespace ctm

#endif
