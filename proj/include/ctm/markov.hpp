#ifndef CTM_MARKOV_HPP
#define CTM_MARKOV_HPP

#include <Eigen/Dense>

#include "ctm/rating_scale.hpp"

namespace ctm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance for stochasticity checks. Rows off by no more than this are
/// renormalized; larger violations are rejected unless a wider slack is
/// requested explicitly at construction.
inline constexpr double kStochasticTol = 1e-9;

/// One-year migration probabilities among the K-1 transient classes.
/// Entries in [0,1], row sums <= 1.
class SubstochasticMatrix {
  public:
    /// `row_sum_slack` widens the row-sum check for matrices coming out of
    /// a reconstruction, where the normalization equations hold only up to
    /// the solve residual.
    explicit SubstochasticMatrix(Matrix entries, double row_sum_slack = kStochasticTol);

    const Matrix& entries() const { return q_; }
    int size() const { return static_cast<int>(q_.rows()); } // K-1

  private:
    Matrix q_;
};

/// Full K-state transition matrix in block form: transient block Q, a
/// first-year default column, and an absorbing last row.
class AbsorbingChain {
  public:
    /// Rows of (Q | p1) must sum to 1 within `slack`. Deviations within
    /// kStochasticTol are absorbed into p1 exactly; anything between that
    /// and `slack` is kept as given (rounded published matrices), larger
    /// is rejected.
    AbsorbingChain(RatingScale scale, SubstochasticMatrix q, Vector first_year_default,
                   double slack = kStochasticTol);

    /// Accepts a reconstructed Q whose rows need not close to 1: a deficit
    /// of any size is kept (the chain leaks mass at the solve residual), an
    /// excess beyond `max_excess` is an inconsistency error. No row is
    /// renormalized.
    static AbsorbingChain from_reconstruction(RatingScale scale, SubstochasticMatrix q,
                                              Vector first_year_default,
                                              double max_excess = 1e-6);

    const RatingScale& scale() const { return scale_; }
    const SubstochasticMatrix& q() const { return q_; }
    const Vector& first_year_default() const { return p1_; }

    /// The assembled K x K matrix.
    Matrix full_matrix() const;

  private:
    struct lenient_tag {};
    AbsorbingChain(lenient_tag, RatingScale scale, SubstochasticMatrix q, Vector p1);

    RatingScale scale_;
    SubstochasticMatrix q_;
    Vector p1_;
};

/// Cumulative default probabilities p_i(n) for the transient classes,
/// columns n = 1..horizon.
class DefaultCurveTable {
  public:
    enum class MonotonePolicy {
        require, // violation is a logic error (generated tables)
        warn,    // violation warns and is kept (ingested tables, default)
        strict,  // violation is an input error (--strict-monotone)
    };

    DefaultCurveTable(RatingScale scale, Matrix curves,
                      MonotonePolicy policy = MonotonePolicy::require);

    const RatingScale& scale() const { return scale_; }
    int horizon() const { return static_cast<int>(curves_.cols()); }
    const Matrix& curves() const { return curves_; }

    /// Column for year n (1-based).
    Vector column(int year) const;

  private:
    RatingScale scale_;
    Matrix curves_; // (K-1) x horizon
};

/// p(n) = p(1) + Q p(n-1) for n = 1..horizon.
DefaultCurveTable cumulative_default_curves(const AbsorbingChain& chain, int horizon);

/// P^n with its block structure preserved. n = 0 returns the identity.
Matrix chain_power(const AbsorbingChain& chain, int n);

/// (I - Q)^{-1}: expected years spent in class j before default, starting
/// from class i. Throws if I - Q is singular (chain not absorbing).
Matrix fundamental_matrix(const SubstochasticMatrix& q);

/// Row sums of the fundamental matrix: expected years to default per
/// starting class.
Vector mean_time_to_default(const SubstochasticMatrix& q);

} // namespace ctm

#endif
