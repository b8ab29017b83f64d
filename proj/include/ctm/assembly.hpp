#ifndef CTM_ASSEMBLY_HPP
#define CTM_ASSEMBLY_HPP

#include <vector>

#include "ctm/markov.hpp"

namespace ctm {

/// Per-unknown bounds a_j <= x_j <= b_j over the (K-1)^2 vectorized
/// transition matrix. Coordinates with a_j == b_j are pinned.
class BoxConstraints {
  public:
    BoxConstraints(Vector lower, Vector upper);

    /// The [0,1] box on every cell (minimal constraints).
    static BoxConstraints unit(int dim);

    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    int dim() const { return static_cast<int>(lower_.size()); }
    const std::vector<int>& pinned() const { return pinned_; }
    bool is_pinned(int j) const { return lower_(j) == upper_(j); }

  private:
    Vector lower_, upper_;
    std::vector<int> pinned_;
};

/// The stacked system A x = y. Block row 0 applies the normalization row
/// pattern (all-ones), block row k the year-k default column; the unknown
/// ordering is the row-major stacking of Q.
struct LinearSystem {
    Matrix a;        // N(K-1) x (K-1)^2
    Vector y;        // N(K-1)
    BoxConstraints box;
    RatingScale scale;
    int years_used;  // N
};

/// q(1) = u - p(1); q(n+1) = p(n+1) - p(1). Returns q(1)..q(N).
std::vector<Vector> build_data_vectors(const DefaultCurveTable& table, int years);

LinearSystem assemble_system(const DefaultCurveTable& table, int years, BoxConstraints box);

/// ||A x - y||_2
double residual(const LinearSystem& system, const Vector& x);

/// Inverse of the row-major vectorization. `row_sum_slack` as in
/// SubstochasticMatrix: widen for reconstructed vectors, whose rows close
/// to 1 - p1 only up to the solve residual.
SubstochasticMatrix matrix_from_vector(const Vector& x, const RatingScale& scale,
                                       double row_sum_slack = kStochasticTol);

/// Row-major vectorization of Q.
Vector vector_from_matrix(const SubstochasticMatrix& q);

} // namespace ctm

#endif
