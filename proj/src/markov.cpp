#include "ctm/markov.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include <Eigen/LU>

#include "ctm/errors.hpp"

namespace ctm {

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

RatingScale::RatingScale(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2)
        throw std::invalid_argument("rating scale needs at least two labels");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw std::invalid_argument("rating scale: empty label");
        if (!seen.insert(l).second)
            throw std::invalid_argument("rating scale: duplicate label '" + l + "'");
    }
}

std::optional<int> RatingScale::transient_index(const std::string& label) const {
    for (int i = 0; i < transient_count(); ++i)
        if (labels_[i] == label) return i;
    return std::nullopt;
}

SubstochasticMatrix::SubstochasticMatrix(Matrix entries, double row_sum_slack)
    : q_(std::move(entries)) {
    if (q_.rows() != q_.cols() || q_.rows() < 1)
        throw std::invalid_argument("substochastic matrix must be square and non-empty");
    for (int i = 0; i < q_.rows(); ++i) {
        for (int j = 0; j < q_.cols(); ++j) {
            double v = q_(i, j);
            if (!std::isfinite(v) || v < -kStochasticTol || v > 1.0 + kStochasticTol) {
                std::ostringstream os;
                os << "substochastic matrix: entry (" << i << "," << j << ") = " << v
                   << " outside [0,1]";
                throw std::invalid_argument(os.str());
            }
            q_(i, j) = std::clamp(v, 0.0, 1.0);
        }
        double rs = q_.row(i).sum();
        if (rs > 1.0 + row_sum_slack) {
            std::ostringstream os;
            os << "substochastic matrix: row " << i << " sums to " << rs
               << " (allowed slack " << row_sum_slack << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

AbsorbingChain::AbsorbingChain(RatingScale scale, SubstochasticMatrix q,
                               Vector first_year_default, double slack)
    : scale_(std::move(scale)), q_(std::move(q)), p1_(std::move(first_year_default)) {
    const int m = scale_.transient_count();
    if (q_.size() != m || p1_.size() != m)
        throw std::invalid_argument("absorbing chain: dimension mismatch with rating scale");
    bool renormalized = false;
    for (int i = 0; i < m; ++i) {
        double v = p1_(i);
        if (!std::isfinite(v) || v < -kStochasticTol || v > 1.0 + kStochasticTol)
            throw std::invalid_argument("absorbing chain: first-year default outside [0,1]");
        double dev = q_.entries().row(i).sum() + v - 1.0;
        if (std::abs(dev) > slack) {
            std::ostringstream os;
            os << "invalid chain: row " << i << " of (Q|p1) sums to " << 1.0 + dev;
            throw std::invalid_argument(os.str());
        }
        if (std::abs(dev) <= kStochasticTol) {
            double exact = 1.0 - q_.entries().row(i).sum();
            if (std::abs(exact - v) > 1e-14) renormalized = true;
            p1_(i) = std::clamp(exact, 0.0, 1.0);
        } else {
            p1_(i) = std::clamp(v, 0.0, 1.0);
        }
    }
    if (renormalized) warn("absorbing chain: rows renormalized within tolerance");
}

AbsorbingChain::AbsorbingChain(lenient_tag, RatingScale scale, SubstochasticMatrix q, Vector p1)
    : scale_(std::move(scale)), q_(std::move(q)), p1_(std::move(p1)) {}

AbsorbingChain AbsorbingChain::from_reconstruction(RatingScale scale, SubstochasticMatrix q,
                                                   Vector first_year_default, double max_excess) {
    const int m = scale.transient_count();
    if (q.size() != m || first_year_default.size() != m)
        throw std::invalid_argument("absorbing chain: dimension mismatch with rating scale");
    for (int i = 0; i < m; ++i) {
        double v = first_year_default(i);
        if (!std::isfinite(v) || v < -kStochasticTol || v > 1.0 + kStochasticTol)
            throw std::invalid_argument("absorbing chain: first-year default outside [0,1]");
        first_year_default(i) = std::clamp(v, 0.0, 1.0);
        double excess = q.entries().row(i).sum() + first_year_default(i) - 1.0;
        if (excess > max_excess) {
            std::ostringstream os;
            os << "inconsistent reconstruction: row " << i << " of (Q|p1) exceeds 1 by "
               << excess;
            throw std::invalid_argument(os.str());
        }
    }
    return AbsorbingChain(lenient_tag{}, std::move(scale), std::move(q),
                          std::move(first_year_default));
}

Matrix AbsorbingChain::full_matrix() const {
    const int m = scale_.transient_count();
    Matrix p = Matrix::Zero(m + 1, m + 1);
    p.topLeftCorner(m, m) = q_.entries();
    p.topRightCorner(m, 1) = p1_;
    p(m, m) = 1.0;
    return p;
}

DefaultCurveTable::DefaultCurveTable(RatingScale scale, Matrix curves, MonotonePolicy policy)
    : scale_(std::move(scale)), curves_(std::move(curves)) {
    if (curves_.rows() != scale_.transient_count() || curves_.cols() < 1)
        throw std::invalid_argument("default curve table: dimension mismatch");
    for (int i = 0; i < curves_.rows(); ++i)
        for (int n = 0; n < curves_.cols(); ++n) {
            double v = curves_(i, n);
            if (!std::isfinite(v) || v < -1e-6 || v > 1.0 + 1e-6) {
                std::ostringstream os;
                os << "default curve table: entry (" << scale_.label(i) << ", year " << n + 1
                   << ") = " << v << " outside [0,1]";
                throw input_error(os.str());
            }
            curves_(i, n) = std::clamp(v, 0.0, 1.0);
        }
    for (int i = 0; i < curves_.rows(); ++i)
        for (int n = 1; n < curves_.cols(); ++n) {
            if (curves_(i, n) + kStochasticTol < curves_(i, n - 1)) {
                std::ostringstream os;
                os << "cumulative defaults for " << scale_.label(i) << " decrease from year "
                   << n << " to " << n + 1 << " (" << curves_(i, n - 1) << " -> "
                   << curves_(i, n) << ")";
                switch (policy) {
                    case MonotonePolicy::require:
                        throw std::logic_error("generated table not monotone: " + os.str());
                    case MonotonePolicy::strict:
                        throw input_error(os.str());
                    case MonotonePolicy::warn:
                        warn(os.str());
                        break;
                }
            }
        }
}

Vector DefaultCurveTable::column(int year) const {
    if (year < 1 || year > horizon())
        throw std::out_of_range("default curve table: year out of range");
    return curves_.col(year - 1);
}

DefaultCurveTable cumulative_default_curves(const AbsorbingChain& chain, int horizon) {
    if (horizon < 1) throw std::out_of_range("horizon must be >= 1");
    const int m = chain.scale().transient_count();
    Matrix curves(m, horizon);
    Vector p = chain.first_year_default();
    curves.col(0) = p;
    for (int n = 1; n < horizon; ++n) {
        p = chain.first_year_default() + chain.q().entries() * p;
        curves.col(n) = p.cwiseMax(0.0).cwiseMin(1.0);
    }
    return DefaultCurveTable(chain.scale(), std::move(curves),
                             DefaultCurveTable::MonotonePolicy::require);
}

Matrix chain_power(const AbsorbingChain& chain, int n) {
    if (n < 0) throw std::out_of_range("chain power: n must be >= 0");
    const int k = chain.scale().size();
    Matrix result = Matrix::Identity(k, k);
    const Matrix p = chain.full_matrix();
    for (int i = 0; i < n; ++i) result *= p;
    return result;
}

Matrix fundamental_matrix(const SubstochasticMatrix& q) {
    const int m = q.size();
    Matrix i_minus_q = Matrix::Identity(m, m) - q.entries();
    Eigen::FullPivLU<Matrix> lu(i_minus_q);
    if (!lu.isInvertible())
        throw std::invalid_argument("non-absorbing chain: I - Q is singular");
    Matrix t = lu.inverse();
    if (t.minCoeff() < -1e-9)
        throw std::invalid_argument("non-absorbing chain: fundamental matrix has negative entries");
    return t.cwiseMax(0.0);
}

Vector mean_time_to_default(const SubstochasticMatrix& q) {
    return fundamental_matrix(q) * Vector::Ones(q.size());
}

} // namespace ctm
