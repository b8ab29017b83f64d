#include "ctm/assembly.hpp"

#include <cmath>
#include <sstream>

namespace ctm {

BoxConstraints::BoxConstraints(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.size() < 1)
        throw std::invalid_argument("box constraints: bound vectors must have equal length");
    for (int j = 0; j < lower_.size(); ++j) {
        double a = lower_(j), b = upper_(j);
        if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b > 1.0 || a > b) {
            std::ostringstream os;
            os << "box constraints: need 0 <= lower <= upper <= 1 at index " << j << " (got ["
               << a << "," << b << "])";
            throw std::invalid_argument(os.str());
        }
        if (a == b) pinned_.push_back(j);
    }
}

BoxConstraints BoxConstraints::unit(int dim) {
    return BoxConstraints(Vector::Zero(dim), Vector::Ones(dim));
}

std::vector<Vector> build_data_vectors(const DefaultCurveTable& table, int years) {
    if (years < 1 || years > table.horizon())
        throw std::out_of_range("data years outside table horizon");
    std::vector<Vector> q;
    q.reserve(years);
    const Vector p1 = table.column(1);
    q.push_back(Vector::Ones(p1.size()) - p1);
    for (int n = 2; n <= years; ++n) q.push_back(table.column(n) - p1);
    return q;
}

LinearSystem assemble_system(const DefaultCurveTable& table, int years, BoxConstraints box) {
    const int m = table.scale().transient_count();
    if (box.dim() != m * m)
        throw std::invalid_argument("box constraints do not match (K-1)^2 unknowns");
    const auto q = build_data_vectors(table, years);

    Matrix a = Matrix::Zero(years * m, m * m);
    Vector y(years * m);
    for (int k = 0; k < years; ++k) {
        // Block row k: diagonal blocks of u^t (k = 0) or p(k)^t.
        Eigen::RowVectorXd pattern = Eigen::RowVectorXd::Ones(m);
        if (k > 0) pattern = table.column(k).transpose();
        for (int i = 0; i < m; ++i) a.block(k * m + i, i * m, 1, m) = pattern;
        y.segment(k * m, m) = q[k];
    }
    if (y.minCoeff() < -(1.0 + 1e-9) || y.maxCoeff() > 1.0 + 1e-9)
        throw std::invalid_argument("data vector outside [-1,1]");
    return LinearSystem{std::move(a), std::move(y), std::move(box), table.scale(), years};
}

double residual(const LinearSystem& system, const Vector& x) {
    if (x.size() != system.a.cols())
        throw std::invalid_argument("residual: x has wrong length");
    return (system.a * x - system.y).norm();
}

SubstochasticMatrix matrix_from_vector(const Vector& x, const RatingScale& scale,
                                       double row_sum_slack) {
    const int m = scale.transient_count();
    if (x.size() != m * m)
        throw std::invalid_argument("matrix_from_vector: expected length (K-1)^2");
    Matrix q(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) q(i, j) = x(i * m + j);
    return SubstochasticMatrix(std::move(q), row_sum_slack);
}

Vector vector_from_matrix(const SubstochasticMatrix& q) {
    const int m = q.size();
    Vector x(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) x(i * m + j) = q.entries()(i, j);
    return x;
}

} // namespace ctm
