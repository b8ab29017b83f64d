#include "ctm/entropic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctm/errors.hpp"

namespace ctm {

namespace {

// 1/(1+e^{-z}) without overflow, clamped strictly inside (0,1) so the
// recovered primal never touches its bounds.
double stable_sigmoid(double z) {
    double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    return std::clamp(s, 1e-12, 1.0 - 1e-12);
}

// x_j for one coordinate given tau_j.
double primal_coordinate(double a, double b, double tau) {
    double d = b - a;
    if (d == 0.0) return a;
    return a + d * stable_sigmoid(d * tau);
}

void check_lambda(const LinearSystem& system, const Vector& lambda) {
    if (lambda.size() != system.a.rows())
        throw std::invalid_argument("lambda has wrong length");
}

// ln(e^{a tau} + e^{b tau}) summed in log-sum-exp form.
double dual_m_raw(const Vector& tau, const Vector& lo, const Vector& hi) {
    double sum = 0.0;
    for (int j = 0; j < tau.size(); ++j) {
        double at = lo(j) * tau(j), bt = hi(j) * tau(j);
        sum += std::max(at, bt) + std::log1p(std::exp(-std::abs(at - bt)));
    }
    return sum;
}

} // namespace

double entropy(const Vector& x, const BoxConstraints& box) {
    if (x.size() != box.dim()) throw std::invalid_argument("entropy: x has wrong length");
    double sum = 0.0;
    for (int j = 0; j < x.size(); ++j) {
        double a = box.lower()(j), b = box.upper()(j), d = b - a;
        if (d == 0.0) continue;
        double s = (x(j) - a) / d;
        if (!(s > 0.0 && s < 1.0)) {
            std::ostringstream os;
            os << "entropy: coordinate " << j << " = " << x(j) << " not strictly inside ("
               << a << "," << b << ")";
            throw std::domain_error(os.str());
        }
        sum += s * std::log(s) + (1.0 - s) * std::log(1.0 - s);
    }
    return sum;
}

double dual_m(const Vector& tau, const BoxConstraints& box) {
    if (tau.size() != box.dim()) throw std::invalid_argument("dual_m: tau has wrong length");
    return dual_m_raw(tau, box.lower(), box.upper());
}

double dual_objective(const LinearSystem& system, const Vector& lambda) {
    check_lambda(system, lambda);
    return lambda.dot(system.y) - dual_m(system.a.transpose() * lambda, system.box);
}

Vector primal_from_dual(const LinearSystem& system, const Vector& lambda) {
    check_lambda(system, lambda);
    Vector tau = system.a.transpose() * lambda;
    Vector x(tau.size());
    for (int j = 0; j < tau.size(); ++j)
        x(j) = primal_coordinate(system.box.lower()(j), system.box.upper()(j), tau(j));
    return x;
}

Vector dual_gradient(const LinearSystem& system, const Vector& lambda) {
    return system.y - system.a * primal_from_dual(system, lambda);
}

DualSolution solve(const LinearSystem& system, const SolverConfig& config) {
    const int rows = static_cast<int>(system.a.rows());
    const int cols = static_cast<int>(system.a.cols());
    if (config.tolerance <= 0.0) throw std::invalid_argument("tolerance must be positive");
    if (!(config.min_step <= config.initial_step && config.initial_step <= config.max_step))
        throw std::invalid_argument("initial step outside step safeguard");
    if (!system.a.allFinite() || !system.y.allFinite())
        throw input_error("solve: system contains non-finite entries");

    // Pinned unknowns are substituted out: their columns fold into y and
    // the iteration runs on the free coordinates only.
    std::vector<int> free_idx;
    free_idx.reserve(cols);
    for (int j = 0; j < cols; ++j)
        if (!system.box.is_pinned(j)) free_idx.push_back(j);
    const int nfree = static_cast<int>(free_idx.size());

    Vector y_red = system.y;
    for (int j : system.box.pinned()) y_red -= system.box.lower()(j) * system.a.col(j);

    Matrix a_red(rows, nfree);
    Vector lo(nfree), hi(nfree);
    for (int c = 0; c < nfree; ++c) {
        a_red.col(c) = system.a.col(free_idx[c]);
        lo(c) = system.box.lower()(free_idx[c]);
        hi(c) = system.box.upper()(free_idx[c]);
    }

    Vector lambda;
    if (config.initial_lambda.size() == 0)
        lambda = Vector::Zero(rows);
    else if (config.initial_lambda.size() == rows)
        lambda = config.initial_lambda;
    else
        throw std::invalid_argument("initial lambda has wrong length");
    if (!lambda.allFinite()) throw input_error("solve: initial lambda not finite");

    auto primal_red = [&](const Vector& tau) {
        Vector x(nfree);
        for (int c = 0; c < nfree; ++c) x(c) = primal_coordinate(lo(c), hi(c), tau(c));
        return x;
    };
    auto gradient_at = [&](const Vector& l) -> Vector {
        return y_red - a_red * primal_red(a_red.transpose() * l);
    };

    Vector grad = gradient_at(lambda);
    double gnorm = grad.norm();
    Vector best_lambda = lambda;
    double best_gnorm = gnorm;

    Vector prev_lambda, prev_grad;
    int iter = 0;
    // With every unknown pinned the gradient is constant; nothing to iterate.
    while (nfree > 0 && gnorm > config.tolerance && iter < config.max_iterations) {
        double step = config.initial_step;
        if (iter > 0) {
            // BB1 on -Sigma: s = delta lambda, d = descent-gradient difference.
            Vector s = lambda - prev_lambda;
            Vector d = prev_grad - grad;
            double sd = s.dot(d), dd = d.dot(d);
            step = sd / dd;
            if (!std::isfinite(step) || step <= 0.0) step = config.fallback_step;
            step = std::clamp(step, config.min_step, config.max_step);
        }
        prev_lambda = lambda;
        prev_grad = grad;
        lambda += step * grad; // ascent
        grad = gradient_at(lambda);
        gnorm = grad.norm();
        ++iter;
        if (gnorm < best_gnorm) {
            best_gnorm = gnorm;
            best_lambda = lambda;
        }
    }

    DualSolution out;
    out.lambda_star = best_lambda;
    out.iterations = iter;
    out.gradient_norm = best_gnorm;
    out.converged = best_gnorm <= config.tolerance;
    out.dual_value = best_lambda.dot(y_red) - dual_m_raw(a_red.transpose() * best_lambda, lo, hi);
    Vector x_free = primal_red(a_red.transpose() * best_lambda);
    out.x_star = Vector(cols);
    for (int j : system.box.pinned()) out.x_star(j) = system.box.lower()(j);
    for (int c = 0; c < nfree; ++c) out.x_star(free_idx[c]) = x_free(c);
    return out;
}

} // namespace ctm
