#include "lxtopic/sinkhorn.hpp"

#include "lxtopic/error.hpp"

#include <cmath>
#include <limits>

namespace lxtopic {

namespace {

constexpr double kLogFloor = 1e-300;

Vector safe_log(const Vector& x) {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = std::log(std::max(x(i), kLogFloor));
    return out;
}

// f_i = eps log a_i - eps LSE_j((g_j - C_ij) / eps)
void update_rows(const Matrix& cost, const Vector& log_a, const Vector& g, double eps, Vector& f) {
    const Eigen::Index m = cost.rows();
    const Eigen::Index n = cost.cols();
    for (Eigen::Index i = 0; i < m; ++i) {
        const double* c = cost.data() + i * n;
        double hi = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) hi = std::max(hi, g(j) - c[j]);
        double sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) sum += std::exp((g(j) - c[j] - hi) / eps);
        f(i) = eps * log_a(i) - (hi + eps * std::log(sum));
    }
}

// g_j = eps log b_j - eps LSE_i((f_i - C_ij) / eps)
void update_cols(const Matrix& cost, const Vector& log_b, const Vector& f, double eps, Vector& g) {
    const Eigen::Index m = cost.rows();
    const Eigen::Index n = cost.cols();
    Vector hi = Vector::Constant(n, -std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < m; ++i) {
        const double* c = cost.data() + i * n;
        for (Eigen::Index j = 0; j < n; ++j) hi(j) = std::max(hi(j), f(i) - c[j]);
    }
    Vector sum = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double* c = cost.data() + i * n;
        for (Eigen::Index j = 0; j < n; ++j) sum(j) += std::exp((f(i) - c[j] - hi(j)) / eps);
    }
    for (Eigen::Index j = 0; j < n; ++j) g(j) = eps * log_b(j) - (hi(j) + eps * std::log(sum(j)));
}

void validate(const Matrix& cost, const Vector& a, const Vector& b, const SinkhornOptions& options) {
    if (cost.rows() != a.size() || cost.cols() != b.size() || cost.size() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "sinkhorn", "cost shape does not match marginals");
    }
    if (!(options.eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "sinkhorn", "eps must be positive");
    if (!cost.allFinite()) throw Error(ErrorCode::InvalidCost, "sinkhorn", "cost contains NaN or Inf");
    if (options.initial_g && options.initial_g->size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "sinkhorn", "warm-start potential has wrong length");
    }
}

} // namespace

SinkhornDuals sinkhorn_duals(const Matrix& cost, const Vector& a, const Vector& b, const SinkhornOptions& options) {
    validate(cost, a, b, options);
    const double eps = options.eps;
    const Vector log_a = safe_log(a);
    const Vector log_b = safe_log(b);

    SinkhornDuals d;
    d.g = options.initial_g ? *options.initial_g : Vector::Zero(b.size());
    d.f = Vector::Zero(a.size());
    update_rows(cost, log_a, d.g, eps, d.f);

    Vector next_f(a.size());
    double violation = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < options.max_iters) {
        ++it;
        update_cols(cost, log_b, d.f, eps, d.g);
        update_rows(cost, log_a, d.g, eps, next_f);
        // Column sums now equal b; row i sums to a_i exp((f_i - next_f_i) / eps).
        violation = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            const double ai = std::max(a(i), kLogFloor);
            violation += std::abs(ai * std::expm1((d.f(i) - next_f(i)) / eps));
        }
        if (violation <= options.tol) break;
        d.f.swap(next_f);
    }
    d.iterations_used = it;
    d.marginal_violation = violation;
    d.converged = violation <= options.tol;

    const double shift = d.f.mean();
    d.f.array() -= shift;
    d.g.array() += shift;
    return d;
}

TransportPlan sinkhorn(const Matrix& cost, const Vector& a, const Vector& b, const SinkhornOptions& options) {
    SinkhornDuals d = sinkhorn_duals(cost, a, b, options);
    TransportPlan out;
    const double eps = options.eps;
    out.plan.resize(cost.rows(), cost.cols());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
        for (Eigen::Index j = 0; j < cost.cols(); ++j) {
            out.plan(i, j) = std::exp((d.f(i) + d.g(j) - cost(i, j)) / eps);
        }
    }
    out.marginal_violation =
        (out.plan.rowwise().sum() - a).cwiseAbs().sum() + (out.plan.colwise().sum().transpose() - b).cwiseAbs().sum();
    out.iterations_used = d.iterations_used;
    out.converged = out.marginal_violation <= options.tol;
    out.dual_f = std::move(d.f);
    out.dual_g = std::move(d.g);
    return out;
}

} // namespace lxtopic
