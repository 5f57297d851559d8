#pragma once

#include "lxtopic/types.hpp"

#include <optional>

namespace lxtopic {

struct SinkhornOptions {
    double eps = 0.1;
    int max_iters = 200;
    double tol = 1e-6;
    /// Optional starting column potential (warm start); must have n entries.
    const Vector* initial_g = nullptr;
};

/// Entropic transport plan between marginals a (m) and b (n).
///
/// plan = diag(exp(f/eps)) exp(-cost/eps) diag(exp(g/eps)), with mean(f) = 0.
/// marginal_violation = |plan 1 - a|_1 + |plan^T 1 - b|_1 of the returned plan.
/// Hitting max_iters is not an error; `converged` records whether tol was met.
struct TransportPlan {
    Matrix plan;
    Vector dual_f;
    Vector dual_g;
    int iterations_used = 0;
    double marginal_violation = 0.0;
    bool converged = false;
};

/// Log-domain Sinkhorn. Throws InvalidCost for NaN/Inf cost entries and
/// DimensionMismatch when shapes disagree.
TransportPlan sinkhorn(const Matrix& cost, const Vector& a, const Vector& b, const SinkhornOptions& options = {});

/// Potentials only, skipping plan materialization; used inside training where
/// only the column potential is consumed.
struct SinkhornDuals {
    Vector f;
    Vector g;
    int iterations_used = 0;
    double marginal_violation = 0.0;
    bool converged = false;
};

SinkhornDuals sinkhorn_duals(const Matrix& cost, const Vector& a, const Vector& b, const SinkhornOptions& options = {});

} // namespace lxtopic
