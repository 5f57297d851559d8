#pragma once

#include "lxtopic/types.hpp"

#include <algorithm>

namespace lxtopic::testing {

/// Exact optimal transport for 2x2 problems. Couplings with marginals a, b
/// form the one-parameter family [[t, a0 - t], [b0 - t, a1 - b0 + t]] and the
/// cost is linear in t, so the optimum is at an end of the feasible interval.
inline Matrix lp_2x2(const Matrix& cost, const Vector& a, const Vector& b) {
    const double lo = std::max(0.0, b(0) - a(1));
    const double hi = std::min(a(0), b(0));
    auto plan = [&](double t) {
        Matrix p(2, 2);
        p << t, a(0) - t, b(0) - t, a(1) - b(0) + t;
        return p;
    };
    const Matrix p_lo = plan(lo);
    const Matrix p_hi = plan(hi);
    return p_lo.cwiseProduct(cost).sum() <= p_hi.cwiseProduct(cost).sum() ? p_lo : p_hi;
}

} // namespace lxtopic::testing
