#pragma once

#include "lxtopic/types.hpp"

#include <set>

namespace lxtopic {

struct CalibratedTheta {
    Matrix matrix;
    std::set<std::size_t> fallback_rows;
};

/// Contrast recalibration of one proportion vector:
///   w*_t = tanh(w_t - min w) / sum_t' tanh(w_t' - min w)
/// Order is preserved and the minimum maps to exactly 0. When the denominator
/// is below 1e-12 (uniform rows, K = 1) the uniform vector is returned and
/// `fallback` is set. Throws NotASimplex if w has a negative entry or its sum
/// is more than 1e-6 from one.
Vector calibrate_row(const Eigen::Ref<const Vector>& w, bool* fallback = nullptr);

CalibratedTheta calibrate(const Matrix& theta);

} // namespace lxtopic
