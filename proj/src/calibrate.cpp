#include "lxtopic/calibrate.hpp"

#include "lxtopic/error.hpp"

#include <cmath>

namespace lxtopic {

namespace {

constexpr double kSimplexTol = 1e-6;
constexpr double kDegenerate = 1e-12;

void check_simplex(const Eigen::Ref<const Vector>& w, const std::string& where) {
    if (w.size() == 0) throw Error(ErrorCode::NotASimplex, where, "empty row");
    if (!w.allFinite() || w.minCoeff() < 0.0 || std::abs(w.sum() - 1.0) > kSimplexTol) {
        throw Error(ErrorCode::NotASimplex, where, "row is not a probability vector (sum " + std::to_string(w.sum()) + ")");
    }
}

Vector calibrate_checked(const Eigen::Ref<const Vector>& w, bool* fallback) {
    const double w_min = w.minCoeff();
    Vector out(w.size());
    double total = 0.0;
    for (Eigen::Index t = 0; t < w.size(); ++t) {
        out(t) = std::tanh(w(t) - w_min);
        total += out(t);
    }
    const bool degenerate = total < kDegenerate;
    if (fallback) *fallback = degenerate;
    if (degenerate) return Vector::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
    return out / total;
}

} // namespace

Vector calibrate_row(const Eigen::Ref<const Vector>& w, bool* fallback) {
    check_simplex(w, "calibrate_row");
    return calibrate_checked(w, fallback);
}

CalibratedTheta calibrate(const Matrix& theta) {
    CalibratedTheta out;
    out.matrix.resize(theta.rows(), theta.cols());
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        const Vector row = theta.row(i).transpose();
        check_simplex(row, "calibrate (row " + std::to_string(i) + ")");
        bool fallback = false;
        out.matrix.row(i) = calibrate_checked(row, &fallback).transpose();
        if (fallback) out.fallback_rows.insert(static_cast<std::size_t>(i));
    }
    return out;
}

} // namespace lxtopic
