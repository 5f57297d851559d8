#pragma once

#include "lxtopic/types.hpp"

#include <cstdint>

namespace lxtopic {

struct SvdOptions {
    std::uint64_t seed = 0x5eed;
    int max_iterations = 50;
    double tolerance = 1e-8; // Frobenius change of the projected basis
};

/// Rank-h factorization A ~= U diag(S) V^T with S descending.
///
/// Computed by block subspace iteration on A^T A from a seeded Gaussian start,
/// followed by a Rayleigh-Ritz step on the h-dimensional subspace. Each column
/// of V is sign-fixed so that its largest-magnitude entry (first one on ties)
/// is nonnegative; U follows the same flip.
struct TruncatedSvd {
    Matrix U;
    Vector S;
    Matrix V;
    int iterations = 0;
};

TruncatedSvd truncated_svd(const Matrix& a, int h, const SvdOptions& options = {});
TruncatedSvd truncated_svd(const SparseMatrix& a, int h, const SvdOptions& options = {});

} // namespace lxtopic
