#include "lxtopic/svd.hpp"

#include "lxtopic/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace lxtopic {

namespace {

using ColMatrix = Eigen::MatrixXd;

ColMatrix orthonormalize(const ColMatrix& x) {
    Eigen::HouseholderQR<ColMatrix> qr(x);
    return qr.householderQ() * ColMatrix::Identity(x.rows(), x.cols());
}

template <typename MatrixType>
TruncatedSvd run(const MatrixType& a, int h, const SvdOptions& options) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (h < 1 || h > std::min(m, n)) {
        throw Error(ErrorCode::DimensionTooLarge, "truncated_svd",
                    "rank " + std::to_string(h) + " not in [1, " + std::to_string(std::min(m, n)) + "]");
    }

    Rng rng(options.seed);
    ColMatrix q(n, h);
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) q(i, j) = rng.normal();
    }
    q = orthonormalize(q);

    TruncatedSvd out;
    for (int it = 0; it < options.max_iterations; ++it) {
        const ColMatrix aq = a * q;
        ColMatrix next = orthonormalize(a.transpose() * aq);
        const double change = (next - q * (q.transpose() * next)).norm();
        q = std::move(next);
        out.iterations = it + 1;
        if (change <= options.tolerance) break;
    }

    const ColMatrix b = a * q;
    Eigen::SelfAdjointEigenSolver<ColMatrix> eig(b.transpose() * b);
    // Eigenvalues come back ascending.
    const ColMatrix vecs = eig.eigenvectors().rowwise().reverse();
    const Vector vals = eig.eigenvalues().reverse();

    ColMatrix v = q * vecs;
    out.S = vals.cwiseMax(0.0).cwiseSqrt();
    for (Eigen::Index j = 0; j < h; ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(v(i, j)) > best) {
                best = std::abs(v(i, j));
                arg = i;
            }
        }
        if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
    }
    ColMatrix u = a * v;
    const double floor = out.S.size() > 0 ? out.S(0) * 1e-13 : 0.0;
    for (Eigen::Index j = 0; j < h; ++j) {
        if (out.S(j) > floor && out.S(j) > 0.0) {
            u.col(j) /= out.S(j);
        } else {
            u.col(j).setZero();
        }
    }
    out.U = u;
    out.V = v;
    return out;
}

} // namespace

TruncatedSvd truncated_svd(const Matrix& a, int h, const SvdOptions& options) { return run(a, h, options); }

TruncatedSvd truncated_svd(const SparseMatrix& a, int h, const SvdOptions& options) { return run(a, h, options); }

} // namespace lxtopic
