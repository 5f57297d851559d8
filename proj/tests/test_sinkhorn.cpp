#include "lxtopic/error.hpp"
#include "lxtopic/sinkhorn.hpp"

#include "lp_oracle.hpp"

#include <doctest.h>

using namespace lxtopic;

namespace {

Vector random_simplex(Eigen::Index n, Rng& rng) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 0.05 + rng.uniform();
    return v / v.sum();
}

Matrix random_cost(Eigen::Index m, Eigen::Index n, Rng& rng) {
    Matrix c(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) c(i, j) = rng.uniform();
    return c;
}

} // namespace

TEST_CASE("sinkhorn 1x1 is forced by the marginals") {
    const TransportPlan p = sinkhorn(Matrix::Constant(1, 1, 3.7), Vector::Ones(1), Vector::Ones(1));
    CHECK(p.plan(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant cost gives the independent coupling") {
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const Vector a = random_simplex(4 + trial, rng);
        const Vector b = random_simplex(7, rng);
        const TransportPlan p = sinkhorn(Matrix::Constant(a.size(), b.size(), 0.8), a, b, {0.05, 200, 1e-12});
        CHECK((p.plan - a * b.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    }
    const TransportPlan u = sinkhorn(Matrix::Constant(2, 2, 1.0), Vector::Constant(2, 0.5), Vector::Constant(2, 0.5));
    CHECK((u.plan - Matrix::Constant(2, 2, 0.25)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("small eps approaches the exact 2x2 LP solution") {
    Matrix cost(2, 2);
    cost << 0, 1, 1, 0;
    const Vector half = Vector::Constant(2, 0.5);
    const TransportPlan p = sinkhorn(cost, half, half, {0.01, 5000, 1e-12});
    Matrix expect(2, 2);
    expect << 0.5, 0, 0, 0.5;
    CHECK((p.plan - expect).cwiseAbs().maxCoeff() <= 1e-3);
    CHECK((p.plan - testing::lp_2x2(cost, half, half)).cwiseAbs().maxCoeff() <= 1e-3);

    Rng rng(8);
    int checked = 0;
    while (checked < 25) {
        const Matrix c = random_cost(2, 2, rng);
        // Skip near-degenerate instances where the LP optimum is not unique.
        if (std::abs(c(0, 0) + c(1, 1) - c(0, 1) - c(1, 0)) < 0.1) continue;
        const Vector a = random_simplex(2, rng);
        const Vector b = random_simplex(2, rng);
        const TransportPlan q = sinkhorn(c, a, b, {1e-3, 20000, 1e-13});
        CHECK((q.plan - testing::lp_2x2(c, a, b)).cwiseAbs().maxCoeff() <= 1e-3);
        ++checked;
    }
}

TEST_CASE("random 10x15 problems meet the marginal tolerance") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix c = random_cost(10, 15, rng);
        const Vector a = random_simplex(10, rng);
        const Vector b = random_simplex(15, rng);
        const TransportPlan p = sinkhorn(c, a, b);
        CHECK(p.converged);
        CHECK(p.marginal_violation <= 1e-6);
        const double recomputed = (p.plan.rowwise().sum() - a).lpNorm<1>() + (p.plan.colwise().sum().transpose() - b).lpNorm<1>();
        CHECK(recomputed == doctest::Approx(p.marginal_violation).epsilon(1e-9));
        CHECK(p.plan.minCoeff() >= 0.0);
        CHECK(std::abs(p.dual_f.mean()) <= 1e-12);
    }
}

TEST_CASE("plan equals the Gibbs form of the returned potentials") {
    Rng rng(4);
    const Matrix c = random_cost(3, 5, rng);
    const Vector a = random_simplex(3, rng);
    const Vector b = random_simplex(5, rng);
    const double eps = 0.2;
    const TransportPlan p = sinkhorn(c, a, b, {eps, 500, 1e-12});
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 5; ++j)
            CHECK(p.plan(i, j) == doctest::Approx(std::exp((p.dual_f(i) + p.dual_g(j) - c(i, j)) / eps)).epsilon(1e-10));
}

TEST_CASE("sinkhorn_duals and warm starts agree with the cold solve") {
    Rng rng(9);
    const Matrix c = random_cost(6, 4, rng);
    const Vector a = random_simplex(6, rng);
    const Vector b = random_simplex(4, rng);
    const TransportPlan cold = sinkhorn(c, a, b, {0.1, 1000, 1e-12});
    const SinkhornDuals d = sinkhorn_duals(c, a, b, {0.1, 1000, 1e-12});
    CHECK((d.g - cold.dual_g).norm() <= 1e-9);
    const TransportPlan warm = sinkhorn(c, a, b, {0.1, 1000, 1e-12, &cold.dual_g});
    CHECK(warm.iterations_used <= 2);
    CHECK((warm.plan - cold.plan).norm() <= 1e-9);
}

TEST_CASE("non-convergence is reported, not thrown") {
    Rng rng(10);
    const Matrix c = random_cost(10, 15, rng) * 5.0;
    const TransportPlan p = sinkhorn(c, random_simplex(10, rng), random_simplex(15, rng), {0.001, 2, 1e-12});
    CHECK_FALSE(p.converged);
    CHECK(p.iterations_used == 2);
    CHECK(p.marginal_violation > 1e-12);
}

TEST_CASE("sinkhorn input validation") {
    Matrix c = Matrix::Zero(2, 2);
    c(1, 0) = std::nan("");
    const Vector half = Vector::Constant(2, 0.5);
    auto code = [](const std::function<void()>& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    CHECK(code([&] { sinkhorn(c, half, half); }) == ErrorCode::InvalidCost);
    CHECK(code([&] { sinkhorn(Matrix::Zero(2, 3), half, half); }) == ErrorCode::DimensionMismatch);
    CHECK(code([&] { sinkhorn(Matrix::Zero(2, 2), half, half, {0.0}); }) == ErrorCode::InvalidConfig);
}
