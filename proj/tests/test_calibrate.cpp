#include "lxtopic/artifacts.hpp"
#include "lxtopic/calibrate.hpp"
#include "lxtopic/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace lxtopic;

namespace {

/// Dirichlet(1) draw: normalized exponentials.
Vector random_simplex(Eigen::Index k, Rng& rng) {
    Vector w(k);
    for (Eigen::Index i = 0; i < k; ++i) w(i) = -std::log(1.0 - rng.uniform());
    return w / w.sum();
}

double range(const Vector& v) { return v.maxCoeff() - v.minCoeff(); }

} // namespace

TEST_CASE("calibrate_row matches a direct high-precision evaluation") {
    Vector w(3);
    w << 0.5, 0.3, 0.2;
    bool fallback = true;
    const Vector out = calibrate_row(w, &fallback);
    const long double t1 = std::tanh(0.3L), t2 = std::tanh(0.1L);
    CHECK_FALSE(fallback);
    CHECK(std::abs(out(0) - static_cast<double>(t1 / (t1 + t2))) <= 1e-12);
    CHECK(std::abs(out(1) - static_cast<double>(t2 / (t1 + t2))) <= 1e-12);
    CHECK(out(2) == 0.0);
    CHECK(std::abs(out(0) - 0.74508) <= 1e-5);
    CHECK(std::abs(out(1) - 0.25492) <= 1e-5);
}

TEST_CASE("uniform rows and K = 1 fall back to uniform") {
    bool fallback = false;
    const Vector out = calibrate_row(Vector::Constant(4, 0.25), &fallback);
    CHECK(fallback);
    CHECK(out == Vector::Constant(4, 0.25));
    fallback = false;
    CHECK(calibrate_row(Vector::Ones(1), &fallback)(0) == 1.0);
    CHECK(fallback);

    Matrix theta(2, 2);
    theta << 0.5, 0.5, 0.7, 0.3;
    const CalibratedTheta c = calibrate(theta);
    CHECK(c.fallback_rows == std::set<std::size_t>{0});
    CHECK(c.matrix(1, 0) == 1.0);
    CHECK(c.matrix(1, 1) == 0.0);
}

TEST_CASE("non-simplex input is rejected with the row index") {
    Vector neg(2);
    neg << 1.1, -0.1;
    CHECK_THROWS_AS(calibrate_row(neg), Error);
    Vector off(2);
    off << 0.5, 0.6;
    CHECK_THROWS_AS(calibrate_row(off), Error);
    Matrix theta(3, 2);
    theta << 0.5, 0.5, 0.5, 0.5, 0.9, 0.2;
    try {
        calibrate(theta);
        FAIL("expected NotASimplex");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotASimplex);
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("calibration properties on 1000 random rows") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.index(49));
        const Vector w = random_simplex(k, rng);
        bool fallback = true;
        const Vector out = calibrate_row(w, &fallback);
        REQUIRE_FALSE(fallback);
        CHECK(std::abs(out.sum() - 1.0) <= 1e-9);
        CHECK(out.minCoeff() >= 0.0);
        Eigen::Index arg_in, arg_out, min_in;
        w.maxCoeff(&arg_in);
        out.maxCoeff(&arg_out);
        w.minCoeff(&min_in);
        CHECK(arg_in == arg_out);
        CHECK(out(min_in) == 0.0);
        bool ordered = true;
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = 0; b < k; ++b) ordered = ordered && ((w(a) > w(b)) == (out(a) > out(b)));
        CHECK(ordered);
    }
}

TEST_CASE("tied minima all map to zero") {
    Vector w(4);
    w << 0.4, 0.1, 0.4, 0.1;
    const Vector out = calibrate_row(w);
    CHECK(out(1) == 0.0);
    CHECK(out(3) == 0.0);
    CHECK(out(0) == out(2));
}

TEST_CASE("contrast amplification holds where tanh stays near-linear") {
    // Shifted gaps d = w - min sum to 1 - K min and tanh(d) >= d - d^3/3, so the
    // widest gap grows whenever K * min >= (max - min)^2 / 3.
    Rng rng(8);
    int covered = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.index(49));
        const Vector w = random_simplex(k, rng);
        const Vector out = calibrate_row(w);
        if (k == 2 || static_cast<double>(k) * w.minCoeff() >= range(w) * range(w) / 3.0) {
            CHECK(range(out) >= range(w));
            ++covered;
        }
    }
    CHECK(covered > 500);

    // Outside that region the range can shrink.
    Vector peaked(3);
    peaked << 0.9, 0.1, 0.0;
    CHECK(range(calibrate_row(peaked)) < range(peaked));
}

TEST_CASE("rendered rows carry exactly one zero cell") {
    // Each row of the published proportions table shows a single .000.
    const std::vector<std::vector<std::string>> published{
        {".168", ".000", ".121", ".150", ".089", ".028", ".185", ".092", ".072", ".093"},
        {".199", ".077", ".198", ".217", ".047", ".015", ".000", ".121", ".058", ".067"},
        {".252", ".071", ".115", ".158", ".089", ".000", ".007", ".200", ".090", ".017"},
        {".083", ".105", ".167", ".238", ".057", ".033", ".000", ".221", ".039", ".057"},
        {".260", ".089", ".069", ".121", ".069", ".071", ".007", ".223", ".091", ".000"}};
    for (const auto& row : published) CHECK(std::count(row.begin(), row.end(), ".000") == 1);

    Rng rng(3);
    int rendered = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.index(12));
        const Vector out = calibrate_row(random_simplex(k, rng));
        // Only rows whose second-smallest entry survives rounding are in scope.
        Vector sorted = out;
        std::sort(sorted.data(), sorted.data() + sorted.size());
        if (sorted(1) < 0.0005) continue;
        int zeros = 0;
        for (Eigen::Index t = 0; t < k; ++t) zeros += format_fixed(out(t), 3) == "0.000";
        CHECK(zeros == 1);
        ++rendered;
    }
    CHECK(rendered > 800);
}
