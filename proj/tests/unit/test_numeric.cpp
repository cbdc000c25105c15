#include "doctest.h"

#include "tangency/error.hpp"
#include "tangency/numeric.hpp"
#include "tangency/seed_arc.hpp"

#include <cmath>
#include <vector>

using namespace tangency;

TEST_CASE("LogMag arithmetic below the double range") {
    const LogMag a = pow_logmag(0.3, 700);
    CHECK(a.to_double() == 0.0);
    CHECK(a.log_abs() == doctest::Approx(700 * std::log(0.3)));
    const LogMag b = a / pow_logmag(0.3, 699);
    CHECK(b.to_double() == doctest::Approx(0.3));
    CHECK((LogMag::from_double(2.0) + LogMag::from_double(-3.0)).to_double() == doctest::Approx(-1.0));
    CHECK(LogMag::from_double(1e-300) < LogMag::from_double(1e-200));
    CHECK((-LogMag::from_double(5.0)).sign() == -1);
    CHECK(LogMag::zero().is_zero());
}

TEST_CASE("scale_pow matches repeated multiplication") {
    double x = 0.7;
    for (int i = 0; i < 25; ++i) x *= 1.02;
    CHECK(scale_pow(0.7, 1.02, 25) == doctest::Approx(x).epsilon(1e-14));
    CHECK(scale_pow(0.7, 0.3, -3) == doctest::Approx(0.7 / 0.027).epsilon(1e-14));
}

TEST_CASE("safeguarded Newton") {
    auto f = [](double x) { return std::pair{x * x * x - 2.0, 3.0 * x * x}; };
    const auto r = safeguarded_newton(f, 0.0, 2.0, 1e-15);
    CHECK(r.root == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(safeguarded_newton(f, 2.0, 3.0, 1e-15), Error);
}

TEST_CASE("fit_line recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * v - 1.0);
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.5));
    CHECK(f.intercept == doctest::Approx(-1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("chebyshev nodes stay inside the interval") {
    const auto n = chebyshev_nodes(-1.0, 3.0, 65);
    CHECK(n.size() == 65);
    for (double v : n) {
        CHECK(v >= -1.0);
        CHECK(v <= 3.0);
    }
}

TEST_CASE("seed arc validation") {
    const SeedArc s({0.5, 0.15});
    CHECK(s.z0() == doctest::Approx(0.5));
    CHECK(s.sigma() == doctest::Approx(0.15));
    CHECK(s.value(1.0) == doctest::Approx(0.65));
    CHECK(s.scaled(2.0).z0() == doctest::Approx(1.0));
    CHECK_THROWS_AS(SeedArc({-0.5}), Error);
    CHECK_THROWS_AS(SeedArc({0.5}, 0.1, 2.0), Error);
    CHECK_THROWS_AS(SeedArc({0.1, 1.0}, -1.5, 1.5), Error);
}
