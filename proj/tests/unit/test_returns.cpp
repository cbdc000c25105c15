#include "doctest.h"

#include "tangency/error.hpp"
#include "tangency/rects.hpp"
#include "tangency/returns.hpp"

#include <cmath>

using namespace tangency;

TEST_CASE("window exponents are unique") {
    const double mu = 1.02, lo = mu * mu, hi = mu * mu * mu;
    for (double v : {1e-3, 0.37, 0.999, 1.0, 1.5e-7}) {
        const long j = window_exponent(v, mu, lo, hi);
        CHECK(in_window(v, mu, j, lo, hi));
        CHECK_FALSE(in_window(v, mu, j - 1, lo, hi));
        CHECK_FALSE(in_window(v, mu, j + 1, lo, hi));
    }
    const long k = window_exponent(0.5, 2.0, 0.5, 1.0);
    CHECK(k == 1);
}

TEST_CASE("u0 frozen oracle and failures") {
    const auto s = reference_system();
    const Rect re = s.r_eps();
    CHECK(u0(s, {re.x_lo, 0.0}) == 595);
    CHECK_THROWS_AS(u0(s, {2.0, 0.0}), Error);
}

TEST_CASE("slopes through one return on a grid") {
    const auto s = reference_system();
    const Rect re = s.r_eps();
    const double s52 = std::pow(s.epsilon(), 2.5);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (double sl : {0.0, 0.5 * s52, s52}) {
                const Point p{re.x_lo + re.width() * i / 7.0, re.y_lo + re.height() * j / 7.0};
                const auto r = slope_through_return(s, {p, sl, false});
                CHECK(r.intermediate_ok);
                CHECK(r.returned_ok);
                CHECK(r.intermediate <= r.intermediate_worst);
            }
}

TEST_CASE("i_n frozen oracle") {
    const auto s = reference_system();
    CHECK(i_n(s, build_sn(s, 10)) == 645);
}

TEST_CASE("find_s_n0 and the j_n check") {
    const auto s = reference_system();
    const auto r = find_s_n0(s, 0.02);
    CHECK(r.n0 == 5);
    for (int n = r.n0; n <= r.n0 + 2; ++n) {
        const auto rep = jn_slope_check(s, n, r.s);
        CHECK(rep.passed);
        CHECK(rep.samples.size() >= 200);
    }
    CHECK(find_s_n0(s, 0.01).n0 == 6);
    CHECK(find_s_n0(s, 0.005).n0 == 7);
    CHECK_THROWS_AS(find_s_n0(s, 0.04), Error);
}

TEST_CASE("returns require positive eigenvalues") {
    auto s = reference_system();
    s.saddle.lambda = -0.3;
    CHECK_THROWS_AS(require_positive_eigenvalues(s), Error);
}
