#include "doctest.h"

#include "tangency/error.hpp"
#include "tangency/model.hpp"

#include <cmath>
#include <random>

using namespace tangency;

TEST_CASE("reference system basics") {
    const auto s = reference_system();
    CHECK(s.epsilon() == doctest::Approx(0.02));
    CHECK(s.n_max() == 22);
    const auto rep = validate(s);
    CHECK(rep.all_passed());
    CHECK(rep.case_label == "II_{++}");
    CHECK(rep.tau0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.tau1 == doctest::Approx(29.6026).epsilon(1e-5));
}

TEST_CASE("validate names the failing condition") {
    auto s = reference_system();
    s.transition.b = 0.0;
    const auto rep = validate(s);
    CHECK_FALSE(rep.passed("EX1"));
    CHECK_FALSE(rep.all_passed());
    auto t = reference_system();
    t.saddle.lambda = 1.2;
    CHECK_FALSE(validate(t).passed("eigenvalues"));
}

TEST_CASE("apply_linear composes") {
    const auto s = reference_system();
    const Point p{0.37, 0.81};
    for (long a : {-5L, 0L, 3L, 17L}) {
        for (long b : {-2L, 4L, 11L}) {
            const Point ab = apply_linear(s, apply_linear(s, p, a), b);
            const Point c = apply_linear(s, p, a + b);
            CHECK(ab.x == doctest::Approx(c.x).epsilon(1e-12));
            CHECK(ab.y == doctest::Approx(c.y).epsilon(1e-12));
        }
    }
}

TEST_CASE("phi is the jet model on U(q) and refuses points outside") {
    const auto s = reference_system();
    const Point r = apply_phi(s, {1.1, 0.2});
    CHECK(r.x == doctest::Approx(0.2 - 0.1 * 0.2 + 0.001));
    CHECK(r.y == doctest::Approx(1.0 - 0.1));
    CHECK_THROWS_AS(apply_phi(s, {1.5, 0.0}), Error);
    CHECK_THROWS_AS(jacobian_phi(s, {1.0, 0.4}), Error);
}

TEST_CASE("jacobian matches central differences and det stays away from zero") {
    auto s = reference_system();
    s.transition.h1.terms = {{2, 1, 0.3}, {4, 0, -0.2}};
    s.transition.h2.terms = {{0, 2, 0.1}, {1, 1, 0.05}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const Point p{1.0 + u(rng), u(rng)};
        const Mat2 j = jacobian_phi(s, p);
        const Point fx1 = apply_phi(s, {p.x + h, p.y}), fx0 = apply_phi(s, {p.x - h, p.y});
        const Point fy1 = apply_phi(s, {p.x, p.y + h}), fy0 = apply_phi(s, {p.x, p.y - h});
        CHECK(j.a11 == doctest::Approx((fx1.x - fx0.x) / (2 * h)).epsilon(1e-6));
        CHECK(j.a12 == doctest::Approx((fy1.x - fy0.x) / (2 * h)).epsilon(1e-6));
        CHECK(j.a21 == doctest::Approx((fx1.y - fx0.y) / (2 * h)).epsilon(1e-6));
        CHECK(j.a22 == doctest::Approx((fy1.y - fy0.y) / (2 * h)).epsilon(1e-6));
    }
    const auto r = reference_system();
    const double bound = 0.1 * std::fabs(r.transition.a * r.transition.d);
    for (int i = 0; i < 200; ++i) {
        const Mat2 j = jacobian_phi(r, {1.0 + u(rng), u(rng)});
        CHECK(std::fabs(j.a11 * j.a22 - j.a12 * j.a21) >= bound);
    }
}

TEST_CASE("phi(R_eps) has height in [1 + 4 d eps, 1]") {
    const auto s = reference_system();
    const Rect re = s.r_eps();
    const double e = s.epsilon();
    for (int i = 0; i <= 64; ++i) {
        for (int j = 0; j <= 64; ++j) {
            const Point p{re.x_lo + re.width() * i / 64.0, re.y_lo + re.height() * j / 64.0};
            const double y = apply_phi(s, p).y;
            CHECK(y >= 1.0 + 4.0 * s.transition.d * e);
            CHECK(y <= 1.0);
        }
    }
}

TEST_CASE("tau bounds reject the wrong quadrant") {
    auto s = reference_system();
    s.transition.a = -1.0;
    CHECK_THROWS_AS(tau_bounds(s), Error);
}
