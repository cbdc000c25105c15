#include "doctest.h"

#include "tangency/error.hpp"
#include "tangency/leaves.hpp"
#include "tangency/rects.hpp"

#include <cmath>
#include <vector>

using namespace tangency;

TEST_CASE("S_10 frozen oracle") {
    const auto s = reference_system();
    const auto sn = build_sn(s, 10);
    CHECK(sn.t_plus == doctest::Approx(9.92043e-4).epsilon(1e-5));
    CHECK(sn.t_tilde_plus == doctest::Approx(2.0 * sn.t_plus).epsilon(1e-9));
    CHECK(sn.W_0n == doctest::Approx(3.90528e-9).epsilon(1e-5));
    CHECK(sn.H_0n == doctest::Approx(3.96817e-3).epsilon(1e-5));
    CHECK(sn.D_n == doctest::Approx(2.9504974e-6).epsilon(1e-7));
    CHECK(sn.rho_n == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-5));
}

TEST_CASE("tangent parameter scaling") {
    const auto s = reference_system();
    for (int n = 14; n <= 20; ++n) {
        const auto vp = vertical_params(s, n);
        CHECK(vp.t_plus / std::pow(s.lambda(), 0.5 * n) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-6));
        CHECK(vp.t_minus == doctest::Approx(-vp.t_plus).epsilon(1e-9));
    }
}

TEST_CASE("verticality residual and equal abscissas") {
    const auto s = reference_system();
    for (int n = 6; n <= 20; n += 2) {
        const auto sn = build_sn(s, n);
        const double tol = 1e-12 * std::fabs(s.transition.b) * std::pow(s.lambda(), n) * s.seed.z0();
        CHECK(std::fabs(xi_jet(s, n, sn.t_plus).dxi) <= tol);
        CHECK(std::fabs(xi_jet(s, n, sn.t_minus).dxi) <= tol);
        CHECK(std::fabs(xi_difference(s, n, sn.t_tilde_plus, sn.t_minus)) <= 1e-12 * sn.W_0n);
        CHECK(std::fabs(xi_difference(s, n, sn.t_tilde_minus, sn.t_plus)) <= 1e-12 * sn.W_0n);
    }
}

TEST_CASE("the S-shaped arc stays inside S_n") {
    const auto s = reference_system();
    for (int n : {6, 10, 16}) {
        const auto sn = build_sn(s, n);
        const double sx = 1e-12 * sn.W_0n, sy = 1e-12 * sn.H_0n;
        for (int i = 0; i < 200; ++i) {
            const double t = sn.t_tilde_minus + (sn.t_tilde_plus - sn.t_tilde_minus) * i / 199.0;
            const Point p = curve_point(s, n, t);
            CHECK(p.x >= sn.rect.x_lo - sx);
            CHECK(p.x <= sn.rect.x_hi + sx);
            CHECK(p.y >= sn.rect.y_lo - sy);
            CHECK(p.y <= sn.rect.y_hi + sy);
        }
    }
}

TEST_CASE("mean-value bound on the arc height") {
    auto s = reference_system();
    s.seed = SeedArc({0.5, 0.15}, -1.5, 1.5);
    for (int n : {8, 12, 16}) {
        const auto vp = vertical_params(s, n);
        const double lhs = std::fabs(arc_jet(s, n, vp.t_minus).y - arc_jet(s, n, vp.t_plus).y);
        const double rhs = s.seed.sigma() * std::pow(s.lambda() / s.mu(), n) * (vp.t_plus - vp.t_minus);
        CHECK(lhs <= rhs * (1 + 1e-9));
    }
}

TEST_CASE("rectangle failures") {
    auto s = reference_system();
    s.transition.b = 1.0;
    CHECK_THROWS_AS(vertical_params(s, 10), Error);
    const auto r = reference_system();
    CHECK_THROWS_AS(build_sn(r, 2), Error);
}

TEST_CASE("scaling exponents") {
    const auto s = reference_system();
    std::vector<std::pair<int, double>> d, w, h;
    for (int n = 8; n <= 18; ++n) {
        const auto sn = build_sn(s, n);
        d.emplace_back(n, sn.D_n);
        w.emplace_back(n, sn.W_0n);
        h.emplace_back(n, sn.H_0n);
    }
    CHECK(scaling_fit(d, s.lambda()).exponent == doctest::Approx(1.0).epsilon(0.03));
    CHECK(scaling_fit(w, s.lambda()).exponent == doctest::Approx(1.5).epsilon(0.03));
    CHECK(scaling_fit(h, s.lambda()).exponent == doctest::Approx(0.5).epsilon(0.1));
}
