#include "doctest.h"

#include "tangency/cascade.hpp"
#include "tangency/rects.hpp"
#include "tangency/returns.hpp"

#include <cmath>

using namespace tangency;

TEST_CASE("word determinant is the product of atom determinants") {
    const auto s = reference_system();
    const double x0 = scale_pow(1.05, s.mu(), -5);
    MapWord w;
    w.atoms = {MapAtom::linear(5), MapAtom::phi(), MapAtom::linear(3)};
    const Point mid = apply_linear(s, {x0, 0.5}, 5);
    const Mat2 j = jacobian_phi(s, mid);
    const double expected = 8.0 * std::log(s.lambda() * s.mu()) + std::log(std::fabs(j.a11 * j.a22 - j.a12 * j.a21));
    CHECK(w.log_abs_det(s, x0, LogMag::from_double(0.5)) == doctest::Approx(expected).epsilon(1e-10));
    const auto e = w.eval(s, x0, LogMag::from_double(0.5));
    const Point direct = apply_linear(s, apply_phi(s, mid), 3);
    CHECK(e.point.x == doctest::Approx(direct.x).epsilon(1e-12));
    CHECK(e.point.y.to_double() == doctest::Approx(direct.y).epsilon(1e-12));
}

TEST_CASE("B_1 frozen oracle and window") {
    const auto s = reference_system();
    const auto b = build_b1(s, build_sn(s, 10));
    CHECK(b.metrics.W == doctest::Approx(1.376457e-3).epsilon(1e-5));
    CHECK(b.box.x_lo > 1.0 + s.epsilon());
    CHECK(b.box.x_hi <= std::pow(1.0 + s.epsilon(), 3));
    CHECK(box_in_r_eps(s, b.box, b.metrics));
}

TEST_CASE("cascade inequalities and crossing arcs") {
    const auto s = reference_system();
    const auto r = run_cascade(s, 12);
    CHECK(r.k0 >= 2);
    CHECK(r.inequalities_hold);
    CHECK(r.arcs_ok);
    const Rect re = s.r_eps();
    for (int k = 0; k < r.k0; ++k) {
        const auto& b = r.boxes[k];
        CHECK(b.crossing_arcs == 3);
        CHECK(b.box.x_lo >= re.x_lo);
        CHECK(b.box.x_hi <= re.x_hi);
        if (k + 1 < r.k0) {
            const auto& c = r.boxes[k + 1];
            CHECK(c.metrics.W >= 10.0 * b.metrics.W);
            CHECK(c.metrics.H <= b.metrics.H * 0.1);
            CHECK(c.metrics.L <= b.metrics.L * 0.1);
        }
    }
}

TEST_CASE("k0 is non-decreasing in n") {
    const auto s = reference_system();
    int prev = 0;
    for (int n : {10, 12, 16, 20, 22}) {
        const int k0 = run_cascade(s, n, false).k0;
        CHECK(k0 >= prev);
        prev = k0;
    }
    CHECK(prev == 3);
}

TEST_CASE("a box away from the arc has no crossing arcs") {
    const auto s = reference_system();
    const auto sn = build_sn(s, 10);
    auto b = build_b1(s, sn).box;
    b.eta_bottom = sn.rect.y_hi + 1e-3;
    b.eta_top = sn.rect.y_hi + 2e-3;
    CHECK(count_crossing_arcs(s, sn, b) == 0);
}

TEST_CASE("the top edge spreads from the bottom edge by the vertical gain") {
    const auto s = reference_system();
    const auto b = build_b1(s, build_sn(s, 10)).box;
    const double mid = 0.5 * (b.x_lo + b.x_hi);
    const LogMag g = vertical_gain(s, b, mid, 0.5 * (b.eta_bottom + b.eta_top));
    CHECK(g.to_double() == doctest::Approx(std::pow(s.lambda(), build_b1(s, build_sn(s, 10)).i_n)).epsilon(1e-9));
}
