#include "doctest.h"

#include "tangency/error.hpp"
#include "tangency/moduli.hpp"

#include <cmath>
#include <vector>

using namespace tangency;

TEST_CASE("modulus fit on the reference system") {
    const auto s = reference_system();
    const auto f = modulus_fit(s, 5, 20);
    CHECK(f.rho == doctest::Approx(60.80).epsilon(0.3 / 60.8));
    CHECK(f.target == doctest::Approx(-std::log(0.3) / std::log(1.02)));
    CHECK(f.records[5].m_n == 642);
    for (const auto& r : f.records) CHECK(r.c_n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(modulus_fit(s, 5, 8), Error);
}

TEST_CASE("modulus fit for lambda = 0.5") {
    auto s = reference_system();
    s.saddle.lambda = 0.5;
    CHECK(modulus_fit(s, 5, 20).rho == doctest::Approx(35.0).epsilon(0.3 / 35.0));
}

TEST_CASE("rho is invariant under z0 -> 2 z0") {
    const auto s = reference_system();
    auto t = s;
    t.seed = s.seed.scaled(2.0);
    const auto a = modulus_fit(s, 5, 20);
    const auto b = modulus_fit(t, 5, 20);
    CHECK(std::fabs(a.rho - b.rho) <= 2.0 * std::max(a.stderr_, b.stderr_));
}

TEST_CASE("tilted seed converges slowly") {
    auto s = reference_system();
    s.seed = SeedArc({0.5, 0.15}, -1.5, 1.5);
    const auto series = sn_cn_series(s, 15, 15);
    const double expected = 1.0 / (1.0 + 0.3 * std::pow(1.02, -15));
    CHECK(series.front().c_n == doctest::Approx(expected).epsilon(2e-3));
}

TEST_CASE("power fit") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) {
        const double x = std::pow(10.0, -3.0 + 0.3 * i);
        pts.emplace_back(x, 2.0 * std::pow(x, 0.7));
    }
    const auto f = power_fit(pts);
    CHECK(f.C == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.tau == doctest::Approx(0.7).epsilon(1e-9));
    const std::vector<std::pair<double, double>> narrow{{1.0, 1.0}, {1.1, 1.1}, {1.2, 1.2}, {1.3, 1.3}};
    CHECK_THROWS_AS(power_fit(narrow), Error);
}

TEST_CASE("conjugacy pairs") {
    const auto s = reference_system();
    const auto id = identity_pair(s);
    const auto idf = power_fit(correspondence_points(id, 5, 20));
    CHECK(idf.C == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(idf.tau == doctest::Approx(1.0).epsilon(1e-6));
    const auto rp = rescale_pair(s, 3);
    CHECK(conjugation_defect(rp) <= 1e-12);
    CHECK(rp.sys1.transition.m0 == s.transition.m0 + 3);
    double tau = 0.0;
    const double c = lemma_constant(rp, &tau);
    const auto rf = power_fit(correspondence_points(rp, 5, 20));
    CHECK(rf.C == doctest::Approx(c).epsilon(0.01));
    CHECK(rf.tau == doctest::Approx(tau).epsilon(0.01));
    CHECK(modulus_fit(rp.sys1, 5, 20).rho == doctest::Approx(modulus_fit(rp.sys0, 5, 20).rho).epsilon(1e-3));
}

TEST_CASE("conjugate arcs intersect") {
    const auto s = reference_system();
    const auto id = identity_pair(s);
    const auto rp = rescale_pair(s, 3);
    for (int n = 10; n <= 16; ++n) {
        CHECK(intersection_check(id, n).intersects);
        CHECK(intersection_check(rp, n).intersects);
    }
    auto bad = id;
    bad.sys1.saddle.lambda = 0.24;
    CHECK_FALSE(intersection_check(bad, 12).intersects);
}

TEST_CASE("order probe and eigen estimates") {
    const auto s = reference_system();
    const auto p = order_probe(s, 0, 10);
    CHECK(p.slope == doctest::Approx(3.0).epsilon(0.02 / 3.0));
    CHECK(p.band_factor <= 1.03);
    CHECK(p.band_stable);
    const auto e = eigen_estimates(s, 5, 20);
    CHECK(e.lambda_from_ratio == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(e.mu_from_rho == doctest::Approx(1.02).epsilon(1e-3));
}
