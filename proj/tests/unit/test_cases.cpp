#include "doctest.h"

#include "tangency/cases.hpp"
#include "tangency/error.hpp"
#include "tangency/rects.hpp"

#include <set>
#include <string>

using namespace tangency;

TEST_CASE("classify is a bijection on sign tuples") {
    std::set<std::string> labels;
    for (const auto& c : all_cases()) {
        labels.insert(c.label);
        CHECK(case_from_label(c.label) == c);
        CHECK(classify(c.sign_a, c.sign_bc, c.sign_lambda, c.sign_mu) == c);
    }
    CHECK(labels.size() == 16);
    CHECK_THROWS_AS(case_from_label("V_{++}"), Error);
}

TEST_CASE("adaptable set") {
    CHECK(adaptable_count() == 9);
    const std::set<std::string> expected{"I_{--}", "II_{++}", "II_{+-}", "II_{-+}", "II_{--}",
                                         "III_{-+}", "III_{--}", "IV_{--}", "IV_{+-}"};
    std::set<std::string> got;
    for (const auto& c : all_cases())
        if (adaptability(c).adaptable) got.insert(c.label);
    CHECK(got == expected);
}

TEST_CASE("reference case and region choice") {
    const auto s = reference_system();
    const auto c = classify(s);
    CHECK(c.label == "II_{++}");
    const auto a = adaptability(c);
    CHECK(a.adaptable);
    CHECK(a.sn_quadrant == Quadrant::Q1);
    CHECK(choose_region(c, s.epsilon()).x_lo == doctest::Approx(s.r_eps().x_lo));
}

TEST_CASE("adaptability agrees with the geometry") {
    const auto s = reference_system();
    for (int n = 6; n <= 18; n += 4) {
        const auto sn = build_sn(s, n);
        CHECK(sn.rect.x_lo > 0.0);
        CHECK(sn.rect.y_lo > 0.0);
    }
    auto t = reference_system();
    t.transition.b = 1.0;
    const auto a = adaptability(classify(t));
    CHECK_FALSE(a.tangency_exists);
    CHECK_THROWS_AS(vertical_params(t, 16), Error);
    CHECK_THROWS_AS(choose_region(case_from_label("I_{++}"), 0.02), Error);
}
