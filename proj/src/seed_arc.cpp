#include "tangency/seed_arc.hpp"

#include "tangency/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tangency {

namespace {

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<double> differentiate(const std::vector<double>& c) {
    std::vector<double> out;
    for (std::size_t k = 1; k < c.size(); ++k) out.push_back(c[k] * static_cast<double>(k));
    return out;
}

}  // namespace

SeedArc::SeedArc(std::vector<double> coefficients, double domain_lo, double domain_hi)
    : coef_(std::move(coefficients)), lo_(domain_lo), hi_(domain_hi) {
    if (coef_.empty()) coef_.push_back(0.0);
    if (!(lo_ < 0.0 && hi_ > 1.0))
        fail(ErrorCode::Domain,
             fmt::format("seed domain [{}, {}] must contain 0 and 1 in its interior", lo_, hi_));
    z0_ = coef_.front();
    if (!(z0_ > 0.0)) fail(ErrorCode::Domain, fmt::format("seed z0 = {} must be positive", z0_));

    // Positivity and sigma by dense sampling; the seed is a low-degree polynomial.
    const int samples = 4096;
    const auto d1 = differentiate(coef_);
    for (int i = 0; i <= samples; ++i) {
        const double x = lo_ + (hi_ - lo_) * i / samples;
        if (!(horner(coef_, x) > 0.0))
            fail(ErrorCode::Domain, fmt::format("seed y0 is not positive at x = {}", x));
        sigma_ = std::max(sigma_, std::fabs(horner(d1, x)));
    }
}

double SeedArc::value(double x) const { return horner(coef_, x); }

double SeedArc::derivative(double x) const { return horner(differentiate(coef_), x); }

double SeedArc::second_derivative(double x) const {
    return horner(differentiate(differentiate(coef_)), x);
}

SeedArc SeedArc::scaled(double factor) const {
    auto c = coef_;
    for (double& v : c) v *= factor;
    return SeedArc(std::move(c), lo_, hi_);
}

}  // namespace tangency
