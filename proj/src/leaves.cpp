#include "tangency/leaves.hpp"

#include "tangency/error.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace tangency {

Interval t_window(const ModelSystem& sys) {
    const double e = sys.epsilon();
    return {std::pow(1.0 + e, -3) - 1.0, std::pow(1.0 + e, 3) - 1.0};
}

ArcJet arc_jet(const ModelSystem& sys, int n, double t) {
    if (n < 0) fail(ErrorCode::Domain, "arc index n must be non-negative");
    const double u = scale_pow(t + 1.0, sys.mu(), -n);
    const auto& seed = sys.seed;
    if (u < seed.domain_lo() || u > seed.domain_hi())
        fail(ErrorCode::Domain, fmt::format("mu^-n (t+1) = {} outside the seed domain", u));
    const double ln = scale_pow(1.0, sys.lambda(), n);
    const double inv_mu = scale_pow(1.0, sys.mu(), -n);
    return {ln * seed.value(u), ln * inv_mu * seed.derivative(u), ln * inv_mu * inv_mu * seed.second_derivative(u)};
}

ArcSample alpha(const ModelSystem& sys, int n, double t) {
    const Interval w = t_window(sys);
    if (!w.contains(t)) fail(ErrorCode::Domain, fmt::format("t = {} outside the window [{}, {}]", t, w.lo, w.hi));
    const ArcJet j = arc_jet(sys, n, t);
    return {{t + 1.0, j.y}, j.dy};
}

double stable_leaf_v(const ModelSystem& sys, double x) {
    const auto& tr = sys.transition;
    const double h = sys.charts.uq_half_width;
    if (std::fabs(x) > h) fail(ErrorCode::Domain, fmt::format("x = {} outside U(q)", x));
    auto f = [&](double y) {
        return std::pair{tr.a * y + tr.b * x * y + tr.c * x * x * x + tr.h1.value(x, y),
                         tr.a + tr.b * x + tr.h1.dy(x, y)};
    };
    double y = -(tr.c / tr.a) * x * x * x;
    for (int it = 0; it < 50; ++it) {
        const auto [fy, dfy] = f(y);
        if (fy == 0.0) return y;
        if (dfy == 0.0 || !std::isfinite(dfy)) break;
        const double step = fy / dfy;
        y -= step;
        if (std::fabs(y) > h) break;
        if (std::fabs(step) <= 1e-14 * std::fabs(y) || std::fabs(step) < 1e-300) return y;
    }
    // Bisection-safeguarded fallback over the leaf-solvability range.
    try {
        return safeguarded_newton(f, -h, h, 1e-15 * std::max(std::fabs(x * x * x), 1e-300)).root;
    } catch (const Error& e) {
        fail(ErrorCode::Numeric, fmt::format("stable leaf at x = {}: {}", x, e.what()));
    }
}

double unstable_leaf_w(const ModelSystem& sys, double y_offset) {
    const auto& tr = sys.transition;
    const double h = sys.charts.uq_half_width;
    if (std::fabs(y_offset) > sys.charts.ur_half_width)
        fail(ErrorCode::Domain, fmt::format("height offset {} outside U(r)", y_offset));
    auto g = [&](double t) {
        return std::pair{tr.d * t + tr.h2.value(t, 0.0) - y_offset, tr.d + tr.h2.dx(t, 0.0)};
    };
    double t = y_offset / tr.d;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
        const auto [gt, dgt] = g(t);
        if (gt == 0.0) {
            ok = true;
            break;
        }
        if (dgt == 0.0) break;
        const double step = gt / dgt;
        t -= step;
        if (std::fabs(t) > h) break;
        if (std::fabs(step) <= 1e-14 * std::fabs(t) || std::fabs(step) < 1e-300) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        try {
            t = safeguarded_newton(g, -h, h, 1e-15 * std::max(std::fabs(y_offset), 1e-300)).root;
        } catch (const Error& e) {
            fail(ErrorCode::Numeric, fmt::format("unstable leaf at offset {}: {}", y_offset, e.what()));
        }
    }
    return tr.c * t * t * t + tr.h1.value(t, 0.0);
}

OrderEstimate tangency_order(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 8) fail(ErrorCode::Domain, "tangency order needs at least 8 samples");
    std::vector<double> lx, ly;
    double dmin = INFINITY, dmax = 0.0;
    for (const auto& [leaf, point] : samples) {
        if (!(leaf > 0.0) || !(point > 0.0)) fail(ErrorCode::Domain, "tangency order needs positive distances");
        lx.push_back(std::log(point));
        ly.push_back(std::log(leaf));
        dmin = std::min(dmin, point);
        dmax = std::max(dmax, point);
    }
    if (dmax / dmin < 100.0) fail(ErrorCode::Domain, "sample distances must span at least two decades");
    const auto fit = fit_line(lx, ly);
    double mean_log = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) mean_log += ly[i] - fit.slope * lx[i];
    mean_log /= static_cast<double>(lx.size());
    return {fit.slope, std::exp(mean_log), fit.r_squared};
}

std::vector<std::pair<double, double>> stable_leaf_order_samples(const ModelSystem& sys, int count, double x_lo,
                                                                 double x_hi) {
    if (count < 2 || !(x_lo > 0.0) || !(x_hi > x_lo)) fail(ErrorCode::Domain, "bad sampling range");
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < count; ++i) {
        const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (count - 1));
        const double v = stable_leaf_v(sys, x);
        out.emplace_back(std::fabs(v), std::hypot(x, v));
    }
    return out;
}

}  // namespace tangency
