#include "tangency/rects.hpp"

#include "tangency/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tangency {

XiJet xi_jet(const ModelSystem& sys, int n, double t) {
    const auto& tr = sys.transition;
    const ArcJet a = arc_jet(sys, n, t);
    const double y = a.y;
    const auto& h = tr.h1;
    const double j11 = tr.b * y + 3.0 * tr.c * t * t + h.dx(t, y);
    const double j12 = tr.a + tr.b * t + h.dy(t, y);
    XiJet out;
    out.xi = tr.a * y + tr.b * t * y + tr.c * t * t * t + h.value(t, y);
    out.dxi = j11 + j12 * a.dy;
    const double dj11 = tr.b * a.dy + 6.0 * tr.c * t + h.dxx(t, y) + h.dxy(t, y) * a.dy;
    const double dj12 = tr.b + h.dxy(t, y) + h.dyy(t, y) * a.dy;
    out.ddxi = dj11 + dj12 * a.dy + j12 * a.ddy;
    return out;
}

double xi_difference(const ModelSystem& sys, int n, double t, double t_ref) {
    const auto& tr = sys.transition;
    const double y = arc_jet(sys, n, t).y;
    const double yr = arc_jet(sys, n, t_ref).y;
    return tr.a * (y - yr) + tr.b * (t * y - t_ref * yr) + tr.c * (t - t_ref) * (t * t + t * t_ref + t_ref * t_ref) +
           (tr.h1.value(t, y) - tr.h1.value(t_ref, yr));
}

Point curve_point(const ModelSystem& sys, int n, double t) {
    const double y = arc_jet(sys, n, t).y;
    return phi_local(sys.transition, t, y);
}

namespace {

// Expands from `start` away from 0 until xi' has the sign of c, then returns
// the bracket.
std::pair<double, double> bracket_vertical(const ModelSystem& sys, int n, double start, double limit) {
    const double sc = sys.transition.c > 0 ? 1.0 : -1.0;
    double inner = 0.0;
    double outer = start;
    for (int it = 0; it < 80; ++it) {
        if (std::fabs(outer) > std::fabs(limit)) outer = limit;
        if (xi_jet(sys, n, outer).dxi * sc > 0.0) return {inner, outer};
        if (outer == limit)
            fail(ErrorCode::WindowExceeded,
                 fmt::format("vertical tangency for n = {} lies outside the t-window", n));
        inner = outer;
        outer *= 2.0;
    }
    fail(ErrorCode::NoVerticalTangency, fmt::format("no bracket for the vertical tangency at n = {}", n));
}

}  // namespace

VerticalParams vertical_params(const ModelSystem& sys, int n) {
    const auto& tr = sys.transition;
    const Interval w = t_window(sys);
    const double g0 = xi_jet(sys, n, 0.0).dxi;
    if (g0 == 0.0 || (g0 > 0) == (tr.c > 0))
        fail(ErrorCode::NoVerticalTangency,
             fmt::format("xi'(0) = {:.3e} has the sign of c at n = {}; no vertical tangency", g0, n));
    const double seed = std::sqrt(-g0 / (3.0 * tr.c));
    auto f = [&](double t) {
        const auto j = xi_jet(sys, n, t);
        return std::pair{j.dxi, j.ddxi};
    };
    const double tol = 1e-15 * seed;
    const auto [pi, po] = bracket_vertical(sys, n, seed, w.hi);
    const auto [mi, mo] = bracket_vertical(sys, n, -seed, w.lo);
    VerticalParams out;
    out.t_plus = safeguarded_newton(f, pi, po, tol).root;
    out.t_minus = safeguarded_newton(f, mo, mi, tol).root;
    return out;
}

ExtendedParams extended_params(const ModelSystem& sys, int n, double t_minus, double t_plus) {
    const Interval w = t_window(sys);
    const double gap = t_plus - t_minus;
    auto solve = [&](double from, double target, double dir, double limit) {
        auto f = [&](double t) { return std::pair{xi_difference(sys, n, t, target), xi_jet(sys, n, t).dxi}; };
        const double f0 = f(from).first;
        double inner = from;
        double step = 0.5 * gap;
        for (int it = 0; it < 80; ++it) {
            double outer = from + dir * step;
            bool at_limit = false;
            if (dir * (outer - limit) >= 0.0) {
                outer = limit;
                at_limit = true;
            }
            if (f(outer).first * f0 <= 0.0) return safeguarded_newton(f, inner, outer, 1e-15 * gap).root;
            if (at_limit)
                fail(ErrorCode::WindowExceeded,
                     fmt::format("extended parameter for n = {} lies outside the t-window", n));
            inner = outer;
            step *= 2.0;
        }
        fail(ErrorCode::WindowExceeded, fmt::format("extended parameter search failed for n = {}", n));
    };
    ExtendedParams out;
    out.t_tilde_plus = solve(t_plus, t_minus, 1.0, w.hi);
    out.t_tilde_minus = solve(t_minus, t_plus, -1.0, w.lo);
    return out;
}

SnRectangle build_sn(const ModelSystem& sys, int n) {
    const auto vp = vertical_params(sys, n);
    const auto ep = extended_params(sys, n, vp.t_minus, vp.t_plus);
    SnRectangle sn;
    sn.n = n;
    sn.t_minus = vp.t_minus;
    sn.t_plus = vp.t_plus;
    sn.t_tilde_minus = ep.t_tilde_minus;
    sn.t_tilde_plus = ep.t_tilde_plus;
    sn.rho_n = (sn.t_tilde_plus - sn.t_plus) / std::pow(std::fabs(sys.lambda()), 0.5 * n);
    const std::array<double, 4> ts{sn.t_tilde_minus, sn.t_minus, sn.t_plus, sn.t_tilde_plus};
    for (std::size_t i = 0; i < 4; ++i) sn.marked[i] = curve_point(sys, n, ts[i]);
    Rect r{sn.marked[0].x, sn.marked[0].x, sn.marked[0].y, sn.marked[0].y};
    for (const auto& p : sn.marked) {
        r.x_lo = std::min(r.x_lo, p.x);
        r.x_hi = std::max(r.x_hi, p.x);
        r.y_lo = std::min(r.y_lo, p.y);
        r.y_hi = std::max(r.y_hi, p.y);
    }
    sn.rect = r;
    // The width is a difference of two nearly equal abscissas; take it from
    // the cancelling form.
    sn.W_0n = std::fabs(xi_difference(sys, n, sn.t_minus, sn.t_plus));
    sn.H_0n = r.height();
    if (r.x_lo > 0.0)
        sn.D_n = r.x_lo;
    else if (r.x_hi < 0.0)
        sn.D_n = -r.x_hi;
    else
        sn.D_n = 0.0;
    const Rect ur = sys.ur();
    if (r.x_lo < ur.x_lo || r.x_hi > ur.x_hi || r.y_lo < ur.y_lo || r.y_hi > ur.y_hi)
        fail(ErrorCode::WindowExceeded, fmt::format("S_n for n = {} does not fit in U(r)", n));
    return sn;
}

ScalingFit scaling_fit(std::span<const std::pair<int, double>> pairs, double lambda) {
    if (pairs.size() < 5) fail(ErrorCode::Domain, "scaling fit needs at least five pairs");
    const double ll = std::log(std::fabs(lambda));
    std::vector<double> x, y;
    for (const auto& [n, v] : pairs) {
        if (!(v > 0.0)) fail(ErrorCode::Domain, fmt::format("scaling fit value {} at n = {} is not positive", v, n));
        x.push_back(n * ll);
        y.push_back(std::log(v));
    }
    const auto fit = fit_line(x, y);
    return {fit.slope, fit.r_squared, fit.slope_stderr};
}

}  // namespace tangency
