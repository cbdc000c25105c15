#include "tangency/returns.hpp"

#include "tangency/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace tangency {

namespace {

long double scaled_ld(double value, double base, long j) {
    return static_cast<long double>(value) * std::pow(static_cast<long double>(base), static_cast<long double>(j));
}

struct WindowBounds {
    double lo;
    double hi;
};

WindowBounds return_window(const ModelSystem& sys) {
    const double e = sys.epsilon();
    return {std::pow(1.0 + e, 2), std::pow(1.0 + e, 3)};
}

LogMag slope_after_linear(double dx, double dy, const ModelSystem& sys, long j) {
    if (dx == 0.0) return LogMag::from_log(1, INFINITY);
    const LogMag num = LogMag::from_double(std::fabs(dy)) * pow_logmag(std::fabs(sys.lambda()), j);
    const LogMag den = LogMag::from_double(std::fabs(dx)) * pow_logmag(std::fabs(sys.mu()), j);
    return num / den;
}

}  // namespace

bool in_window(double value, double base, long j, double lo, double hi) {
    const long double v = scaled_ld(value, base, j);
    return v > static_cast<long double>(lo) && v <= static_cast<long double>(hi);
}

long window_exponent(double value, double base, double lo, double hi) {
    if (!(value > 0.0) || !(base > 1.0) || !(hi > lo) || !(lo > 0.0))
        fail(ErrorCode::Domain, fmt::format("window exponent needs positive value and base > 1 (value {}, base {})",
                                            value, base));
    long j = static_cast<long>(std::ceil(std::log(lo / value) / std::log(base)));
    for (int guard = 0; guard < 8; ++guard) {
        const long double v = scaled_ld(value, base, j);
        if (v <= static_cast<long double>(lo))
            ++j;
        else if (v > static_cast<long double>(hi))
            --j;
        else
            return j;
    }
    fail(ErrorCode::Numeric, fmt::format("no window exponent for value {} in ({}, {}]", value, lo, hi));
}

void require_positive_eigenvalues(const ModelSystem& sys) {
    if (!(sys.lambda() > 0.0) || !(sys.mu() > 0.0))
        fail(ErrorCode::Domain, "return times are implemented for lambda > 0 and mu > 0");
}

long u0(const ModelSystem& sys, Point p) {
    require_positive_eigenvalues(sys);
    const Rect r = sys.r_eps();
    if (!r.contains(p)) fail(ErrorCode::Domain, fmt::format("({}, {}) is not in R_eps", p.x, p.y));
    const Point q = apply_phi(sys, p);
    if (!(q.x > 0.0)) fail(ErrorCode::WrongQuadrant, fmt::format("pr_x(phi(p)) = {} <= 0", q.x));
    const auto w = return_window(sys);
    const long j = window_exponent(q.x, sys.mu(), w.lo, w.hi);
    if (j < 1) fail(ErrorCode::SmallExpandingViolation, fmt::format("return time {} < 1", j));
    const LogMag y = LogMag::from_double(q.y) * pow_logmag(sys.lambda(), j);
    if (y.sign() < 0 || LogMag::from_double(r.y_hi) < y)
        fail(ErrorCode::SmallExpandingViolation, "f^u0(phi(p)) leaves R_eps vertically");
    return j;
}

SlopeReturn slope_through_return(const ModelSystem& sys, const SlopedPoint& sp) {
    const double e = sys.epsilon();
    const double bound = std::pow(e, 2.5);
    if (sp.vertical || sp.slope < 0.0 || sp.slope > bound * (1.0 + 1e-12))
        fail(ErrorCode::Domain, fmt::format("input slope {} exceeds eps^(5/2) = {}", sp.slope, bound));
    SlopeReturn out;
    out.u0 = u0(sys, sp.point);
    const Mat2 j = jacobian_phi(sys, sp.point);
    auto through = [&](double delta) {
        const double u = j.a11 + j.a12 * delta;
        const double v = j.a21 + j.a22 * delta;
        return u == 0.0 ? INFINITY : std::fabs(v) / std::fabs(u);
    };
    out.intermediate = through(sp.slope);
    out.intermediate_worst = std::max(out.intermediate, through(-sp.slope));
    out.returned = LogMag::from_double(out.intermediate_worst) *
                   pow_logmag(std::fabs(sys.lambda()) / std::fabs(sys.mu()), out.u0);
    out.intermediate_ok = out.intermediate_worst <= std::pow(e, -2.5);
    out.returned_ok = out.returned <= LogMag::from_double(bound);
    return out;
}

long i_n(const ModelSystem& sys, const SnRectangle& sn) {
    require_positive_eigenvalues(sys);
    if (!(sn.s_plus() > 0.0)) fail(ErrorCode::WrongQuadrant, "s_n^+ is not positive");
    const auto w = return_window(sys);
    const long i = window_exponent(sn.s_plus(), sys.mu(), w.lo, w.hi);
    const double prod = std::exp(i * std::log(sys.mu()) + sn.n * std::log(sys.lambda()));
    if (prod < 0.1 || prod > 10.0)
        fail(ErrorCode::SmallExpandingViolation, fmt::format("mu^i lambda^n = {} outside [0.1, 10]", prod));
    const Rect r = sys.r_eps();
    for (double x : {sn.rect.x_lo, sn.rect.x_hi}) {
        const double xi = scale_pow(x, sys.mu(), i);
        if (xi < r.x_lo || xi > r.x_hi)
            fail(ErrorCode::SmallExpandingViolation,
                 fmt::format("f^i(S_n) corner abscissa {} outside R_eps for n = {}", xi, sn.n));
    }
    for (double y : {sn.rect.y_lo, sn.rect.y_hi}) {
        const LogMag yi = LogMag::from_double(y) * pow_logmag(sys.lambda(), i);
        if (yi.sign() < 0 || LogMag::from_double(r.y_hi) < yi)
            fail(ErrorCode::SmallExpandingViolation, "f^i(S_n) corner height outside R_eps");
    }
    return i;
}

BetaArc beta_arc(const ModelSystem& sys, const SnRectangle& sn, double s) {
    if (!(s > sn.rect.x_hi)) fail(ErrorCode::Domain, fmt::format("cutoff s = {} does not exceed s_n^+", s));
    const Interval w = t_window(sys);
    const int n = sn.n;
    auto ok = [&](double t) {
        const double x = xi_jet(sys, n, t).xi;
        return x > 0.0 && x <= s;
    };
    // Beyond the extended parameters pr_x is monotone, so a single crossing
    // of the violated bound is located by bisection.
    auto edge = [&](double inside, double limit) {
        if (ok(limit)) return limit;
        double a = inside, b = limit;
        for (int it = 0; it < 200 && a != b; ++it) {
            const double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            (ok(m) ? a : b) = m;
        }
        return a;
    };
    BetaArc out;
    out.n = n;
    out.s = s;
    out.params = {edge(sn.t_tilde_minus, w.lo), edge(sn.t_tilde_plus, w.hi)};
    return out;
}

JnReport jn_slope_check(const ModelSystem& sys, int n, double s, int min_samples) {
    require_positive_eigenvalues(sys);
    const SnRectangle sn = build_sn(sys, n);
    const BetaArc beta = beta_arc(sys, sn, s);
    const auto w = return_window(sys);
    const auto& tr = sys.transition;

    std::vector<double> ts;
    const int per_side = std::max(2, (min_samples + 3) / 4);
    for (int side = 0; side < 2; ++side) {
        const double from = side == 0 ? sn.t_tilde_plus : sn.t_tilde_minus;
        const double to = side == 0 ? beta.params.hi : beta.params.lo;
        const double len = to - from;
        if (std::fabs(len) <= 0.0) continue;
        for (int k = 0; k < per_side; ++k) {
            ts.push_back(from + len * std::pow(10.0, -6.0 + 6.0 * k / per_side));
            ts.push_back(from + len * (k + 0.5) / per_side);
        }
    }
    std::sort(ts.begin(), ts.end());

    JnReport rep;
    rep.n = n;
    rep.s = s;
    rep.threshold = std::pow(sys.epsilon(), 2.5);
    for (double t : ts) {
        const Point x = curve_point(sys, n, t);
        if (sn.rect.contains(x)) continue;
        if (!(x.x > 0.0) || x.x > s) continue;
        const long j = window_exponent(x.x, sys.mu(), w.lo, w.hi);
        const LogMag y_end = LogMag::from_double(x.y) * pow_logmag(sys.lambda(), j);
        if (LogMag::from_double(sys.saddle.chart_half_width) < y_end.abs() ||
            std::fabs(x.x) > sys.saddle.chart_half_width)
            fail(ErrorCode::ChartExit, fmt::format("sample t = {} leaves the chart before returning", t));
        const ArcJet a = arc_jet(sys, n, t);
        const Mat2 jac = jacobian_local(tr, t, a.y);
        const double dx = jac.a11 + jac.a12 * a.dy;
        const double dy = jac.a21 + jac.a22 * a.dy;
        const LogMag slope = slope_after_linear(dx, dy, sys, j);
        rep.samples.push_back({t, j, slope});
        if (rep.samples.size() == 1 || rep.max_slope < slope) rep.max_slope = slope;
    }
    rep.passed = static_cast<int>(rep.samples.size()) >= min_samples &&
                 rep.max_slope < LogMag::from_double(rep.threshold);
    return rep;
}

ModelSystem with_epsilon(const ModelSystem& sys, double eps_target) {
    if (!(eps_target > 0.0)) fail(ErrorCode::Domain, "eps_target must be positive");
    ModelSystem out = sys;
    out.saddle.mu = (sys.mu() < 0 ? -1.0 : 1.0) * (1.0 + eps_target);
    return out;
}

SN0Result find_s_n0(const ModelSystem& sys, double eps_target, const std::vector<double>& s_grid) {
    const ModelSystem v = with_epsilon(sys, eps_target);
    const auto rep = validate(v);
    for (const char* name : {"eigenvalues", "tau1_lt_inv_eps", "mu_lambda_slow"})
        if (!rep.passed(name))
            fail(ErrorCode::NotFound, fmt::format("condition {} fails at eps = {}", name, eps_target));
    std::vector<double> grid = s_grid;
    if (grid.empty())
        for (int k = 0; k < 8; ++k) grid.push_back(0.2 / std::pow(2.0, k));
    const int n_max = v.n_max();
    for (double s : grid) {
        std::map<int, bool> pass;
        auto check = [&](int n) {
            auto it = pass.find(n);
            if (it != pass.end()) return it->second;
            bool ok = false;
            try {
                ok = jn_slope_check(v, n, s).passed;
            } catch (const Error&) {
                ok = false;
            }
            pass[n] = ok;
            return ok;
        };
        for (int n = 1; n + 2 <= n_max; ++n)
            if (check(n) && check(n + 1) && check(n + 2)) return {s, n, eps_target};
    }
    fail(ErrorCode::NotFound, fmt::format("no (s, n0) found at eps = {}", eps_target));
}

}  // namespace tangency
