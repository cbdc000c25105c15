#include "tangency/moduli.hpp"

#include "tangency/error.hpp"
#include "tangency/leaves.hpp"
#include "tangency/rects.hpp"
#include "tangency/returns.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tangency {

Point pick_rn(const ModelSystem& sys, int n) {
    const ArcSample a = alpha(sys, n, 0.0);
    return apply_phi(sys, a.point);
}

ReturnExponent return_exponent(const ModelSystem& sys, Point r_n) {
    require_positive_eigenvalues(sys);
    if (!(r_n.x > 0.0) || r_n.x > 1.0)
        fail(ErrorCode::Domain, fmt::format("return exponent needs 0 < pr_x <= 1, got {}", r_n.x));
    const double mu = sys.mu();
    const long m = window_exponent(r_n.x, mu, 1.0 / mu, 1.0);
    return {m, apply_linear(sys, r_n, m)};
}

std::vector<ReturnRecord> return_records(const ModelSystem& sys, int n_lo, int n_hi) {
    std::vector<ReturnRecord> out;
    const double lmu = std::log(sys.mu());
    const auto& t = sys.transition;
    for (int n = n_lo; n <= n_hi; ++n) {
        ReturnRecord r;
        r.n = n;
        r.r_n = pick_rn(sys, n);
        const auto re = return_exponent(sys, r.r_n);
        r.m_n = re.m;
        r.x_n = re.x;
        r.s_n = -std::log(r.r_n.x) / lmu;
        r.c_n = t.a * sys.seed.z0() * std::exp(n * std::log(sys.lambda()) + r.s_n * lmu);
        out.push_back(r);
    }
    return out;
}

ModulusFit modulus_fit(const ModelSystem& sys, int n_lo, int n_hi) {
    if (n_hi - n_lo + 1 < 6) fail(ErrorCode::Domain, "modulus fit needs at least six values of n");
    ModulusFit out;
    out.records = return_records(sys, n_lo, n_hi);
    std::vector<double> x, y;
    for (const auto& r : out.records) {
        x.push_back(r.n);
        y.push_back(static_cast<double>(r.m_n));
    }
    const auto fit = fit_line(x, y);
    out.rho = fit.slope;
    out.stderr_ = fit.slope_stderr;
    out.target = -std::log(std::fabs(sys.lambda())) / std::log(std::fabs(sys.mu()));
    return out;
}

std::vector<SnCn> sn_cn_series(const ModelSystem& sys, int n_lo, int n_hi) {
    std::vector<SnCn> out;
    for (const auto& r : return_records(sys, n_lo, n_hi)) out.push_back({r.n, r.s_n, r.c_n});
    return out;
}

PowerFit power_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 4) fail(ErrorCode::Domain, "power fit needs at least four points");
    std::vector<double> lx, ly;
    double xmin = INFINITY, xmax = 0.0;
    for (const auto& [x, hx] : points) {
        if (!(x > 0.0) || !(hx > 0.0)) fail(ErrorCode::Domain, "power fit needs positive data");
        lx.push_back(std::log(x));
        ly.push_back(std::log(hx));
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    if (xmax / xmin < 10.0) fail(ErrorCode::Domain, "power fit points must span a decade");
    const auto fit = fit_line(lx, ly);
    return {std::exp(fit.intercept), fit.slope, fit.r_squared};
}

ConjugacyPair identity_pair(const ModelSystem& sys) {
    ConjugacyPair p;
    p.sys0 = sys;
    p.sys1 = sys;
    p.name = "identity";
    return p;
}

ConjugacyPair rescale_pair(const ModelSystem& sys, long k) {
    if (k < 0) fail(ErrorCode::Domain, "rescale exponent must be non-negative");
    const double lk = scale_pow(1.0, sys.lambda(), k);
    const double mk = scale_pow(1.0, sys.mu(), k);
    ConjugacyPair p;
    p.sys0 = sys;
    p.k = k;
    p.beta = 1.0 / lk;
    p.m0_shift = static_cast<int>(k);
    p.name = fmt::format("rescale k={}", k);
    ModelSystem s1 = sys;
    auto& t = s1.transition;
    t.a *= mk * lk;
    t.b *= mk * lk;
    t.c *= mk;
    t.e *= lk;
    t.m0 += static_cast<int>(k);
    for (auto& m : t.h1.terms) m.coef *= mk * scale_pow(1.0, lk, m.j);
    for (auto& m : t.h2.terms) m.coef *= scale_pow(1.0, lk, m.j);
    s1.seed = sys.seed.scaled(p.beta);
    p.sys1 = s1;
    const double defect = conjugation_defect(p);
    if (defect > 1e-12)
        fail(ErrorCode::Numeric, fmt::format("rescale pair fails the conjugation identity (defect {:.3e})", defect));
    return p;
}

double conjugation_defect(const ConjugacyPair& pair, int grid) {
    const Rect uq = pair.sys0.uq();
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Point p{uq.x_lo + uq.width() * i / (grid - 1), uq.y_lo + uq.height() * j / (grid - 1)};
            const Point hp = pair.h(p);
            const Point lhs = phi_local(pair.sys1.transition, hp.x - 1.0, hp.y);
            const Point rhs = pair.h(apply_linear(pair.sys0, phi_local(pair.sys0.transition, p.x - 1.0, p.y), pair.k));
            const double sx = std::max(1.0, std::fabs(rhs.x));
            const double sy = std::max(1.0, std::fabs(rhs.y));
            worst = std::max({worst, std::fabs(lhs.x - rhs.x) / sx, std::fabs(lhs.y - rhs.y) / sy});
        }
    }
    return worst;
}

std::vector<std::pair<double, double>> correspondence_points(const ConjugacyPair& pair, int n_lo, int n_hi) {
    std::vector<std::pair<double, double>> out;
    const double mu0 = pair.sys0.mu();
    const double mu1 = pair.sys1.mu();
    for (int n = n_lo; n <= n_hi; ++n) {
        const Point r0 = pick_rn(pair.sys0, n);
        const Point r1 = pick_rn(pair.sys1, n);
        const long m = return_exponent(pair.sys0, r0).m;
        for (long s = 0; s <= 240; s += 16)
            out.emplace_back(scale_pow(r0.x, mu0, m - s), scale_pow(r1.x, mu1, m - s - pair.m0_shift));
    }
    return out;
}

double lemma_constant(const ConjugacyPair& pair, double* tau_out) {
    const auto& s0 = pair.sys0;
    const auto& s1 = pair.sys1;
    const double tau = std::log(std::fabs(s1.lambda())) / std::log(std::fabs(s0.lambda()));
    if (tau_out != nullptr) *tau_out = tau;
    const double num = s1.transition.a * s1.seed.z0();
    const double den = std::pow(s0.transition.a, tau) * std::pow(s0.seed.z0(), tau) *
                       scale_pow(1.0, s1.mu(), pair.m0_shift);
    return num / den;
}

namespace {

struct Branch {
    double t_a = 0.0;
    double t_b = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
};

using CurveFn = std::function<Point(double)>;

std::vector<Branch> branches(const CurveFn& c, const SnRectangle& sn) {
    std::vector<Branch> out;
    const double cuts[] = {sn.t_tilde_minus, sn.t_minus, sn.t_plus, sn.t_tilde_plus};
    for (int i = 0; i < 3; ++i) {
        const double xa = c(cuts[i]).x, xb = c(cuts[i + 1]).x;
        out.push_back({cuts[i], cuts[i + 1], std::min(xa, xb), std::max(xa, xb)});
    }
    return out;
}

double y_at(const CurveFn& c, const Branch& b, double x) {
    double ta = b.t_a, tb = b.t_b;
    const bool increasing = c(tb).x > c(ta).x;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (ta + tb);
        if (m == ta || m == tb) break;
        const bool below = c(m).x < x;
        ((below == increasing) ? ta : tb) = m;
    }
    return c(0.5 * (ta + tb)).y;
}

}  // namespace

IntersectionResult intersection_check(const ConjugacyPair& pair, int n) {
    const SnRectangle sn0 = build_sn(pair.sys0, n);
    const SnRectangle sn1 = build_sn(pair.sys1, n);
    const CurveFn a = [&](double t) {
        return pair.h(apply_linear(pair.sys0, curve_point(pair.sys0, n, t), pair.m0_shift));
    };
    const CurveFn b = [&](double t) { return curve_point(pair.sys1, n, t); };
    const auto ba = branches(a, sn0);
    const auto bb = branches(b, sn1);
    IntersectionResult res;
    res.min_offset = INFINITY;
    const double tol = 1e-12;
    bool any_overlap = false;
    for (int samples : {33, 65, 129}) {
        for (const auto& p : ba) {
            for (const auto& q : bb) {
                const double lo = std::max(p.x_min, q.x_min);
                const double hi = std::min(p.x_max, q.x_max);
                if (!(hi > lo)) continue;
                any_overlap = true;
                double prev = 0.0;
                for (int i = 0; i < samples; ++i) {
                    const double x = lo + (hi - lo) * i / (samples - 1);
                    const double off = y_at(a, p, x) - y_at(b, q, x);
                    res.min_offset = std::min(res.min_offset, std::fabs(off));
                    if (std::fabs(off) <= tol || (i > 0 && (off > 0) != (prev > 0))) {
                        res.intersects = true;
                        res.diagnostic = fmt::format("offset change near x = {:.6e} ({} samples)", x, samples);
                        return res;
                    }
                    prev = off;
                }
            }
        }
    }
    res.diagnostic = any_overlap ? fmt::format("no sign change; min |offset| = {:.3e}", res.min_offset)
                                 : "abscissa ranges do not overlap";
    return res;
}

OrderProbe order_probe(const ModelSystem& sys, int j_lo, int j_hi) {
    if (j_hi < j_lo) fail(ErrorCode::Domain, "empty order probe range");
    const double mu = sys.mu();
    auto row = [&](int j) {
        OrderProbeRow r;
        r.j = j;
        r.x_j = 0.1 * std::pow(2.0, -j);
        const Point t = apply_phi(sys, {1.0 + r.x_j, 0.0});
        if (!(t.x > 0.0)) fail(ErrorCode::WrongQuadrant, fmt::format("pr_x(phi(q_{})) = {} <= 0", j, t.x));
        r.pr_x = t.x;
        r.l_j = return_exponent(sys, t).m;
        r.ratio = scale_pow(1.0, mu, -r.l_j) / (r.x_j * r.x_j * r.x_j);
        return r;
    };
    OrderProbe out;
    for (int j = j_lo; j <= j_hi; ++j) out.rows.push_back(row(j));
    auto band = [](const std::vector<OrderProbeRow>& rows, double& lo, double& hi) {
        lo = INFINITY;
        hi = 0.0;
        for (const auto& r : rows) {
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
    };
    band(out.rows, out.band_lo, out.band_hi);
    out.band_factor = out.band_hi / out.band_lo;
    auto ext = out.rows;
    ext.push_back(row(j_hi + 1));
    ext.push_back(row(j_hi + 2));
    double elo = 0, ehi = 0;
    band(ext, elo, ehi);
    out.extended_band_factor = ehi / elo;
    out.band_stable = out.extended_band_factor <= std::fabs(mu) * (1.0 + 1e-12);
    std::vector<double> lx, ly;
    for (const auto& r : out.rows) {
        lx.push_back(std::log(r.x_j));
        ly.push_back(-static_cast<double>(r.l_j) * std::log(mu));
    }
    if (lx.size() >= 2) out.slope = fit_line(lx, ly).slope;
    return out;
}

EigenEstimate eigen_estimates(const ModelSystem& sys, int n_lo, int n_hi) {
    const auto fit = modulus_fit(sys, n_lo, n_hi);
    double acc = 0.0;
    int count = 0;
    for (std::size_t i = 1; i < fit.records.size(); ++i) {
        acc += std::log(fit.records[i].r_n.x / fit.records[i - 1].r_n.x);
        ++count;
    }
    EigenEstimate e;
    e.rho = fit.rho;
    e.lambda_from_ratio = std::exp(acc / count);
    e.mu_from_rho = std::exp(-std::log(e.lambda_from_ratio) / fit.rho);
    return e;
}

}  // namespace tangency
