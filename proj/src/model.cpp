#include "tangency/model.hpp"

#include "tangency/cases.hpp"
#include "tangency/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace tangency {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// d^p/dx^p d^q/dy^q of x^i y^j.
double monomial_derivative(const Monomial& m, int p, int q, double x, double y) {
    if (p > m.i || q > m.j) return 0.0;
    double coef = m.coef;
    for (int k = 0; k < p; ++k) coef *= m.i - k;
    for (int k = 0; k < q; ++k) coef *= m.j - k;
    return coef * ipow(x, m.i - p) * ipow(y, m.j - q);
}

double sum_derivative(const std::vector<Monomial>& terms, int p, int q, double x, double y) {
    double s = 0.0;
    for (const auto& m : terms) s += monomial_derivative(m, p, q, x, y);
    return s;
}

}  // namespace

double JetRemainder::value(double x, double y) const { return sum_derivative(terms, 0, 0, x, y); }
double JetRemainder::dx(double x, double y) const { return sum_derivative(terms, 1, 0, x, y); }
double JetRemainder::dy(double x, double y) const { return sum_derivative(terms, 0, 1, x, y); }
double JetRemainder::dxx(double x, double y) const { return sum_derivative(terms, 2, 0, x, y); }
double JetRemainder::dxy(double x, double y) const { return sum_derivative(terms, 1, 1, x, y); }
double JetRemainder::dyy(double x, double y) const { return sum_derivative(terms, 0, 2, x, y); }

double ModelSystem::epsilon() const { return std::fabs(saddle.mu) - 1.0; }

int ModelSystem::n_max() const {
    const double l = std::log(std::fabs(saddle.lambda));
    return static_cast<int>(std::floor(2.0 * std::log(1e-6) / l + 1e-12));
}

Rect ModelSystem::uq() const {
    const double h = charts.uq_half_width;
    return {1.0 - h, 1.0 + h, -h, h};
}

Rect ModelSystem::ur() const {
    const double h = charts.ur_half_width;
    return {-h, h, 1.0 - h, 1.0 + h};
}

Rect ModelSystem::r_eps() const {
    const double e = epsilon();
    return {1.0 + e, std::pow(1.0 + e, 3), 0.0, e * e * e};
}

Rect ModelSystem::r_eps_minus() const {
    const double e = epsilon();
    return {std::pow(1.0 + e, -3), 1.0 / (1.0 + e), 0.0, e * e * e};
}

ModelSystem reference_system() { return ModelSystem{}; }

Point apply_linear(const ModelSystem& sys, Point p, long k) {
    return {scale_pow(p.x, sys.mu(), k), scale_pow(p.y, sys.lambda(), k)};
}

Point phi_local(const TransitionSpec& t, double x, double y) {
    return {t.a * y + t.b * x * y + t.c * x * x * x + t.h1.value(x, y),
            1.0 + t.d * x + t.e * y + t.h2.value(x, y)};
}

Mat2 jacobian_local(const TransitionSpec& t, double x, double y) {
    return {t.b * y + 3.0 * t.c * x * x + t.h1.dx(x, y), t.a + t.b * x + t.h1.dy(x, y),
            t.d + t.h2.dx(x, y), t.e + t.h2.dy(x, y)};
}

bool in_uq(const ModelSystem& sys, Point p) { return sys.uq().contains(p); }
bool in_ur(const ModelSystem& sys, Point p) { return sys.ur().contains(p); }

bool in_chart(const ModelSystem& sys, Point p) {
    const double h = sys.saddle.chart_half_width;
    return std::fabs(p.x) <= h && std::fabs(p.y) <= h;
}

Point apply_phi(const ModelSystem& sys, Point p) {
    if (!in_uq(sys, p))
        fail(ErrorCode::Domain, fmt::format("point ({}, {}) is outside U(q)", p.x, p.y));
    return phi_local(sys.transition, p.x - 1.0, p.y);
}

Mat2 jacobian_phi(const ModelSystem& sys, Point p) {
    if (!in_uq(sys, p))
        fail(ErrorCode::Domain, fmt::format("point ({}, {}) is outside U(q)", p.x, p.y));
    return jacobian_local(sys.transition, p.x - 1.0, p.y);
}

bool ConditionReport::all_passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.passed; });
}

const Condition* ConditionReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

bool ConditionReport::passed(const std::string& name) const {
    const auto* c = find(name);
    return c != nullptr && c->passed;
}

TauBounds tau_bounds(const ModelSystem& sys) {
    const Rect r = sys.r_eps();
    const int g = std::max(2, sys.charts.tau_grid);
    const double e3 = std::pow(sys.epsilon(), 3);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < g; ++i) {
        const double x = r.x_lo + r.width() * i / (g - 1);
        for (int j = 0; j < g; ++j) {
            const double y = r.y_lo + r.height() * j / (g - 1);
            const double px = phi_local(sys.transition, x - 1.0, y).x;
            lo = std::min(lo, px);
            hi = std::max(hi, px);
        }
    }
    if (!(lo > 0.0))
        fail(ErrorCode::WrongQuadrant,
             fmt::format("pr_x(phi(R_eps)) reaches {:.3e} <= 0; case requires R_eps^- placement", lo));
    return {lo / e3, hi / e3};
}

ConditionReport validate(const ModelSystem& sys) {
    ConditionReport rep;
    auto add = [&](std::string name, bool ok, std::string detail) {
        rep.conditions.push_back({std::move(name), ok, std::move(detail)});
    };
    const auto& s = sys.saddle;
    const auto& t = sys.transition;
    const double al = std::fabs(s.lambda), am = std::fabs(s.mu);

    add("eigenvalues", al > 0.0 && al < 1.0 && am > 1.0 && s.chart_half_width > 0.0,
        fmt::format("|lambda| = {}, |mu| = {}", al, am));
    add("a_nonzero", t.a != 0.0, fmt::format("a = {}", t.a));
    add("d_nonzero", t.d != 0.0, fmt::format("d = {}", t.d));
    add("c_nonzero", t.c != 0.0, fmt::format("c = {}", t.c));
    add("EX1", t.b != 0.0, fmt::format("b = {}", t.b));
    add("m0_positive", t.m0 >= 1, fmt::format("m0 = {}", t.m0));

    static const std::set<std::pair<int, int>> forbidden_h1{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {3, 0}};
    static const std::set<std::pair<int, int>> forbidden_h2{{0, 0}, {1, 0}, {0, 1}};
    auto jet_ok = [](const JetRemainder& h, const std::set<std::pair<int, int>>& bad, std::string& why) {
        for (const auto& m : h.terms) {
            if (m.i < 0 || m.j < 0) {
                why = fmt::format("negative exponent ({}, {})", m.i, m.j);
                return false;
            }
            if (m.coef != 0.0 && bad.count({m.i, m.j}) != 0) {
                why = fmt::format("forbidden monomial x^{} y^{}", m.i, m.j);
                return false;
            }
        }
        return true;
    };
    std::string why1 = "ok", why2 = "ok";
    add("jet_H1", jet_ok(t.h1, forbidden_h1, why1), why1);
    add("jet_H2", jet_ok(t.h2, forbidden_h2, why2), why2);
    add("seed_z0_positive", sys.seed.z0() > 0.0, fmt::format("z0 = {}", sys.seed.z0()));

    const Rect r = sys.r_eps();
    const Rect uq = sys.uq();
    add("R_eps_in_Uq", r.x_lo >= uq.x_lo && r.x_hi <= uq.x_hi && r.y_hi <= uq.y_hi,
        fmt::format("R_eps = [{}, {}] x [0, {}]", r.x_lo, r.x_hi, r.y_hi));

    const bool base_ok = rep.all_passed();
    if (base_ok) {
        try {
            const auto tb = tau_bounds(sys);
            rep.tau0 = tb.tau0;
            rep.tau1 = tb.tau1;
            const double inv = 1.0 / sys.epsilon();
            add("tau1_lt_inv_eps", tb.tau1 < inv,
                fmt::format("tau0 = {:.6g}, tau1 = {:.6g}, 1/eps = {:.6g}, corner a+27c = {:.6g}",
                            tb.tau0, tb.tau1, inv, t.a + 27.0 * t.c));
        } catch (const Error& e) {
            add("tau1_lt_inv_eps", false, e.what());
        }
    } else {
        add("tau1_lt_inv_eps", false, "skipped: basic conditions failed");
    }
    add("mu_lambda_slow", base_ok && std::pow(am, 1.5) < 1.0 / al,
        fmt::format("|mu|^1.5 = {:.6g}, 1/|lambda| = {:.6g}", std::pow(am, 1.5), 1.0 / al));

    if (t.a != 0.0 && t.b != 0.0 && t.c != 0.0 && s.lambda != 0.0 && s.mu != 0.0) {
        const SignCase sc = classify(sys);
        rep.case_label = sc.label;
        const auto ad = adaptability(sc);
        add("adaptable", ad.adaptable, sc.label);
    } else {
        add("adaptable", false, "sign case undefined");
    }
    return rep;
}

}  // namespace tangency
