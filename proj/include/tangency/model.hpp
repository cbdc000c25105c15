#pragma once

#include "tangency/numeric.hpp"
#include "tangency/seed_arc.hpp"

#include <string>
#include <vector>

namespace tangency {

/// coef * x^i * y^j in coordinates centred at q = (1, 0).
struct Monomial {
    int i = 0;
    int j = 0;
    double coef = 0.0;
};

/// Higher-order part H1 or H2 of the transition map, as a finite sum of
/// monomials. Derivatives are exact.
struct JetRemainder {
    std::vector<Monomial> terms;

    double value(double x, double y) const;
    double dx(double x, double y) const;
    double dy(double x, double y) const;
    double dxx(double x, double y) const;
    double dxy(double x, double y) const;
    double dyy(double x, double y) const;
};

struct SaddleSpec {
    double lambda = 0.3;  // contracting eigenvalue
    double mu = 1.02;     // expanding eigenvalue
    double chart_half_width = 2.0;
};

/// phi(1 + x, y) = (a y + b x y + c x^3 + H1, 1 + d x + e y + H2), phi = f^m0.
struct TransitionSpec {
    double a = 1.0;
    double b = -1.0;
    double c = 1.0;
    double d = -1.0;
    double e = 0.0;
    int m0 = 1;
    JetRemainder h1;
    JetRemainder h2;
};

struct Rect {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    bool contains(Point p) const {
        return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
    }
};

/// Sizes of the neighbourhoods U(q) and U(r) and the grid used for tau bounds.
struct ChartConfig {
    double uq_half_width = 0.3;
    double ur_half_width = 0.3;
    int tau_grid = 256;
};

struct ModelSystem {
    SaddleSpec saddle;
    TransitionSpec transition;
    SeedArc seed = SeedArc::constant(0.5);
    ChartConfig charts;

    double lambda() const { return saddle.lambda; }
    double mu() const { return saddle.mu; }
    /// |mu| - 1.
    double epsilon() const;
    /// Largest n with |lambda|^(n/2) >= 1e-6, the double-precision regime
    /// for the S_n metrics.
    int n_max() const;

    Rect uq() const;
    Rect ur() const;
    /// [1+eps, (1+eps)^3] x [0, eps^3].
    Rect r_eps() const;
    /// [(1+eps)^-3, (1+eps)^-1] x [0, eps^3].
    Rect r_eps_minus() const;
};

/// lambda = 0.3, mu = 1.02, a = 1, b = -1, c = 1, d = -1, e = 0, no H terms,
/// m0 = 1, constant seed 0.5.
ModelSystem reference_system();

struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double det() const { return a11 * a22 - a12 * a21; }
};

/// (mu^k x, lambda^k y); k may be negative.
Point apply_linear(const ModelSystem& sys, Point p, long k);

/// Transition map on U(q). Throws Domain outside U(q).
Point apply_phi(const ModelSystem& sys, Point p);
Mat2 jacobian_phi(const ModelSystem& sys, Point p);

/// The same polynomial formulas without the U(q) check, in local
/// coordinates (x, y) = (X - 1, Y).
Point phi_local(const TransitionSpec& t, double x, double y);
Mat2 jacobian_local(const TransitionSpec& t, double x, double y);

bool in_uq(const ModelSystem& sys, Point p);
bool in_ur(const ModelSystem& sys, Point p);
bool in_chart(const ModelSystem& sys, Point p);

struct Condition {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ConditionReport {
    std::vector<Condition> conditions;
    double tau0 = 0.0;
    double tau1 = 0.0;
    std::string case_label;

    bool all_passed() const;
    bool passed(const std::string& name) const;
    const Condition* find(const std::string& name) const;
};

ConditionReport validate(const ModelSystem& sys);

struct TauBounds {
    double tau0 = 0.0;
    double tau1 = 0.0;
};

/// min and max of pr_x(phi(.)) / eps^3 over a grid of R_eps. Throws
/// WrongQuadrant when phi(R_eps) reaches pr_x <= 0, which means the case
/// needs the R_eps^- placement.
TauBounds tau_bounds(const ModelSystem& sys);

}  // namespace tangency
