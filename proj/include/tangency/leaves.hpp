#pragma once

#include "tangency/model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace tangency {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
    double length() const { return hi - lo; }
};

/// [(1+eps)^-3 - 1, (1+eps)^3 - 1], the parameter window for the arcs.
Interval t_window(const ModelSystem& sys);

struct ArcSample {
    Point point;
    double dy_dt = 0.0;
};

/// Value and first two t-derivatives of y_n(t) = lambda^n y0(mu^-n (t+1)).
struct ArcJet {
    double y = 0.0;
    double dy = 0.0;
    double ddy = 0.0;
};

/// Evaluates the jet without the window check; the seed domain is still
/// enforced.
ArcJet arc_jet(const ModelSystem& sys, int n, double t);

/// (t + 1, y_n(t)) with its exact derivative. Domain error outside the
/// t-window or outside the scaled seed domain.
ArcSample alpha(const ModelSystem& sys, int n, double t);

/// Height of the stable leaf L^s(q): the y near 0 with pr_x(phi(1+x, y)) = 0.
double stable_leaf_v(const ModelSystem& sys, double x);

/// Abscissa of the unstable leaf L^u(r) at height 1 + y_offset.
double unstable_leaf_w(const ModelSystem& sys, double y_offset);

struct OrderEstimate {
    double order = 0.0;
    double coefficient = 0.0;
    double r_squared = 0.0;
};

/// samples are (distance_to_leaf, distance_to_point) pairs.
OrderEstimate tangency_order(std::span<const std::pair<double, double>> samples);

/// Points (x, v(x)) of L^s(q) for x geometrically spaced in [x_lo, x_hi],
/// returned as (|v(x)|, |(x, v(x))|) distance pairs to W^u_loc and to q.
std::vector<std::pair<double, double>> stable_leaf_order_samples(const ModelSystem& sys, int count = 24,
                                                                 double x_lo = 1e-4, double x_hi = 1e-2);

}  // namespace tangency
