#pragma once

#include "tangency/leaves.hpp"
#include "tangency/model.hpp"

#include <array>
#include <utility>
#include <vector>

namespace tangency {

/// pr_x(phi(alpha_n(t))) and its t-derivative. The derivative is the first
/// component of dphi applied to the arc tangent.
struct XiJet {
    double xi = 0.0;
    double dxi = 0.0;
    double ddxi = 0.0;
};

XiJet xi_jet(const ModelSystem& sys, int n, double t);

/// xi(t) - xi(t_ref) computed term by term so the common a*y_n part cancels
/// exactly instead of numerically.
double xi_difference(const ModelSystem& sys, int n, double t, double t_ref);

/// phi(alpha_n(t)) without the U(q) check; t must lie in the seed domain.
Point curve_point(const ModelSystem& sys, int n, double t);

struct VerticalParams {
    double t_minus = 0.0;
    double t_plus = 0.0;
};

/// Roots of xi'(t) = 0 around t = 0. NoVerticalTangency when xi' has the
/// sign of c at t = 0, WindowExceeded when a root leaves the t-window.
VerticalParams vertical_params(const ModelSystem& sys, int n);

struct ExtendedParams {
    double t_tilde_minus = 0.0;
    double t_tilde_plus = 0.0;
};

ExtendedParams extended_params(const ModelSystem& sys, int n, double t_minus, double t_plus);

struct SnRectangle {
    int n = 0;
    double t_minus = 0.0;
    double t_plus = 0.0;
    double t_tilde_minus = 0.0;
    double t_tilde_plus = 0.0;
    double rho_n = 0.0;
    Rect rect;
    double D_n = 0.0;
    double W_0n = 0.0;
    double H_0n = 0.0;
    /// Images of t_tilde_minus, t_minus, t_plus, t_tilde_plus.
    std::array<Point, 4> marked{};

    /// Right edge, s_n^+.
    double s_plus() const { return rect.x_hi; }
};

SnRectangle build_sn(const ModelSystem& sys, int n);

struct ScalingFit {
    double exponent = 0.0;
    double r_squared = 0.0;
    double stderr_ = 0.0;
};

/// Slope of log(value) against n log|lambda|; at least five pairs.
ScalingFit scaling_fit(std::span<const std::pair<int, double>> pairs, double lambda);

}  // namespace tangency
