#pragma once

#include "tangency/model.hpp"
#include "tangency/numeric.hpp"
#include "tangency/rects.hpp"

#include <optional>
#include <vector>

namespace tangency {

/// The unique integer j with value * base^j in (lo, hi]. base > 1, value > 0.
/// A log estimate is corrected by direct comparison.
long window_exponent(double value, double base, double lo, double hi);

/// Whether value * base^j lies in (lo, hi].
bool in_window(double value, double base, long j, double lo, double hi);

/// Returns and cascade are implemented for lambda > 0 and mu > 0.
void require_positive_eigenvalues(const ModelSystem& sys);

/// Absolute slope of a tangent; vertical tangents carry no number.
struct SlopedPoint {
    Point point;
    double slope = 0.0;
    bool vertical = false;
};

/// Unique j >= 1 with mu^j pr_x(phi(p)) in ((1+eps)^2, (1+eps)^3].
long u0(const ModelSystem& sys, Point p);

struct SlopeReturn {
    long u0 = 0;
    /// Slope after dphi of the tangent (1, +slope).
    double intermediate = 0.0;
    /// Larger of the two orientations (1, +slope) and (1, -slope).
    double intermediate_worst = 0.0;
    /// intermediate_worst * (|lambda| / |mu|)^u0.
    LogMag returned;
    bool intermediate_ok = false;
    bool returned_ok = false;
};

/// Domain error when sp.slope > eps^(5/2) or sp.point is outside R_eps.
SlopeReturn slope_through_return(const ModelSystem& sys, const SlopedPoint& sp);

/// Unique i with mu^i s_n^+ in ((1+eps)^2, (1+eps)^3]. Checks
/// mu^i lambda^n in [0.1, 10] and that the four corners of f^i(S_n) lie in
/// R_eps; SmallExpandingViolation otherwise.
long i_n(const ModelSystem& sys, const SnRectangle& sn);

/// Parameter interval of phi(alpha_n) around [t~-, t~+] with 0 < pr_x <= s,
/// clamped to the t-window.
struct BetaArc {
    int n = 0;
    double s = 0.0;
    Interval params;
};

BetaArc beta_arc(const ModelSystem& sys, const SnRectangle& sn, double s);

struct JnSample {
    double t = 0.0;
    long j = 0;
    LogMag slope;
};

struct JnReport {
    int n = 0;
    double s = 0.0;
    std::vector<JnSample> samples;
    LogMag max_slope;
    double threshold = 0.0;
    bool passed = false;
};

/// Samples beta_n(s) outside S_n (at least min_samples points), pushes the
/// unit tangent of phi(alpha_n) through f^{j_n}, and compares the largest
/// slope with eps^(5/2). j_n is the unique integer with
/// pr_x(f^{j_n}(x)) in ((1+eps)^2, (1+eps)^3].
JnReport jn_slope_check(const ModelSystem& sys, int n, double s, int min_samples = 240);

struct SN0Result {
    double s = 0.0;
    int n0 = 0;
    double epsilon = 0.0;
};

/// System with |mu| = 1 + eps_target and everything else unchanged.
ModelSystem with_epsilon(const ModelSystem& sys, double eps_target);

/// First (s, n0) over s in s_grid (default 0.2, 0.1, 0.05, ...) and
/// increasing n such that jn_slope_check passes at n0, n0+1, n0+2. NotFound
/// when the grid is exhausted or the slow conditions fail.
SN0Result find_s_n0(const ModelSystem& sys, double eps_target, const std::vector<double>& s_grid = {});

}  // namespace tangency
