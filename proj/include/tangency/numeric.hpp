#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tangency {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Signed real stored as sign and natural log of the magnitude. Quantities
/// such as lambda^k for k in the hundreds sit far below the double range, so
/// box heights and slopes along the cascade are carried in this form.
class LogMag {
public:
    constexpr LogMag() = default;

    static LogMag from_double(double v);
    static LogMag from_log(int sign, double log_abs);
    static LogMag zero() { return {}; }

    int sign() const { return sign_; }
    double log_abs() const { return log_abs_; }
    bool is_zero() const { return sign_ == 0; }

    /// Underflows to 0 and overflows to +-inf, like the double it becomes.
    double to_double() const;
    double log10_abs() const;

    LogMag abs() const { return from_log(sign_ == 0 ? 0 : 1, log_abs_); }
    LogMag operator-() const { return from_log(-sign_, log_abs_); }

    friend LogMag operator*(LogMag a, LogMag b);
    friend LogMag operator/(LogMag a, LogMag b);
    friend LogMag operator+(LogMag a, LogMag b);
    friend LogMag operator-(LogMag a, LogMag b) { return a + (-b); }
    friend LogMag operator*(LogMag a, double b) { return a * from_double(b); }

    /// Compares signed values.
    friend bool operator<(LogMag a, LogMag b);
    friend bool operator<=(LogMag a, LogMag b) { return !(b < a); }

private:
    int sign_ = 0;
    double log_abs_ = -std::numeric_limits<double>::infinity();
};

/// Scientific notation for values outside the double range, e.g. "3.97e-340".
std::string format_logmag(LogMag v, int digits = 6);

/// x * base^k. Integer powers with |k| > 50 go through log space so the
/// intermediate base^k never overflows or underflows on its own.
double scale_pow(double x, double base, long k);

/// base^k as a LogMag.
LogMag pow_logmag(double base, long k);

/// Value and derivative of a scalar function.
using ScalarFn = std::function<std::pair<double, double>(double)>;

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Newton iteration kept inside a sign-changing bracket; a step that leaves
/// the bracket or fails to halve it is replaced by bisection. Converges when
/// the step (or bracket) is below x_tol.
RootResult safeguarded_newton(const ScalarFn& f, double lo, double hi, double x_tol,
                              int max_iter = 200);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Chebyshev-Lobatto nodes on [lo, hi], count >= 2, ascending.
std::vector<double> chebyshev_nodes(double lo, double hi, int count);

}  // namespace tangency
