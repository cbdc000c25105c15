#include "tangency/numeric.hpp"

#include "tangency/error.hpp"

#include <algorithm>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_fit.h>

namespace tangency {

LogMag LogMag::from_double(double v) {
    LogMag out;
    if (v == 0.0) return out;
    out.sign_ = v > 0 ? 1 : -1;
    out.log_abs_ = std::log(std::fabs(v));
    return out;
}

LogMag LogMag::from_log(int sign, double log_abs) {
    LogMag out;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return out;
    out.sign_ = sign > 0 ? 1 : -1;
    out.log_abs_ = log_abs;
    return out;
}

double LogMag::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_abs_);
}

double LogMag::log10_abs() const { return log_abs_ / std::numbers::ln10; }

LogMag operator*(LogMag a, LogMag b) {
    if (a.is_zero() || b.is_zero()) return {};
    return LogMag::from_log(a.sign_ * b.sign_, a.log_abs_ + b.log_abs_);
}

LogMag operator/(LogMag a, LogMag b) {
    if (b.is_zero()) fail(ErrorCode::Numeric, "LogMag division by zero");
    if (a.is_zero()) return {};
    return LogMag::from_log(a.sign_ * b.sign_, a.log_abs_ - b.log_abs_);
}

LogMag operator+(LogMag a, LogMag b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (b.log_abs_ > a.log_abs_) std::swap(a, b);
    const double rel = std::exp(b.log_abs_ - a.log_abs_);
    if (a.sign_ == b.sign_) return LogMag::from_log(a.sign_, a.log_abs_ + std::log1p(rel));
    if (rel == 1.0) return {};
    return LogMag::from_log(a.sign_, a.log_abs_ + std::log1p(-rel));
}

bool operator<(LogMag a, LogMag b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.log_abs_ < b.log_abs_ : a.log_abs_ > b.log_abs_;
}

std::string format_logmag(LogMag v, int digits) {
    if (v.is_zero()) return "0";
    const double l10 = v.log10_abs();
    double exponent = std::floor(l10);
    double mantissa = std::pow(10.0, l10 - exponent);
    // Rounding the mantissa can carry it to 10.
    if (std::stod(fmt::format("{:.{}f}", mantissa, digits - 1)) >= 10.0) {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    return fmt::format("{}{:.{}f}e{}{:03d}", v.sign() < 0 ? "-" : "", mantissa, digits - 1,
                       exponent < 0 ? "-" : "+", static_cast<int>(std::fabs(exponent)));
}

double scale_pow(double x, double base, long k) {
    if (x == 0.0 || k == 0) return x;
    if (std::labs(k) <= 50) return x * std::pow(base, static_cast<double>(k));
    const int sign = (x < 0 ? -1 : 1) * ((base < 0 && (k % 2 != 0)) ? -1 : 1);
    return sign * std::exp(std::log(std::fabs(x)) + static_cast<double>(k) * std::log(std::fabs(base)));
}

LogMag pow_logmag(double base, long k) {
    if (base == 0.0) fail(ErrorCode::Domain, "pow_logmag of zero base");
    const int sign = (base < 0 && (k % 2 != 0)) ? -1 : 1;
    return LogMag::from_log(sign, static_cast<double>(k) * std::log(std::fabs(base)));
}

RootResult safeguarded_newton(const ScalarFn& f, double lo, double hi, double x_tol,
                              int max_iter) {
    auto [f_lo, d_lo] = f(lo);
    auto [f_hi, d_hi] = f(hi);
    if (f_lo == 0.0) return {lo, 0.0, 0};
    if (f_hi == 0.0) return {hi, 0.0, 0};
    if ((f_lo > 0) == (f_hi > 0))
        fail(ErrorCode::Numeric, fmt::format("root not bracketed in [{}, {}]", lo, hi));
    // Orient so that f(lo) < 0.
    if (f_lo > 0) std::swap(lo, hi);

    double t = 0.5 * (lo + hi);
    double dx_old = std::fabs(hi - lo);
    double dx = dx_old;
    auto [ft, dft] = f(t);
    for (int it = 1; it <= max_iter; ++it) {
        const bool newton_leaves = ((t - hi) * dft - ft) * ((t - lo) * dft - ft) > 0.0;
        const bool newton_slow = std::fabs(2.0 * ft) > std::fabs(dx_old * dft);
        dx_old = dx;
        if (newton_leaves || newton_slow || dft == 0.0) {
            dx = 0.5 * (hi - lo);
            t = lo + dx;
        } else {
            dx = ft / dft;
            t -= dx;
        }
        if (std::fabs(dx) < x_tol) {
            auto [fe, de] = f(t);
            return {t, fe, it};
        }
        std::tie(ft, dft) = f(t);
        if (ft == 0.0) return {t, 0.0, it};
        if (ft < 0.0)
            lo = t;
        else
            hi = t;
        if (std::fabs(hi - lo) < x_tol) return {t, ft, it};
    }
    fail(ErrorCode::Numeric,
         fmt::format("safeguarded Newton did not converge in {} steps (residual {:.3e})", max_iter, ft));
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        fail(ErrorCode::Domain, "fit_line needs at least two paired samples");
    double c0 = 0, c1 = 0, cov00 = 0, cov01 = 0, cov11 = 0, sumsq = 0;
    gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double tss = 0;
    for (double v : y) tss += (v - mean) * (v - mean);
    LinearFit out;
    out.slope = c1;
    out.intercept = c0;
    out.slope_stderr = std::sqrt(std::max(cov11, 0.0));
    out.r_squared = tss > 0 ? 1.0 - sumsq / tss : 1.0;
    return out;
}

std::vector<double> chebyshev_nodes(double lo, double hi, int count) {
    if (count < 2) fail(ErrorCode::Domain, "chebyshev_nodes needs count >= 2");
    std::vector<double> nodes(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double c = -std::cos(std::numbers::pi * i / (count - 1));
        nodes[static_cast<std::size_t>(i)] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Domain: return "domain error";
        case ErrorCode::Numeric: return "numeric error";
        case ErrorCode::NoVerticalTangency: return "no vertical tangency";
        case ErrorCode::WindowExceeded: return "parameter window exceeded";
        case ErrorCode::SmallExpandingViolation: return "small expanding condition violated";
        case ErrorCode::WrongQuadrant: return "wrong quadrant";
        case ErrorCode::ChartExit: return "chart exit";
        case ErrorCode::NotFound: return "not found";
        case ErrorCode::Inconclusive: return "inconclusive";
        case ErrorCode::Config: return "configuration error";
        case ErrorCode::Io: return "i/o error";
    }
    return "unknown error";
}

}  // namespace tangency
