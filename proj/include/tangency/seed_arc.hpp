#pragma once

#include <vector>

namespace tangency {

/// The seed arc alpha_0: graph of a polynomial y0 over an interval of the
/// local unstable manifold, crossing the local stable manifold at (0, z0).
class SeedArc {
public:
    /// coefficients[k] multiplies x^k. Throws Domain if the domain does not
    /// contain 0 and 1 in its interior, if y0(0) <= 0, or if y0 is not
    /// positive on the domain.
    SeedArc(std::vector<double> coefficients, double domain_lo = -2.0, double domain_hi = 2.0);

    static SeedArc constant(double height) { return SeedArc({height}); }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double z0() const { return z0_; }
    /// max |y0'| over the domain.
    double sigma() const { return sigma_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    const std::vector<double>& coefficients() const { return coef_; }

    /// The same arc scaled vertically, y0 -> factor * y0.
    SeedArc scaled(double factor) const;

private:
    std::vector<double> coef_;
    double lo_;
    double hi_;
    double z0_ = 0.0;
    double sigma_ = 0.0;
};

}  // namespace tangency
