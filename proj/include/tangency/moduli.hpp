#pragma once

#include "tangency/model.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tangency {

/// phi(alpha_n(0)): the representative of the S-shaped arc used by the
/// return-exponent estimators.
Point pick_rn(const ModelSystem& sys, int n);

struct ReturnExponent {
    long m = 0;
    Point x;  // f^m(r_n); the height may underflow to 0
};

/// Unique m with pr_x(r_n) mu^m in (mu^-1, 1]. Domain error unless
/// 0 < pr_x(r_n) <= 1 and mu > 1.
ReturnExponent return_exponent(const ModelSystem& sys, Point r_n);

struct ReturnRecord {
    int n = 0;
    Point r_n;
    long m_n = 0;
    Point x_n;
    double s_n = 0.0;
    double c_n = 0.0;
};

std::vector<ReturnRecord> return_records(const ModelSystem& sys, int n_lo, int n_hi);

struct ModulusFit {
    double rho = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;  // -log|lambda| / log|mu|
    std::vector<ReturnRecord> records;
};

/// Least-squares slope of m(n) against n over at least six values of n.
ModulusFit modulus_fit(const ModelSystem& sys, int n_lo, int n_hi);

struct SnCn {
    int n = 0;
    double s_n = 0.0;
    double c_n = 0.0;
};

std::vector<SnCn> sn_cn_series(const ModelSystem& sys, int n_lo, int n_hi);

struct PowerFit {
    double C = 0.0;
    double tau = 0.0;
    double r_squared = 0.0;
};

/// Log-log fit hx = C x^tau over at least four positive points spanning a
/// decade in x.
PowerFit power_fit(std::span<const std::pair<double, double>> points);

/// Analytic chart conjugacy h(x, y) = (x, beta y) with beta = lambda^-k,
/// carrying sys_0 to sys_1 where phi_1 o h = h o f^k o phi_0. k = 0 is the
/// identity pair.
struct ConjugacyPair {
    ModelSystem sys0;
    ModelSystem sys1;
    long k = 0;
    double beta = 1.0;
    int m0_shift = 0;  // m0(sys1) - m0(sys0)
    std::string name;

    Point h(Point p) const { return {p.x, beta * p.y}; }
};

ConjugacyPair identity_pair(const ModelSystem& sys);
/// Numeric failure if the conjugation identity does not hold to 1e-12 on a
/// sample grid of U(q).
ConjugacyPair rescale_pair(const ModelSystem& sys, long k);
/// Largest relative mismatch of phi_1(h(p)) against h(f^k(phi_0(p))) over a
/// grid of U(q).
double conjugation_defect(const ConjugacyPair& pair, int grid = 9);

/// Fundamental-domain correspondence points (x, h(x)) for n in the range and
/// shifts {0, 16, ..., 240}.
std::vector<std::pair<double, double>> correspondence_points(const ConjugacyPair& pair, int n_lo, int n_hi);

/// The constant a1 z1 / (a0^tau z0^tau mu1^(m0 shift)) with
/// tau = log lambda1 / log lambda0.
double lemma_constant(const ConjugacyPair& pair, double* tau = nullptr);

struct IntersectionResult {
    bool intersects = false;
    double min_offset = 0.0;
    std::string diagnostic;
};

/// Whether h(f^{m0 shift}(gamma'_n)) meets the arc gamma'_n of sys1. Branches
/// are compared over overlapping abscissa ranges; a sign change of the
/// vertical offset, or an offset within the tolerance, counts.
IntersectionResult intersection_check(const ConjugacyPair& pair, int n);

struct OrderProbeRow {
    int j = 0;
    double x_j = 0.0;
    double pr_x = 0.0;
    long l_j = 0;
    double ratio = 0.0;
};

struct OrderProbe {
    std::vector<OrderProbeRow> rows;
    double band_lo = 0.0;
    double band_hi = 0.0;
    double band_factor = 0.0;
    double extended_band_factor = 0.0;
    bool band_stable = false;
    double slope = 0.0;
};

/// q_j = (1 + 0.1 * 2^-j, 0); ratio mu^-l_j / x_j^3 where l_j is the return
/// exponent of phi(q_j).
OrderProbe order_probe(const ModelSystem& sys, int j_lo, int j_hi);

struct EigenEstimate {
    double lambda_from_ratio = 0.0;
    double mu_from_rho = 0.0;
    double rho = 0.0;
};

/// lambda from successive pr_x(r_n) ratios and mu = lambda^(-1/rho).
EigenEstimate eigen_estimates(const ModelSystem& sys, int n_lo, int n_hi);

}  // namespace tangency
