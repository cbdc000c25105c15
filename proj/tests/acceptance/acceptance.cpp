#include "tangency/cascade.hpp"
#include "tangency/cases.hpp"
#include "tangency/error.hpp"
#include "tangency/leaves.hpp"
#include "tangency/moduli.hpp"
#include "tangency/rects.hpp"
#include "tangency/returns.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

using namespace tangency;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

Outcome ac01() {
    const auto s = reference_system();
    const auto est = tangency_order(stable_leaf_order_samples(s));
    const double target = std::fabs(s.transition.c / s.transition.a);
    const bool ok = std::fabs(est.order - 3.0) <= 0.02 && std::fabs(est.coefficient - target) <= 0.02;
    return {ok, fmt::format("order {:.5f}, coefficient {:.5f}", est.order, est.coefficient)};
}

Outcome ac02() {
    const auto s = reference_system();
    const double c = 0.40825;
    double lo = 1e300, hi = -1e300;
    for (int n = 14; n <= 20; ++n) {
        const double r = vertical_params(s, n).t_plus / std::pow(s.lambda(), 0.5 * n);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo >= 0.98 * c && hi <= 1.02 * c, fmt::format("ratios in [{:.6f}, {:.6f}] for n = 14..20", lo, hi)};
}

Outcome ac03() {
    const auto s = reference_system();
    std::vector<std::pair<int, double>> d, w, h;
    for (int n = 8; n <= 18; ++n) {
        const auto sn = build_sn(s, n);
        d.emplace_back(n, sn.D_n);
        w.emplace_back(n, sn.W_0n);
        h.emplace_back(n, sn.H_0n);
    }
    const double ed = scaling_fit(d, s.lambda()).exponent;
    const double ew = scaling_fit(w, s.lambda()).exponent;
    const double eh = scaling_fit(h, s.lambda()).exponent;
    const bool ok = std::fabs(ed - 1.0) <= 0.03 && std::fabs(ew - 1.5) <= 0.05 && std::fabs(eh - 0.5) <= 0.05;
    return {ok, fmt::format("D {:.4f}, W {:.4f}, H {:.4f}", ed, ew, eh)};
}

Outcome ac04() {
    const auto s = reference_system();
    const Rect re = s.r_eps();
    const double s52 = std::pow(s.epsilon(), 2.5);
    int total = 0, good = 0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            for (double sl : {0.0, 0.5 * s52, s52}) {
                ++total;
                const Point p{re.x_lo + re.width() * i / 31.0, re.y_lo + re.height() * j / 31.0};
                try {
                    const auto r = slope_through_return(s, {p, sl, false});
                    if (r.intermediate_ok && r.returned_ok) ++good;
                } catch (const Error&) {
                }
            }
    return {good == total, fmt::format("{}/{} samples satisfy both bounds", good, total)};
}

Outcome ac05() {
    const auto s = reference_system();
    const auto r = find_s_n0(s, s.epsilon());
    bool ok = r.n0 <= 22;
    std::string detail = fmt::format("s = {}, n0 = {}", r.s, r.n0);
    for (int n = r.n0; n <= r.n0 + 2; ++n) {
        const auto rep = jn_slope_check(s, n, r.s);
        ok = ok && rep.passed && rep.samples.size() >= 200;
        detail += fmt::format("; n = {}: {} samples, max slope {}", n, rep.samples.size(), format_logmag(rep.max_slope, 3));
    }
    return {ok, detail};
}

Outcome ac06() {
    const auto base = reference_system();
    for (double eps : {0.02, 0.01, 0.005}) {
        const auto s = with_epsilon(base, eps);
        for (int n = 1; n <= s.n_max(); ++n) {
            try {
                const auto r = run_cascade(s, n);
                if (r.k0 >= 2 && r.inequalities_hold && r.arcs_ok)
                    return {true, fmt::format("eps = {}, n = {}: k0 = {}", eps, n, r.k0)};
            } catch (const Error&) {
            }
        }
    }
    return {false, "no (eps, n) with k0 >= 2 and all inequalities"};
}

Outcome ac07() {
    const auto s = reference_system();
    const auto f = modulus_fit(s, 5, 20);
    auto half = s;
    half.saddle.lambda = 0.5;
    const auto g = modulus_fit(half, 5, 20);
    const auto pair = rescale_pair(s, 3);
    const double r0 = modulus_fit(pair.sys0, 5, 20).rho, r1 = modulus_fit(pair.sys1, 5, 20).rho;
    const bool ok = std::fabs(f.rho - 60.80) <= 0.30 && std::fabs(g.rho - 35.00) <= 0.30 && std::fabs(r1 / r0 - 1.0) <= 1e-3;
    return {ok, fmt::format("rho {:.4f} (target {:.4f}), lambda 0.5 rho {:.4f}, pair {:.6f}/{:.6f}", f.rho, f.target,
                            g.rho, r0, r1)};
}

Outcome ac08() {
    const auto s = reference_system();
    const auto ref = sn_cn_series(s, 5, 20);
    double ref_dev = 0.0, step_dev = 0.0;
    const double target = -std::log(s.lambda()) / std::log(s.mu());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ref_dev = std::max(ref_dev, std::fabs(ref[i].c_n - 1.0));
        if (i > 0) step_dev = std::max(step_dev, std::fabs(ref[i].s_n - ref[i - 1].s_n - target));
    }
    auto tilted = s;
    tilted.seed = SeedArc({0.5, 0.15}, -1.5, 1.5);
    const double c15 = sn_cn_series(tilted, 15, 15).front().c_n;
    const bool ok = ref_dev <= 1e-12 && std::fabs(c15 - 1.0) <= 1e-3 && std::fabs(step_dev) <= 1e-3;
    return {ok, fmt::format("reference max |c_n - 1| = {:.2e}; tilted c_15 = {:.6f}; max step deviation {:.2e}", ref_dev,
                            c15, step_dev)};
}

Outcome ac09() {
    std::vector<std::pair<double, double>> synth;
    for (int i = 0; i < 16; ++i) {
        const double x = std::pow(10.0, -2.0 + 0.2 * i);
        synth.emplace_back(x, 2.0 * std::pow(x, 0.7));
    }
    const auto ps = power_fit(synth);
    const auto s = reference_system();
    const auto id = power_fit(correspondence_points(identity_pair(s), 5, 20));
    const auto rp = rescale_pair(s, 3);
    const auto rf = power_fit(correspondence_points(rp, 5, 20));
    double tau = 0.0;
    const double c = lemma_constant(rp, &tau);
    const bool ok = std::fabs(ps.C - 2.0) <= 1e-6 && std::fabs(ps.tau - 0.7) <= 1e-6 && std::fabs(id.C - 1.0) <= 1e-6 &&
                    std::fabs(id.tau - 1.0) <= 1e-6 && std::fabs(rf.C / c - 1.0) <= 0.01;
    return {ok, fmt::format("synthetic ({:.9f}, {:.9f}), identity ({:.9f}, {:.9f}), rescale C {:.6f} vs {:.6f}", ps.C,
                            ps.tau, id.C, id.tau, rf.C, c)};
}

Outcome ac10() {
    const auto s = reference_system();
    const auto id = identity_pair(s);
    int valid = 0;
    std::vector<int> misses;
    for (int n = 1; n <= s.n_max(); ++n) {
        try {
            build_sn(s, n);
        } catch (const Error&) {
            continue;
        }
        ++valid;
        try {
            if (!intersection_check(id, n).intersects) misses.push_back(n);
        } catch (const Error&) {
            misses.push_back(n);
        }
    }
    const auto rp = rescale_pair(s, 3);
    for (int n = 10; n <= 16; ++n) {
        try {
            if (!intersection_check(rp, n).intersects) misses.push_back(100 + n);
        } catch (const Error&) {
            misses.push_back(100 + n);
        }
    }
    return {valid > 0 && misses.empty(),
            fmt::format("identity over {} valid n, rescale over n = 10..16, misses [{}]", valid, fmt::join(misses, ", "))};
}

Outcome ac11() {
    const auto p = order_probe(reference_system(), 0, 10);
    const double decades = std::log10(p.rows.front().x_j / p.rows.back().x_j);
    const bool ok = std::fabs(p.slope - 3.0) <= 0.02 && p.band_factor <= 1.03 && decades >= 3.0 - 1e-9;
    return {ok, fmt::format("slope {:.5f}, band factor {:.5f}, x_j spans {:.2f} decades", p.slope, p.band_factor, decades)};
}

Outcome ac12() {
    std::set<std::string> labels, adaptable;
    bool roundtrip = true;
    for (const auto& c : all_cases()) {
        labels.insert(c.label);
        roundtrip = roundtrip && case_from_label(c.label) == c;
        if (adaptability(c).adaptable) adaptable.insert(c.label);
    }
    const std::set<std::string> expected{"I_{--}", "II_{++}", "II_{+-}", "II_{-+}", "II_{--}",
                                         "III_{-+}", "III_{--}", "IV_{--}", "IV_{+-}"};
    const bool ok = labels.size() == 16 && roundtrip && adaptable_count() == 9 && adaptable == expected;
    return {ok, fmt::format("{} labels, adaptable_count {}, set {{{}}}", labels.size(), adaptable_count(),
                            fmt::join(adaptable, ", "))};
}

const std::vector<std::function<Outcome()>> kCriteria{ac01, ac02, ac03, ac04, ac05, ac06,
                                                      ac07, ac08, ac09, ac10, ac11, ac12};

bool run(int k) {
    Outcome o;
    try {
        o = kCriteria[k - 1]();
    } catch (const Error& e) {
        o = {false, fmt::format("{}: {}", to_string(e.code()), e.what())};
    }
    fmt::print("AC{:02d} {}: {}\n", k, o.passed ? "PASS" : "FAIL", o.detail);
    return o.passed;
}

}  // namespace

int main(int argc, char** argv) {
    const int count = static_cast<int>(kCriteria.size());
    if (argc > 2) {
        std::fprintf(stderr, "usage: acceptance [criterion 1-%d]\n", count);
        return 2;
    }
    if (argc == 2) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > count) {
            std::fprintf(stderr, "criterion must be in 1..%d\n", count);
            return 2;
        }
        return run(k) ? 0 : 1;
    }
    bool all = true;
    for (int k = 1; k <= count; ++k) all = run(k) && all;
    return all ? 0 : 1;
}
