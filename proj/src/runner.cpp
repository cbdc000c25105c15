#include "tangency/runner.hpp"

#include "tangency/cascade.hpp"
#include "tangency/cases.hpp"
#include "tangency/error.hpp"
#include "tangency/leaves.hpp"
#include "tangency/moduli.hpp"
#include "tangency/rects.hpp"
#include "tangency/returns.hpp"
#include "tangency/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <set>

#include <fmt/format.h>

#include "json.hpp"

namespace tangency {

using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

struct Context {
    const ExperimentConfig& cfg;
    ojson results = ojson::object();
    std::vector<Assertion> assertions;
    std::vector<OutputFile> files;
    std::string command;

    void check(const std::string& id, bool passed, std::string detail) {
        assertions.push_back({command + "." + id, command, passed, std::move(detail)});
    }
};

/// Evaluates f over items concurrently and returns results in input order.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, F f) {
    using R = decltype(f(items.front()));
    std::vector<std::future<R>> futs;
    futs.reserve(items.size());
    for (const auto& it : items) futs.push_back(std::async(std::launch::async, f, it));
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& fu : futs) out.push_back(fu.get());
    return out;
}

std::vector<int> range_of(IntRange r) {
    std::vector<int> v;
    for (int n = r.lo; n <= r.hi; ++n) v.push_back(n);
    return v;
}

bool near(double v, double target, double tol) { return std::fabs(v - target) <= tol; }

// validate --------------------------------------------------------------------

void cmd_validate(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    const auto rep = validate(sys);
    ojson conds = ojson::array();
    std::vector<std::string> failed;
    for (const auto& c : rep.conditions) {
        conds.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        if (!c.passed) failed.push_back(c.name);
    }
    ojson r;
    r["conditions"] = conds;
    r["tau0"] = rep.tau0;
    r["tau1"] = rep.tau1;
    r["tau1_corner_estimate"] = sys.transition.a + 27.0 * sys.transition.c;
    r["case"] = rep.case_label;
    r["epsilon"] = sys.epsilon();
    r["n_max"] = sys.n_max();
    ctx.check("conditions", failed.empty(),
              failed.empty() ? "all standing conditions hold" : fmt::format("failed: {}", fmt::join(failed, ", ")));

    // Analytic Jacobian against central differences at random points of U(q).
    std::mt19937_64 rng(ctx.cfg.seed);
    const Rect uq = sys.uq();
    std::uniform_real_distribution<double> ux(uq.x_lo, uq.x_hi), uy(uq.y_lo, uq.y_hi);
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Point p{ux(rng), uy(rng)};
        const double xl = p.x - 1.0;
        const Mat2 j = jacobian_local(sys.transition, xl, p.y);
        const Point px1 = phi_local(sys.transition, xl + h, p.y), px0 = phi_local(sys.transition, xl - h, p.y);
        const Point py1 = phi_local(sys.transition, xl, p.y + h), py0 = phi_local(sys.transition, xl, p.y - h);
        const double fd[4] = {(px1.x - px0.x) / (2 * h), (py1.x - py0.x) / (2 * h), (px1.y - px0.y) / (2 * h),
                              (py1.y - py0.y) / (2 * h)};
        const double an[4] = {j.a11, j.a12, j.a21, j.a22};
        double scale = 0.0, err = 0.0;
        for (int k = 0; k < 4; ++k) {
            scale = std::max(scale, std::fabs(an[k]));
            err = std::max(err, std::fabs(fd[k] - an[k]));
        }
        worst = std::max(worst, err / std::max(scale, 1e-300));
    }
    r["jacobian_fd_max_rel_error"] = worst;
    ctx.check("jacobian_fd", worst <= ctx.cfg.tolerances.jacobian_fd_rel,
              fmt::format("max relative error {:.3e} over 1000 points (seed {})", worst, ctx.cfg.seed));
    ctx.results["validate"] = r;
}

// leaves ----------------------------------------------------------------------

void cmd_leaves(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    const auto& tol = ctx.cfg.tolerances;
    const auto samples = stable_leaf_order_samples(sys);
    const auto est = tangency_order(samples);
    const double coef_target = std::fabs(sys.transition.c / sys.transition.a);
    ojson r;
    r["order"] = est.order;
    r["coefficient"] = est.coefficient;
    r["coefficient_target"] = coef_target;
    r["r_squared"] = est.r_squared;
    ctx.check("tangency_order", near(est.order, 3.0, tol.order),
              fmt::format("order {:.5f}, target 3 +- {}", est.order, tol.order));
    ctx.check("tangency_coefficient", near(est.coefficient, coef_target, tol.order_coefficient),
              fmt::format("coefficient {:.5f}, target {:.5f} +- {}", est.coefficient, coef_target, tol.order_coefficient));

    std::string csv = "x,v,v_over_x3,w,w_over_s3\n";
    ojson jets = ojson::array();
    for (double x : {-1e-1, -3e-2, -1e-2, -3e-3, -1e-3, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
        const double v = stable_leaf_v(sys, x);
        const double w = unstable_leaf_w(sys, x);
        csv += fmt::format("{},{},{},{},{}\n", num(x), num(v), num(v / (x * x * x)), num(w), num(w / (x * x * x)));
    }
    r["v_jet_target"] = -sys.transition.c / sys.transition.a;
    r["w_jet_target"] = sys.transition.c / std::pow(sys.transition.d, 3);
    r["v_over_x3_at_1e-3"] = stable_leaf_v(sys, 1e-3) / 1e-9;
    r["w_over_s3_at_1e-3"] = unstable_leaf_w(sys, 1e-3) / 1e-9;
    ctx.files.push_back({"leaves.csv", csv});
    ctx.results["leaves"] = r;
}

// rects -----------------------------------------------------------------------

struct SnOutcome {
    int n = 0;
    bool ok = false;
    SnRectangle sn;
    std::string error;
};

SnOutcome try_build_sn(const ModelSystem& sys, int n) {
    SnOutcome o;
    o.n = n;
    try {
        o.sn = build_sn(sys, n);
        o.ok = true;
    } catch (const Error& e) {
        o.error = e.what();
    }
    return o;
}

void cmd_rects(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    const auto& tol = ctx.cfg.tolerances;
    const auto outs = parallel_map(range_of(ctx.cfg.n_range), [&](int n) { return try_build_sn(sys, n); });
    std::string csv = "n,t_minus,t_plus,t_tilde_minus,t_tilde_plus,rho_n,x_lo,x_hi,y_lo,y_hi,D_n,W_0n,H_0n\n";
    std::vector<std::pair<int, double>> D, W, H;
    ojson rows = ojson::array();
    std::vector<std::string> errors;
    for (const auto& o : outs) {
        if (!o.ok) {
            errors.push_back(fmt::format("n = {}: {}", o.n, o.error));
            continue;
        }
        const auto& s = o.sn;
        csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.n, num(s.t_minus), num(s.t_plus),
                           num(s.t_tilde_minus), num(s.t_tilde_plus), num(s.rho_n), num(s.rect.x_lo), num(s.rect.x_hi),
                           num(s.rect.y_lo), num(s.rect.y_hi), num(s.D_n), num(s.W_0n), num(s.H_0n));
        D.emplace_back(s.n, s.D_n);
        W.emplace_back(s.n, s.W_0n);
        H.emplace_back(s.n, s.H_0n);
        rows.push_back({{"n", s.n}, {"t_plus", s.t_plus}, {"rho_n", s.rho_n}, {"D_n", s.D_n}, {"W_0n", s.W_0n}, {"H_0n", s.H_0n}});
    }
    ojson r;
    r["rows"] = rows;
    r["errors"] = errors;
    ctx.check("all_n_valid", errors.empty(),
              errors.empty() ? "S_n built for every n in n_range" : fmt::format("{}", fmt::join(errors, "; ")));
    const double lambda = sys.lambda();
    auto fit_check = [&](const char* name, const std::vector<std::pair<int, double>>& pairs, double target, double t) {
        try {
            const auto f = scaling_fit(pairs, lambda);
            r["fits"][name] = {{"exponent", f.exponent}, {"r_squared", f.r_squared}, {"target", target}};
            ctx.check(fmt::format("exponent_{}", name), near(f.exponent, target, t),
                      fmt::format("{} exponent {:.4f}, target {} +- {}", name, f.exponent, target, t));
        } catch (const Error& e) {
            ctx.check(fmt::format("exponent_{}", name), false, e.what());
        }
    };
    fit_check("D_n", D, 1.0, tol.exponent_D);
    fit_check("W_0n", W, 1.5, tol.exponent_W);
    fit_check("H_0n", H, 0.5, tol.exponent_H);

    // t_{n,+} / |lambda|^(n/2) against sqrt(-b z0 / (3c)).
    const auto& t = sys.transition;
    const double arg = -t.b * sys.seed.z0() / (3.0 * t.c);
    ojson ratios = ojson::array();
    bool ratio_ok = arg > 0.0;
    std::string ratio_detail = arg > 0.0 ? "" : "-b z0 / (3c) <= 0: no real asymptotic constant";
    const double target = arg > 0.0 ? std::sqrt(arg) : 0.0;
    if (arg > 0.0) {
        double worst = 0.0;
        for (int n = ctx.cfg.ratio_n_range.lo; n <= ctx.cfg.ratio_n_range.hi; ++n) {
            try {
                const auto vp = vertical_params(sys, n);
                const double ratio = vp.t_plus / std::pow(std::fabs(lambda), 0.5 * n);
                ratios.push_back({{"n", n}, {"ratio", ratio}});
                worst = std::max(worst, std::fabs(ratio / target - 1.0));
            } catch (const Error& e) {
                ratio_ok = false;
                ratio_detail = fmt::format("n = {}: {}", n, e.what());
            }
        }
        if (ratio_ok) {
            ratio_ok = worst <= tol.tangent_ratio_rel;
            ratio_detail = fmt::format("max relative deviation {:.3e} from {:.5f}", worst, target);
        }
    }
    r["tangent_ratio_target"] = target;
    r["tangent_ratios"] = ratios;
    ctx.check("tangent_ratio", ratio_ok, ratio_detail);

    if (W.size() >= 2) {
        auto series = [&](const char* name, const std::vector<std::pair<int, double>>& pairs) {
            Series s{name, {}};
            for (const auto& [n, v] : pairs) s.points.emplace_back(std::pow(std::fabs(lambda), n), v);
            return s;
        };
        const std::string svg = emit_svg({series("W_0n", W), series("H_0n", H), series("D_n", D)},
                                         {"S_n metrics against |lambda|^n", "|lambda|^n", "value", true, true});
        ctx.files.push_back({"rects.svg", svg});
    }
    ctx.files.push_back({"rects.csv", csv});
    ctx.results["rects"] = r;
}

// slopes ----------------------------------------------------------------------

void cmd_slopes(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    ojson r;
    const double e = sys.epsilon();
    const Rect re = sys.r_eps();
    const double s52 = std::pow(e, 2.5);
    int total = 0, good = 0;
    double worst_inter = 0.0;
    LogMag worst_ret;
    std::string first_error;
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            const Point p{re.x_lo + re.width() * i / 31.0, re.y_lo + re.height() * j / 31.0};
            for (double s : {0.0, 0.5 * s52, s52}) {
                ++total;
                try {
                    const auto sr = slope_through_return(sys, {p, s, false});
                    worst_inter = std::max(worst_inter, sr.intermediate_worst);
                    if (worst_ret < sr.returned) worst_ret = sr.returned;
                    if (sr.intermediate_ok && sr.returned_ok) ++good;
                } catch (const Error& ex) {
                    if (first_error.empty()) first_error = ex.what();
                }
            }
        }
    }
    r["lemma_I"] = {{"samples", total},
                    {"passed", good},
                    {"max_intermediate", worst_inter},
                    {"intermediate_bound", std::pow(e, -2.5)},
                    {"max_returned", format_logmag(worst_ret)},
                    {"returned_bound", s52}};
    ctx.check("slope_lemma_I", good == total,
              fmt::format("{}/{} grid samples satisfy both bounds{}", good, total,
                          first_error.empty() ? "" : "; first error: " + first_error));

    try {
        r["u0_at_corner"] = u0(sys, {re.x_lo, 0.0});
    } catch (const Error& ex) {
        r["u0_at_corner"] = ex.what();
    }

    std::string rcsv = "n,i_n,mu_i_lambda_n\n";
    std::vector<std::string> errs;
    for (int n = ctx.cfg.n_range.lo; n <= ctx.cfg.n_range.hi; ++n) {
        try {
            const auto sn = build_sn(sys, n);
            const long i = i_n(sys, sn);
            rcsv += fmt::format("{},{},{}\n", n, i, num(std::exp(i * std::log(sys.mu()) + n * std::log(sys.lambda()))));
        } catch (const Error& ex) {
            errs.push_back(fmt::format("n = {}: {}", n, ex.what()));
        }
    }
    ctx.files.push_back({"returns.csv", rcsv});
    ctx.check("i_n", errs.empty(), errs.empty() ? "i_n found with f^i(S_n) in R_eps for every n" : fmt::format("{}", fmt::join(errs, "; ")));

    std::string csv = "n,t,j_n,log10_slope\n";
    try {
        const auto found = find_s_n0(sys, e, ctx.cfg.s_grid);
        r["s"] = found.s;
        r["n0"] = found.n0;
        bool all = found.n0 <= sys.n_max();
        ojson checks = ojson::array();
        for (int n = found.n0; n <= found.n0 + 2; ++n) {
            const auto rep = jn_slope_check(sys, n, found.s);
            all = all && rep.passed && rep.samples.size() >= 200;
            checks.push_back({{"n", n},
                              {"samples", rep.samples.size()},
                              {"max_slope", format_logmag(rep.max_slope)},
                              {"threshold", rep.threshold},
                              {"passed", rep.passed}});
            for (const auto& s : rep.samples)
                csv += fmt::format("{},{},{},{}\n", n, num(s.t), s.j, num(s.slope.log10_abs()));
        }
        r["lemma_II"] = checks;
        ctx.check("slope_lemma_II", all, fmt::format("s = {}, n0 = {} (n_max {})", found.s, found.n0, sys.n_max()));
    } catch (const Error& ex) {
        ctx.check("slope_lemma_II", false, ex.what());
    }
    ctx.files.push_back({"slopes.csv", csv});
    ctx.results["slopes"] = r;
}

// cascade ---------------------------------------------------------------------

void cmd_cascade(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    struct Job {
        double eps;
        int n;
    };
    std::vector<Job> jobs;
    for (double eps : ctx.cfg.eps_grid)
        for (int n = ctx.cfg.cascade_n_range.lo; n <= std::min(ctx.cfg.cascade_n_range.hi, sys.n_max()); ++n)
            jobs.push_back({eps, n});
    struct Out {
        Job job;
        bool ok = false;
        CascadeResult res;
        std::string error;
    };
    const auto outs = parallel_map(jobs, [&](const Job& j) {
        Out o{j, false, {}, {}};
        try {
            o.res = run_cascade(with_epsilon(sys, j.eps), j.n);
            o.ok = true;
        } catch (const Error& e) {
            o.error = e.what();
        }
        return o;
    });
    std::string csv = "epsilon,n,k,x_lo,x_hi,W_k,log10_H_k,log10_L_k,u_k,crossing_arcs,in_R_eps\n";
    ojson runs = ojson::array();
    std::optional<Job> first_pass;
    for (const auto& o : outs) {
        ojson jr{{"epsilon", o.job.eps}, {"n", o.job.n}};
        if (!o.ok) {
            jr["error"] = o.error;
            runs.push_back(jr);
            continue;
        }
        const auto& res = o.res;
        jr["i_n"] = res.i_n;
        jr["k0"] = res.k0;
        jr["end"] = res.end_reason;
        jr["inequalities_hold"] = res.inequalities_hold;
        jr["arcs_ok"] = res.arcs_ok;
        jr["violations"] = res.violations;
        ojson boxes = ojson::array();
        for (const auto& b : res.boxes) {
            boxes.push_back({{"k", b.box.k},
                             {"W", b.metrics.W},
                             {"H", format_logmag(b.metrics.H)},
                             {"L", format_logmag(b.metrics.L)},
                             {"u", b.u},
                             {"crossing_arcs", b.crossing_arcs},
                             {"in_R_eps", b.in_r_eps}});
            csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", num(o.job.eps), o.job.n, b.box.k, num(b.box.x_lo),
                               num(b.box.x_hi), num(b.metrics.W), num(b.metrics.H.log10_abs()),
                               num(b.metrics.L.log10_abs()), b.u, b.crossing_arcs, b.in_r_eps ? 1 : 0);
        }
        jr["boxes"] = boxes;
        runs.push_back(jr);
        if (!first_pass && res.k0 >= 2 && res.inequalities_hold && res.arcs_ok) first_pass = o.job;
    }
    ojson r;
    r["runs"] = runs;
    if (first_pass) {
        r["first_passing"] = {{"epsilon", first_pass->eps}, {"n", first_pass->n}};
        ctx.check("k0_and_inequalities", true,
                  fmt::format("eps = {}, n = {}: k0 >= 2, cascade inequalities and three crossing arcs hold",
                              first_pass->eps, first_pass->n));
    } else {
        ctx.check("k0_and_inequalities", false, "no (eps, n) in the grid gives k0 >= 2 with all inequalities");
    }
    ctx.files.push_back({"cascade.csv", csv});
    ctx.results["cascade"] = r;
}

// classify --------------------------------------------------------------------

ojson adaptability_json(const SignCase& c) {
    const auto a = adaptability(c);
    return {{"label", c.label},
            {"sign_a", c.sign_a},
            {"sign_bc", c.sign_bc},
            {"sign_lambda", c.sign_lambda},
            {"sign_mu", c.sign_mu},
            {"adaptable", a.adaptable},
            {"tangency_exists", a.tangency_exists},
            {"n_parity", to_string(a.n_parity)},
            {"sn_quadrant", to_string(a.sn_quadrant)},
            {"needs_f_image", a.needs_f_image},
            {"region", to_string(a.region)}};
}

void cmd_classify(Context& ctx) {
    ojson r;
    try {
        const auto sc = classify(ctx.cfg.system);
        r = adaptability_json(sc);
        ctx.check("system_adaptable", adaptability(sc).adaptable, sc.label);
    } catch (const Error& e) {
        r["error"] = e.what();
        ctx.check("system_adaptable", false, e.what());
    }
    ojson table = ojson::array();
    std::set<std::string> labels;
    std::set<std::string> adaptable;
    bool roundtrip = true;
    for (const auto& c : all_cases()) {
        table.push_back(adaptability_json(c));
        labels.insert(c.label);
        if (!(case_from_label(c.label) == c)) roundtrip = false;
        if (adaptability(c).adaptable) adaptable.insert(c.label);
    }
    r["table"] = table;
    r["adaptable_count"] = adaptable_count();
    ctx.check("bijection", labels.size() == 16 && roundtrip, fmt::format("{} distinct labels, round trip {}", labels.size(), roundtrip));
    ctx.check("adaptable_count", adaptable_count() == 9, fmt::format("adaptable_count = {}", adaptable_count()));
    const std::set<std::string> expected{"I_{--}", "II_{++}", "II_{+-}", "II_{-+}", "II_{--}",
                                         "III_{-+}", "III_{--}", "IV_{--}", "IV_{+-}"};
    ctx.check("adaptable_set", adaptable == expected, fmt::format("{}", fmt::join(adaptable, ", ")));
    ctx.results["classify"] = r;
}

// moduli ----------------------------------------------------------------------

void cmd_moduli(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    const auto& tol = ctx.cfg.tolerances;
    const auto& nr = ctx.cfg.moduli_n_range;
    ojson r;
    const auto fit = modulus_fit(sys, nr.lo, nr.hi);
    r["rho"] = fit.rho;
    r["stderr"] = fit.stderr_;
    r["target"] = fit.target;
    ctx.check("rho", near(fit.rho, fit.target, tol.rho),
              fmt::format("rho {:.4f} +- {:.4f}, target {:.4f}", fit.rho, fit.stderr_, fit.target));

    std::string csv = "n,pr_x_r_n,m_n,pr_x_x_n,s_n,c_n\n";
    Series ms{"m(n)", {}};
    double worst_cn = 0.0, worst_step = 0.0;
    ojson tail = ojson::array();
    for (std::size_t i = 0; i < fit.records.size(); ++i) {
        const auto& rec = fit.records[i];
        csv += fmt::format("{},{},{},{},{},{}\n", rec.n, num(rec.r_n.x), rec.m_n, num(rec.x_n.x), num(rec.s_n), num(rec.c_n));
        ms.points.emplace_back(rec.n, static_cast<double>(rec.m_n));
        if (rec.n >= ctx.cfg.c_n_from) {
            worst_cn = std::max(worst_cn, std::fabs(rec.c_n - 1.0));
            tail.push_back({{"n", rec.n}, {"c_n", rec.c_n}});
        }
        if (i > 0) worst_step = std::max(worst_step, std::fabs(rec.s_n - fit.records[i - 1].s_n - fit.target));
    }
    r["c_n_tail"] = tail;
    ctx.check("c_n", !tail.empty() && worst_cn <= tol.c_n,
              fmt::format("max |c_n - 1| = {:.3e} for n >= {}", worst_cn, ctx.cfg.c_n_from));
    ctx.check("s_step", worst_step <= tol.s_step, fmt::format("max |s_(n+1) - s_n - target| = {:.3e}", worst_step));

    const auto& jr = ctx.cfg.order_probe_j_range;
    const auto probe = order_probe(sys, jr.lo, jr.hi);
    std::string pcsv = "j,x_j,pr_x,l_j,ratio\n";
    for (const auto& row : probe.rows)
        pcsv += fmt::format("{},{},{},{},{}\n", row.j, num(row.x_j), num(row.pr_x), row.l_j, num(row.ratio));
    r["order_probe"] = {{"slope", probe.slope},
                        {"band", {probe.band_lo, probe.band_hi}},
                        {"band_factor", probe.band_factor},
                        {"extended_band_factor", probe.extended_band_factor},
                        {"band_stable", probe.band_stable}};
    ctx.check("order_probe_slope", near(probe.slope, 3.0, tol.probe_slope), fmt::format("slope {:.5f}", probe.slope));
    ctx.check("order_probe_band", probe.band_factor <= tol.band_factor && probe.band_stable,
              fmt::format("band factor {:.5f}, extended {:.5f}", probe.band_factor, probe.extended_band_factor));

    const auto ee = eigen_estimates(sys, nr.lo, nr.hi);
    r["eigen_estimates"] = {{"lambda", ee.lambda_from_ratio}, {"mu", ee.mu_from_rho}};
    const bool eig_ok = std::fabs(ee.lambda_from_ratio / std::fabs(sys.lambda()) - 1.0) <= tol.eigen_rel &&
                        std::fabs(ee.mu_from_rho / std::fabs(sys.mu()) - 1.0) <= tol.eigen_rel;
    ctx.check("eigen_estimates", eig_ok, fmt::format("lambda {:.8f}, mu {:.8f}", ee.lambda_from_ratio, ee.mu_from_rho));

    ctx.files.push_back({"moduli.csv", csv});
    ctx.files.push_back({"order_probe.csv", pcsv});
    ctx.files.push_back({"moduli.svg", emit_svg({ms}, {"Return exponent m against n", "n", "m", false, false})});
    ctx.results["moduli"] = r;
}

// conjugacy -------------------------------------------------------------------

void cmd_conjugacy(Context& ctx) {
    const auto& sys = ctx.cfg.system;
    const auto& tol = ctx.cfg.tolerances;
    const auto& nr = ctx.cfg.moduli_n_range;
    ojson r;

    std::vector<std::pair<double, double>> synth;
    for (int i = 0; i < 16; ++i) {
        const double x = std::pow(10.0, -2.0 + 3.0 * i / 15.0);
        synth.emplace_back(x, 2.0 * std::pow(x, 0.7));
    }
    const auto ps = power_fit(synth);
    r["synthetic"] = {{"C", ps.C}, {"tau", ps.tau}};
    ctx.check("power_fit_synthetic", near(ps.C, 2.0, tol.power_fit) && near(ps.tau, 0.7, tol.power_fit),
              fmt::format("C {:.9f}, tau {:.9f}", ps.C, ps.tau));

    std::string csv = "pair,x,hx\n";
    const auto idp = identity_pair(sys);
    const auto id_pts = correspondence_points(idp, nr.lo, nr.hi);
    const auto id_fit = power_fit(id_pts);
    for (const auto& [x, hx] : id_pts) csv += fmt::format("identity,{},{}\n", num(x), num(hx));
    r["identity"] = {{"C", id_fit.C}, {"tau", id_fit.tau}};
    ctx.check("identity_fit", near(id_fit.C, 1.0, tol.power_fit) && near(id_fit.tau, 1.0, tol.power_fit),
              fmt::format("C {:.9f}, tau {:.9f}", id_fit.C, id_fit.tau));

    const auto rp = rescale_pair(sys, ctx.cfg.rescale_k);
    const auto rs_pts = correspondence_points(rp, nr.lo, nr.hi);
    const auto rs_fit = power_fit(rs_pts);
    for (const auto& [x, hx] : rs_pts) csv += fmt::format("rescale,{},{}\n", num(x), num(hx));
    double tau_l = 0.0;
    const double c_l = lemma_constant(rp, &tau_l);
    r["rescale"] = {{"k", rp.k},
                    {"m0_shift", rp.m0_shift},
                    {"conjugation_defect", conjugation_defect(rp)},
                    {"C", rs_fit.C},
                    {"tau", rs_fit.tau},
                    {"lemma_C", c_l},
                    {"lemma_tau", tau_l}};
    ctx.check("lemma_constant", std::fabs(rs_fit.C / c_l - 1.0) <= tol.lemma_constant_rel &&
                                    std::fabs(rs_fit.tau / tau_l - 1.0) <= tol.lemma_constant_rel,
              fmt::format("fitted C {:.6f} vs {:.6f}, tau {:.6f} vs {:.6f}", rs_fit.C, c_l, rs_fit.tau, tau_l));

    // Identity pair at every n where S_n exists, rescale pair over its range.
    std::vector<int> id_ns;
    for (int n = nr.lo; n <= nr.hi; ++n)
        if (try_build_sn(sys, n).ok) id_ns.push_back(n);
    const auto id_hits = parallel_map(id_ns, [&](int n) { return intersection_check(idp, n); });
    std::vector<int> id_miss;
    for (std::size_t i = 0; i < id_ns.size(); ++i)
        if (!id_hits[i].intersects) id_miss.push_back(id_ns[i]);
    ctx.check("intersection_identity", !id_ns.empty() && id_miss.empty(),
              fmt::format("{} valid n, misses at [{}]", id_ns.size(), fmt::join(id_miss, ", ")));
    const auto rs_ns = range_of(ctx.cfg.intersection_n_range);
    std::vector<int> rs_miss;
    const auto rs_hits = parallel_map(rs_ns, [&](int n) {
        try {
            return intersection_check(rp, n);
        } catch (const Error& e) {
            return IntersectionResult{false, 0.0, e.what()};
        }
    });
    ojson rs_json = ojson::array();
    for (std::size_t i = 0; i < rs_ns.size(); ++i) {
        rs_json.push_back({{"n", rs_ns[i]}, {"intersects", rs_hits[i].intersects}, {"diagnostic", rs_hits[i].diagnostic}});
        if (!rs_hits[i].intersects) rs_miss.push_back(rs_ns[i]);
    }
    r["intersection_rescale"] = rs_json;
    ctx.check("intersection_rescale", rs_miss.empty(), fmt::format("misses at [{}]", fmt::join(rs_miss, ", ")));

    // A pair with different lambda and h = id is reported, never asserted.
    ConjugacyPair bad = idp;
    bad.sys1.saddle.lambda = sys.lambda() * 0.8;
    bad.name = "mismatched";
    ojson diag = ojson::array();
    for (int n = ctx.cfg.intersection_n_range.lo; n <= ctx.cfg.intersection_n_range.hi; ++n) {
        try {
            const auto res = intersection_check(bad, n);
            diag.push_back({{"n", n}, {"intersects", res.intersects}, {"diagnostic", res.diagnostic}});
        } catch (const Error& e) {
            diag.push_back({{"n", n}, {"error", e.what()}});
        }
    }
    r["intersection_mismatched_diagnostic"] = diag;

    const auto f0 = modulus_fit(rp.sys0, nr.lo, nr.hi);
    const auto f1 = modulus_fit(rp.sys1, nr.lo, nr.hi);
    r["rho_pair"] = {f0.rho, f1.rho};
    ctx.check("modulus_pair", std::fabs(f1.rho / f0.rho - 1.0) <= tol.pair_rel,
              fmt::format("rho {:.6f} vs {:.6f}", f0.rho, f1.rho));
    const auto e0 = eigen_estimates(rp.sys0, nr.lo, nr.hi);
    const auto e1 = eigen_estimates(rp.sys1, nr.lo, nr.hi);
    r["eigen_pair"] = {{"lambda", {e0.lambda_from_ratio, e1.lambda_from_ratio}}, {"mu", {e0.mu_from_rho, e1.mu_from_rho}}};
    ctx.check("eigen_pair",
              std::fabs(e1.lambda_from_ratio / e0.lambda_from_ratio - 1.0) <= tol.eigen_rel &&
                  std::fabs(e1.mu_from_rho / e0.mu_from_rho - 1.0) <= tol.eigen_rel,
              fmt::format("lambda {:.8f}/{:.8f}, mu {:.8f}/{:.8f}", e0.lambda_from_ratio, e1.lambda_from_ratio,
                          e0.mu_from_rho, e1.mu_from_rho));
    ctx.files.push_back({"conjugacy.csv", csv});
    ctx.results["conjugacy"] = r;
}

using CommandFn = void (*)(Context&);

const std::vector<std::pair<std::string, CommandFn>>& command_table() {
    static const std::vector<std::pair<std::string, CommandFn>> table{
        {"validate", cmd_validate}, {"leaves", cmd_leaves},     {"rects", cmd_rects},   {"slopes", cmd_slopes},
        {"cascade", cmd_cascade},   {"classify", cmd_classify}, {"moduli", cmd_moduli}, {"conjugacy", cmd_conjugacy},
    };
    return table;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& command) {
    std::vector<std::string> selected;
    if (command == "all") {
        for (const auto& [name, fn] : command_table())
            if (cfg.commands.empty() || std::find(cfg.commands.begin(), cfg.commands.end(), name) != cfg.commands.end())
                selected.push_back(name);
    } else {
        const auto& t = command_table();
        if (std::none_of(t.begin(), t.end(), [&](const auto& e) { return e.first == command; }))
            fail(ErrorCode::Domain, fmt::format("unknown command '{}'", command));
        selected.push_back(command);
    }
    Context ctx{cfg, ojson::object(), {}, {}, {}};
    for (const auto& name : selected) {
        ctx.command = name;
        const auto fn = std::find_if(command_table().begin(), command_table().end(),
                                     [&](const auto& e) { return e.first == name; })->second;
        try {
            fn(ctx);
        } catch (const Error& e) {
            ctx.results[name]["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
            ctx.check("completed", false, fmt::format("{}: {}", to_string(e.code()), e.what()));
        }
    }
    ojson report;
    report["tool"] = "tangency-lab";
    report["version"] = TANGENCY_VERSION;
    report["config_sha256"] = cfg.sha256;
    report["command"] = command;
    report["seed"] = cfg.seed;
    report["results"] = ctx.results;
    ojson asserts = ojson::array();
    std::vector<std::string> failed;
    for (const auto& a : ctx.assertions) {
        asserts.push_back({{"id", a.id}, {"passed", a.passed}, {"detail", a.detail}});
        if (!a.passed) failed.push_back(a.id);
    }
    report["assertions"] = asserts;
    report["failed"] = failed;
    report["passed"] = failed.empty();

    RunResult out;
    out.exit_status = failed.empty() ? 0 : 1;
    out.assertions = std::move(ctx.assertions);
    out.files = std::move(ctx.files);
    out.report_json = report.dump(2) + "\n";
    out.files.push_back({"report.json", out.report_json});
    return out;
}

void write_outputs(const RunResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
    for (const auto& f : result.files) {
        const fs::path p = fs::path(dir) / f.name;
        std::ofstream os(p, std::ios::binary);
        os << f.content;
        if (!os) fail(ErrorCode::Io, fmt::format("cannot write '{}'", p.string()));
    }
}

RunResult run_from_text(const std::string& config_text, const std::string& command,
                        const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed) {
    RunResult out;
    try {
        ExperimentConfig cfg = parse_config(config_text);
        if (seed) cfg.seed = *seed;
        const auto& known = known_commands();
        if (std::find(known.begin(), known.end(), command) == known.end())
            fail(ErrorCode::Config, fmt::format("unknown command '{}'", command));
        out = run_experiment(cfg, command);
        write_outputs(out, out_dir ? *out_dir : cfg.output_dir);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Config && e.code() != ErrorCode::Io) throw;
        ojson report{{"tool", "tangency-lab"},
                     {"version", TANGENCY_VERSION},
                     {"error", {{"code", to_string(e.code())}, {"message", e.what()}}},
                     {"passed", false}};
        out = RunResult{};
        out.exit_status = 2;
        out.report_json = report.dump(2) + "\n";
    }
    return out;
}

}  // namespace tangency
