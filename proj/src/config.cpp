#include "tangency/config.hpp"

#include "tangency/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include "json.hpp"
#include <openssl/evp.h>

namespace tangency {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::Config, msg); }

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) config_error(fmt::format("{} must be an object", where));
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (ok.count(key) == 0) config_error(fmt::format("unknown key '{}' in {}", key, where));
}

double get_number(const json& j, const std::string& key, const std::string& where, double fallback, bool required) {
    if (!j.contains(key)) {
        if (required) config_error(fmt::format("missing key '{}' in {}", key, where));
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number()) config_error(fmt::format("{}.{} must be a number", where, key));
    const double d = v.get<double>();
    if (!std::isfinite(d)) config_error(fmt::format("{}.{} must be finite", where, key));
    return d;
}

int get_int(const json& j, const std::string& key, const std::string& where, int fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required) config_error(fmt::format("missing key '{}' in {}", key, where));
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer()) config_error(fmt::format("{}.{} must be an integer", where, key));
    return v.get<int>();
}

IntRange get_range(const json& j, const std::string& key, IntRange fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        config_error(fmt::format("{} must be a pair of integers [lo, hi]", key));
    IntRange r{v[0].get<int>(), v[1].get<int>()};
    if (r.lo > r.hi) config_error(fmt::format("{} has lo > hi", key));
    return r;
}

std::vector<double> get_positive_list(const json& j, const std::string& key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.empty()) config_error(fmt::format("{} must be a non-empty array", key));
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number() || !(e.get<double>() > 0.0)) config_error(fmt::format("{} entries must be positive numbers", key));
        out.push_back(e.get<double>());
    }
    return out;
}

JetRemainder parse_terms(const json& j, const std::string& key) {
    JetRemainder r;
    if (!j.contains(key)) return r;
    const auto& v = j.at(key);
    if (!v.is_array()) config_error(fmt::format("system.{} must be an array of [i, j, coef]", key));
    for (const auto& t : v) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() || !t[2].is_number())
            config_error(fmt::format("system.{} entries must be [i, j, coef]", key));
        const int i = t[0].get<int>(), jj = t[1].get<int>();
        if (i < 0 || jj < 0) config_error(fmt::format("system.{} exponents must be non-negative", key));
        r.terms.push_back({i, jj, t[2].get<double>()});
    }
    return r;
}

ModelSystem parse_system(const json& s) {
    reject_unknown(s, "system",
                   {"lambda", "mu", "a", "b", "c", "d", "e", "m0", "h1_terms", "h2_terms", "seed", "z0", "charts"});
    ModelSystem sys;
    const std::string w = "system";
    sys.saddle.lambda = get_number(s, "lambda", w, 0, true);
    sys.saddle.mu = get_number(s, "mu", w, 0, true);
    auto& t = sys.transition;
    t.a = get_number(s, "a", w, 0, true);
    t.b = get_number(s, "b", w, 0, true);
    t.c = get_number(s, "c", w, 0, true);
    t.d = get_number(s, "d", w, 0, true);
    t.e = get_number(s, "e", w, 0.0, false);
    t.m0 = get_int(s, "m0", w, 1);
    t.h1 = parse_terms(s, "h1_terms");
    t.h2 = parse_terms(s, "h2_terms");
    if (s.contains("charts")) {
        const auto& c = s.at("charts");
        reject_unknown(c, "system.charts", {"uq_half_width", "ur_half_width", "tau_grid", "chart_half_width"});
        sys.charts.uq_half_width = get_number(c, "uq_half_width", "system.charts", 0.3, false);
        sys.charts.ur_half_width = get_number(c, "ur_half_width", "system.charts", 0.3, false);
        sys.charts.tau_grid = get_int(c, "tau_grid", "system.charts", 256);
        sys.saddle.chart_half_width = get_number(c, "chart_half_width", "system.charts", 2.0, false);
        if (!(sys.charts.uq_half_width > 0) || !(sys.charts.ur_half_width > 0) || sys.charts.tau_grid < 2 ||
            !(sys.saddle.chart_half_width > 0))
            config_error("system.charts sizes must be positive and tau_grid >= 2");
    }
    std::vector<double> coef{0.5};
    double dlo = -2.0, dhi = 2.0;
    if (s.contains("seed")) {
        const auto& sd = s.at("seed");
        reject_unknown(sd, "system.seed", {"coefficients", "domain"});
        if (sd.contains("coefficients")) {
            const auto& c = sd.at("coefficients");
            if (!c.is_array() || c.empty()) config_error("system.seed.coefficients must be a non-empty array");
            coef.clear();
            for (const auto& v : c) {
                if (!v.is_number()) config_error("system.seed.coefficients must be numbers");
                coef.push_back(v.get<double>());
            }
        }
        if (sd.contains("domain")) {
            const auto& d = sd.at("domain");
            if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
                config_error("system.seed.domain must be [lo, hi]");
            dlo = d[0].get<double>();
            dhi = d[1].get<double>();
            if (dlo < -2.0 || dhi > 2.0) config_error("system.seed.domain must lie in [-2, 2]");
        }
    }
    try {
        sys.seed = SeedArc(coef, dlo, dhi);
    } catch (const Error& e) {
        config_error(fmt::format("system.seed: {}", e.what()));
    }
    if (s.contains("z0")) {
        const double z0 = get_number(s, "z0", w, 0, true);
        if (std::fabs(z0 - sys.seed.z0()) > 1e-12 * std::max(1.0, std::fabs(z0)))
            config_error(fmt::format("system.z0 = {} disagrees with the seed value y0(0) = {}", z0, sys.seed.z0()));
    }
    return sys;
}

}  // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds{"validate", "leaves",  "rects",     "slopes", "cascade",
                                               "classify", "moduli",  "conjugacy", "all"};
    return cmds;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorCode::Io, "SHA-256 computation failed");
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(fmt::format("config is not valid JSON: {}", e.what()));
    }
    reject_unknown(j, "config",
                   {"system", "n_range", "ratio_n_range", "moduli_n_range", "cascade_n_range", "intersection_n_range",
                    "order_probe_j_range", "c_n_from", "rescale_k", "eps_grid", "s_grid", "tolerances", "output_dir",
                    "commands", "seed"});
    ExperimentConfig cfg;
    cfg.sha256 = sha256_hex(text);
    if (!j.contains("system")) config_error("missing key 'system'");
    cfg.system = parse_system(j.at("system"));
    cfg.n_range = get_range(j, "n_range", cfg.n_range);
    cfg.ratio_n_range = get_range(j, "ratio_n_range", cfg.ratio_n_range);
    cfg.moduli_n_range = get_range(j, "moduli_n_range", cfg.moduli_n_range);
    cfg.cascade_n_range = get_range(j, "cascade_n_range", cfg.cascade_n_range);
    cfg.intersection_n_range = get_range(j, "intersection_n_range", cfg.intersection_n_range);
    cfg.order_probe_j_range = get_range(j, "order_probe_j_range", cfg.order_probe_j_range);
    cfg.c_n_from = get_int(j, "c_n_from", "config", cfg.c_n_from);
    cfg.rescale_k = get_int(j, "rescale_k", "config", static_cast<int>(cfg.rescale_k));
    if (cfg.rescale_k < 0) config_error("rescale_k must be non-negative");
    if (cfg.n_range.lo < 0 || cfg.moduli_n_range.lo < 0 || cfg.cascade_n_range.lo < 0 || cfg.ratio_n_range.lo < 0 ||
        cfg.intersection_n_range.lo < 0 || cfg.order_probe_j_range.lo < 0)
        config_error("ranges must be non-negative");
    cfg.eps_grid = get_positive_list(j, "eps_grid", cfg.eps_grid);
    cfg.s_grid = get_positive_list(j, "s_grid", cfg.s_grid);
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        reject_unknown(t, "tolerances",
                       {"order", "order_coefficient", "tangent_ratio_rel", "exponent_D", "exponent_W", "exponent_H",
                        "rho", "pair_rel", "c_n", "s_step", "power_fit", "lemma_constant_rel", "probe_slope",
                        "band_factor", "eigen_rel", "jacobian_fd_rel"});
        auto& tol = cfg.tolerances;
        const std::pair<const char*, double*> fields[] = {
            {"order", &tol.order},
            {"order_coefficient", &tol.order_coefficient},
            {"tangent_ratio_rel", &tol.tangent_ratio_rel},
            {"exponent_D", &tol.exponent_D},
            {"exponent_W", &tol.exponent_W},
            {"exponent_H", &tol.exponent_H},
            {"rho", &tol.rho},
            {"pair_rel", &tol.pair_rel},
            {"c_n", &tol.c_n},
            {"s_step", &tol.s_step},
            {"power_fit", &tol.power_fit},
            {"lemma_constant_rel", &tol.lemma_constant_rel},
            {"probe_slope", &tol.probe_slope},
            {"band_factor", &tol.band_factor},
            {"eigen_rel", &tol.eigen_rel},
            {"jacobian_fd_rel", &tol.jacobian_fd_rel},
        };
        for (const auto& [name, ptr] : fields) {
            *ptr = get_number(t, name, "tolerances", *ptr, false);
            if (!(*ptr > 0.0)) config_error(fmt::format("tolerances.{} must be > 0", name));
        }
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) config_error("output_dir must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("commands")) {
        const auto& c = j.at("commands");
        if (!c.is_array()) config_error("commands must be an array of strings");
        for (const auto& v : c) {
            if (!v.is_string()) config_error("commands must be an array of strings");
            const auto name = v.get<std::string>();
            const auto& known = known_commands();
            if (std::find(known.begin(), known.end(), name) == known.end())
                config_error(fmt::format("unknown command '{}' in commands", name));
            cfg.commands.push_back(name);
        }
    }
    if (j.contains("seed")) {
        const auto& v = j.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            config_error("seed must be a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    return cfg;
}

}  // namespace tangency
