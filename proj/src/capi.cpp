#include "tangency/tangency.h"

#include "tangency/cases.hpp"
#include "tangency/config.hpp"
#include "tangency/error.hpp"
#include "tangency/moduli.hpp"
#include "tangency/rects.hpp"
#include "tangency/runner.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

struct tl_system {
    tangency::ModelSystem sys;
};

namespace {

thread_local std::string last_error;

tl_status map_code(tangency::ErrorCode c) {
    using tangency::ErrorCode;
    switch (c) {
        case ErrorCode::Domain: return TL_ERR_DOMAIN;
        case ErrorCode::Numeric: return TL_ERR_NUMERIC;
        case ErrorCode::NoVerticalTangency: return TL_ERR_NO_VERTICAL_TANGENCY;
        case ErrorCode::WindowExceeded: return TL_ERR_WINDOW_EXCEEDED;
        case ErrorCode::SmallExpandingViolation: return TL_ERR_SMALL_EXPANDING;
        case ErrorCode::WrongQuadrant: return TL_ERR_WRONG_QUADRANT;
        case ErrorCode::ChartExit: return TL_ERR_CHART_EXIT;
        case ErrorCode::NotFound: return TL_ERR_NOT_FOUND;
        case ErrorCode::Inconclusive: return TL_ERR_INCONCLUSIVE;
        case ErrorCode::Config: return TL_ERR_CONFIG;
        case ErrorCode::Io: return TL_ERR_IO;
    }
    return TL_ERR_INTERNAL;
}

template <typename F>
tl_status guarded(F&& f) {
    last_error.clear();
    try {
        f();
        return TL_OK;
    } catch (const tangency::Error& e) {
        last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TL_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TL_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return TL_ERR_INTERNAL;
    }
}

tl_status invalid(const char* what) {
    last_error = what;
    return TL_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

extern "C" {

const char* tl_version(void) { return TANGENCY_VERSION; }

const char* tl_status_string(tl_status status) {
    switch (status) {
        case TL_OK: return "ok";
        case TL_ERR_INVALID_ARGUMENT: return "invalid argument";
        case TL_ERR_DOMAIN: return "domain error";
        case TL_ERR_NUMERIC: return "numeric error";
        case TL_ERR_NO_VERTICAL_TANGENCY: return "no vertical tangency";
        case TL_ERR_WINDOW_EXCEEDED: return "window exceeded";
        case TL_ERR_SMALL_EXPANDING: return "small expanding condition violated";
        case TL_ERR_WRONG_QUADRANT: return "wrong quadrant";
        case TL_ERR_CHART_EXIT: return "chart exit";
        case TL_ERR_NOT_FOUND: return "not found";
        case TL_ERR_INCONCLUSIVE: return "inconclusive";
        case TL_ERR_CONFIG: return "config error";
        case TL_ERR_IO: return "io error";
        case TL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* tl_last_error(void) { return last_error.c_str(); }

tl_status tl_system_create_ref1(tl_system** out) {
    if (out == nullptr) return invalid("out is null");
    *out = nullptr;
    return guarded([&] { *out = new tl_system{tangency::reference_system()}; });
}

tl_status tl_system_create_from_json(const char* config_json, tl_system** out) {
    if (config_json == nullptr || out == nullptr) return invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new tl_system{tangency::parse_config(config_json).system}; });
}

void tl_system_destroy(tl_system* sys) { delete sys; }

tl_status tl_system_epsilon(const tl_system* sys, double* out) {
    if (sys == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = sys->sys.epsilon(); });
}

tl_status tl_system_n_max(const tl_system* sys, int* out) {
    if (sys == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = sys->sys.n_max(); });
}

tl_status tl_validate(const tl_system* sys, int* all_passed) {
    if (sys == nullptr || all_passed == nullptr) return invalid("null argument");
    return guarded([&] { *all_passed = tangency::validate(sys->sys).all_passed() ? 1 : 0; });
}

tl_status tl_apply_linear(const tl_system* sys, double x, double y, long k, double* out_x, double* out_y) {
    if (sys == nullptr || out_x == nullptr || out_y == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto p = tangency::apply_linear(sys->sys, {x, y}, k);
        *out_x = p.x;
        *out_y = p.y;
    });
}

tl_status tl_apply_phi(const tl_system* sys, double x, double y, double* out_x, double* out_y) {
    if (sys == nullptr || out_x == nullptr || out_y == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto p = tangency::apply_phi(sys->sys, {x, y});
        *out_x = p.x;
        *out_y = p.y;
    });
}

tl_status tl_jacobian_phi(const tl_system* sys, double x, double y, double out[4]) {
    if (sys == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto j = tangency::jacobian_phi(sys->sys, {x, y});
        out[0] = j.a11;
        out[1] = j.a12;
        out[2] = j.a21;
        out[3] = j.a22;
    });
}

tl_status tl_build_sn(const tl_system* sys, int n, tl_sn* out) {
    if (sys == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto s = tangency::build_sn(sys->sys, n);
        *out = tl_sn{s.n,          s.t_minus,    s.t_plus,     s.t_tilde_minus, s.t_tilde_plus,
                     s.rho_n,      s.rect.x_lo,  s.rect.x_hi,  s.rect.y_lo,     s.rect.y_hi,
                     s.D_n,        s.W_0n,       s.H_0n};
    });
}

tl_status tl_classify(const tl_system* sys, tl_case_info* out) {
    if (sys == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto c = tangency::classify(sys->sys);
        const auto a = tangency::adaptability(c);
        std::memset(out, 0, sizeof *out);
        std::strncpy(out->label, c.label.c_str(), sizeof out->label - 1);
        out->adaptable = a.adaptable;
        out->tangency_exists = a.tangency_exists;
        out->needs_f_image = a.needs_f_image;
        out->n_parity = a.n_parity == tangency::Parity::All ? 0 : a.n_parity == tangency::Parity::Even ? 1 : 2;
        out->sn_quadrant = a.sn_quadrant == tangency::Quadrant::Q1 ? 1 : a.sn_quadrant == tangency::Quadrant::Q2 ? 2 : 0;
        out->region = a.region == tangency::Region::REps ? 0 : 1;
    });
}

int tl_adaptable_count(void) { return tangency::adaptable_count(); }

tl_status tl_modulus_fit(const tl_system* sys, int n_lo, int n_hi, tl_modulus* out) {
    if (sys == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto f = tangency::modulus_fit(sys->sys, n_lo, n_hi);
        *out = tl_modulus{f.rho, f.stderr_, f.target};
    });
}

tl_status tl_run_command(const char* config_json, const char* command, const char* out_dir, const uint64_t* seed,
                         int* exit_status, char** report_json) {
    if (config_json == nullptr || command == nullptr || exit_status == nullptr) return invalid("null argument");
    if (report_json != nullptr) *report_json = nullptr;
    return guarded([&] {
        std::optional<std::string> dir;
        if (out_dir != nullptr) dir = out_dir;
        std::optional<std::uint64_t> s;
        if (seed != nullptr) s = *seed;
        const auto r = tangency::run_from_text(config_json, command, dir, s);
        *exit_status = r.exit_status;
        if (report_json != nullptr) *report_json = dup_string(r.report_json);
    });
}

void tl_string_free(char* s) { std::free(s); }

}  // extern "C"
