#ifndef TANGENCY_TANGENCY_H
#define TANGENCY_TANGENCY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TANGENCY_BUILDING)
#    define TL_API __declspec(dllexport)
#  else
#    define TL_API __declspec(dllimport)
#  endif
#else
#  define TL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
    TL_OK = 0,
    TL_ERR_INVALID_ARGUMENT = 1,
    TL_ERR_DOMAIN = 2,
    TL_ERR_NUMERIC = 3,
    TL_ERR_NO_VERTICAL_TANGENCY = 4,
    TL_ERR_WINDOW_EXCEEDED = 5,
    TL_ERR_SMALL_EXPANDING = 6,
    TL_ERR_WRONG_QUADRANT = 7,
    TL_ERR_CHART_EXIT = 8,
    TL_ERR_NOT_FOUND = 9,
    TL_ERR_INCONCLUSIVE = 10,
    TL_ERR_CONFIG = 11,
    TL_ERR_IO = 12,
    TL_ERR_INTERNAL = 13
} tl_status;

/* Opaque model system handle. */
typedef struct tl_system tl_system;

typedef struct tl_sn {
    int n;
    double t_minus, t_plus;
    double t_tilde_minus, t_tilde_plus;
    double rho_n;
    double x_lo, x_hi, y_lo, y_hi;
    double D_n, W_0n, H_0n;
} tl_sn;

typedef struct tl_case_info {
    char label[16];
    int adaptable;
    int tangency_exists;
    int needs_f_image;
    /* 0 any, 1 even, 2 odd */
    int n_parity;
    /* 1 or 2, 0 when undefined */
    int sn_quadrant;
    /* 0 R_eps, 1 R_eps_minus */
    int region;
} tl_case_info;

typedef struct tl_modulus {
    double rho;
    double stderr_rho;
    double target;
} tl_modulus;

TL_API const char* tl_version(void);
TL_API const char* tl_status_string(tl_status status);
/* Message of the last failure on the calling thread; empty if none. */
TL_API const char* tl_last_error(void);

TL_API tl_status tl_system_create_ref1(tl_system** out);
/* Accepts a full experiment config document and keeps its system block. */
TL_API tl_status tl_system_create_from_json(const char* config_json, tl_system** out);
TL_API void tl_system_destroy(tl_system* sys);

TL_API tl_status tl_system_epsilon(const tl_system* sys, double* out);
TL_API tl_status tl_system_n_max(const tl_system* sys, int* out);
/* 1 if every standing condition holds, else 0. */
TL_API tl_status tl_validate(const tl_system* sys, int* all_passed);

TL_API tl_status tl_apply_linear(const tl_system* sys, double x, double y, long k, double* out_x, double* out_y);
TL_API tl_status tl_apply_phi(const tl_system* sys, double x, double y, double* out_x, double* out_y);
/* Row-major 2x2. */
TL_API tl_status tl_jacobian_phi(const tl_system* sys, double x, double y, double out[4]);

TL_API tl_status tl_build_sn(const tl_system* sys, int n, tl_sn* out);
TL_API tl_status tl_classify(const tl_system* sys, tl_case_info* out);
TL_API int tl_adaptable_count(void);
TL_API tl_status tl_modulus_fit(const tl_system* sys, int n_lo, int n_hi, tl_modulus* out);

/* Runs a CLI command on a config document. out_dir and seed may be NULL.
 * exit_status receives 0, 1 or 2. report_json, when non-NULL, receives a
 * string to release with tl_string_free. */
TL_API tl_status tl_run_command(const char* config_json, const char* command, const char* out_dir,
                                const uint64_t* seed, int* exit_status, char** report_json);
TL_API void tl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
