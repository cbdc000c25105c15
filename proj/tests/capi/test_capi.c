#include "tangency/tangency.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                         \
    do {                                                                     \
        if (!(cond)) {                                                       \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                      \
        }                                                                    \
    } while (0)

static char* read_file(const char* path) {
    FILE* f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char* buf = malloc((size_t)n + 1);
    if (buf && fread(buf, 1, (size_t)n, f) != (size_t)n) {
        free(buf);
        buf = NULL;
    }
    if (buf) buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char** argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: test_capi <config.json>\n");
        return 2;
    }
    EXPECT(strlen(tl_version()) > 0);
    EXPECT(strcmp(tl_status_string(TL_OK), "ok") == 0);

    tl_system* sys = NULL;
    EXPECT(tl_system_create_ref1(&sys) == TL_OK);

    double eps = 0.0;
    int n_max = 0, ok = 0;
    EXPECT(tl_system_epsilon(sys, &eps) == TL_OK && fabs(eps - 0.02) < 1e-12);
    EXPECT(tl_system_n_max(sys, &n_max) == TL_OK && n_max == 22);
    EXPECT(tl_validate(sys, &ok) == TL_OK && ok == 1);

    double x = 0.0, y = 0.0;
    EXPECT(tl_apply_linear(sys, 1.0, 1.0, 2, &x, &y) == TL_OK);
    EXPECT(fabs(x - 1.0404) < 1e-12 && fabs(y - 0.09) < 1e-12);
    EXPECT(tl_apply_phi(sys, 1.1, 0.2, &x, &y) == TL_OK);
    EXPECT(fabs(x - 0.181) < 1e-12 && fabs(y - 0.9) < 1e-12);
    EXPECT(tl_apply_phi(sys, 2.0, 0.0, &x, &y) == TL_ERR_DOMAIN);
    EXPECT(strlen(tl_last_error()) > 0);

    double jac[4];
    EXPECT(tl_jacobian_phi(sys, 1.0, 0.0, jac) == TL_OK);
    EXPECT(fabs(jac[1] - 1.0) < 1e-12 && fabs(jac[2] + 1.0) < 1e-12);

    tl_sn sn;
    EXPECT(tl_build_sn(sys, 10, &sn) == TL_OK);
    EXPECT(sn.n == 10 && fabs(sn.rho_n - 0.408248) < 1e-5);
    EXPECT(tl_build_sn(sys, 2, &sn) == TL_ERR_WINDOW_EXCEEDED);

    tl_case_info info;
    EXPECT(tl_classify(sys, &info) == TL_OK);
    EXPECT(strcmp(info.label, "II_{++}") == 0 && info.adaptable == 1 && info.sn_quadrant == 1);
    EXPECT(tl_adaptable_count() == 9);

    tl_modulus m;
    EXPECT(tl_modulus_fit(sys, 5, 20, &m) == TL_OK && fabs(m.rho - 60.8) < 0.3);
    EXPECT(tl_modulus_fit(NULL, 5, 20, &m) == TL_ERR_INVALID_ARGUMENT);
    tl_system_destroy(sys);

    char* text = read_file(argv[1]);
    EXPECT(text != NULL);
    if (text) {
        tl_system* from_json = NULL;
        EXPECT(tl_system_create_from_json(text, &from_json) == TL_OK);
        tl_system_destroy(from_json);

        int exit_status = -1;
        char* report = NULL;
        const uint64_t seed = 42;
        EXPECT(tl_run_command(text, "classify", "capi_out", &seed, &exit_status, &report) == TL_OK);
        EXPECT(exit_status == 0);
        EXPECT(report != NULL && strstr(report, "\"seed\": 42") != NULL);
        tl_string_free(report);

        EXPECT(tl_run_command("{\"nope\": true}", "classify", NULL, NULL, &exit_status, &report) == TL_OK);
        EXPECT(exit_status == 2);
        tl_string_free(report);
        free(text);
    }
    tl_system* bad = NULL;
    EXPECT(tl_system_create_from_json("[1, 2]", &bad) == TL_ERR_CONFIG && bad == NULL);

    if (failures == 0) printf("capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
