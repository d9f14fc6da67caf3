#ifndef SZEGO_C_H
#define SZEGO_C_H

/* C interface to the szego core library. All entry points return a status
 * code; on failure szg_last_error() carries a message for the calling thread.
 * Strings handed out through char** are heap-allocated; release them with
 * szg_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SZG_OK = 0,
  SZG_ERR_ARGUMENT = 2,  /* precondition violated */
  SZG_ERR_NUMERICAL = 3, /* numerical failure (conditioning, guards, divergence) */
  SZG_ERR_PARSE = 4      /* malformed spec/config */
} szg_status;

typedef struct szg_domain szg_domain;

const char* szg_version(void);
const char* szg_last_error(void);
void szg_string_free(char* s);

/* Worker-pool width for parallel commands; <= 0 restores the default
 * (SZEGO_THREADS env var, then hardware concurrency). */
void szg_set_threads(int n);

/* ---- domain handles ------------------------------------------------------ */

/* spec: "ball:n=2", "annulus:r=0.5", "fefferman:n=...,rho=...,phi=...,psi=..."
 * or a JSON object with the same fields. */
szg_status szg_domain_create(const char* spec, szg_domain** out);
void szg_domain_destroy(szg_domain* d);
int szg_domain_dim(const szg_domain* d);

/* ---- direct evaluation (arrays are interleaved re,im of length 2n) ------- */

szg_status szg_kernel_diagonal(const szg_domain* d, const double* z, double tol,
                               double* value_re, double* value_im, double* tail_bound,
                               int* terms_used);

/* g_out: row-major n*n interleaved re,im (length 2*n*n). */
szg_status szg_metric(const szg_domain* d, const double* z, double* g_out);

/* z/v in, z/v out after time T at the given tolerance. */
szg_status szg_geodesic_endpoint(const szg_domain* d, const double* z, const double* v,
                                 double T, double tol, double* z_out, double* v_out);

/* ---- command layer: resolved-config JSON in, report strings out ---------- */
/* Every report embeds the config and library version. Output pointers may be
 * NULL when the corresponding artifact is not wanted. */

szg_status szg_cmd_kernel(const char* config_json, char** report_json);
szg_status szg_cmd_metric(const char* config_json, char** report_json, char** table_csv);
szg_status szg_cmd_geodesic(const char* config_json, char** report_json, char** trace_csv,
                            char** plot_svg);
szg_status szg_cmd_loop_shorten(const char* config_json, char** report_json, char** plot_svg);
szg_status szg_cmd_repulsion_scan(const char* config_json, char** report_json);
szg_status szg_cmd_rate_fit(const char* config_json, char** report_json);
szg_status szg_cmd_classify(const char* config_json, char** report_json, char** plot_svg);
szg_status szg_cmd_selftest(char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* SZEGO_C_H */
