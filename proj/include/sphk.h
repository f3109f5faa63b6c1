#ifndef SPHK_H
#define SPHK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPHK_BUILDING)
#    define SPHK_API __declspec(dllexport)
#  else
#    define SPHK_API __declspec(dllimport)
#  endif
#else
#  define SPHK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sphk_status {
    SPHK_OK = 0,
    SPHK_ERR_DOMAIN = 1,
    SPHK_ERR_POLE = 2,
    SPHK_ERR_NONCONVERGENCE = 3,
    SPHK_ERR_BRANCH = 4,
    SPHK_ERR_PARSE = 5,
    SPHK_ERR_DIMENSION = 6,
    SPHK_ERR_UNKNOWN_NAME = 7,
    SPHK_ERR_RULE_TOO_COARSE = 8,
    SPHK_ERR_NOT_A_DESIGN = 9,
    SPHK_ERR_POSITIVITY = 10,
    SPHK_ERR_PRECONDITION = 11,
    SPHK_ERR_IO = 12,
    SPHK_ERR_INTERNAL = 13
} sphk_status;

typedef enum sphk_branch {
    SPHK_BRANCH_INTEGER = 0,
    SPHK_BRANCH_HALF_EXCEPTIONAL = 1,
    SPHK_BRANCH_GENERAL = 2
} sphk_branch;

/* Opaque handles. */
typedef struct sphk_pointset sphk_pointset;
typedef struct sphk_kernel sphk_kernel;
typedef struct sphk_expansion sphk_expansion;
typedef struct sphk_rule sphk_rule;

typedef struct sphk_series_control {
    double rel_tol;
    double abs_tol;
    long max_terms;
    int tail_window;
} sphk_series_control;

/* wce_kernel and wce_quadrature hold the worst-case error itself, not its square. */
typedef struct sphk_report {
    size_t n_points;
    int d;
    double beta;
    double wce_kernel;
    int has_quadrature;
    double wce_quadrature;
    double gram_mean;
    double kernel_mean;
    double identity_gap;
} sphk_report;

typedef struct sphk_identity {
    double lhs;
    double rhs;
    double gap;
    int exact_path;
    int has_classical;
    double classical_lhs;
    double classical_rhs;
} sphk_identity;

typedef struct sphk_mc_estimate {
    double mean;
    double std_error;
    long n_samples;
    uint64_t seed;
} sphk_mc_estimate;

typedef struct sphk_kdf_params {
    const double* upper_joint; size_t n_upper_joint;
    const double* lower_joint; size_t n_lower_joint;
    const double* upper_x; size_t n_upper_x;
    const double* lower_x; size_t n_lower_x;
    const double* upper_y; size_t n_upper_y;
    const double* lower_y; size_t n_lower_y;
} sphk_kdf_params;

typedef double (*sphk_zonal_fn)(double inner, void* user_data);

/* Errors. The message of the last failure is kept per thread. */
SPHK_API const char* sphk_last_error(void);
SPHK_API const char* sphk_status_name(sphk_status status);
SPHK_API const char* sphk_version(void);
SPHK_API void sphk_series_control_default(sphk_series_control* ctl);

/* Special functions. */
SPHK_API sphk_status sphk_pochhammer(double a, long n, double* out);
SPHK_API sphk_status sphk_ln_gamma_ratio(const double* nums, size_t n_nums, const double* dens, size_t n_dens, double* out);
SPHK_API sphk_status sphk_digamma(double x, double* out);
SPHK_API sphk_status sphk_gauss_2f1(double a, double b, double c, double z, const sphk_series_control* ctl, double* out);
SPHK_API sphk_status sphk_pfq_terminating(const double* uppers, size_t n_uppers, const double* lowers, size_t n_lowers,
                                          double z, double* out);
SPHK_API sphk_status sphk_kampe_de_feriet(const sphk_kdf_params* params, double x, double y,
                                          const sphk_series_control* ctl, double* out);
SPHK_API sphk_status sphk_gegenbauer(long n, int d, double t, double* out);
SPHK_API sphk_status sphk_z_dim(int d, long n, double* out);

/* Sphere constants. */
SPHK_API sphk_status sphk_c_d_const(int d, double* out);
SPHK_API sphk_status sphk_v_lambda(int d, double lambda, double* out);
SPHK_API sphk_status sphk_v_log(int d, int L, double* out);

/* Point sets. */
SPHK_API sphk_status sphk_pointset_create(int d, const double* coords, size_t n_points, sphk_pointset** out);
SPHK_API sphk_status sphk_pointset_random(int d, size_t n_points, uint64_t seed, sphk_pointset** out);
SPHK_API sphk_status sphk_pointset_fibonacci(size_t n_points, sphk_pointset** out);
SPHK_API sphk_status sphk_pointset_named(const char* name, sphk_pointset** out);
SPHK_API sphk_status sphk_pointset_load(const char* path, sphk_pointset** out);
SPHK_API sphk_status sphk_pointset_save(const sphk_pointset* ps, const char* path);
SPHK_API void sphk_pointset_destroy(sphk_pointset* ps);
SPHK_API int sphk_pointset_dim(const sphk_pointset* ps);
SPHK_API size_t sphk_pointset_size(const sphk_pointset* ps);
SPHK_API size_t sphk_pointset_renormalized(const sphk_pointset* ps);
SPHK_API const double* sphk_pointset_coords(const sphk_pointset* ps);
SPHK_API const char* sphk_pointset_label(const sphk_pointset* ps);

/* Kernel evaluator for a fixed (d, beta). */
SPHK_API sphk_status sphk_kernel_create(int d, double beta, const sphk_series_control* ctl, sphk_kernel** out);
SPHK_API void sphk_kernel_destroy(sphk_kernel* k);
SPHK_API sphk_status sphk_kernel_branch(const sphk_kernel* k, sphk_branch* branch, int* M, int* L, double* eps);
SPHK_API sphk_status sphk_kernel_eval(const sphk_kernel* k, double inner, double* value, sphk_branch* branch_used,
                                      long* terms_used);
SPHK_API sphk_status sphk_kernel_diag(const sphk_kernel* k, double* out);
SPHK_API sphk_status sphk_kernel_antipodal(const sphk_kernel* k, double* out);
SPHK_API sphk_status sphk_kernel_mean(const sphk_kernel* k, double* out);
SPHK_API sphk_status sphk_c_beta_const(int d, double beta, double* out);
SPHK_API sphk_status sphk_log_coeff(int d, int L, double* out);
SPHK_API sphk_status sphk_q_mean_integer(int d, int M, double* out);
SPHK_API sphk_status sphk_q_mean_integer_d2_closed(int M, double* out);
SPHK_API sphk_status sphk_h_beta(double a, double b, double beta, double* out);
SPHK_API sphk_status sphk_hyper_poly_coeff(int d, long k, long n, double b, double c, double* out);

/* Ultraspherical expansion coefficients lambda_0 .. lambda_K. */
SPHK_API sphk_status sphk_expansion_create(int d, double beta, long K, const sphk_series_control* ctl,
                                           int require_positive, sphk_expansion** out);
SPHK_API void sphk_expansion_destroy(sphk_expansion* e);
SPHK_API size_t sphk_expansion_size(const sphk_expansion* e);
SPHK_API double sphk_expansion_s(const sphk_expansion* e);
SPHK_API int sphk_expansion_all_positive(const sphk_expansion* e);
SPHK_API sphk_status sphk_expansion_get(const sphk_expansion* e, long k, double* lambda, double* regular, double* distance);
SPHK_API sphk_status sphk_expansion_spread(const sphk_expansion* e, double* out);

/* Quadrature over S^2 x [-1, 1]. */
SPHK_API sphk_status sphk_rule_create(int n_theta, int n_phi, int n_t, sphk_rule** out);
SPHK_API void sphk_rule_destroy(sphk_rule* r);
SPHK_API size_t sphk_rule_size(const sphk_rule* r);

/* Discrepancy. */
SPHK_API sphk_status sphk_cap_integral(int d, double beta, double t, double* out);
SPHK_API sphk_status sphk_local_discrepancy(const sphk_pointset* ps, double beta, const double* z, double t, double* out,
                                            int* perturbed);
SPHK_API sphk_status sphk_wce_kernel(const sphk_pointset* ps, double beta, const sphk_series_control* ctl,
                                     sphk_report* out);
/* L_2 cap discrepancy (not squared). */
SPHK_API sphk_status sphk_wce_quadrature(const sphk_pointset* ps, double beta, const sphk_rule* rule, double tol,
                                         double* out);
SPHK_API sphk_status sphk_lp_discrepancy(const sphk_pointset* ps, double beta, double p, const sphk_rule* rule,
                                         double* out);
/* Squared beta = 1 cap discrepancy on S^2. */
SPHK_API sphk_status sphk_cap_discrepancy_beta1_exact(const sphk_pointset* ps, double* out);
SPHK_API sphk_status sphk_stolarsky_check(const sphk_pointset* ps, double beta, const sphk_rule* rule, double tol,
                                          sphk_identity* out);
/* residuals must hold t_max values (r_1 .. r_t_max). */
SPHK_API sphk_status sphk_design_residual(const sphk_pointset* ps, int t_max, double tol, double* residuals,
                                          int* is_design);
SPHK_API sphk_status sphk_tdesign_identity_check(const sphk_pointset* ps, int M, double design_tol, sphk_identity* out);

/* Oracles. */
SPHK_API sphk_status sphk_kernel_def_quadrature(int d, double beta, double inner, int resolution, double tol,
                                                double* value, double* error_estimate);
SPHK_API sphk_status sphk_mc_pair_integral(int d, sphk_zonal_fn f, void* user_data, long n, uint64_t seed,
                                           sphk_mc_estimate* out);
SPHK_API sphk_status sphk_zonal_mean(int d, sphk_zonal_fn f, void* user_data, double tol, double* out);

#ifdef __cplusplus
}
#endif

#endif
