#include "sphk.h"

#include <memory>
#include <new>
#include <string>

#include "discrepancy.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "specfun.hpp"
#include "spheregeom.hpp"

struct sphk_pointset {
    sphk::PointSet impl;
};

struct sphk_kernel {
    sphk::KernelEvaluator impl;
};

struct sphk_expansion {
    sphk::ExpansionTable impl;
};

struct sphk_rule {
    sphk::SphereCapRule impl;
};

namespace {

thread_local std::string last_error;

sphk_status to_status(sphk::ErrorCode code)
{
    return static_cast<sphk_status>(static_cast<int>(code));
}

template <class F>
sphk_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return SPHK_OK;
    } catch (const sphk::Error& e) {
        last_error = std::string(sphk::error_code_name(e.code())) + ": " + e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SPHK_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SPHK_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return SPHK_ERR_INTERNAL;
    }
}

template <class T>
void require(const T* p, const char* what)
{
    if (!p) sphk::fail(sphk::ErrorCode::Domain, std::string("null argument: ") + what);
}

sphk::SeriesControl control(const sphk_series_control* ctl)
{
    sphk::SeriesControl c;
    if (ctl) {
        c.rel_tol = ctl->rel_tol;
        c.abs_tol = ctl->abs_tol;
        c.max_terms = ctl->max_terms;
        c.tail_window = ctl->tail_window;
        c.validate();
    }
    return c;
}

sphk_branch to_branch(sphk::Branch b)
{
    switch (b) {
    case sphk::Branch::Integer: return SPHK_BRANCH_INTEGER;
    case sphk::Branch::HalfExceptional: return SPHK_BRANCH_HALF_EXCEPTIONAL;
    case sphk::Branch::General: return SPHK_BRANCH_GENERAL;
    }
    return SPHK_BRANCH_GENERAL;
}

std::vector<double> vec(const double* p, size_t n)
{
    if (n > 0) require(p, "parameter array");
    return std::vector<double>(p, p + n);
}

void fill_identity(const sphk::IdentityCheck& c, sphk_identity* out)
{
    out->lhs = c.lhs;
    out->rhs = c.rhs;
    out->gap = c.gap;
    out->exact_path = c.method == "exact";
    out->has_classical = c.has_classical;
    out->classical_lhs = c.classical_lhs;
    out->classical_rhs = c.classical_rhs;
}

struct ZonalCallback {
    sphk_zonal_fn fn;
    void* user;
    double operator()(double t) const { return fn(t, user); }
};

}  // namespace

extern "C" {

const char* sphk_last_error(void) { return last_error.c_str(); }

const char* sphk_status_name(sphk_status status)
{
    switch (status) {
    case SPHK_OK: return "OK";
    case SPHK_ERR_INTERNAL: return "InternalError";
    default:
        if (status >= SPHK_ERR_DOMAIN && status <= SPHK_ERR_IO)
            return sphk::error_code_name(static_cast<sphk::ErrorCode>(static_cast<int>(status)));
    }
    return "UnknownStatus";
}

const char* sphk_version(void) { return "1.0.0"; }

void sphk_series_control_default(sphk_series_control* ctl)
{
    if (!ctl) return;
    const sphk::SeriesControl c;
    ctl->rel_tol = c.rel_tol;
    ctl->abs_tol = c.abs_tol;
    ctl->max_terms = c.max_terms;
    ctl->tail_window = c.tail_window;
}

sphk_status sphk_pochhammer(double a, long n, double* out)
{
    return guarded([&] {
        require(out, "out");
        if (n < 0) sphk::fail(sphk::ErrorCode::Domain, "Pochhammer count must be nonnegative");
        *out = sphk::pochhammer(a, n);
    });
}

sphk_status sphk_ln_gamma_ratio(const double* nums, size_t n_nums, const double* dens, size_t n_dens, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::ln_gamma_ratio(vec(nums, n_nums), vec(dens, n_dens));
    });
}

sphk_status sphk_digamma(double x, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::digamma(x);
    });
}

sphk_status sphk_gauss_2f1(double a, double b, double c, double z, const sphk_series_control* ctl, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::gauss_2f1(a, b, c, z, control(ctl));
    });
}

sphk_status sphk_pfq_terminating(const double* uppers, size_t n_uppers, const double* lowers, size_t n_lowers, double z,
                                 double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::pfq_terminating(vec(uppers, n_uppers), vec(lowers, n_lowers), z);
    });
}

sphk_status sphk_kampe_de_feriet(const sphk_kdf_params* params, double x, double y, const sphk_series_control* ctl,
                                 double* out)
{
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        sphk::KdFParams p;
        p.upper_joint = vec(params->upper_joint, params->n_upper_joint);
        p.lower_joint = vec(params->lower_joint, params->n_lower_joint);
        p.upper_x = vec(params->upper_x, params->n_upper_x);
        p.lower_x = vec(params->lower_x, params->n_lower_x);
        p.upper_y = vec(params->upper_y, params->n_upper_y);
        p.lower_y = vec(params->lower_y, params->n_lower_y);
        p.validate();
        *out = sphk::kampe_de_feriet(p, x, y, control(ctl));
    });
}

sphk_status sphk_gegenbauer(long n, int d, double t, double* out)
{
    return guarded([&] {
        require(out, "out");
        if (n < 0 || d < 2 || !(t >= -1.0 && t <= 1.0))
            sphk::fail(sphk::ErrorCode::Domain, "gegenbauer needs n >= 0, d >= 2 and |t| <= 1");
        *out = sphk::gegenbauer_p(n, d, t);
    });
}

sphk_status sphk_z_dim(int d, long n, double* out)
{
    return guarded([&] {
        require(out, "out");
        if (n < 0) sphk::fail(sphk::ErrorCode::Domain, "degree must be nonnegative");
        *out = sphk::z_dim(d, n);
    });
}

sphk_status sphk_c_d_const(int d, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::c_d_const(d);
    });
}

sphk_status sphk_v_lambda(int d, double lambda, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::v_lambda(d, lambda);
    });
}

sphk_status sphk_v_log(int d, int L, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::v_log(d, L);
    });
}

sphk_status sphk_pointset_create(int d, const double* coords, size_t n_points, sphk_pointset** out)
{
    return guarded([&] {
        require(out, "out");
        require(coords, "coords");
        if (d < 1) sphk::fail(sphk::ErrorCode::Domain, "sphere dimension must be at least 1");
        std::vector<double> c(coords, coords + n_points * (static_cast<size_t>(d) + 1));
        *out = new sphk_pointset{sphk::PointSet(d, std::move(c))};
    });
}

sphk_status sphk_pointset_random(int d, size_t n_points, uint64_t seed, sphk_pointset** out)
{
    return guarded([&] {
        require(out, "out");
        if (d < 1) sphk::fail(sphk::ErrorCode::Domain, "sphere dimension must be at least 1");
        *out = new sphk_pointset{sphk::random_uniform(d, n_points, seed)};
    });
}

sphk_status sphk_pointset_fibonacci(size_t n_points, sphk_pointset** out)
{
    return guarded([&] {
        require(out, "out");
        *out = new sphk_pointset{sphk::fibonacci_sphere(n_points)};
    });
}

sphk_status sphk_pointset_named(const char* name, sphk_pointset** out)
{
    return guarded([&] {
        require(out, "out");
        require(name, "name");
        *out = new sphk_pointset{sphk::named_design(name)};
    });
}

sphk_status sphk_pointset_load(const char* path, sphk_pointset** out)
{
    return guarded([&] {
        require(out, "out");
        require(path, "path");
        *out = new sphk_pointset{sphk::load_pointset(path)};
    });
}

sphk_status sphk_pointset_save(const sphk_pointset* ps, const char* path)
{
    return guarded([&] {
        require(ps, "point set");
        require(path, "path");
        sphk::save_pointset(ps->impl, path);
    });
}

void sphk_pointset_destroy(sphk_pointset* ps) { delete ps; }
int sphk_pointset_dim(const sphk_pointset* ps) { return ps ? ps->impl.dim() : 0; }
size_t sphk_pointset_size(const sphk_pointset* ps) { return ps ? ps->impl.size() : 0; }
size_t sphk_pointset_renormalized(const sphk_pointset* ps) { return ps ? ps->impl.renormalized_rows() : 0; }
const double* sphk_pointset_coords(const sphk_pointset* ps) { return ps ? ps->impl.coords().data() : nullptr; }
const char* sphk_pointset_label(const sphk_pointset* ps) { return ps ? ps->impl.label().c_str() : ""; }

sphk_status sphk_kernel_create(int d, double beta, const sphk_series_control* ctl, sphk_kernel** out)
{
    return guarded([&] {
        require(out, "out");
        *out = new sphk_kernel{sphk::KernelEvaluator(d, beta, control(ctl))};
    });
}

void sphk_kernel_destroy(sphk_kernel* k) { delete k; }

sphk_status sphk_kernel_branch(const sphk_kernel* k, sphk_branch* branch, int* M, int* L, double* eps)
{
    return guarded([&] {
        require(k, "kernel");
        const sphk::SmoothnessParam& sp = k->impl.param();
        if (branch) *branch = to_branch(sp.branch);
        if (M) *M = sp.M;
        if (L) *L = sp.L;
        if (eps) *eps = sp.eps;
    });
}

sphk_status sphk_kernel_eval(const sphk_kernel* k, double inner, double* value, sphk_branch* branch_used, long* terms_used)
{
    return guarded([&] {
        require(k, "kernel");
        require(value, "value");
        const sphk::KernelValue kv = k->impl.eval(inner);
        *value = kv.value;
        if (branch_used) *branch_used = to_branch(kv.branch_used);
        if (terms_used) *terms_used = kv.terms_used;
    });
}

sphk_status sphk_kernel_diag(const sphk_kernel* k, double* out)
{
    return guarded([&] {
        require(k, "kernel");
        require(out, "out");
        *out = k->impl.diag();
    });
}

sphk_status sphk_kernel_antipodal(const sphk_kernel* k, double* out)
{
    return guarded([&] {
        require(k, "kernel");
        require(out, "out");
        *out = k->impl.antipodal();
    });
}

sphk_status sphk_kernel_mean(const sphk_kernel* k, double* out)
{
    return guarded([&] {
        require(k, "kernel");
        require(out, "out");
        *out = k->impl.mean();
    });
}

sphk_status sphk_c_beta_const(int d, double beta, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::c_beta_const(d, sphk::SmoothnessParam::classify(beta));
    });
}

sphk_status sphk_log_coeff(int d, int L, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::log_coeff(d, L);
    });
}

sphk_status sphk_q_mean_integer(int d, int M, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::q_mean_integer(d, M);
    });
}

sphk_status sphk_q_mean_integer_d2_closed(int M, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::q_mean_integer_d2_closed(M);
    });
}

sphk_status sphk_h_beta(double a, double b, double beta, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::h_beta(a, b, beta);
    });
}

sphk_status sphk_hyper_poly_coeff(int d, long k, long n, double b, double c, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::hyper_poly_coeff(d, k, n, b, c);
    });
}

sphk_status sphk_expansion_create(int d, double beta, long K, const sphk_series_control* ctl, int require_positive,
                                  sphk_expansion** out)
{
    return guarded([&] {
        require(out, "out");
        *out = new sphk_expansion{
            sphk::expansion_coeffs(d, sphk::SmoothnessParam::classify(beta), K, control(ctl), require_positive != 0)};
    });
}

void sphk_expansion_destroy(sphk_expansion* e) { delete e; }
size_t sphk_expansion_size(const sphk_expansion* e) { return e ? e->impl.lambda.size() : 0; }
double sphk_expansion_s(const sphk_expansion* e) { return e ? e->impl.s : 0.0; }
int sphk_expansion_all_positive(const sphk_expansion* e) { return e ? e->impl.all_positive : 0; }

sphk_status sphk_expansion_get(const sphk_expansion* e, long k, double* lambda, double* regular, double* distance)
{
    return guarded([&] {
        require(e, "expansion");
        if (k < 0 || static_cast<size_t>(k) >= e->impl.lambda.size())
            sphk::fail(sphk::ErrorCode::Domain, "expansion index out of range");
        if (lambda) *lambda = e->impl.lambda[k];
        if (regular) *regular = e->impl.regular[k];
        if (distance) *distance = e->impl.distance[k];
    });
}

sphk_status sphk_expansion_spread(const sphk_expansion* e, double* out)
{
    return guarded([&] {
        require(e, "expansion");
        require(out, "out");
        *out = sphk::coeff_asymptotic_check(e->impl);
    });
}

sphk_status sphk_rule_create(int n_theta, int n_phi, int n_t, sphk_rule** out)
{
    return guarded([&] {
        require(out, "out");
        if (n_t < 1) sphk::fail(sphk::ErrorCode::Domain, "the t rule needs at least one node");
        *out = new sphk_rule{sphk::sphere_cap_rule(n_theta, n_phi, n_t)};
    });
}

void sphk_rule_destroy(sphk_rule* r) { delete r; }
size_t sphk_rule_size(const sphk_rule* r) { return r ? r->impl.z_count() : 0; }

sphk_status sphk_cap_integral(int d, double beta, double t, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = sphk::truncated_power_cap_integral(d, beta, t);
    });
}

sphk_status sphk_local_discrepancy(const sphk_pointset* ps, double beta, const double* z, double t, double* out,
                                   int* perturbed)
{
    return guarded([&] {
        require(ps, "point set");
        require(z, "z");
        require(out, "out");
        const std::vector<double> zv(z, z + ps->impl.dim() + 1);
        bool moved = false;
        *out = sphk::local_discrepancy(ps->impl, beta, zv, t, &moved);
        if (perturbed) *perturbed = moved;
    });
}

sphk_status sphk_wce_kernel(const sphk_pointset* ps, double beta, const sphk_series_control* ctl, sphk_report* out)
{
    return guarded([&] {
        require(ps, "point set");
        require(out, "out");
        const sphk::DiscrepancyReport r = sphk::wce_kernel(ps->impl, sphk::SmoothnessParam::classify(beta), control(ctl));
        out->n_points = r.n_points;
        out->d = r.d;
        out->beta = r.beta;
        out->wce_kernel = r.wce_kernel;
        out->has_quadrature = 0;
        out->wce_quadrature = 0.0;
        out->gram_mean = r.gram_mean;
        out->kernel_mean = r.kernel_mean;
        out->identity_gap = 0.0;
    });
}

sphk_status sphk_wce_quadrature(const sphk_pointset* ps, double beta, const sphk_rule* rule, double tol, double* out)
{
    return guarded([&] {
        require(ps, "point set");
        require(rule, "rule");
        require(out, "out");
        *out = sphk::wce_quadrature(ps->impl, beta, rule->impl, tol);
    });
}

sphk_status sphk_lp_discrepancy(const sphk_pointset* ps, double beta, double p, const sphk_rule* rule, double* out)
{
    return guarded([&] {
        require(ps, "point set");
        require(rule, "rule");
        require(out, "out");
        *out = sphk::lp_discrepancy(ps->impl, beta, p, rule->impl);
    });
}

sphk_status sphk_cap_discrepancy_beta1_exact(const sphk_pointset* ps, double* out)
{
    return guarded([&] {
        require(ps, "point set");
        require(out, "out");
        *out = sphk::cap_discrepancy_beta1_exact(ps->impl);
    });
}

sphk_status sphk_stolarsky_check(const sphk_pointset* ps, double beta, const sphk_rule* rule, double tol, sphk_identity* out)
{
    return guarded([&] {
        require(ps, "point set");
        require(rule, "rule");
        require(out, "out");
        fill_identity(sphk::stolarsky_check(ps->impl, sphk::SmoothnessParam::classify(beta), rule->impl, tol), out);
    });
}

sphk_status sphk_design_residual(const sphk_pointset* ps, int t_max, double tol, double* residuals, int* is_design)
{
    return guarded([&] {
        require(ps, "point set");
        require(residuals, "residuals");
        const sphk::DesignCertificate c = sphk::design_residual(ps->impl, t_max, tol);
        for (int n = 0; n < t_max; ++n) residuals[n] = c.residuals[n];
        if (is_design) *is_design = c.is_design;
    });
}

sphk_status sphk_tdesign_identity_check(const sphk_pointset* ps, int M, double design_tol, sphk_identity* out)
{
    return guarded([&] {
        require(ps, "point set");
        require(out, "out");
        fill_identity(sphk::tdesign_identity_check(ps->impl, M, {}, design_tol), out);
    });
}

sphk_status sphk_kernel_def_quadrature(int d, double beta, double inner, int resolution, double tol, double* value,
                                       double* error_estimate)
{
    return guarded([&] {
        require(value, "value");
        const sphk::DefQuadratureResult r = sphk::kernel_def_quadrature(d, beta, inner, resolution, tol);
        *value = r.value;
        if (error_estimate) *error_estimate = r.error_estimate;
    });
}

sphk_status sphk_mc_pair_integral(int d, sphk_zonal_fn f, void* user_data, long n, uint64_t seed, sphk_mc_estimate* out)
{
    return guarded([&] {
        require(out, "out");
        if (!f) sphk::fail(sphk::ErrorCode::Domain, "null argument: callback");
        const sphk::McEstimate e = sphk::mc_pair_integral(d, ZonalCallback{f, user_data}, n, seed);
        out->mean = e.mean;
        out->std_error = e.std_error;
        out->n_samples = e.n_samples;
        out->seed = e.seed;
    });
}

sphk_status sphk_zonal_mean(int d, sphk_zonal_fn f, void* user_data, double tol, double* out)
{
    return guarded([&] {
        require(out, "out");
        if (!f) sphk::fail(sphk::ErrorCode::Domain, "null argument: callback");
        *out = sphk::zonal_mean(d, ZonalCallback{f, user_data}, tol);
    });
}

}  // extern "C"
