#include "kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"
#include "spheregeom.hpp"

namespace sphk {

namespace {

// Below this value of z = (1 - inner)/2 the slowly converging series are replaced
// by a local model fitted to three anchors at z_c, z_c/2, z_c/4.
constexpr double kNearDiagonal = 5e-4;
constexpr int kRichardsonLevels = 5;

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

long series_start(double z)
{
    return std::max<long>(32, static_cast<long>(std::ceil(8.0 / z)));
}

std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b)
{
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int k = col; k < 3; ++k) a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace

const char* branch_name(Branch b)
{
    switch (b) {
    case Branch::Integer: return "integer";
    case Branch::HalfExceptional: return "half_exceptional";
    case Branch::General: return "general";
    }
    return "unknown";
}

SmoothnessParam SmoothnessParam::classify(double beta)
{
    if (!std::isfinite(beta) || !(beta > 0.5)) fail(ErrorCode::Domain, "beta must exceed 1/2");
    SmoothnessParam sp;
    const double r = std::round(beta);
    if (std::fabs(beta - r) < kBranchTol) {
        sp.beta = r;
        sp.branch = Branch::Integer;
        sp.M = static_cast<int>(r);
        sp.L = sp.M - 1;
        sp.eps = 0.5;
        return sp;
    }
    const double r2 = std::round(beta - 0.5);
    if (r2 >= 1.0 && std::fabs(beta - 0.5 - r2) < kBranchTol) {
        sp.beta = r2 + 0.5;
        sp.branch = Branch::HalfExceptional;
        sp.L = static_cast<int>(r2);
        sp.M = 0;
        sp.eps = 0.0;
        return sp;
    }
    sp.beta = beta;
    sp.branch = Branch::General;
    sp.L = static_cast<int>(std::floor(beta - 0.5));
    sp.M = 0;
    sp.eps = beta - 0.5 - sp.L;
    return sp;
}

double c_beta_const(int d, const SmoothnessParam& sp)
{
    const double dd = d;
    if (sp.branch == Branch::HalfExceptional)
        fail(ErrorCode::Branch, "the half-integer exceptional branch has a log-distance term; use log_coeff");
    if (sp.branch == Branch::Integer) {
        const int M = sp.M;
        const double g = std::tgamma(static_cast<double>(M));
        return std::pow(2.0, -2.0 * M) * omega_ratio(dd) * g * g / (pochhammer(0.5, M) * pochhammer(0.5 * dd, M));
    }
    const double b = sp.beta;
    return std::pow(2.0, -2.0 * b) / std::sin(std::numbers::pi * sp.eps) *
           gamma_ratio({0.5 * (dd + 1.0), b, b}, {b + 0.5 * dd, b + 0.5});
}

double log_coeff(int d, int L)
{
    if (L < 1) fail(ErrorCode::Domain, "log_coeff requires L >= 1");
    const double h = pochhammer(0.5, L);
    return h * h / (std::pow(2.0, 2.0 * L) * pochhammer(0.5 * (d + 1.0), L) * std::tgamma(L + 1.0));
}

double kernel_diag(int d, double beta)
{
    if (!(beta > 0.0)) fail(ErrorCode::Domain, "kernel_diag requires beta > 0");
    if (beta == 0.5) fail(ErrorCode::Pole, "kernel_diag has a pole at beta = 1/2");
    const double dd = d;
    return gamma_ratio({0.5 * (dd + 1.0), 2.0 * beta + 0.5 * dd - 1.0}, {beta + 0.5 * (dd - 1.0), beta + 0.5 * dd}) /
           (2.0 * beta - 1.0);
}

double h_beta(double a, double b, double beta, const SeriesControl& ctl)
{
    if (!(beta > 0.0)) fail(ErrorCode::Domain, "h_beta requires beta > 0");
    if (std::fabs(a) > 1.0 + 1e-12 || std::fabs(b) > 1.0 + 1e-12)
        fail(ErrorCode::Domain, "h_beta arguments must lie in [-1, 1]");
    a = std::clamp(a, -1.0, 1.0);
    b = std::clamp(b, -1.0, 1.0);
    if (a == b) {
        if (a == -1.0) return 0.0;
        if (!(beta > 0.5)) fail(ErrorCode::Domain, "h_beta on the diagonal requires beta > 1/2");
        return std::pow(1.0 + a, 2.0 * beta - 1.0) / (2.0 * beta - 1.0);
    }
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (lo <= -1.0) return 0.0;
    const double w = (hi - lo) / (1.0 + hi);
    const double f = gauss_2f1_complement(1.0 - beta, 1.0, 1.0 + beta, w, ctl);
    return (1.0 + lo) * std::pow(1.0 + a, beta - 1.0) * std::pow(1.0 + b, beta - 1.0) * f / beta;
}

KernelEvaluator::KernelEvaluator(int d, double beta, const SeriesControl& ctl)
    : KernelEvaluator(d, SmoothnessParam::classify(beta), ctl)
{
}

KernelEvaluator::KernelEvaluator(int d, const SmoothnessParam& sp, const SeriesControl& ctl)
    : d_(d), sp_(sp), ctl_(ctl)
{
    if (d < 2) fail(ErrorCode::Domain, "sphere dimension d must be at least 2");
    ctl_.validate();
    sp_ = SmoothnessParam::classify(sp.beta);
    diag_ = kernel_diag(d, sp_.beta);
    const double dd = d;
    switch (sp_.branch) {
    case Branch::Integer: {
        const int M = sp_.M;
        dist_coef_ = sign_pow(M) * c_beta_const(d, sp_);
        int_prefactor_ = std::pow(2.0, 2.0 * M - 1.0) / (2.0 * M - 1.0) * pochhammer(0.5 * dd, 2 * M - 1) /
                         pochhammer(dd, 2 * M - 1);
        break;
    }
    case Branch::General:
        dist_coef_ = sign_pow(sp_.L + 1) * c_beta_const(d, sp_);
        break;
    case Branch::HalfExceptional:
        dist_coef_ = sign_pow(sp_.L + 1) * log_coeff(d, sp_.L);
        break;
    }
}

double KernelEvaluator::distance_part(double inner) const
{
    const double z = 0.5 * (1.0 - inner);
    if (z <= 0.0) return 0.0;
    const double dist = 2.0 * std::sqrt(z);
    if (sp_.branch == Branch::HalfExceptional)
        return dist_coef_ * std::pow(dist, 2.0 * sp_.L) * std::log(dist);
    return dist_coef_ * std::pow(dist, 2.0 * sp_.beta - 1.0);
}

double KernelEvaluator::integer_polynomial(double z) const
{
    const double M = sp_.M;
    const double dd = d_;
    return int_prefactor_ * pfq_terminating({1.0 - M, 0.5 - M, 1.0 - M}, {1.5 - M, 2.0 - 0.5 * dd - 2.0 * M}, z);
}

double KernelEvaluator::general_series(double z, long* terms) const
{
    const double beta = sp_.beta;
    const double b = 1.0 - beta, c = 1.5 - beta;
    const double half_d1 = 0.5 * (d_ + 1.0);
    const long n0 = series_start(z);
    const long nmax = n0 << kRichardsonLevels;
    std::vector<double> partial;
    CompensatedSum sum;
    double coef = 1.0, f_prev = 0.0, f = 1.0;
    long checkpoint = n0;
    for (long n = 0; n < nmax; ++n) {
        sum.add(coef * f);
        if (n + 1 == checkpoint) {
            partial.push_back(sum.value());
            checkpoint *= 2;
        }
        const double f_next = ((2.0 * n + c - (b + n) * z) * f - n * (1.0 - z) * f_prev) / (c + n);
        f_prev = f;
        f = f_next;
        coef *= (0.5 - beta + n) * (1.0 - beta + n) / ((half_d1 + n) * (n + 1.0));
    }
    if (terms) *terms = nmax;
    const double s = richardson_power_tail(partial, beta + 0.5 * d_);
    if (!std::isfinite(s)) fail(ErrorCode::NonConvergence, "general-branch series is not finite");
    return s / (2.0 * beta - 1.0);
}

double KernelEvaluator::exceptional_series(double z, long* terms) const
{
    const int L = sp_.L;
    const double dd = d_;
    const double half_d1 = 0.5 * (dd + 1.0);
    const double y = z, x = 1.0 - z;
    auto cp_next = [&](double cp, long m) { return cp * (0.5 - L + m) * (0.5 + m) / ((half_d1 + m) * (m + 1.0)); };

    // finite polynomial block
    CompensatedSum finite;
    double cp = 1.0;
    for (long n = 0; n < L; ++n) {
        finite.add(0.5 * cp / (L - n) * gauss_2f1(-static_cast<double>(n), 0.5 - L, 0.5 - n, x, ctl_));
        cp = cp_next(cp, n);
    }
    const double cp_L = cp;
    double power_block = 0.0;
    for (int k = 1; k <= L; ++k)
        power_block += sign_pow(k) / k * pochhammer(-static_cast<double>(L), k) / pochhammer(0.5 - L, k) *
                       std::pow(y, L - k) * std::pow(x, k);
    finite.add(0.5 * cp_L * power_block);
    const double hl = pochhammer(0.5, L);
    const double digamma_block = 2.0 * std::numbers::ln2 + digamma(L + 1.0) + digamma(L + half_d1) - digamma(0.5) -
                                 digamma(L + 0.5);
    finite.add(-sign_pow(L + 1) * 0.5 * hl * hl / (pochhammer(half_d1, L) * std::tgamma(L + 1.0)) *
               std::pow(y, L) * digamma_block);

    // infinite block; each factor f_n = p_n y^L 2F1(-n,1/2;L+1;y) lies in (0,1)
    const long n0 = series_start(z);
    const long nmax = n0 << kRichardsonLevels;
    std::vector<double> partial;
    CompensatedSum tail;
    const double yl = std::pow(y, L);
    const double gb = 0.5, gc = L + 1.0;
    double g_prev = 0.0, g = 1.0, p = 1.0;
    double cpn = cp_next(cp_L, L);
    long checkpoint = n0;
    for (long n = 1; n <= nmax; ++n) {
        const long k = n - 1;
        const double g_next = ((2.0 * k + gc - (gb + k) * y) * g - k * (1.0 - y) * g_prev) / (gc + k);
        g_prev = g;
        g = g_next;
        p *= (L + n) / (L + n - 0.5);
        tail.add(-0.5 * cpn / n * p * yl * g);
        if (n == checkpoint) {
            partial.push_back(tail.value());
            checkpoint *= 2;
        }
        cpn = cp_next(cpn, n + L);
    }
    if (terms) *terms = nmax;
    const double t2 = richardson_power_tail(partial, sp_.beta + 0.5 * dd);
    const double value = finite.value() + t2;
    if (!std::isfinite(value)) fail(ErrorCode::NonConvergence, "exceptional-branch series is not finite");
    return value;
}

void KernelEvaluator::build_near_diagonal_model() const
{
    const double zc = kNearDiagonal;
    const double zs[3] = {zc, 0.5 * zc, 0.25 * zc};
    std::array<std::array<double, 3>, 3> a{};
    std::array<double, 3> rhs{};
    if (sp_.branch == Branch::General) {
        // Regular Taylor coefficients from Gauss sums, valid below the singular exponent sigma.
        const double beta = sp_.beta, dd = d_;
        const double sigma = 0.5 * dd + 2.0 * beta - 1.0;
        const double a1 = 0.5 - beta, a2 = 1.0 - beta, c1 = 0.5 * (dd + 1.0);
        const double b = 1.0 - beta, c = 1.5 - beta;
        int mt = 0;
        while (sigma - (mt + 1) >= 0.5) ++mt;
        taylor_.clear();
        for (int m = 0; m <= mt; ++m) {
            const double md = m;
            const double fac = pochhammer(b, m) * pochhammer(a1, m) * pochhammer(a2, m) * sign_pow(m) /
                               (pochhammer(c, m) * std::tgamma(md + 1.0));
            taylor_.push_back(fac * gamma_ratio({c1, sigma - md}, {beta + 0.5 * dd, beta + 0.5 * (dd - 1.0)}) /
                              (2.0 * beta - 1.0));
        }
        model_power_ = mt + 1;
        model_exponent_ = sigma - model_power_;
    } else {
        taylor_ = {diag_};
        model_power_ = 1;
        model_exponent_ = 2.0;
    }
    for (int k = 0; k < 3; ++k) {
        const double z = zs[k];
        const double q = (sp_.branch == Branch::General) ? general_series(z, nullptr) : exceptional_series(z, nullptr);
        double t = 0.0, zp = 1.0;
        for (double coef : taylor_) {
            t += coef * zp;
            zp *= z;
        }
        const double x = z / zc;
        double e_basis;
        if (sp_.branch == Branch::General)
            e_basis = (std::fabs(model_exponent_) < 1e-8) ? std::log(x) : (std::pow(x, model_exponent_) - 1.0) / model_exponent_;
        else
            e_basis = x * x;
        a[k] = {1.0, e_basis, x};
        rhs[k] = (q - t) / std::pow(z, model_power_);
    }
    const auto sol = solve3(a, rhs);
    model_coef_[0] = sol[0];
    model_coef_[1] = sol[1];
    model_coef_[2] = sol[2];
}

double KernelEvaluator::near_diagonal(double z) const
{
    std::call_once(model_once_, [this] { build_near_diagonal_model(); });
    double t = 0.0, zp = 1.0;
    for (double coef : taylor_) {
        t += coef * zp;
        zp *= z;
    }
    const double x = z / kNearDiagonal;
    double e_basis;
    if (sp_.branch == Branch::General)
        e_basis = (std::fabs(model_exponent_) < 1e-8) ? std::log(x) : (std::pow(x, model_exponent_) - 1.0) / model_exponent_;
    else
        e_basis = x * x;
    return t + std::pow(z, model_power_) * (model_coef_[0] + model_coef_[1] * e_basis + model_coef_[2] * x);
}

double KernelEvaluator::regular_part(double z, long* terms) const
{
    if (terms) *terms = 0;
    if (sp_.branch == Branch::Integer) {
        if (terms) *terms = sp_.M;
        return integer_polynomial(z);
    }
    if (z <= 0.0) return diag_;
    if (z < kNearDiagonal) return near_diagonal(z);
    if (sp_.branch == Branch::General) return general_series(z, terms);
    return exceptional_series(z, terms);
}

KernelValue KernelEvaluator::eval(double inner) const
{
    if (!std::isfinite(inner) || std::fabs(inner) > 1.0 + 1e-12)
        fail(ErrorCode::Domain, "inner product must lie in [-1, 1]");
    inner = std::clamp(inner, -1.0, 1.0);
    KernelValue kv;
    kv.branch_used = sp_.branch;
    if (inner == 1.0 && sp_.branch != Branch::Integer) {
        kv.value = diag_;
        return kv;
    }
    const double z = 0.5 * (1.0 - inner);
    kv.value = regular_part(z, &kv.terms_used) + distance_part(inner);
    return kv;
}

double KernelEvaluator::antipodal() const
{
    const double dd = d_;
    const double beta = sp_.beta;
    if (sp_.branch == Branch::Integer) return eval(-1.0).value;
    if (sp_.branch == Branch::General) {
        // 3F2(1/2-beta, 1-beta, 1/2; 3/2-beta, (d+1)/2; 1) by partial sums and tail extrapolation
        const long n0 = 256;
        const long nmax = n0 << 6;
        std::vector<double> partial;
        CompensatedSum sum;
        double term = 1.0;
        long checkpoint = n0;
        for (long n = 0; n < nmax; ++n) {
            sum.add(term);
            if (n + 1 == checkpoint) {
                partial.push_back(sum.value());
                checkpoint *= 2;
            }
            term *= (0.5 - beta + n) * (1.0 - beta + n) * (0.5 + n) / ((1.5 - beta + n) * (0.5 * (dd + 1.0) + n) * (n + 1.0));
        }
        const double f32 = richardson_power_tail(partial, beta + 0.5 * dd);
        return dist_coef_ * std::pow(2.0, 2.0 * beta - 1.0) + f32 / (2.0 * beta - 1.0);
    }
    const int L = sp_.L;
    const double half_d1 = 0.5 * (dd + 1.0);
    CompensatedSum head;
    double cp = 1.0;
    for (long n = 0; n < L; ++n) {
        head.add(-0.5 * cp / (n - L));
        cp *= (0.5 - L + n) * (0.5 + n) / ((half_d1 + n) * (n + 1.0));
    }
    cp *= (0.5 - L + L) * (0.5 + L) / ((half_d1 + L) * (L + 1.0));
    const long n0 = 256;
    const long nmax = n0 << 6;
    std::vector<double> partial;
    CompensatedSum tail;
    long checkpoint = n0;
    for (long k = 1; k <= nmax; ++k) {
        const long n = L + k;
        tail.add(-0.5 * cp / k);
        if (k == checkpoint) {
            partial.push_back(tail.value());
            checkpoint *= 2;
        }
        cp *= (0.5 - L + n) * (0.5 + n) / ((half_d1 + n) * (n + 1.0));
    }
    const double hl = pochhammer(0.5, L);
    const double block = -sign_pow(L + 1) * 0.5 * hl * hl / (pochhammer(half_d1, L) * std::tgamma(L + 1.0)) *
                         (digamma(L + 1.0) + digamma(L + half_d1) - digamma(0.5) - digamma(L + 0.5));
    return head.value() + richardson_power_tail(partial, beta + 0.5 * dd) + block;
}

double KernelEvaluator::mean() const
{
    return kernel_mean(d_, sp_, ctl_);
}

KernelValue kernel_eval(int d, const SmoothnessParam& sp, double inner, const SeriesControl& ctl)
{
    return KernelEvaluator(d, sp, ctl).eval(inner);
}

double kernel_antipodal(int d, const SmoothnessParam& sp, const SeriesControl& ctl)
{
    return KernelEvaluator(d, sp, ctl).antipodal();
}

double kernel_mean(int d, const SmoothnessParam& sp_in, const SeriesControl& ctl)
{
    if (d < 2) fail(ErrorCode::Domain, "sphere dimension d must be at least 2");
    const SmoothnessParam sp = SmoothnessParam::classify(sp_in.beta);
    const double beta = sp.beta, dd = d;
    if (d == 2) return std::pow(2.0, 2.0 * beta) / (2.0 * beta * beta * (2.0 * beta + 1.0));
    const double inner = std::pow(2.0, beta - 0.5 + 0.5 * dd) *
                         gamma_ratio({0.5 * (dd + 1.0), beta}, {beta + 0.5 * dd}) / std::sqrt(std::numbers::pi);
    const double pref = std::pow(2.0, dd - 2.0) * inner * inner / (2.0 * beta + dd - 1.0);
    KdFParams p;
    p.upper_joint = {2.0 * beta + dd - 1.0};
    p.lower_joint = {2.0 * beta + dd};
    p.upper_x = {1.0 - 0.5 * dd, 0.5 * dd};
    p.lower_x = {beta + 0.5 * dd};
    p.upper_y = p.upper_x;
    p.lower_y = p.lower_x;
    return pref * kampe_de_feriet(p, 1.0, 1.0, ctl);
}

double q_mean_integer(int d, int M)
{
    if (M < 1) fail(ErrorCode::Domain, "q_mean_integer requires M >= 1");
    const double dd = d, m = M;
    const double pre = sign_pow(M - 1) * std::tgamma(m) / pochhammer(1.5, M - 1);
    return pre * pfq_terminating({1.0 - m, 0.5 - m, m + dd - 1.0, 0.5 * dd}, {1.0 - m, 0.5 * (dd + 1.0), dd}, 1.0);
}

double q_mean_integer_d2_closed(int M)
{
    if (M < 1) fail(ErrorCode::Domain, "q_mean_integer requires M >= 1");
    const double m = M;
    return std::pow(2.0, 2.0 * m) / (2.0 * m * m * (2.0 * m + 1.0)) +
           sign_pow(M - 1) * std::tgamma(m) / (2.0 * m * (2.0 * m + 1.0) * pochhammer(0.5, M));
}

double hyper_poly_coeff(int d, long k, long n, double b, double c)
{
    if (k < 0 || n < 0) fail(ErrorCode::Domain, "indices must be nonnegative");
    if (k > n) return 0.0;
    const double dd = d, kd = static_cast<double>(k), nd = static_cast<double>(n);
    const double pre = sign_pow(static_cast<int>(k % 2)) * pochhammer(-nd, k) * pochhammer(b, k) * pochhammer(0.5 * dd, k) /
                       (pochhammer(c, k) * pochhammer(dd, 2 * k));
    if (pre == 0.0) return 0.0;
    // The printed "3F1" is read as the 3F2 implied by its five parameters.
    return pre * pfq_terminating({kd - nd, kd + b, kd + 0.5 * dd}, {kd + c, 2.0 * kd + dd}, 1.0);
}

ExpansionTable expansion_coeffs(int d, const SmoothnessParam& sp_in, long K, const SeriesControl& ctl,
                                bool require_positive)
{
    if (K < 0) fail(ErrorCode::Domain, "K must be nonnegative");
    const KernelEvaluator ev(d, sp_in, ctl);
    const SmoothnessParam& sp = ev.param();
    const double dd = d, beta = sp.beta, s = sp.s(d);
    ExpansionTable table;
    table.d = d;
    table.beta = beta;
    table.s = s;
    table.branch = sp.branch;
    table.lambda.assign(K + 1, 0.0);
    table.regular.assign(K + 1, 0.0);
    table.distance.assign(K + 1, 0.0);

    if (sp.branch == Branch::HalfExceptional) {
        const int L = sp.L;
        const double lc = log_coeff(d, L);
        const double v2l = v_lambda(d, 2.0 * L);
        const double common = digamma(L + 1.0) + digamma(L + 0.5 * dd) + 2.0 * std::numbers::ln2;
        for (long k = 0; k <= K; ++k) {
            double bk;
            if (k <= L) {
                const double ak = sign_pow(L + 1) * v2l * pochhammer(-static_cast<double>(L), k) / pochhammer(L + dd, k);
                bk = 0.5 * ak * (common - digamma(L + 1.0 - k) - digamma(k + L + dd));
            } else {
                bk = std::pow(2.0, 2.0 * L + dd - 2.0) * std::sqrt(1.0 / std::numbers::pi) *
                     std::exp(std::lgamma(0.5 * (dd + 1.0)) + std::lgamma(L + 0.5 * dd) + std::lgamma(L + 1.0) +
                              std::lgamma(static_cast<double>(k - L)) - std::lgamma(static_cast<double>(k + L) + dd));
            }
            table.distance[k] = lc * bk;
        }
    } else {
        const int L = (sp.branch == Branch::Integer) ? sp.M - 1 : sp.L;
        const double c = c_beta_const(d, sp);
        double ratio = sign_pow(L + 1) * v_lambda(d, 2.0 * beta - 1.0);
        for (long k = 0; k <= K; ++k) {
            table.distance[k] = c * ratio;
            ratio *= (0.5 * dd - s + k) / (0.5 * dd + s + k);
        }
    }

    if (sp.branch == Branch::Integer) {
        const int M = sp.M;
        const double md = M;
        for (long k = 0; k <= K && k < M; ++k) {
            CompensatedSum acc;
            for (long n = k; n < M; ++n) {
                const double cn = pochhammer(0.5 - md, n) * pochhammer(1.0 - md, n) /
                                  (pochhammer(0.5 * (dd + 1.0), n) * std::tgamma(n + 1.0));
                acc.add(cn * hyper_poly_coeff(d, k, n, 1.0 - md, 1.5 - md));
            }
            table.regular[k] = acc.value() / (2.0 * md - 1.0);
        }
    } else {
        // Funk-Hecke projection of the regular part in the angle variable t = cos(theta).
        const int nodes = static_cast<int>(std::max<long>(600, 4 * K + 300));
        const Rule1D rule = gauss_legendre(nodes, 0.0, std::numbers::pi);
        const double wr = omega_ratio(dd);
        std::vector<double> pk(K + 1);
        std::vector<CompensatedSum> acc(K + 1);
        for (int i = 0; i < nodes; ++i) {
            const double th = rule.nodes[i];
            const double t = std::cos(th);
            const double sh = std::sin(0.5 * th);
            const double z = sh * sh;
            const double w = rule.weights[i] * std::pow(std::sin(th), dd - 1.0);
            const double q = ev.regular_part(z);
            gegenbauer_all(K, d, t, pk.data());
            for (long k = 0; k <= K; ++k) acc[k].add(w * q * pk[k]);
        }
        for (long k = 0; k <= K; ++k) table.regular[k] = wr * acc[k].value();
    }

    for (long k = 0; k <= K; ++k) {
        table.lambda[k] = table.regular[k] + table.distance[k];
        if (!(table.lambda[k] > 0.0)) {
            table.all_positive = false;
            if (require_positive)
                fail(ErrorCode::PositivityViolation,
                     "expansion coefficient lambda_" + std::to_string(k) + " is not positive");
        }
    }
    return table;
}

double coeff_asymptotic_check(const ExpansionTable& table)
{
    if (table.lambda.size() < 40) fail(ErrorCode::Precondition, "coeff_asymptotic_check needs at least 40 coefficients");
    const long K = static_cast<long>(table.lambda.size()) - 1;
    const long lo = (K + 1) / 2;
    std::vector<double> v;
    for (long n = lo; n <= K; ++n) v.push_back(table.lambda[n] * std::pow(static_cast<double>(n), 2.0 * table.s));
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = (m % 2 == 1) ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    double spread = 0.0;
    for (double x : v) spread = std::max(spread, std::fabs(x / median - 1.0));
    return spread;
}

}  // namespace sphk
