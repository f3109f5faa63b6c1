#include "specfun.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "errors.hpp"
#include "quadrature.hpp"

namespace sphk {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

#if defined(__SIZEOF_FLOAT128__)
using wide = __float128;
#else
using wide = long double;
#endif

std::string num(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

int gamma_sign(double x)
{
    if (x > 0.0) return 1;
    const long long f = static_cast<long long>(std::floor(x));
    return (f % 2 == 0) ? 1 : -1;
}

double lgamma_abs(double x)
{
    if (is_nonpositive_integer(x)) fail(ErrorCode::Pole, "Gamma pole at " + num(x));
    return std::lgamma(x);
}

// Smallest truncation index among nonpositive-integer parameters, LONG_MAX if none.
long truncation_index(const std::vector<double>& uppers)
{
    long t = LONG_MAX;
    for (double u : uppers)
        if (is_nonpositive_integer(u)) t = std::min(t, static_cast<long>(-u));
    return t;
}

// Index of the first term whose denominator vanishes, LONG_MAX if none.
long pole_index(const std::vector<double>& lowers)
{
    long p = LONG_MAX;
    for (double l : lowers)
        if (is_nonpositive_integer(l)) p = std::min(p, static_cast<long>(-l) + 1);
    return p;
}

double series_2f1(double a, double b, double c, double z, const SeriesControl& ctl, long max_terms)
{
    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    int quiet = 0;
    for (long n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum.add(term);
        if (!std::isfinite(term)) break;
        if (std::fabs(term) <= ctl.rel_tol * std::fabs(sum.value()) + ctl.abs_tol) {
            if (++quiet >= ctl.tail_window) return sum.value();
        } else {
            quiet = 0;
        }
    }
    fail(ErrorCode::NonConvergence,
         "2F1(" + num(a) + "," + num(b) + ";" + num(c) + ";" + num(z) + ") did not converge");
}

double terminating_2f1(double a, double b, double c, double z)
{
    const long m = std::min(truncation_index({a}), truncation_index({b}));
    if (is_nonpositive_integer(c) && static_cast<long>(-c) < m)
        fail(ErrorCode::Pole, "2F1 lower parameter " + num(c) + " is reached before truncation");
    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (long n = 0; n < m; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum.add(term);
    }
    return sum.value();
}

// 2F1(a,b;a+b+m;1-w) for integer m and small w, logarithmic connection formulas.
double log_case_2f1(double a, double b, long m, double w)
{
    const double lw = std::log(w);
    const double tiny = 1e-17;
    if (m == 0) {
        const double pre = gamma_ratio({a + b}, {a, b});
        CompensatedSum sum;
        double coef = 1.0;
        double psi1 = -kEulerGamma, psia = digamma(a), psib = digamma(b);
        for (long n = 0; n < 100000; ++n) {
            const double t = coef * (2.0 * psi1 - psia - psib - lw);
            sum.add(t);
            if (n > 2 && std::fabs(t) <= tiny * std::fabs(sum.value())) break;
            coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
            psi1 += 1.0 / (n + 1.0);
            psia += 1.0 / (a + n);
            psib += 1.0 / (b + n);
        }
        return pre * sum.value();
    }
    if (m > 0) {
        const double md = static_cast<double>(m);
        CompensatedSum finite;
        double t = 1.0;
        for (long n = 0; n < m; ++n) {
            finite.add(t);
            t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - md + n)) * w;
        }
        const double pre1 = gamma_ratio({md, a + b + md}, {a + md, b + md});
        const double pre2 = -std::pow(-w, md) * gamma_ratio({a + b + md}, {a, b});
        CompensatedSum tail;
        double coef = 1.0 / std::tgamma(md + 1.0);
        double psi1 = -kEulerGamma, psim = digamma(md + 1.0);
        double psia = digamma(a + md), psib = digamma(b + md);
        for (long n = 0; n < 100000; ++n) {
            const double term = coef * (lw - psi1 - psim + psia + psib);
            tail.add(term);
            if (n > 2 && std::fabs(term) <= tiny * std::fabs(tail.value())) break;
            coef *= (a + md + n) * (b + md + n) / ((n + 1.0) * (n + md + 1.0)) * w;
            psi1 += 1.0 / (n + 1.0);
            psim += 1.0 / (n + md + 1.0);
            psia += 1.0 / (a + md + n);
            psib += 1.0 / (b + md + n);
        }
        return pre1 * finite.value() + pre2 * tail.value();
    }
    const double md = static_cast<double>(-m);
    CompensatedSum finite;
    double t = 1.0;
    for (long n = 0; n < -m; ++n) {
        finite.add(t);
        t *= (a - md + n) * (b - md + n) / ((n + 1.0) * (1.0 - md + n)) * w;
    }
    const double pre1 = gamma_ratio({md, a + b - md}, {a, b}) * std::pow(w, -md);
    const double sign = ((-m) % 2 == 0) ? 1.0 : -1.0;
    const double pre2 = -sign * gamma_ratio({a + b - md}, {a - md, b - md});
    CompensatedSum tail;
    double coef = 1.0 / std::tgamma(md + 1.0);
    double psi1 = -kEulerGamma, psim = digamma(md + 1.0);
    double psia = digamma(a), psib = digamma(b);
    for (long n = 0; n < 100000; ++n) {
        const double term = coef * (lw - psi1 - psim + psia + psib);
        tail.add(term);
        if (n > 2 && std::fabs(term) <= tiny * std::fabs(tail.value())) break;
        coef *= (a + n) * (b + n) / ((n + 1.0) * (n + md + 1.0)) * w;
        psi1 += 1.0 / (n + 1.0);
        psim += 1.0 / (n + md + 1.0);
        psia += 1.0 / (a + n);
        psib += 1.0 / (b + n);
    }
    return pre1 * finite.value() + pre2 * tail.value();
}

// Levin u-transform of the partial sums of terms[0..n0+k], evaluated in extended precision.
wide levin_u(const std::vector<wide>& terms, long n0, long k)
{
    wide partial = 0;
    for (long n = 0; n < n0; ++n) partial += terms[n];
    wide numer = 0, denom = 0, binom = 1;
    for (long j = 0; j <= k; ++j) {
        const long n = n0 + j;
        partial += terms[n];
        wide scale = 1;
        const wide ratio = static_cast<wide>(n0 + j + 1) / static_cast<wide>(n0 + k + 1);
        for (long e = 0; e < k - 1; ++e) scale *= ratio;
        const wide omega = static_cast<wide>(n + 1) * terms[n];
        const wide weight = ((j % 2 == 0) ? binom : -binom) * scale / omega;
        numer += weight * partial;
        denom += weight;
        binom = binom * static_cast<wide>(k - j) / static_cast<wide>(j + 1);
    }
    return numer / denom;
}

}  // namespace

const char* error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Pole: return "PoleError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Branch: return "BranchError";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::RuleTooCoarse: return "RuleTooCoarse";
    case ErrorCode::NotADesign: return "NotADesign";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::Precondition: return "PreconditionError";
    case ErrorCode::Io: return "IoError";
    }
    return "Error";
}

void SeriesControl::validate() const
{
    if (!(rel_tol > 0.0)) fail(ErrorCode::Domain, "rel_tol must be positive");
    if (max_terms < 1) fail(ErrorCode::Domain, "max_terms must be at least 1");
    if (tail_window < 1) fail(ErrorCode::Domain, "tail_window must be at least 1");
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

double pochhammer(double a, long n)
{
    double p = 1.0;
    for (long j = 0; j < n; ++j) p *= a + static_cast<double>(j);
    return p;
}

double ln_gamma_ratio(const std::vector<double>& nums, const std::vector<double>& dens)
{
    std::vector<double> ns(nums), ds(dens);
    for (double x : ns) lgamma_abs(x);
    for (double x : ds) lgamma_abs(x);
    std::sort(ns.begin(), ns.end());
    std::sort(ds.begin(), ds.end());
    CompensatedSum acc;
    const std::size_t paired = std::min(ns.size(), ds.size());
    for (std::size_t i = 0; i < paired; ++i) {
        const double diff = ns[i] - ds[i];
        if (ds[i] > 0.0 && ns[i] > 0.0 && diff == std::floor(diff) && std::fabs(diff) <= 64.0) {
            const long k = static_cast<long>(diff);
            if (k >= 0)
                acc.add(std::log(std::fabs(pochhammer(ds[i], k))));
            else
                acc.add(-std::log(std::fabs(pochhammer(ns[i], -k))));
        } else {
            acc.add(lgamma_abs(ns[i]));
            acc.add(-lgamma_abs(ds[i]));
        }
    }
    for (std::size_t i = paired; i < ns.size(); ++i) acc.add(lgamma_abs(ns[i]));
    for (std::size_t i = paired; i < ds.size(); ++i) acc.add(-lgamma_abs(ds[i]));
    return acc.value();
}

double gamma_ratio(const std::vector<double>& nums, const std::vector<double>& dens)
{
    for (double x : nums)
        if (is_nonpositive_integer(x)) fail(ErrorCode::Pole, "Gamma pole at " + num(x));
    int sign = 1;
    for (double x : dens) {
        if (is_nonpositive_integer(x)) return 0.0;
        sign *= gamma_sign(x);
    }
    for (double x : nums) sign *= gamma_sign(x);
    return sign * std::exp(ln_gamma_ratio(nums, dens));
}

double rgamma(double x)
{
    if (is_nonpositive_integer(x)) return 0.0;
    return gamma_sign(x) * std::exp(-std::lgamma(x));
}

double digamma(double x)
{
    if (is_nonpositive_integer(x)) fail(ErrorCode::Pole, "digamma pole at " + num(x));
    if (x < 0.0) return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    double shift = 0.0;
    while (x < 8.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl)
{
    ctl.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        fail(ErrorCode::Domain, "2F1 arguments must be finite");
    if (b < a) std::swap(a, b);
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return terminating_2f1(a, b, c, z);
    if (is_nonpositive_integer(c)) fail(ErrorCode::Pole, "2F1 lower parameter " + num(c) + " is a pole");
    if (z > 1.0) fail(ErrorCode::Domain, "2F1 requires z <= 1, got " + num(z));
    if (z == 0.0) return 1.0;
    if (z == 1.0) {
        if (!(c - a - b > 0.0))
            fail(ErrorCode::Domain, "2F1 at z = 1 requires c - a - b > 0");
        return gamma_ratio({c, c - a - b}, {c - a, c - b});
    }
    if (z < -0.5) {
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a,c-b;c;z/(z-1)); the complement of z/(z-1) is 1/(1-z).
        double p = a, q = b;
        if (is_nonpositive_integer(c - a) && !is_nonpositive_integer(c - b)) std::swap(p, q);
        const double pre = std::pow(1.0 - z, -p);
        const double w = 1.0 / (1.0 - z);
        return pre * gauss_2f1_complement(p, c - q, c, w, ctl);
    }
    if (z <= 0.9) return series_2f1(a, b, c, z, ctl, ctl.max_terms);
    return gauss_2f1_complement(a, b, c, 1.0 - z, ctl);
}

double gauss_2f1_complement(double a, double b, double c, double w, const SeriesControl& ctl)
{
    ctl.validate();
    if (!(w >= 0.0)) fail(ErrorCode::Domain, "2F1 complement argument must be nonnegative");
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return terminating_2f1(a, b, c, 1.0 - w);
    if (is_nonpositive_integer(c)) fail(ErrorCode::Pole, "2F1 lower parameter " + num(c) + " is a pole");
    if (w == 0.0) return gauss_2f1(a, b, c, 1.0, ctl);
    if (w >= 0.1) return gauss_2f1(a, b, c, 1.0 - w, ctl);
    const double s = c - a - b;
    const double m = std::round(s);
    const double gap = std::fabs(s - m);
    if (gap <= 1e-12 * std::max(1.0, std::fabs(s))) return log_case_2f1(a, b, static_cast<long>(m), w);
    if (gap < 1e-3) return series_2f1(a, b, c, 1.0 - w, ctl, 10 * ctl.max_terms);
    const double first = gamma_ratio({c, s}, {c - a, c - b});
    const double second = gamma_ratio({c, -s}, {a, b});
    double value = 0.0;
    if (first != 0.0) value += first * gauss_2f1(a, b, 1.0 - s, w, ctl);
    if (second != 0.0) value += second * std::pow(w, s) * gauss_2f1(c - a, c - b, 1.0 + s, w, ctl);
    return value;
}

double pfq_terminating(const std::vector<double>& uppers, const std::vector<double>& lowers, double z)
{
    const long t = truncation_index(uppers);
    if (t == LONG_MAX) fail(ErrorCode::Domain, "pfq_terminating needs a nonpositive-integer upper parameter");
    if (pole_index(lowers) <= t) fail(ErrorCode::Pole, "lower parameter pole reached before truncation");
    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (long n = 0; n < t; ++n) {
        double ratio = z / (n + 1.0);
        for (double u : uppers) ratio *= u + n;
        for (double l : lowers) ratio /= l + n;
        term *= ratio;
        sum.add(term);
    }
    return sum.value();
}

static void check_kdf_poles(const KdFParams& p, long tj, long tx, long ty)
{
    const long txy = (tx == LONG_MAX || ty == LONG_MAX) ? LONG_MAX : tx + ty;
    auto reached = [](long pole, long limit) { return pole != LONG_MAX && pole <= limit; };
    if (reached(pole_index(p.lower_joint), std::min(tj, txy)))
        fail(ErrorCode::Pole, "joint lower parameter pole reached before truncation");
    if (reached(pole_index(p.lower_x), std::min(tj, tx)))
        fail(ErrorCode::Pole, "x-block lower parameter pole reached before truncation");
    if (reached(pole_index(p.lower_y), std::min(tj, ty)))
        fail(ErrorCode::Pole, "y-block lower parameter pole reached before truncation");
}

void KdFParams::validate() const
{
    check_kdf_poles(*this, truncation_index(upper_joint), truncation_index(upper_x), truncation_index(upper_y));
}

// F^{1:2;2}_{1:1;1} with gamma > beta > 0 as the Euler-type integral
// (1/B(beta,gamma-beta)) int_0^1 t^(beta-1) (1-t)^(gamma-beta-1) 2F1(x t) 2F1(y t) dt.
static std::optional<double> kdf_integral_form(const KdFParams& p, double x, double y, double tol)
{
    if (p.upper_joint.size() != 1 || p.lower_joint.size() != 1 || p.upper_x.size() != 2 || p.lower_x.size() != 1 ||
        p.upper_y.size() != 2 || p.lower_y.size() != 1)
        return std::nullopt;
    const double b = p.upper_joint[0], g = p.lower_joint[0];
    if (!(b > 0.0) || !(g > b) || !(x > 0.0) || !(y > 0.0) || x > 1.0 || y > 1.0) return std::nullopt;
    auto block = [](const std::vector<double>& up, const std::vector<double>& lo, double arg, double from_right) {
        // arg * t with 1 - arg * t = (1 - arg) + arg * (1 - t)
        const double w = (1.0 - arg) + arg * from_right;
        if (w < 0.1) return gauss_2f1_complement(up[0], up[1], lo[0], w);
        return gauss_2f1(up[0], up[1], lo[0], 1.0 - w);
    };
    const double norm = gamma_ratio({g}, {b, g - b});
    double prev = 0.0;
    for (int level = 24; level <= 768; level *= 2) {
        const TanhSinhRule rule = tanh_sinh(level, 0.0, 1.0);
        CompensatedSum sum;
        try {
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = rule.from_left[i], r = rule.from_right[i];
                const double f = std::pow(t, b - 1.0) * std::pow(r, g - b - 1.0) * block(p.upper_x, p.lower_x, x, r) *
                                 block(p.upper_y, p.lower_y, y, r);
                sum.add(rule.weights[i] * f);
            }
        } catch (const Error&) {
            return std::nullopt;
        }
        const double cur = norm * sum.value();
        if (!std::isfinite(cur)) return std::nullopt;
        if (level > 24 && std::fabs(cur - prev) <= tol * std::fabs(cur)) return cur;
        prev = cur;
    }
    return std::nullopt;
}

double kampe_de_feriet(const KdFParams& p, double x, double y, const SeriesControl& ctl)
{
    return kampe_de_feriet(p, x, y, ctl, nullptr);
}

double kampe_de_feriet(const KdFParams& p, double x, double y, const SeriesControl& ctl, KdFMethod* method)
{
    KdFMethod unused = KdFMethod::Series;
    KdFMethod& how = method ? *method : unused;
    ctl.validate();
    long tj = truncation_index(p.upper_joint);
    long tx = (x == 0.0) ? 0 : truncation_index(p.upper_x);
    long ty = (y == 0.0) ? 0 : truncation_index(p.upper_y);
    const long txy = (tx == LONG_MAX || ty == LONG_MAX) ? LONG_MAX : tx + ty;
    check_kdf_poles(p, tj, tx, ty);

    const long last = std::min(tj, txy);
    const bool finite = last != LONG_MAX;
    const long cap = finite ? last : std::min<long>(ctl.max_terms, 4000);

    std::vector<wide> xs, ys, js, diag;
    xs.push_back(1);
    ys.push_back(1);
    js.push_back(1);
    auto block_ratio = [](const std::vector<double>& up, const std::vector<double>& lo, long n) {
        wide r = 1;
        for (double u : up) r *= static_cast<wide>(u) + n;
        for (double l : lo) r /= static_cast<wide>(l) + n;
        return r;
    };

    wide total = 0;
    int quiet = 0;
    for (long n = 0; n <= cap; ++n) {
        if (n > 0) {
            const long k = n - 1;
            xs.push_back(k >= tx ? 0 : xs[k] * block_ratio(p.upper_x, p.lower_x, k) * static_cast<wide>(x) / (k + 1));
            ys.push_back(k >= ty ? 0 : ys[k] * block_ratio(p.upper_y, p.lower_y, k) * static_cast<wide>(y) / (k + 1));
            js.push_back(k >= tj ? 0 : js[k] * block_ratio(p.upper_joint, p.lower_joint, k));
        }
        wide s = 0;
        for (long m = std::max(0L, n - std::min(n, ty)); m <= std::min(n, tx); ++m) s += xs[m] * ys[n - m];
        s *= js[n];
        diag.push_back(s);
        total += s;
        if (!finite) {
            const double sd = static_cast<double>(s);
            if (!std::isfinite(sd)) break;
            if (std::fabs(sd) <= ctl.rel_tol * std::fabs(static_cast<double>(total)) + ctl.abs_tol) {
                if (++quiet >= ctl.tail_window) {
                    how = KdFMethod::Series;
                    return static_cast<double>(total);
                }
            } else {
                quiet = 0;
            }
        }
    }
    if (finite) {
        how = KdFMethod::Terminating;
        return static_cast<double>(total);
    }

    // Slowly decaying anti-diagonal tail: Levin u-transform of the anti-diagonal
    // partial sums, keeping the pair of consecutive orders that agree best.
    bool usable = diag.size() > 50;
    for (std::size_t i = 0; usable && i < 50; ++i)
        if (diag[i] == 0 || !std::isfinite(static_cast<double>(diag[i]))) usable = false;
    const double accept = std::max(100.0 * ctl.rel_tol, 1e-10);
    if (usable) {
        double best = 0.0, best_err = HUGE_VAL;
        double prev = static_cast<double>(levin_u(diag, 0, 16));
        for (long k = 20; k <= 44; k += 4) {
            const double cur = static_cast<double>(levin_u(diag, 0, k));
            const double e = std::fabs(cur - prev);
            if (std::isfinite(cur) && e < best_err) {
                best_err = e;
                best = cur;
            }
            prev = cur;
        }
        if (best_err <= 0.01 * accept * std::fabs(best)) {
            how = KdFMethod::Levin;
            return best;
        }
    }
    if (const auto v = kdf_integral_form(p, x, y, accept)) {
        how = KdFMethod::IntegralForm;
        return *v;
    }
    fail(ErrorCode::NonConvergence, "Kampe de Feriet series did not converge at (" + num(x) + "," + num(y) + ")");
}

double gegenbauer_p(long n, int d, double t)
{
    if (n == 0) return 1.0;
    double prev = 1.0, cur = t;
    for (long k = 1; k < n; ++k) {
        const double next = ((2.0 * k + d - 1.0) * t * cur - k * prev) / (k + d - 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

void gegenbauer_all(long nmax, int d, double t, double* out)
{
    out[0] = 1.0;
    if (nmax == 0) return;
    out[1] = t;
    for (long k = 1; k < nmax; ++k)
        out[k + 1] = ((2.0 * k + d - 1.0) * t * out[k] - k * out[k - 1]) / (k + d - 1.0);
}

double z_dim(int d, long n)
{
    if (d < 2) fail(ErrorCode::Domain, "z_dim requires d >= 2");
    double binom = 1.0;
    for (int j = 1; j <= d - 2; ++j) binom *= (static_cast<double>(n) + j) / j;
    const double z = (2.0 * n + d - 1.0) / (d - 1.0) * binom;
    return z < 4.5e15 ? std::round(z) : z;
}

double richardson_power_tail(const std::vector<double>& partial_sums, double q, double* err)
{
    std::vector<double> row(partial_sums);
    double correction = 0.0;
    for (std::size_t level = 0; row.size() > 1; ++level) {
        const double f = std::pow(2.0, q + static_cast<double>(level));
        std::vector<double> next(row.size() - 1);
        for (std::size_t j = 0; j + 1 < row.size(); ++j) next[j] = (f * row[j + 1] - row[j]) / (f - 1.0);
        correction = std::fabs(next.back() - row.back());
        row.swap(next);
    }
    if (err) *err = correction;
    return row.front();
}

}  // namespace sphk
