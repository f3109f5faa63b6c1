#include "discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "errors.hpp"
#include "quadrature.hpp"

namespace sphk {

namespace {

constexpr std::size_t kChunk = 1024;

void check_dimension(const PointSet& ps, int d)
{
    if (ps.dim() != d)
        fail(ErrorCode::DimensionMismatch, "point set lives on S^" + std::to_string(ps.dim()) + " but S^" +
                                               std::to_string(d) + " was expected");
}

bool is_integer(double x) { return std::fabs(x - std::round(x)) < kBranchTol; }

/// Sums f(i) for i in [0, n) in fixed-size chunks on all cores; chunk results are
/// combined in index order so the value does not depend on the thread count.
template <class Reduce>
double parallel_chunks(std::size_t n, const std::function<double(std::size_t, std::size_t)>& chunk_value, Reduce reduce)
{
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> part(chunks, 0.0);
    std::vector<std::exception_ptr> errors(chunks);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, chunks);
    auto work = [&](std::size_t w) {
        for (std::size_t c = w; c < chunks; c += workers) {
            try {
                part[c] = chunk_value(c * kChunk, std::min(n, (c + 1) * kChunk));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
    if (workers > 0) work(0);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return reduce(part);
}

class CapIntegrand {
public:
    CapIntegrand(const PointSet& ps, double beta, double p, const SphereCapRule& rule, const SeriesControl& ctl)
        : ps_(ps), beta_(beta), p_(p), d_(ps.dim()), n_(ps.size()), ctl_(ctl),
          integer_(is_integer(beta)), closed_beta1_(d_ == 2 && is_integer(beta) && std::round(beta) == 1.0 && p == 2.0)
    {
        if (integer_) {
            gauss_ = rule.t_rule;
            if (gauss_.nodes.empty()) fail(ErrorCode::Domain, "the t rule has no nodes");
        } else {
            const int level = std::max<int>(8, static_cast<int>(rule.t_rule.nodes.size()));
            ts_ = tanh_sinh(level, 0.0, 1.0);
        }
    }

    /// Integral over t of |Delta(z, t)|^p, or its maximum when p is infinite.
    double at_node(const double* z) const
    {
        std::vector<double> a(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const double* x = ps_.point(j);
            double s = 0.0;
            for (int k = 0; k <= d_; ++k) s += x[k] * z[k];
            a[j] = std::clamp(s, -1.0, 1.0);
        }
        std::sort(a.begin(), a.end(), std::greater<double>());
        const bool sup = std::isinf(p_);
        CompensatedSum total;
        double peak = 0.0;
        for (std::size_t k = 0; k <= n_; ++k) {
            const double upper = (k == 0) ? 1.0 : a[k - 1];
            const double lower = (k == n_) ? -1.0 : a[k];
            if (!(upper > lower)) continue;
            if (sup) {
                peak = std::max(peak, panel_max(a, k, lower, upper));
            } else if (closed_beta1_) {
                const double c = static_cast<double>(k) / n_;
                const double ub = c - 0.5 * (1.0 - upper), ua = c - 0.5 * (1.0 - lower);
                total.add((2.0 / 3.0) * (ub * ub * ub - ua * ua * ua));
            } else {
                total.add(panel_integral(a, k, lower, upper));
            }
        }
        return sup ? peak : total.value();
    }

private:
    // Delta at t = upper - r for the k largest abscissae active on the panel.
    double delta(const std::vector<double>& a, std::size_t k, double upper, double r) const
    {
        const double t = upper - r;
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double diff = (a[i] - upper) + r;
            s += (beta_ == 1.0) ? 1.0 : std::pow(diff, beta_ - 1.0);
        }
        return s / n_ - truncated_power_cap_integral(d_, beta_, t, ctl_);
    }

    double panel_integral(const std::vector<double>& a, std::size_t k, double lower, double upper) const
    {
        const double len = upper - lower;
        CompensatedSum acc;
        if (integer_) {
            for (std::size_t i = 0; i < gauss_.nodes.size(); ++i) {
                const double r = 0.5 * len * (1.0 - gauss_.nodes[i]);
                acc.add(0.5 * len * gauss_.weights[i] * std::pow(std::fabs(delta(a, k, upper, r)), p_));
            }
        } else {
            for (std::size_t i = 0; i < ts_.nodes.size(); ++i) {
                const double r = len * ts_.from_right[i];
                acc.add(len * ts_.weights[i] * std::pow(std::fabs(delta(a, k, upper, r)), p_));
            }
        }
        return acc.value();
    }

    double panel_max(const std::vector<double>& a, std::size_t k, double lower, double upper) const
    {
        const double len = upper - lower;
        double m = std::max(std::fabs(delta(a, k, upper, 0.0)), std::fabs(delta(a, k, upper, len)));
        if (integer_) {
            for (double x : gauss_.nodes) m = std::max(m, std::fabs(delta(a, k, upper, 0.5 * len * (1.0 - x))));
        } else {
            for (double r : ts_.from_right) m = std::max(m, std::fabs(delta(a, k, upper, len * r)));
        }
        return m;
    }

    const PointSet& ps_;
    double beta_;
    double p_;
    int d_;
    std::size_t n_;
    SeriesControl ctl_;
    bool integer_;
    bool closed_beta1_;
    Rule1D gauss_;
    TanhSinhRule ts_;
};

}  // namespace

double truncated_power_cap_integral(int d, double beta, double t, const SeriesControl& ctl)
{
    if (d < 2) fail(ErrorCode::Domain, "sphere dimension d must be at least 2");
    if (!(beta > 0.0)) fail(ErrorCode::Domain, "the cap integral requires beta > 0");
    if (!(std::fabs(t) <= 1.0 + 1e-12)) fail(ErrorCode::Domain, "cap height t must lie in [-1, 1]");
    t = std::clamp(t, -1.0, 1.0);
    if (t == 1.0) return 0.0;
    const double dd = d;
    const double pref = std::pow(2.0, 0.5 * dd - 1.0) * gamma_ratio({0.5 * (dd + 1.0), beta}, {beta + 0.5 * dd}) /
                        std::sqrt(std::numbers::pi);
    const double w = 1.0 - t;
    const double f = (d == 2) ? 1.0 : gauss_2f1(1.0 - 0.5 * dd, 0.5 * dd, beta + 0.5 * dd, 0.5 * w, ctl);
    return pref * std::pow(w, beta + 0.5 * dd - 1.0) * f;
}

double local_discrepancy(const PointSet& ps, double beta, const std::vector<double>& z, double t, bool* perturbed,
                         const SeriesControl& ctl)
{
    if (!(beta > 0.0)) fail(ErrorCode::Domain, "beta must be positive");
    if (z.size() != static_cast<std::size_t>(ps.dim()) + 1)
        fail(ErrorCode::DimensionMismatch, "cap centre has the wrong number of coordinates");
    if (!(std::fabs(t) <= 1.0 + 1e-12)) fail(ErrorCode::Domain, "cap height t must lie in [-1, 1]");
    if (perturbed) *perturbed = false;
    const bool indicator = std::fabs(beta - 1.0) < kBranchTol;
    if (beta < 1.0 && !indicator) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const double* x = ps.point(j);
            double s = 0.0;
            for (int k = 0; k <= ps.dim(); ++k) s += x[k] * z[k];
            if (s == t) {
                t += 1e-15;
                if (perturbed) *perturbed = true;
                break;
            }
        }
    }
    CompensatedSum acc;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const double* x = ps.point(j);
        double s = 0.0;
        for (int k = 0; k <= ps.dim(); ++k) s += x[k] * z[k];
        const double diff = s - t;
        if (indicator) {
            acc.add(diff > 0.0 ? 1.0 : (diff == 0.0 ? 0.5 : 0.0));
        } else if (diff > 0.0) {
            acc.add(std::pow(diff, beta - 1.0));
        }
    }
    return acc.value() / static_cast<double>(ps.size()) - truncated_power_cap_integral(ps.dim(), beta, t, ctl);
}

double gram_mean(const PointSet& ps, const KernelEvaluator& ev)
{
    check_dimension(ps, ev.d());
    const std::size_t n = ps.size();
    CompensatedSum off;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) off.add(ev.eval(ps.inner(j, k)).value);
    const double nn = static_cast<double>(n);
    return (nn * ev.diag() + 2.0 * off.value()) / (nn * nn);
}

double mean_distance_power(const PointSet& ps, double lambda)
{
    const std::size_t n = ps.size();
    CompensatedSum acc;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const double dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * ps.inner(j, k)));
            acc.add(std::pow(dist, lambda));
        }
    const double nn = static_cast<double>(n);
    const double diag = (lambda == 0.0) ? nn : 0.0;
    return (diag + 2.0 * acc.value()) / (nn * nn);
}

DiscrepancyReport wce_kernel(const PointSet& ps, const SmoothnessParam& sp, const SeriesControl& ctl)
{
    const KernelEvaluator ev(ps.dim(), sp, ctl);
    DiscrepancyReport r;
    r.n_points = ps.size();
    r.d = ps.dim();
    r.beta = ev.param().beta;
    r.gram_mean = gram_mean(ps, ev);
    r.kernel_mean = ev.mean();
    double w2 = r.gram_mean - r.kernel_mean;
    if (w2 < -1e-10)
        fail(ErrorCode::PositivityViolation, "squared worst-case error is negative beyond round-off");
    w2 = std::max(w2, 0.0);
    r.wce_kernel = std::sqrt(w2);
    return r;
}

double lp_discrepancy(const PointSet& ps, double beta, double p, const SphereCapRule& rule, const SeriesControl& ctl)
{
    check_dimension(ps, rule.d);
    if (!(beta > 0.0)) fail(ErrorCode::Domain, "beta must be positive");
    if (!(p >= 1.0)) fail(ErrorCode::Domain, "p must be at least 1");
    if (beta < 1.0 && !(p < 1.0 / (1.0 - beta)))
        fail(ErrorCode::Domain, "for beta < 1 the exponent p must be below 1/(1-beta)");
    const CapIntegrand integrand(ps, beta, p, rule, ctl);
    const bool sup = std::isinf(p);
    auto chunk = [&](std::size_t lo, std::size_t hi) {
        if (sup) {
            double m = 0.0;
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, integrand.at_node(rule.z_point(i)));
            return m;
        }
        CompensatedSum acc;
        for (std::size_t i = lo; i < hi; ++i) acc.add(rule.z_weights[i] * integrand.at_node(rule.z_point(i)));
        return acc.value();
    };
    if (sup)
        return parallel_chunks(rule.z_count(), chunk, [](const std::vector<double>& v) {
            return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
        });
    const double integral = parallel_chunks(rule.z_count(), chunk, [](const std::vector<double>& v) {
        CompensatedSum acc;
        for (double x : v) acc.add(x);
        return acc.value();
    });
    return std::pow(std::max(integral, 0.0), 1.0 / p);
}

double wce_quadrature(const PointSet& ps, double beta, const SphereCapRule& rule, double tol, const SeriesControl& ctl)
{
    const double coarse = lp_discrepancy(ps, beta, 2.0, rule, ctl);
    if (!(tol > 0.0)) return coarse;
    const double fine = lp_discrepancy(ps, beta, 2.0, rule.refined(), ctl);
    const double gap = std::fabs(fine * fine - coarse * coarse);
    if (gap > tol)
        fail(ErrorCode::RuleTooCoarse, "cap quadrature changed by " + std::to_string(gap) +
                                           " under refinement, above the tolerance " + std::to_string(tol));
    return fine;
}

double cap_discrepancy_beta1_exact(const PointSet& ps)
{
    if (ps.dim() != 2) fail(ErrorCode::Domain, "the exact cap discrepancy path is implemented for S^2");
    const std::size_t n = ps.size();
    // In a frame with pole p and equator direction e, a point with coordinates
    // (v, sqrt(1-v^2)) and a node (u, phi) have inner product u v + sqrt(1-u^2) sqrt(1-v^2) cos(phi).
    const Rule1D left = gauss_legendre(4, -1.0, 0.0);
    const Rule1D right = gauss_legendre(4, 0.0, 1.0);
    constexpr int n_phi = 8;
    auto pair_integral = [&](double v) {
        const double sv = std::sqrt(std::max(0.0, 1.0 - v * v));
        CompensatedSum acc;
        for (const Rule1D* r : {&left, &right})
            for (std::size_t i = 0; i < r->nodes.size(); ++i) {
                const double u = r->nodes[i];
                const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
                for (int k = 0; k < n_phi; ++k) {
                    const double c = std::cos(2.0 * std::numbers::pi * k / n_phi);
                    const double aj = u * v + su * sv * c;
                    const double ak = -u * v + su * sv * c;
                    const double h = std::min(aj, ak) - 1.0 + 0.25 * (1.0 - aj) * (1.0 - aj) +
                                     0.25 * (1.0 - ak) * (1.0 - ak) + 2.0 / 3.0;
                    acc.add(r->weights[i] * h / n_phi);
                }
            }
        return 0.5 * acc.value();
    };
    CompensatedSum total;
    const double self = pair_integral(0.0 /* coincident pair: any frame with v = 0 */);
    total.add(static_cast<double>(n) * self);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const double half_dist = 0.5 * std::sqrt(std::max(0.0, 2.0 - 2.0 * ps.inner(j, k)));
            total.add(2.0 * pair_integral(half_dist));
        }
    const double nn = static_cast<double>(n);
    return total.value() / (nn * nn);
}

IdentityCheck stolarsky_check(const PointSet& ps, const SmoothnessParam& sp_in, const SphereCapRule& rule, double tol,
                              const SeriesControl& ctl)
{
    const SmoothnessParam sp = SmoothnessParam::classify(sp_in.beta);
    const DiscrepancyReport rep = wce_kernel(ps, sp, ctl);
    IdentityCheck c;
    c.rhs = rep.gram_mean - rep.kernel_mean;
    const bool classical = sp.branch == Branch::Integer && sp.M == 1;
    if (classical && ps.dim() == 2) {
        c.lhs = cap_discrepancy_beta1_exact(ps);
        c.method = "exact";
    } else {
        const double w = wce_quadrature(ps, sp.beta, rule, tol, ctl);
        c.lhs = w * w;
        c.method = "quadrature";
    }
    c.gap = std::fabs(c.lhs - c.rhs);
    if (classical) {
        c.has_classical = true;
        c.classical_lhs = mean_distance_power(ps, 1.0) + c.lhs / c_d_const(ps.dim());
        c.classical_rhs = v_lambda(ps.dim(), 1.0);
    }
    return c;
}

DesignCertificate design_residual(const PointSet& ps, int t_max, double tol)
{
    if (t_max < 1) fail(ErrorCode::Domain, "t_max must be at least 1");
    if (!(tol > 0.0)) fail(ErrorCode::Domain, "design tolerance must be positive");
    const std::size_t n = ps.size();
    std::vector<CompensatedSum> acc(t_max + 1);
    std::vector<double> pk(t_max + 1);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            gegenbauer_all(t_max, ps.dim(), ps.inner(j, k), pk.data());
            for (int m = 1; m <= t_max; ++m) acc[m].add(pk[m]);
        }
    DesignCertificate cert;
    cert.strength_tested = t_max;
    cert.tolerance = tol;
    cert.is_design = true;
    const double nn = static_cast<double>(n);
    for (int m = 1; m <= t_max; ++m) {
        const double r = std::max(0.0, (nn + 2.0 * acc[m].value()) / (nn * nn));
        cert.residuals.push_back(r);
        if (!(r < tol)) cert.is_design = false;
    }
    return cert;
}

IdentityCheck tdesign_identity_check(const PointSet& ps, int M, const SeriesControl& ctl, double design_tol)
{
    if (M < 1) fail(ErrorCode::Domain, "M must be a positive integer");
    if (M >= 2) {
        const DesignCertificate cert = design_residual(ps, M - 1, design_tol);
        if (!cert.is_design)
            fail(ErrorCode::NotADesign, "the point set is not a spherical " + std::to_string(M - 1) + "-design");
    }
    const SmoothnessParam sp = SmoothnessParam::classify(static_cast<double>(M));
    const DiscrepancyReport rep = wce_kernel(ps, sp, ctl);
    const double lam = 2.0 * M - 1.0;
    IdentityCheck c;
    c.lhs = rep.wce_kernel * rep.wce_kernel;
    c.rhs = ((M - 1) % 2 == 0 ? 1.0 : -1.0) * c_beta_const(ps.dim(), sp) *
            (v_lambda(ps.dim(), lam) - mean_distance_power(ps, lam));
    c.gap = std::fabs(c.lhs - c.rhs);
    c.method = "gram";
    return c;
}

}  // namespace sphk
