#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "kernel.hpp"
#include "spheregeom.hpp"

namespace sphk {

SphereCapRule product_rule_s2(int n_theta, int n_phi)
{
    if (n_theta < 2 || n_phi < 4) fail(ErrorCode::Domain, "product rule needs n_theta >= 2 and n_phi >= 4");
    SphereCapRule rule;
    rule.d = 2;
    rule.n_theta = n_theta;
    rule.n_phi = n_phi;
    const Rule1D gl = gauss_legendre(n_theta);
    rule.z_points.reserve(3 * static_cast<std::size_t>(n_theta) * n_phi);
    rule.z_weights.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double c = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, (1.0 - c) * (1.0 + c)));
        for (int k = 0; k < n_phi; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / n_phi;
            rule.z_points.insert(rule.z_points.end(), {s * std::cos(phi), s * std::sin(phi), c});
            rule.z_weights.push_back(0.5 * gl.weights[i] / n_phi);
        }
    }
    return rule;
}

Rule1D gauss_legendre_t(int n)
{
    return gauss_legendre(n);
}

SphereCapRule sphere_cap_rule(int n_theta, int n_phi, int n_t)
{
    SphereCapRule rule = product_rule_s2(n_theta, n_phi);
    rule.t_rule = gauss_legendre_t(n_t);
    return rule;
}

SphereCapRule SphereCapRule::refined() const
{
    return sphere_cap_rule(2 * n_theta, 2 * n_phi, 2 * static_cast<int>(t_rule.nodes.size()));
}

namespace {

double def_integral(int d, double beta, double inner, int level, const SeriesControl& ctl)
{
    const double z = 0.5 * (1.0 - inner);
    const double v = std::sqrt(z);
    const double sv = std::sqrt(0.5 * (1.0 + inner));
    const double dd = d;
    const TanhSinhRule phi_rule = tanh_sinh(level, 0.0, std::numbers::pi);

    auto inner_sphere = [&](double u, double one_minus_u2) {
        const double s = std::sqrt(one_minus_u2) * sv;
        CompensatedSum acc;
        for (std::size_t k = 0; k < phi_rule.nodes.size(); ++k) {
            const double phi = phi_rule.nodes[k];
            const double sphi = std::sin(phi);
            const double tau = std::cos(phi);
            const double a = std::clamp(u * v + s * tau, -1.0, 1.0);
            const double b = std::clamp(-u * v + s * tau, -1.0, 1.0);
            const double jac = (d == 2) ? 1.0 : std::pow(sphi, dd - 2.0);
            acc.add(phi_rule.weights[k] * jac * h_beta(a, b, beta, ctl));
        }
        return omega_ratio(dd - 1.0) * acc.value();
    };

    CompensatedSum total;
    auto panel = [&](double lo, double hi) {
        if (hi <= lo) return;
        const TanhSinhRule ur = tanh_sinh(level, lo, hi);
        for (std::size_t i = 0; i < ur.nodes.size(); ++i) {
            const double u = ur.nodes[i];
            // 1 - u^2 from the distance to the right end when that end is u = 1
            const double r = (hi == 1.0) ? ur.from_right[i] : 1.0 - u;
            const double one_minus_u2 = r * (2.0 - r);
            const double w = (d == 2) ? 1.0 : std::pow(one_minus_u2, 0.5 * dd - 1.0);
            total.add(ur.weights[i] * w * inner_sphere(u, one_minus_u2));
        }
    };
    if (v > 0.0 && v < 1.0) {
        panel(0.0, v);
        panel(v, 1.0);
    } else {
        panel(0.0, 1.0);
    }
    return 2.0 * omega_ratio(dd) * total.value();
}

}  // namespace

DefQuadratureResult kernel_def_quadrature(int d, double beta, double inner, int resolution, double tol, int max_resolution)
{
    if (d < 2) fail(ErrorCode::Domain, "sphere dimension d must be at least 2");
    if (!(beta > 0.5)) fail(ErrorCode::Domain, "beta must exceed 1/2");
    if (!(std::fabs(inner) <= 1.0)) fail(ErrorCode::Domain, "inner product must lie in [-1, 1]");
    if (resolution < 4) fail(ErrorCode::Domain, "resolution must be at least 4");
    if (!(tol > 0.0)) fail(ErrorCode::Domain, "tolerance must be positive");
    const SeriesControl ctl;
    DefQuadratureResult res;
    double prev = def_integral(d, beta, inner, resolution, ctl);
    for (int level = 2 * resolution; level <= max_resolution; level *= 2) {
        const double cur = def_integral(d, beta, inner, level, ctl);
        const double gap = std::fabs(cur - prev);
        res.value = cur;
        res.error_estimate = gap;
        res.resolution = level;
        if (gap <= 10.0 * tol * std::max(1.0, std::fabs(cur))) return res;
        prev = cur;
    }
    fail(ErrorCode::RuleTooCoarse, "kernel definition quadrature did not reach the requested tolerance (last gap " +
                                       std::to_string(res.error_estimate) + ")");
}

McEstimate mc_pair_integral(int d, const std::function<double(double)>& f, long n, std::uint64_t seed)
{
    if (d < 1) fail(ErrorCode::Domain, "sphere dimension must be at least 1");
    if (n < 2) fail(ErrorCode::Domain, "Monte Carlo needs at least two samples");
    SplitMix64 rng(seed);
    std::vector<double> x(d + 1), y(d + 1);
    auto draw = [&](std::vector<double>& p) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& c : p) {
                c = rng.gaussian();
                norm2 += c * c;
            }
        } while (norm2 < 1e-300);
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : p) c *= inv;
    };
    double mean = 0.0, m2 = 0.0;
    for (long i = 0; i < n; ++i) {
        draw(x);
        draw(y);
        double dot = 0.0;
        for (int k = 0; k <= d; ++k) dot += x[k] * y[k];
        const double val = f(std::clamp(dot, -1.0, 1.0));
        const double delta = val - mean;
        mean += delta / (i + 1.0);
        m2 += delta * (val - mean);
    }
    McEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(std::max(0.0, m2 / (n - 1.0)) / n);
    est.n_samples = n;
    est.seed = seed;
    return est;
}

double zonal_mean(int d, const std::function<double(double)>& f, double tol)
{
    if (d < 2) fail(ErrorCode::Domain, "sphere dimension d must be at least 2");
    const double dd = d;
    auto eval = [&](int level) {
        const TanhSinhRule rule = tanh_sinh(level, 0.0, std::numbers::pi);
        CompensatedSum acc;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double th = rule.nodes[i];
            const double sh = std::sin(0.5 * th);
            const double t = 1.0 - 2.0 * sh * sh;
            acc.add(rule.weights[i] * std::pow(std::sin(th), dd - 1.0) * f(t));
        }
        return omega_ratio(dd) * acc.value();
    };
    double prev = eval(16);
    for (int level = 32; level <= 4096; level *= 2) {
        const double cur = eval(level);
        if (std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    fail(ErrorCode::NonConvergence, "zonal mean quadrature did not converge");
}

}  // namespace sphk
