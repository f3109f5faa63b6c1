#include <cmath>
#include <numbers>

#include "doctest.h"
#include "errors.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "specfun.hpp"
#include "spheregeom.hpp"

using namespace sphk;

namespace {

double rule_sum(const SphereCapRule& r, const std::function<double(const double*)>& f)
{
    double s = 0.0;
    for (std::size_t i = 0; i < r.z_count(); ++i) s += r.z_weights[i] * f(r.z_point(i));
    return s;
}

}  // namespace

TEST_CASE("product rule exactness")
{
    const SphereCapRule r = product_rule_s2(6, 12);
    CHECK(std::fabs(rule_sum(r, [](const double*) { return 1.0; }) - 1.0) < 4e-15);
    CHECK(std::fabs(rule_sum(r, [](const double* z) { return z[2]; })) < 1e-14);
    CHECK(std::fabs(rule_sum(r, [](const double* z) { return gegenbauer_p(10, 2, z[2]); })) < 1e-13);

    const SphereCapRule big = product_rule_s2(16, 34);
    const double p[3] = {0.48, -0.6, 0.64};
    for (long n = 1; n <= 31; ++n) {
        const double s = rule_sum(big, [&](const double* z) {
            return z_dim(2, n) * gegenbauer_p(n, 2, z[0] * p[0] + z[1] * p[1] + z[2] * p[2]);
        });
        CHECK(std::fabs(s) < 1e-13);
    }
    CHECK_THROWS_AS(product_rule_s2(1, 12), Error);
}

TEST_CASE("cap rule composition and refinement")
{
    const SphereCapRule r = sphere_cap_rule(8, 16, 5);
    CHECK(r.z_count() == 128);
    CHECK(r.t_rule.nodes.size() == 5);
    const SphereCapRule f = r.refined();
    CHECK(f.n_theta == 16);
    CHECK(f.n_phi == 32);
    CHECK(f.t_rule.nodes.size() == 10);
    double s = 0.0;
    for (double w : gauss_legendre_t(7).weights) s += w;
    CHECK(std::fabs(s - 2.0) < 1e-14);
}

TEST_CASE("kernel definition quadrature")
{
    CHECK(std::fabs(kernel_def_quadrature(2, 1.0, 0.0).value - (1.0 - std::sqrt(2.0) / 4.0)) < 1e-8);
    CHECK(std::fabs(kernel_def_quadrature(2, 1.0, 1.0).value - 1.0) < 1e-8);
    const KernelEvaluator ev(2, 2.0);
    CHECK(std::fabs(kernel_def_quadrature(2, 2.0, 0.5).value - ev.eval(0.5).value) < 1e-6);
    for (int d : {3, 4})
        for (double beta : {0.8, 1.5, 2.5}) {
            const KernelEvaluator e(d, beta);
            for (double t : {-0.7, 0.2, 0.9}) {
                const DefQuadratureResult q = kernel_def_quadrature(d, beta, t);
                CHECK(std::fabs(q.value - e.eval(t).value) < 1e-8 * std::fabs(q.value));
            }
        }
    CHECK_THROWS_AS(kernel_def_quadrature(2, 0.5, 0.0), Error);
    CHECK_THROWS_AS(kernel_def_quadrature(2, 1.0, 1.5), Error);
}

TEST_CASE("kernel definition quadrature refinement")
{
    try {
        kernel_def_quadrature(2, 0.8, 0.3, 8, 1e-15, 16);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RuleTooCoarse);
    }
}

TEST_CASE("Monte Carlo pair integrals")
{
    const McEstimate one = mc_pair_integral(2, [](double) { return 1.0; }, 1000, 3);
    CHECK(one.mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(one.std_error == 0.0);

    const McEstimate dist = mc_pair_integral(2, [](double t) { return std::sqrt(2.0 - 2.0 * t); }, 1000000, 1);
    CHECK(std::fabs(dist.mean - 4.0 / 3.0) < 3.0 * dist.std_error);

    const KernelEvaluator ev(3, 1.0);
    const McEstimate k = mc_pair_integral(3, [&](double t) { return ev.eval(t).value; }, 1000000, 2);
    CHECK(std::fabs(k.mean - ev.mean()) < 3.0 * k.std_error);

    const McEstimate a = mc_pair_integral(2, [](double t) { return t * t; }, 5000, 17);
    const McEstimate b = mc_pair_integral(2, [](double t) { return t * t; }, 5000, 17);
    CHECK(a.mean == b.mean);
    const McEstimate c = mc_pair_integral(2, [](double t) { return t * t; }, 20000, 17);
    CHECK(std::fabs(a.std_error / c.std_error - 2.0) < 0.4);
}

TEST_CASE("zonal mean")
{
    CHECK(std::fabs(zonal_mean(2, [](double t) { return t * t; }) - 1.0 / 3.0) < 1e-14);
    CHECK(std::fabs(zonal_mean(3, [](double t) { return t * t; }) - 0.25) < 1e-14);
    for (double beta : {1.0, 1.5, 2.0, 3.0}) {
        const KernelEvaluator ev(2, beta);
        CHECK(std::fabs(zonal_mean(2, [&](double t) { return ev.eval(t).value; }) - ev.mean()) < 1e-8);
    }
}
