#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "discrepancy.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "spheregeom.hpp"

using namespace sphk;

namespace {

PointSet single(double x, double y, double z) { return PointSet(2, {x, y, z}); }

PointSet rotated(const PointSet& ps, double a, double b, double c)
{
    const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b), cc = std::cos(c), sc = std::sin(c);
    const double r[9] = {ca * cb, ca * sb * sc - sa * cc, ca * sb * cc + sa * sc,
                         sa * cb, sa * sb * sc + ca * cc, sa * sb * cc - ca * sc,
                         -sb,     cb * sc,                cb * cc};
    std::vector<double> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double* p = ps.point(i);
        for (int k = 0; k < 3; ++k) out.push_back(r[3 * k] * p[0] + r[3 * k + 1] * p[1] + r[3 * k + 2] * p[2]);
    }
    return PointSet(2, out);
}

double wce2(const PointSet& ps, double beta)
{
    const double w = wce_kernel(ps, SmoothnessParam::classify(beta)).wce_kernel;
    return w * w;
}

}  // namespace

TEST_CASE("cap integral of the truncated power")
{
    for (double t : {-1.0, -0.3, 0.0, 0.6}) CHECK(std::fabs(truncated_power_cap_integral(2, 1.0, t) - 0.5 * (1.0 - t)) < 1e-15);
    for (int d : {2, 3, 4})
        for (double beta : {0.7, 1.0, 2.5}) CHECK(truncated_power_cap_integral(d, beta, 1.0) == 0.0);
    for (int d : {2, 3, 5})
        for (double beta : {0.7, 1.5, 2.0, 3.2})
            for (double t : {-0.8, 0.0, 0.45}) {
                const double ref = omega_ratio(d) / beta *
                                   integrate_tanh_sinh(
                                       [&](double s) {
                                           const double u = t + std::pow(s, 1.0 / beta);
                                           return std::pow(std::max(0.0, 1.0 - u * u), 0.5 * d - 1.0);
                                       },
                                       0.0, std::pow(1.0 - t, beta), 256);
                CHECK(std::fabs(truncated_power_cap_integral(d, beta, t) - ref) < 1e-12 * std::max(1.0, ref));
            }
}

TEST_CASE("local discrepancy")
{
    const PointSet oct = named_design("octahedron");
    CHECK(std::fabs(local_discrepancy(oct, 1.0, {1.0, 0.0, 0.0}, 0.0)) < 1e-15);
    const PointSet one = single(0.0, 0.0, 1.0);
    CHECK(local_discrepancy(one, 1.0, {0.0, 0.0, 1.0}, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    bool moved = false;
    local_discrepancy(one, 0.8, {0.0, 1.0, 0.0}, 0.0, &moved);
    CHECK(moved);
    moved = false;
    local_discrepancy(one, 0.8, {0.0, 1.0, 0.0}, 0.3, &moved);
    CHECK(!moved);
}

TEST_CASE("worst-case error from the kernel")
{
    CHECK(wce2(single(0, 0, 1), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(wce2(PointSet(2, {0, 0, 1, 0, 0, -1}), 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    const PointSet oct = named_design("octahedron");
    const double mean_dist = (24.0 * std::sqrt(2.0) + 12.0) / 36.0;
    CHECK(std::fabs(wce2(oct, 1.0) - (1.0 - 0.25 * mean_dist - 2.0 / 3.0)) < 1e-14);
    CHECK(std::fabs(wce2(oct, 1.0) - 0.0142977396) < 1e-10);
    CHECK(std::fabs(mean_distance_power(oct, 1.0) - mean_dist) < 1e-15);
}

TEST_CASE("rotation invariance of the worst-case error")
{
    const PointSet ps = random_uniform(2, 30, 4);
    const PointSet rs = rotated(ps, 0.3, -1.1, 2.2);
    for (double beta : {0.8, 1.0, 1.5, 2.0}) CHECK(std::fabs(wce2(ps, beta) - wce2(rs, beta)) < 1e-10);
}

TEST_CASE("worst-case error decreases with N")
{
    std::vector<double> med;
    for (std::size_t n : {32, 64, 128, 256}) {
        std::vector<double> w;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) w.push_back(wce2(random_uniform(2, n, seed), 1.0));
        std::nth_element(w.begin(), w.begin() + 5, w.end());
        med.push_back(w[5]);
    }
    for (std::size_t i = 1; i < med.size(); ++i) CHECK(med[i] < med[i - 1]);
}

TEST_CASE("cap quadrature")
{
    const SphereCapRule rule = sphere_cap_rule(64, 128, 4);
    CHECK(std::fabs(wce_quadrature(single(0.36, 0.48, 0.8), 1.0, rule) - std::sqrt(1.0 / 3.0)) < 2e-3);
    const PointSet oct = named_design("octahedron");
    CHECK(std::fabs(std::pow(wce_quadrature(oct, 2.0, rule), 2) - wce2(oct, 2.0)) < 1e-6);
    const PointSet ps = random_uniform(2, 20, 1);
    const double coarse = wce_quadrature(ps, 2.0, rule);
    const double fine = wce_quadrature(ps, 2.0, rule.refined());
    CHECK(std::fabs(coarse * coarse - fine * fine) < 1e-8);
    CHECK(wce_quadrature(ps, 2.0, rule, 1e-8) == fine);
    CHECK(lp_discrepancy(ps, 2.0, 2.0, rule) == coarse);
    try {
        wce_quadrature(ps, 1.0, sphere_cap_rule(4, 8, 2), 1e-12);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RuleTooCoarse);
    }
}

TEST_CASE("L_p cap discrepancy")
{
    const SphereCapRule rule = sphere_cap_rule(32, 64, 4);
    CHECK(lp_discrepancy(single(0.0, 0.0, 1.0), 1.0, INFINITY, rule) >= 0.95);
    try {
        lp_discrepancy(single(0.0, 0.0, 1.0), 0.7, 4.0, rule);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Domain);
    }
    const PointSet ps = random_uniform(2, 12, 2);
    const auto averaged = [&](double p) { return lp_discrepancy(ps, 1.5, p, rule) * std::pow(0.5, 1.0 / p); };
    CHECK(averaged(1.0) <= averaged(2.0) + 1e-15);
    CHECK(averaged(2.0) <= averaged(4.0) + 1e-15);
    CHECK(averaged(4.0) <= lp_discrepancy(ps, 1.5, INFINITY, rule) + 1e-15);
    CHECK(lp_discrepancy(ps, 1.5, 2.0, rule) == wce_quadrature(ps, 1.5, rule));
    CHECK_THROWS_AS(lp_discrepancy(random_uniform(3, 5, 1), 1.0, 2.0, rule), Error);
}

TEST_CASE("exact beta = 1 cap discrepancy")
{
    for (const PointSet& ps : {named_design("octahedron"), random_uniform(2, 10, 1), single(0, 1, 0)})
        CHECK(std::fabs(cap_discrepancy_beta1_exact(ps) - wce2(ps, 1.0)) < 1e-13);
}

TEST_CASE("invariance principle")
{
    const SphereCapRule rule = sphere_cap_rule(64, 128, 4);
    const IdentityCheck oct = stolarsky_check(named_design("octahedron"), SmoothnessParam::classify(1.0), rule);
    REQUIRE(oct.has_classical);
    CHECK(std::fabs(oct.classical_lhs - 4.0 / 3.0) < 1e-12);
    CHECK(oct.classical_rhs == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    const IdentityCheck one = stolarsky_check(single(1, 0, 0), SmoothnessParam::classify(1.0), rule);
    CHECK(std::fabs(4.0 * one.lhs - 4.0 / 3.0) < 1e-12);
    const IdentityCheck rnd = stolarsky_check(random_uniform(2, 20, 1), SmoothnessParam::classify(2.0), rule);
    CHECK(rnd.gap < 1e-6);
    CHECK(!rnd.has_classical);
}

TEST_CASE("design residuals")
{
    const DesignCertificate oct = design_residual(named_design("octahedron"), 4);
    for (int n = 0; n < 3; ++n) CHECK(oct.residuals[n] < 1e-14);
    CHECK(std::fabs(oct.residuals[3] - 7.0 / 12.0) < 1e-14);
    CHECK(!oct.is_design);
    CHECK(design_residual(named_design("octahedron"), 3).is_design);
    const DesignCertificate ico = design_residual(named_design("icosahedron"), 6);
    for (int n = 0; n < 5; ++n) CHECK(ico.residuals[n] < 1e-12);
    CHECK(ico.residuals[5] > 0.0);
    CHECK(design_residual(single(0, 0, 1), 1).residuals[0] == 1.0);
    CHECK(!design_residual(random_uniform(2, 12, 1), 2).is_design);
    CHECK_THROWS_AS(design_residual(single(0, 0, 1), 0), Error);

    const PointSet ps = random_uniform(2, 9, 6);
    const PointSet rs = rotated(ps, 1.0, 0.2, -0.4);
    std::vector<double> perm;
    for (std::size_t i = ps.size(); i-- > 0;) perm.insert(perm.end(), ps.point(i), ps.point(i) + 3);
    const DesignCertificate a = design_residual(ps, 6), b = design_residual(rs, 6), c = design_residual(PointSet(2, perm), 6);
    for (int n = 0; n < 6; ++n) {
        CHECK(std::fabs(a.residuals[n] - b.residuals[n]) < 1e-13);
        CHECK(std::fabs(a.residuals[n] - c.residuals[n]) < 1e-13);
    }
}

TEST_CASE("t-design identity")
{
    CHECK(tdesign_identity_check(named_design("octahedron"), 1).gap < 1e-12);
    for (int M : {2, 3}) CHECK(tdesign_identity_check(named_design("icosahedron"), M).gap < 1e-10);
    try {
        tdesign_identity_check(named_design("octahedron"), 5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotADesign);
    }
}
