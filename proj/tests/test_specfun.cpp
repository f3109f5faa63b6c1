#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "spheregeom.hpp"

using namespace sphk;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

double trapezoid_free_quad(const std::function<double(double)>& f, double a, double b)
{
    const Rule1D r = gauss_legendre(200, a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
}

}  // namespace

TEST_CASE("pochhammer basics and splitting")
{
    CHECK(pochhammer(3.5, 0) == 1.0);
    CHECK(pochhammer(1.0, 5) == doctest::Approx(120.0).epsilon(1e-15));
    CHECK(pochhammer(-3.0, 4) == 0.0);
    CHECK(pochhammer(-3.0, 3) == doctest::Approx(-6.0).epsilon(1e-15));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(-4.0, 6.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = ua(rng);
        const long m = rng() % 21, n = rng() % 21;
        const double lhs = pochhammer(a, m + n);
        const double rhs = pochhammer(a, m) * pochhammer(a + m, n);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("ln_gamma_ratio and gamma_ratio")
{
    CHECK(ln_gamma_ratio({5.0}, {3.0}) == doctest::Approx(std::log(12.0)).epsilon(1e-14));
    CHECK(gamma_ratio({0.5}, {}) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_ratio({200.5}, {200.0}) == doctest::Approx(std::exp(std::lgamma(200.5) - std::lgamma(200.0))).epsilon(1e-10));
    CHECK_THROWS_AS(ln_gamma_ratio({-2.0}, {1.0}), Error);
}

TEST_CASE("digamma against reference values")
{
    CHECK(digamma(0.1) == doctest::Approx(-10.423754940411076).epsilon(1e-13));
    CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-14));
    CHECK(digamma(2.5) == doctest::Approx(0.70315664064524319).epsilon(1e-14));
    CHECK(digamma(-0.5) == doctest::Approx(0.036489973978576521).epsilon(1e-12));
    CHECK(digamma(37.25) == doctest::Approx(3.6041690730056272).epsilon(1e-14));
}

TEST_CASE("gauss_2f1 examples")
{
    CHECK(gauss_2f1(0.7, -3.2, 2.0, 0.0) == 1.0);
    CHECK(gauss_2f1(-1.0, 2.0, 3.0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(gauss_2f1(1.0, 1.0, 2.0, 0.5) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, 1.5), Error);
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, 1.0), Error);
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, -2.0, 0.3), Error);
}

TEST_CASE("gauss_2f1 against mpmath values")
{
    struct Case {
        double a, b, c, z, value;
    };
    const Case cases[] = {
        {0.3, 0.7, 1.9, 0.6, 1.0894648007858961},    {-0.5, 1.2, 2.5, -0.8, 1.1728987838733132},
        {2.3, -1.7, 0.4, 0.95, 2.9397832826718195},  {0.25, 0.5, 3.5, 1.0, 1.0483727053936432},
        {1.5, 2.5, 1.25, -3.0, 0.0039416810385073721}, {0.5, 1.0, 1.5, 0.999, 4.1488496699495447},
    };
    for (const Case& c : cases) CHECK(rel(gauss_2f1(c.a, c.b, c.c, c.z), c.value) < 1e-11);
}

TEST_CASE("gauss_2f1 symmetry and Gauss summation")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> up(-2.5, 2.5), uc(0.3, 4.0), uz(-0.9, 0.9);
    for (int rep = 0; rep < 1000; ++rep) {
        const double a = up(rng), b = up(rng), c = uc(rng), z = uz(rng);
        CHECK(gauss_2f1(a, b, c, z) == gauss_2f1(b, a, c, z));
    }
    for (int rep = 0; rep < 50; ++rep) {
        const double a = up(rng), b = up(rng);
        const double c = a + b + 0.2 + std::fabs(up(rng));
        const double exact = gamma_ratio({c, c - a - b}, {c - a, c - b});
        CHECK(rel(gauss_2f1(a, b, c, 1.0), exact) < 1e-11);
    }
}

TEST_CASE("pfq_terminating examples")
{
    CHECK(pfq_terminating({0.0, 2.0}, {3.0}, 0.7) == 1.0);
    CHECK(pfq_terminating({-1.0, 1.0, 1.0}, {2.0, 2.0}, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(pfq_terminating({0.0, -0.5, 2.0, 1.0}, {0.0, 1.5, 2.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pfq_terminating({1.0, 2.0}, {3.0}, 0.5), Error);
    CHECK_THROWS_AS(pfq_terminating({-3.0}, {-1.0}, 0.5), Error);
}

TEST_CASE("kampe_de_feriet reductions")
{
    KdFParams p;
    CHECK(kampe_de_feriet(p, 0.0, 0.0) == 1.0);
    p.upper_x = {1.0};
    CHECK(kampe_de_feriet(p, 0.5, 0.0) == doctest::Approx(2.0).epsilon(1e-13));

    KdFParams q;
    q.upper_x = {0.4, 1.3};
    q.lower_x = {2.2};
    CHECK(rel(kampe_de_feriet(q, 0.6, 0.0), gauss_2f1(0.4, 1.3, 2.2, 0.6)) < 1e-12);

    // Terminating instance with (beta, gamma, a, b, c, a', b', c') = (1, 2, -1, 1, 2, -1, 1, 2).
    KdFParams r;
    r.upper_joint = {1.0};
    r.lower_joint = {2.0};
    r.upper_x = {-1.0, 1.0};
    r.lower_x = {2.0};
    r.upper_y = {-1.0, 1.0};
    r.lower_y = {2.0};
    const double brute = trapezoid_free_quad([](double t) { return std::pow(1.0 - 0.5 * t, 2); }, 0.0, 1.0);
    CHECK(kampe_de_feriet(r, 1.0, 1.0) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("gegenbauer_p values and bounds")
{
    for (int d = 2; d <= 5; ++d) {
        CHECK(gegenbauer_p(0, d, 0.3) == 1.0);
        CHECK(gegenbauer_p(1, d, -0.4) == doctest::Approx(-0.4).epsilon(1e-15));
        CHECK(gegenbauer_p(17, d, 1.0) == 1.0);
    }
    CHECK(gegenbauer_p(2, 2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
    for (int d = 2; d <= 4; ++d)
        for (long n = 0; n <= 50; ++n)
            for (double t = -1.0; t <= 1.0; t += 0.0125) CHECK(std::fabs(gegenbauer_p(n, d, t)) <= 1.0 + 1e-14);
}

TEST_CASE("gegenbauer_p orthogonality")
{
    for (int d = 2; d <= 4; ++d) {
        const double dd = d;
        const Rule1D rule = gauss_legendre(200, 0.0, std::numbers::pi);
        for (long m = 0; m <= 12; ++m)
            for (long n = 0; n <= 12; ++n) {
                double s = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double th = rule.nodes[i];
                    s += rule.weights[i] * std::pow(std::sin(th), dd - 1.0) * gegenbauer_p(m, d, std::cos(th)) *
                         gegenbauer_p(n, d, std::cos(th));
                }
                if (m != n) {
                    CHECK(std::fabs(s) < 1e-12);
                } else {
                    CHECK(rel(s, 1.0 / (omega_ratio(dd) * z_dim(d, n))) < 1e-10);
                }
            }
    }
}

TEST_CASE("z_dim values")
{
    CHECK(z_dim(3, 0) == 1.0);
    for (long n = 0; n < 20; ++n) CHECK(z_dim(2, n) == doctest::Approx(2.0 * n + 1.0).epsilon(1e-14));
    CHECK(z_dim(3, 2) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("SeriesControl validation")
{
    SeriesControl c;
    c.rel_tol = -1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    SeriesControl tight;
    tight.max_terms = 3;
    CHECK_THROWS_AS(gauss_2f1(0.5, 0.5, 1.5, 0.9, tight), Error);
}
