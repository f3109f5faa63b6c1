#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "spheregeom.hpp"

using namespace sphk;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

double keval(int d, double beta, double t) { return kernel_eval(d, SmoothnessParam::classify(beta), t).value; }

bool cholesky_ok(std::vector<double> a, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j) {
        double s = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) s -= a[j * n + k] * a[j * n + k];
        if (!(s > 0.0)) return false;
        const double r = std::sqrt(s);
        a[j * n + j] = r;
        for (std::size_t i = j + 1; i < n; ++i) {
            double t = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) t -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = t / r;
        }
    }
    return true;
}

struct Frozen {
    int d;
    double beta, inner, value;
};

// Defining-integral values (scipy, tools/oracle_values.py).
const Frozen kFrozenKernel[] = {
    {2, 0.8, -1.0, 0.7185274432649903},  {2, 0.8, -0.4, 0.801693318431372},   {2, 0.8, 0.3, 0.9423249137682397},
    {2, 0.8, 0.9, 1.219323637565698},    {2, 1.5, -1.0, 0.2617993877991497},  {2, 1.5, -0.4, 0.3637140694125334},
    {2, 1.5, 0.3, 0.4958086000425009},   {2, 1.5, 0.9, 0.6342740539664043},   {2, 2.5, -1.0, 0.11780972450961731},
    {2, 2.5, -0.4, 0.28310069058071785}, {2, 2.5, 0.3, 0.5164029268540407},   {2, 2.5, 0.9, 0.7558222229427286},
    {2, 3.0, -1.0, 0.08888888888888889}, {2, 3.0, -0.4, 0.29600325217762696}, {2, 3.0, 0.3, 0.6277802686806249},
    {2, 3.0, 0.9, 0.996839198489389},    {3, 0.8, -1.0, 0.8239878951363137},  {3, 0.8, -0.4, 0.9001761238590987},
    {3, 0.8, 0.3, 1.0287191022210849},   {3, 0.8, 0.9, 1.2805742841072996},   {3, 1.5, -1.0, 0.3051585534116274},
    {3, 1.5, -0.4, 0.3862466512148252},  {3, 1.5, 0.3, 0.49093935278799683},  {3, 1.5, 0.9, 0.5998351605889353},
    {3, 2.5, -1.0, 0.14021345141767233}, {3, 2.5, -0.4, 0.2695813682401431},  {3, 2.5, 0.3, 0.446699927003475},
    {3, 2.5, 0.9, 0.6239619342889564},   {3, 3.0, -1.0, 0.1065953454837776},  {3, 3.0, -0.4, 0.267122651252689},
    {3, 3.0, 0.3, 0.5120837790501296},   {3, 3.0, 0.9, 0.7758044109188711},   {4, 0.8, -1.0, 0.8935533589321034},
    {4, 0.8, -0.4, 0.9647725779432439},  {4, 0.8, 0.3, 1.0847255716803152},   {4, 0.8, 0.9, 1.3189088509786329},
    {4, 1.5, -1.0, 0.33379421944391563}, {4, 1.5, -0.4, 0.4016578194476432},  {4, 1.5, 0.3, 0.4890075125518595},
    {4, 1.5, 0.9, 0.579321513882147},    {4, 2.5, -1.0, 0.15567713595913718}, {4, 2.5, -0.4, 0.26246345190337445},
    {4, 2.5, 0.3, 0.4055347969085714},   {4, 2.5, 0.9, 0.5460800326078448},   {4, 3.0, -1.0, 0.11904761904761915},
    {4, 3.0, -0.4, 0.2507155052808966},  {4, 3.0, 0.3, 0.444631886469548},    {4, 3.0, 0.9, 0.6481718422906768},
};

struct FrozenMean {
    int d;
    double beta, value;
};

// Integral over t of the squared cap integral (mpmath, tools/oracle_values.py).
const FrozenMean kFrozenMean[] = {
    {2, 0.75, 1.0056629776875343}, {2, 1.0, 0.66666666666666667},  {2, 1.5, 0.44444444444444444},
    {2, 2.0, 0.4},                 {2, 2.5, 0.42666666666666667},  {3, 0.75, 1.0950289884262267},
    {3, 1.0, 0.71179752208401701}, {3, 1.5, 0.44848285483407466},  {3, 2.0, 0.37724990139672122},
    {3, 2.5, 0.37483218187671707}, {4, 0.75, 1.1565313432310941},  {4, 1.0, 0.74285714285714286},
    {4, 1.5, 0.4527891156462585},  {4, 2.0, 0.36507936507936508},  {4, 2.5, 0.34597732426303855},
};

struct FrozenCoeffs {
    int d;
    double beta;
    double lambda[5];
};

// Integral over t of the squared Funk-Hecke eigenvalue of the truncated power (mpmath).
const FrozenCoeffs kFrozenCoeffs[] = {
    {2, 0.8, {0.91088735968173, 0.0845858900831665, 0.0186657357367134, 0.00743483024998183, 0.00379698910599952}},
    {2, 1.5, {0.444444444444444, 0.0651851851851852, 0.00326530612244898, 0.000685311161501638, 0.000230436016871803}},
    {2, 2.0, {0.4, 0.0825396825396825, 0.00317460317460317, 0.000288600288600289, 6.66000666000666e-5}},
    {2, 2.5, {0.426666666666667, 0.113197278911565, 0.00638548752834467, 0.000199896303792408, 2.95704591408887e-5}},
    {3, 0.8, {0.988582035366873, 0.0546339546877339, 0.00920109966544478, 0.00296687348089737, 0.00127340267164773}},
    {3, 1.5, {0.448482854834075, 0.0384503767945255, 0.00148712188151155, 0.000258095533154897, 7.42090888107486e-5}},
    {3, 2.0, {0.377249901396721, 0.0478611439788707, 0.00133080509282994, 0.00010236962252538, 2.04739245050759e-5}},
    {3, 2.5, {0.374832181876717, 0.064212678186976, 0.00257137153108916, 6.73211389463322e-5, 8.67694679752726e-6}},
};

}  // namespace

TEST_CASE("smoothness classification")
{
    CHECK(SmoothnessParam::classify(2.0).branch == Branch::Integer);
    CHECK(SmoothnessParam::classify(2.0).M == 2);
    CHECK(SmoothnessParam::classify(1.5).branch == Branch::HalfExceptional);
    CHECK(SmoothnessParam::classify(1.5).L == 1);
    CHECK(SmoothnessParam::classify(2.0 + 1e-10).branch == Branch::Integer);
    CHECK(SmoothnessParam::classify(2.0 + 1e-6).branch == Branch::General);
    CHECK(SmoothnessParam::classify(0.8).branch == Branch::General);
    CHECK_THROWS_AS(SmoothnessParam::classify(0.5), Error);
    CHECK_THROWS_AS(SmoothnessParam::classify(0.4), Error);
    CHECK(SmoothnessParam::classify(1.0).s(2) == doctest::Approx(1.5));
}

TEST_CASE("distance and log coefficients")
{
    const double c1 = c_beta_const(2, SmoothnessParam::classify(1.0));
    CHECK(c1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(c_beta_const(2, SmoothnessParam::classify(2.0)) == doctest::Approx(1.0 / 48.0).epsilon(1e-14));
    for (int d : {2, 3})
        for (int M : {1, 2, 3}) {
            const double cm = c_beta_const(d, SmoothnessParam::classify(M));
            CHECK(rel(c_beta_const(d, SmoothnessParam::classify(M + 1e-7)), cm) < 1e-6);
            CHECK(rel(c_beta_const(d, SmoothnessParam::classify(M - 1e-7)), cm) < 1e-6);
        }
    CHECK(log_coeff(2, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    CHECK(log_coeff(3, 1) == doctest::Approx(1.0 / 32.0).epsilon(1e-14));
    CHECK(log_coeff(2, 2) == doctest::Approx(3.0 / 640.0).epsilon(1e-14));
}

TEST_CASE("closed-form kernel values")
{
    CHECK(keval(2, 1.0, 0.0) == doctest::Approx(1.0 - std::sqrt(2.0) / 4.0).epsilon(1e-15));
    CHECK(keval(2, 1.0, -1.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (int d : {2, 3, 4})
        for (int i = 0; i <= 20; ++i) {
            const double t = -1.0 + 0.1 * i;
            CHECK(std::fabs(keval(d, 1.0, t) - (1.0 - c_d_const(d) * std::sqrt(2.0 - 2.0 * t))) < 1e-12);
        }
    CHECK(kernel_diag(2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_diag(2, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(kernel_diag(3, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(keval(2, 2.0, 1.0) == doctest::Approx(kernel_diag(2, 2.0)).epsilon(1e-14));
}

TEST_CASE("kernel values against the defining integral")
{
    for (const Frozen& f : kFrozenKernel) {
        INFO("d=" << f.d << " beta=" << f.beta << " inner=" << f.inner);
        CHECK(rel(keval(f.d, f.beta, f.inner), f.value) < 1e-9);
    }
}

TEST_CASE("antipodal values")
{
    CHECK(kernel_antipodal(2, SmoothnessParam::classify(1.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(kernel_antipodal(2, SmoothnessParam::classify(1.5)) == doctest::Approx(std::numbers::pi / 12.0).epsilon(1e-12));
    CHECK(kernel_antipodal(2, SmoothnessParam::classify(2.5)) == doctest::Approx(0.11780972450961731).epsilon(1e-12));
    CHECK(kernel_antipodal(3, SmoothnessParam::classify(1.5)) == doctest::Approx(0.3051585534116274).epsilon(1e-11));
    CHECK(kernel_antipodal(3, SmoothnessParam::classify(2.5)) == doctest::Approx(0.14021345141767233).epsilon(1e-11));
    for (int d : {2, 3, 4})
        for (double beta : {0.8, 1.5, 2.0, 2.5, 3.0})
            CHECK(rel(kernel_antipodal(d, SmoothnessParam::classify(beta)), keval(d, beta, -1.0)) < 1e-10);
}

TEST_CASE("diagonal consistency on every branch")
{
    for (int d : {2, 3, 4})
        for (double beta : {0.6, 0.8, 1.0, 1.25, 1.5, 2.0, 2.5, 2.9, 3.0})
            CHECK(rel(keval(d, beta, 1.0), kernel_diag(d, beta)) < 1e-10);
}

TEST_CASE("branch continuity")
{
    for (int d : {2, 3})
        for (double seam : {1.0, 2.0, 3.0, 1.5, 2.5}) {
            const double at = keval(d, seam, 0.0);
            CHECK(std::fabs(keval(d, seam + 1e-6, 0.0) - at) < 1e-4);
            CHECK(std::fabs(keval(d, seam - 1e-6, 0.0) - at) < 1e-4);
        }
}

TEST_CASE("kernel mean values")
{
    CHECK(kernel_mean(2, SmoothnessParam::classify(1.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(kernel_mean(2, SmoothnessParam::classify(2.0)) == doctest::Approx(0.4).epsilon(1e-15));
    for (const FrozenMean& f : kFrozenMean) {
        INFO("d=" << f.d << " beta=" << f.beta);
        CHECK(rel(kernel_mean(f.d, SmoothnessParam::classify(f.beta)), f.value) < 1e-10);
    }
}

TEST_CASE("integer mean of the polynomial part")
{
    CHECK(q_mean_integer(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_mean_integer_d2_closed(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_mean_integer_d2_closed(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    for (int M = 1; M <= 6; ++M) CHECK(rel(q_mean_integer(2, M), q_mean_integer_d2_closed(M)) < 1e-12);
    for (int d : {2, 3, 4})
        for (int M = 1; M <= 4; ++M) {
            const SmoothnessParam sp = SmoothnessParam::classify(M);
            const double dist = (M % 2 ? -1.0 : 1.0) * c_beta_const(d, sp) * v_lambda(d, 2.0 * M - 1.0);
            CHECK(rel(q_mean_integer(d, M) + dist, kernel_mean(d, sp)) < 1e-10);
        }
}

TEST_CASE("H_beta")
{
    CHECK(h_beta(1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(h_beta(-1.0, -1.0, 0.7) == 0.0);
    CHECK(h_beta(-1.0, -1.0, 2.3) == 0.0);
    const double q = integrate_tanh_sinh([](double t) { return std::max(0.5 - t, 0.0) * std::max(-0.2 - t, 0.0); },
                                         -1.0, -0.2, 64);
    CHECK(std::fabs(h_beta(0.5, -0.2, 2.0) - q) < 1e-10);
    for (double beta : {0.7, 1.5, 2.6})
        for (double a : {-0.9, -0.1, 0.4})
            for (double b : {-0.5, 0.2, 0.95}) {
                const double lo = std::min(a, b);
                const double ref = integrate_tanh_sinh(
                    [&](double t) {
                        if (t >= lo) return 0.0;
                        return std::pow(a - t, beta - 1.0) * std::pow(b - t, beta - 1.0);
                    }, -1.0, lo, 128);
                CHECK(rel(h_beta(a, b, beta), ref) < 1e-10);
            }
}

TEST_CASE("positive definiteness of Gram matrices")
{
    for (double beta : {0.8, 1.0, 1.5, 2.0, 3.0}) {
        const KernelEvaluator ev(2, beta);
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const PointSet ps = random_uniform(2, 8, seed);
            std::vector<double> g(64);
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t j = 0; j < 8; ++j) g[i * 8 + j] = ev.eval(ps.inner(i, j)).value + (i == j ? 1e-9 : 0.0);
            CHECK(cholesky_ok(g, 8));
        }
    }
}

TEST_CASE("expansion coefficients")
{
    const ExpansionTable t1 = expansion_coeffs(2, SmoothnessParam::classify(1.0), 6);
    CHECK(t1.lambda[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(t1.lambda[1] == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
    CHECK(t1.all_positive);
    CHECK(expansion_coeffs(2, SmoothnessParam::classify(1.5), 0).lambda.size() == 1);
    for (const FrozenCoeffs& f : kFrozenCoeffs) {
        const ExpansionTable t = expansion_coeffs(f.d, SmoothnessParam::classify(f.beta), 4);
        for (int k = 0; k <= 4; ++k) {
            INFO("d=" << f.d << " beta=" << f.beta << " k=" << k);
            CHECK(rel(t.lambda[k], f.lambda[k]) < 1e-9);
        }
    }
    for (double beta : {1.0, 1.5, 2.0, 2.5})
        CHECK(rel(expansion_coeffs(2, SmoothnessParam::classify(beta), 0).lambda[0],
                  kernel_mean(2, SmoothnessParam::classify(beta))) < 1e-8);
    CHECK_THROWS_AS(expansion_coeffs(2, SmoothnessParam::classify(1.0), -1), Error);
}

TEST_CASE("coefficient decay spread")
{
    CHECK(coeff_asymptotic_check(expansion_coeffs(2, SmoothnessParam::classify(1.0), 80)) < 0.25);
    CHECK(coeff_asymptotic_check(expansion_coeffs(2, SmoothnessParam::classify(2.0), 80)) < 0.25);
    try {
        coeff_asymptotic_check(expansion_coeffs(2, SmoothnessParam::classify(2.0), 20));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Precondition);
    }
}

TEST_CASE("Gegenbauer coefficients of hypergeometric polynomials")
{
    for (int d : {2, 3, 5})
        for (long n = 0; n <= 6; ++n)
            for (long k = 0; k <= n + 1; ++k) {
                const double b = -0.3 + 0.7 * n, c = 1.7 + 0.2 * k;
                const Rule1D rule = gauss_legendre(120, 0.0, std::numbers::pi);
                double s = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double th = rule.nodes[i];
                    const double t = std::cos(th);
                    s += rule.weights[i] * std::pow(std::sin(th), d - 1.0) *
                         pfq_terminating({-static_cast<double>(n), b}, {c}, 0.5 * (1.0 - t)) * gegenbauer_p(k, d, t);
                }
                s *= omega_ratio(d);
                CHECK(std::fabs(hyper_poly_coeff(d, k, n, b, c) - s) < 1e-12 * std::max(1.0, std::fabs(s)));
            }
}
