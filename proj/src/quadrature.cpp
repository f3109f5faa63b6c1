#include "quadrature.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "specfun.hpp"

namespace sphk {

Rule1D gauss_legendre(int n)
{
    if (n < 1) fail(ErrorCode::Domain, "Gauss-Legendre rule needs n >= 1");
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess followed by Newton iterations on P_n.
        double x = (1.0 - (n - 1.0) / (8.0 * n * n * n)) * std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) {
                // refresh the derivative at the converged node
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) p0 = 1.0;
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

Rule1D gauss_legendre(int n, double a, double b)
{
    Rule1D rule = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

TanhSinhRule tanh_sinh(int level, double a, double b)
{
    if (level < 1) fail(ErrorCode::Domain, "tanh-sinh level must be positive");
    const double h = 3.2 / level;
    const double half = 0.5 * (b - a);
    const double pi2 = 0.5 * std::numbers::pi;
    TanhSinhRule rule;
    for (int k = -level; k <= level; ++k) {
        const double s = k * h;
        const double u = pi2 * std::sinh(s);
        // 1 - tanh(u) and 1 + tanh(u) without cancellation
        const double e = std::exp(-2.0 * std::fabs(u));
        const double small = 2.0 * e / (1.0 + e);
        const double one_minus = (u >= 0.0) ? small : 2.0 - small;
        const double one_plus = (u >= 0.0) ? 2.0 - small : small;
        const double ch = std::cosh(u);
        const double w = h * pi2 * std::cosh(s) / (ch * ch) * half;
        const double left = half * one_plus;
        const double right = half * one_minus;
        if (left <= 0.0 || right <= 0.0 || w == 0.0) continue;
        rule.nodes.push_back(left <= right ? a + left : b - right);
        rule.weights.push_back(w);
        rule.from_left.push_back(left);
        rule.from_right.push_back(right);
    }
    return rule;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b, int level)
{
    const TanhSinhRule rule = tanh_sinh(level, a, b);
    CompensatedSum sum;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum.add(rule.weights[i] * f(rule.nodes[i]));
    return sum.value();
}

}  // namespace sphk
