#pragma once

#include <functional>
#include <vector>

namespace sphk {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule1D gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
Rule1D gauss_legendre(int n, double a, double b);

/// Double-exponential (tanh-sinh) rule on [a, b] with 2*level+1 nodes. The
/// distances of every node to both endpoints are returned as well, computed
/// without cancellation, for integrands with endpoint singularities.
struct TanhSinhRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> from_left;
    std::vector<double> from_right;
};

TanhSinhRule tanh_sinh(int level, double a, double b);

/// Integral of f over [a, b] with tanh-sinh at the given level.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b, int level);

}  // namespace sphk
