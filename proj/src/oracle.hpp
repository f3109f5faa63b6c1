#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "quadrature.hpp"
#include "specfun.hpp"

namespace sphk {

/// Quadrature over S^d x [-1, 1]: sphere nodes with weights summing to 1 and
/// t nodes with weights summing to 2. Only d = 2 product rules are provided.
struct SphereCapRule {
    int d = 2;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> z_points;  // (d+1) coordinates per node
    std::vector<double> z_weights;
    Rule1D t_rule;

    std::size_t z_count() const { return z_weights.size(); }
    const double* z_point(std::size_t i) const { return z_points.data() + i * (d + 1); }
    /// The same construction with every resolution doubled.
    SphereCapRule refined() const;
};

/// Gauss-Legendre in cos(theta) times the uniform trapezoid rule in phi.
SphereCapRule product_rule_s2(int n_theta, int n_phi);
Rule1D gauss_legendre_t(int n);
SphereCapRule sphere_cap_rule(int n_theta, int n_phi, int n_t);

struct DefQuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int resolution = 0;
};

/// Direct numerical evaluation of the kernel's defining double integral for a
/// pair with the given inner product, in cylinder coordinates about the pole
/// (x - y)/|x - y|. The resolution is doubled until two successive values
/// agree to tol, up to max_resolution; otherwise RuleTooCoarse.
DefQuadratureResult kernel_def_quadrature(int d, double beta, double inner, int resolution = 32, double tol = 1e-10,
                                          int max_resolution = 512);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    std::uint64_t seed = 0;
};

/// Mean of f(x.y) over independent uniform pairs on S^d.
McEstimate mc_pair_integral(int d, const std::function<double(double)>& f, long n, std::uint64_t seed);

/// Integral of the zonal function f against the normalized measure, i.e. the
/// mean of f(x.y) over pairs, by tanh-sinh quadrature in the angle.
double zonal_mean(int d, const std::function<double(double)>& f, double tol = 1e-13);

}  // namespace sphk
