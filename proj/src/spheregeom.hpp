#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sphk {

/// N points on S^d stored row-major with d+1 coordinates per point.
class PointSet {
public:
    PointSet(int dim, std::vector<double> coords, std::string label = {});

    int dim() const { return dim_; }
    std::size_t size() const { return coords_.size() / (dim_ + 1); }
    const double* point(std::size_t i) const { return coords_.data() + i * (dim_ + 1); }
    const std::vector<double>& coords() const { return coords_; }
    const std::string& label() const { return label_; }
    /// Number of input rows whose norm differed from 1 by more than 1e-12.
    std::size_t renormalized_rows() const { return renormalized_; }
    double inner(std::size_t i, std::size_t j) const;

private:
    int dim_;
    std::vector<double> coords_;
    std::string label_;
    std::size_t renormalized_ = 0;
};

struct SphereConstants {
    int d;
    double c_d;
    double omega_ratio;
};

/// omega_{d-1}/omega_d = Gamma((d+1)/2)/(sqrt(pi) Gamma(d/2)).
double omega_ratio(double d);
double c_d_const(int d);
SphereConstants sphere_constants(int d);
double v_lambda(int d, double lambda);
double v_log(int d, int L);

/// splitmix64 stream; Gaussian deviates by the Box-Muller transform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform on the open interval (0, 1).
    double uniform();
    double gaussian();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

PointSet random_uniform(int d, std::size_t n, std::uint64_t seed);
PointSet fibonacci_sphere(std::size_t n);
PointSet named_design(const std::string& name);

PointSet load_pointset(const std::string& path);
void save_pointset(const PointSet& ps, const std::string& path);

}  // namespace sphk
