#pragma once

#include <string>
#include <vector>

#include "kernel.hpp"
#include "oracle.hpp"
#include "spheregeom.hpp"

namespace sphk {

struct DiscrepancyReport {
    std::size_t n_points = 0;
    int d = 2;
    double beta = 1.0;
    double wce_kernel = 0.0;
    bool has_quadrature = false;
    double wce_quadrature = 0.0;
    double gram_mean = 0.0;
    double kernel_mean = 0.0;
    double identity_gap = 0.0;
};

struct DesignCertificate {
    int strength_tested = 0;
    std::vector<double> residuals;  // r_1 .. r_t
    bool is_design = false;
    double tolerance = 1e-12;
};

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    std::string method;
    bool has_classical = false;
    double classical_lhs = 0.0;  // mean distance + squared discrepancy / C_d
    double classical_rhs = 0.0;  // V_1
};

/// Integral over z of the truncated power (x.z - t)_+^(beta-1); independent of x.
double truncated_power_cap_integral(int d, double beta, double t, const SeriesControl& ctl = {});

/// Local discrepancy at the cap (z, t). For beta = 1 a point on the cap boundary
/// counts one half. For beta < 1 a point exactly on the boundary shifts t by
/// 1e-15 and sets *perturbed.
double local_discrepancy(const PointSet& ps, double beta, const std::vector<double>& z, double t,
                         bool* perturbed = nullptr, const SeriesControl& ctl = {});

/// (1/N^2) sum over all ordered pairs of the kernel.
double gram_mean(const PointSet& ps, const KernelEvaluator& ev);

/// Mean of |x_j - x_k|^lambda over all ordered pairs.
double mean_distance_power(const PointSet& ps, double lambda);

DiscrepancyReport wce_kernel(const PointSet& ps, const SmoothnessParam& sp, const SeriesControl& ctl = {});

/// L_p cap discrepancy (p = INFINITY gives the maximum over sampled caps). For each
/// sphere node the t-integral is split at the abscissae x_j.z; each panel uses the
/// rule's Gauss points (integer beta) or tanh-sinh at the same level (otherwise).
double lp_discrepancy(const PointSet& ps, double beta, double p, const SphereCapRule& rule,
                      const SeriesControl& ctl = {});

/// L_2 cap discrepancy. With tol > 0 the rule is also refined once and
/// RuleTooCoarse is raised if the squared values differ by more than tol.
double wce_quadrature(const PointSet& ps, double beta, const SphereCapRule& rule, double tol = 0.0,
                      const SeriesControl& ctl = {});

/// Squared beta = 1 cap discrepancy on S^2 integrated exactly: the t-integral in
/// closed form and the sphere integral per pair in that pair's cylinder frame.
double cap_discrepancy_beta1_exact(const PointSet& ps);

IdentityCheck stolarsky_check(const PointSet& ps, const SmoothnessParam& sp, const SphereCapRule& rule, double tol = 0.0,
                              const SeriesControl& ctl = {});

DesignCertificate design_residual(const PointSet& ps, int t_max, double tol = 1e-12);

IdentityCheck tdesign_identity_check(const PointSet& ps, int M, const SeriesControl& ctl = {}, double design_tol = 1e-12);

}  // namespace sphk
