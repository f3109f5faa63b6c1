#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "specfun.hpp"

namespace sphk {

constexpr double kBranchTol = 1e-9;

enum class Branch { Integer, HalfExceptional, General };

const char* branch_name(Branch b);

/// Smoothness parameter with its branch: Integer(M), HalfExceptional(L) for
/// beta = L + 1/2 with L >= 1, otherwise General(L, eps) with beta - 1/2 = L + eps.
struct SmoothnessParam {
    double beta = 1.0;
    Branch branch = Branch::Integer;
    int M = 1;
    int L = 0;
    double eps = 0.0;

    static SmoothnessParam classify(double beta);
    double s(int d) const { return beta - 0.5 + 0.5 * d; }
};

struct KernelValue {
    double value = 0.0;
    Branch branch_used = Branch::Integer;
    long terms_used = 0;
};

double c_beta_const(int d, const SmoothnessParam& sp);
double log_coeff(int d, int L);
double kernel_diag(int d, double beta);
double h_beta(double a, double b, double beta, const SeriesControl& ctl = {});

/// Evaluator for one (d, beta) pair. Constants are computed once; the model
/// used very close to the diagonal is built lazily and shared between threads.
class KernelEvaluator {
public:
    KernelEvaluator(int d, double beta, const SeriesControl& ctl = {});
    KernelEvaluator(int d, const SmoothnessParam& sp, const SeriesControl& ctl = {});

    int d() const { return d_; }
    const SmoothnessParam& param() const { return sp_; }
    const SeriesControl& control() const { return ctl_; }

    KernelValue eval(double inner) const;
    /// Smooth part of the kernel (everything except the distance term) at z = (1-inner)/2.
    double regular_part(double z, long* terms = nullptr) const;
    /// Distance or log-distance term at the given inner product.
    double distance_part(double inner) const;

    double diag() const { return diag_; }
    double antipodal() const;
    double mean() const;

private:
    double general_series(double z, long* terms) const;
    double exceptional_series(double z, long* terms) const;
    double integer_polynomial(double z) const;
    double near_diagonal(double z) const;
    void build_near_diagonal_model() const;

    int d_;
    SmoothnessParam sp_;
    SeriesControl ctl_;
    double diag_ = 0.0;
    double dist_coef_ = 0.0;
    double int_prefactor_ = 0.0;

    mutable std::once_flag model_once_;
    mutable std::vector<double> taylor_;
    mutable double model_exponent_ = 0.0;
    mutable int model_power_ = 0;
    mutable double model_coef_[3] = {0.0, 0.0, 0.0};
};

KernelValue kernel_eval(int d, const SmoothnessParam& sp, double inner, const SeriesControl& ctl = {});
double kernel_antipodal(int d, const SmoothnessParam& sp, const SeriesControl& ctl = {});
double kernel_mean(int d, const SmoothnessParam& sp, const SeriesControl& ctl = {});
double q_mean_integer(int d, int M);
/// d = 2 closed form of the integer-beta mean of the polynomial part.
double q_mean_integer_d2_closed(int M);

/// Gegenbauer coefficient a_{k,n}/Z(d,k) of z -> 2F1(-n, b; c; z) with z = (1-t)/2.
double hyper_poly_coeff(int d, long k, long n, double b, double c);

struct ExpansionTable {
    int d = 2;
    double beta = 1.0;
    double s = 1.5;
    Branch branch = Branch::Integer;
    std::vector<double> lambda;
    std::vector<double> regular;
    std::vector<double> distance;
    bool all_positive = true;
};

ExpansionTable expansion_coeffs(int d, const SmoothnessParam& sp, long K, const SeriesControl& ctl = {},
                                bool require_positive = true);
double coeff_asymptotic_check(const ExpansionTable& table);

}  // namespace sphk
