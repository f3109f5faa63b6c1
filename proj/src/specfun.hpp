#pragma once

#include <cstddef>
#include <vector>

namespace sphk {

/// Stopping rule shared by every infinite series in the library.
struct SeriesControl {
    double rel_tol = 1e-13;
    double abs_tol = 1e-300;
    long max_terms = 100000;
    int tail_window = 5;

    void validate() const;
};

/// Neumaier's variant of compensated summation.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

bool is_nonpositive_integer(double x);

double pochhammer(double a, long n);

/// Sum of ln|Gamma(nums)| minus sum of ln|Gamma(dens)|.
double ln_gamma_ratio(const std::vector<double>& nums, const std::vector<double>& dens);

/// Signed product of Gamma(nums) over product of Gamma(dens); a pole in a
/// denominator makes the result zero, a pole in a numerator is a PoleError.
double gamma_ratio(const std::vector<double>& nums, const std::vector<double>& dens);

/// 1/Gamma(x), zero at the poles of Gamma.
double rgamma(double x);

double digamma(double x);

double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

/// 2F1(a,b;c;1-w) for 0 <= w, with w supplied directly so that arguments
/// extremely close to 1 keep full relative accuracy in 1-z.
double gauss_2f1_complement(double a, double b, double c, double w, const SeriesControl& ctl = {});

double pfq_terminating(const std::vector<double>& uppers, const std::vector<double>& lowers, double z);

struct KdFParams {
    std::vector<double> upper_joint;
    std::vector<double> lower_joint;
    std::vector<double> upper_x;
    std::vector<double> lower_x;
    std::vector<double> upper_y;
    std::vector<double> lower_y;

    /// Rejects lower parameters that hit a pole before any upper parameter truncates.
    void validate() const;
};

/// How a Kampe de Feriet value was obtained.
enum class KdFMethod { Terminating, Series, Levin, IntegralForm };

double kampe_de_feriet(const KdFParams& params, double x, double y, const SeriesControl& ctl = {});
double kampe_de_feriet(const KdFParams& params, double x, double y, const SeriesControl& ctl, KdFMethod* method);

/// Normalized Gegenbauer polynomial with P_n(1) = 1.
double gegenbauer_p(long n, int d, double t);

/// Fills out[0..nmax] with P_0(t)..P_nmax(t).
void gegenbauer_all(long nmax, int d, double t, double* out);

double z_dim(int d, long n);

/// Extrapolates partial sums S(N0), S(2 N0), ..., S(2^J N0) of a series whose
/// remainder after N terms expands in powers N^-(q), N^-(q+1), ...
/// Returns the extrapolated limit and stores |last correction| in err.
double richardson_power_tail(const std::vector<double>& partial_sums, double q, double* err = nullptr);

}  // namespace sphk
