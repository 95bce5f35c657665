#pragma once

#include <complex>
#include <optional>

#include "crad/correlations.hpp"
#include "crad/series.hpp"

namespace crad {

/// Angular frequencies of the four time phases in the squared transition
/// amplitude.  They satisfy a + b + c + d = 0; g = b + d is derived.
struct FrequencyCoefficients {
  double a;
  double b;
  double c;
  double d;

  double g() const { return b + d; }

  /// Validates the sum constraint (|a+b+c+d| <= 1e-12 * max magnitude).
  static FrequencyCoefficients checked(double a, double b, double c, double d);
  void require_constraint() const;
};

enum class KernelMethod { closed_form, quadrature, limit };

struct KernelValue {
  cdouble value;
  KernelMethod method = KernelMethod::closed_form;
  std::optional<double> err_est;  // quadrature only
  bool warn = false;              // numeric-precision caveat
};

/// Closed-form white-noise time kernel
///   T = (t/(a c)) [phi(a t) + phi(c t) - phi(-g t) - 1],
/// phi(x) = (e^{ix}-1)/(ix); continuous through g = 0 by series evaluation.
KernelValue white_T(const FrequencyCoefficients& coeffs, double t);

/// Free-particle specialization T = 2 (a t - sin a t)/a^3 (real).
KernelValue white_T_free(double a, double t);

/// Independent oracle: after the time delta collapses one integral, the
/// kernel is int_0^t dt2 e^{i g t2} A(t2) C(t2) with analytic inner
/// exponential integrals A, C; the t2 integral is evaluated numerically.
KernelValue white_T_oracle(const FrequencyCoefficients& coeffs, double t, double tol);

/// Reduced one-dimensional form of the double integral
///   I = int_0^t du int_0^t dv e^{i alpha u} e^{i beta v} f(u - v),
/// evaluated as 4 e^{i(alpha+beta)t/2} int_0^t f(x) sin_half((alpha+beta),t-x)
/// cos((alpha-beta)x/2) dx; the alpha+beta -> 0 singularity is removable.
KernelValue double_integral_I(double alpha, double beta, double t,
                              const TemporalCorrelation& corr, double tol = 1e-9);

/// Colored-noise kernel, four-term reduction of the exact double integral.
/// White inputs dispatch to the closed form (the delta is never integrated
/// numerically).
KernelValue colored_T(const FrequencyCoefficients& coeffs, double t,
                      const TemporalCorrelation& corr, double tol = 1e-9);

/// Free-particle colored kernel (c = -a, d = -b).
KernelValue colored_T_free(double a, double b, double t, const TemporalCorrelation& corr,
                           double tol = 1e-9);

/// Large-time limit of dT/dt for the free-particle kernel:
///   (1/a^2) [f~(b) + f~(a+b)].
double rate_asymptote(double a, double b, const TemporalCorrelation& corr);

/// Central finite difference of the colored kernel (one-sided and flagged at
/// the t = dt boundary; flagged when dt is coarse against the phases).
KernelValue dT_dt_numeric(const FrequencyCoefficients& coeffs, double t,
                          const TemporalCorrelation& corr, double dt);

/// Trapezoid average of Re dT/dt over [t0, t0 + window] from n_samples
/// finite differences.
double averaged_dT_dt(const FrequencyCoefficients& coeffs, const TemporalCorrelation& corr,
                      double t0, double window, int n_samples, double dt);

}  // namespace crad
