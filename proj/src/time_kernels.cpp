#include "crad/time_kernels.hpp"

#include <algorithm>
#include <cmath>

#include "crad/errors.hpp"
#include "crad/quadrature.hpp"

namespace crad {

namespace {

constexpr cdouble kI(0.0, 1.0);

void require_nondegenerate(double a, double c) {
  if (a == 0.0 || c == 0.0) {
    throw PreconditionError("degenerate coefficients: the closed form divides by a*c");
  }
}

void require_time(double t) {
  if (!(t >= 0.0)) throw PreconditionError("t must be non-negative");
}

// Integration cutoff: f carries no mass beyond its support hint, and every
// integrand below is bounded by (t - x) there, so truncation stays under
// hint_eps * t.
double upper_limit(const TemporalCorrelation& corr, double t) {
  return std::min(t, corr.support_hint(1e-16));
}

}  // namespace

FrequencyCoefficients FrequencyCoefficients::checked(double a, double b, double c, double d) {
  FrequencyCoefficients coeffs{a, b, c, d};
  coeffs.require_constraint();
  return coeffs;
}

void FrequencyCoefficients::require_constraint() const {
  const double sum = a + b + c + d;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (std::abs(sum) > 1e-12 * std::max(scale, 1.0)) {
    throw PreconditionError("frequency coefficients violate a + b + c + d = 0");
  }
}

KernelValue white_T(const FrequencyCoefficients& coeffs, double t) {
  require_time(t);
  coeffs.require_constraint();
  require_nondegenerate(coeffs.a, coeffs.c);
  const double g = coeffs.g();
  const cdouble bracket =
      phi_exp(coeffs.a * t) + phi_exp(coeffs.c * t) - phi_exp(-g * t) - 1.0;
  return KernelValue{t / (coeffs.a * coeffs.c) * bracket, KernelMethod::closed_form,
                     std::nullopt, false};
}

KernelValue white_T_free(double a, double t) {
  require_time(t);
  if (a == 0.0) throw PreconditionError("degenerate coefficient a = 0");
  const double x = a * t;
  const double value = 2.0 * t * t * t * x_minus_sin_over_x3(x);
  return KernelValue{cdouble(value, 0.0), KernelMethod::closed_form, std::nullopt, false};
}

KernelValue white_T_oracle(const FrequencyCoefficients& coeffs, double t, double tol) {
  require_time(t);
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  coeffs.require_constraint();
  require_nondegenerate(coeffs.a, coeffs.c);
  const double a = coeffs.a, c = coeffs.c, g = coeffs.g();
  if (t == 0.0) return KernelValue{0.0, KernelMethod::quadrature, 0.0, false};
  const cdouble eat = std::exp(kI * a * t);
  const cdouble ect = std::exp(kI * c * t);
  auto integrand = [&](double t2) {
    const cdouble A = (eat - std::exp(kI * a * t2)) / (kI * a);
    const cdouble C = (ect - std::exp(kI * c * t2)) / (kI * c);
    return std::exp(kI * g * t2) * A * C;
  };
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.osc_rate = std::abs(a) + std::abs(c) + std::abs(g);
  const auto res = integrate_adaptive(integrand, 0.0, t, opt);
  return KernelValue{res.value, KernelMethod::quadrature, res.err, false};
}

KernelValue double_integral_I(double alpha, double beta, double t,
                              const TemporalCorrelation& corr, double tol) {
  require_time(t);
  if (corr.is_white()) {
    throw PreconditionError("double_integral_I requires a colored correlation");
  }
  if (t == 0.0) return KernelValue{0.0, KernelMethod::quadrature, 0.0, false};
  const double s = alpha + beta;
  const double dm = alpha - beta;
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.osc_rate = 0.5 * (std::abs(s) + std::abs(dm));
  const double hi = upper_limit(corr, t);
  const auto res = integrate_adaptive(
      [&](double x) {
        return f_eval(corr, x) * sin_half_ratio(s, t - x) * std::cos(0.5 * dm * x);
      },
      0.0, hi, opt);
  const cdouble value = 4.0 * std::exp(kI * (0.5 * s * t)) * res.value;
  return KernelValue{value, KernelMethod::quadrature, 4.0 * res.err, false};
}

// Four-term reduction of
//   T = -(1/ac) int_0^t dt2 int_0^t dt4 (e^{iat}-e^{iat2})(e^{ict}-e^{ict4})
//        e^{ibt2} e^{idt4} f(t2-t4).
// Each term is a double_integral_I; with the sum constraint the four
// (alpha+beta) values are -g, -c, -a and 0, giving
//   T = -(4/ac) { e^{-igt/2} J(g, b-d)
//               - e^{iat/2} J(a, a+2b)
//               - e^{ict/2} J(c, c+2d)
//               + 1/2 int f(x) (t-x) cos((a+b)x) dx },
// J(s, m) = int_0^t f(x) sin_half(s, t-x) cos(m x / 2) dx.
KernelValue colored_T(const FrequencyCoefficients& coeffs, double t,
                      const TemporalCorrelation& corr, double tol) {
  require_time(t);
  coeffs.require_constraint();
  require_nondegenerate(coeffs.a, coeffs.c);
  if (corr.is_white()) {
    KernelValue v = white_T(coeffs, t);
    v.method = KernelMethod::closed_form;
    return v;
  }
  if (t == 0.0) return KernelValue{0.0, KernelMethod::quadrature, 0.0, false};
  const double a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
  const double g = coeffs.g();
  const double hi = upper_limit(corr, t);
  const double term_tol = tol / 4.0;
  double err = 0.0;
  auto J = [&](double s, double m) {
    QuadOptions opt;
    opt.abs_tol = term_tol;
    opt.osc_rate = 0.5 * (std::abs(s) + std::abs(m));
    const auto res = integrate_adaptive(
        [&](double x) {
          return f_eval(corr, x) * sin_half_ratio(s, t - x) * std::cos(0.5 * m * x);
        },
        0.0, hi, opt);
    err += res.err;
    return res.value;
  };
  QuadOptions lin_opt;
  lin_opt.abs_tol = term_tol;
  lin_opt.osc_rate = std::abs(a + b);
  const auto lin = integrate_adaptive(
      [&](double x) { return f_eval(corr, x) * (t - x) * std::cos((a + b) * x); }, 0.0, hi,
      lin_opt);
  err += lin.err;

  const cdouble value = -(4.0 / (a * c)) *
                        (std::exp(-kI * (0.5 * g * t)) * J(g, b - d) -
                         std::exp(kI * (0.5 * a * t)) * J(a, a + 2.0 * b) -
                         std::exp(kI * (0.5 * c * t)) * J(c, c + 2.0 * d) +
                         0.5 * lin.value);
  return KernelValue{value, KernelMethod::quadrature, 4.0 / std::abs(a * c) * err, false};
}

KernelValue colored_T_free(double a, double b, double t, const TemporalCorrelation& corr,
                           double tol) {
  require_time(t);
  if (a == 0.0) throw PreconditionError("degenerate coefficient a = 0");
  if (corr.is_white()) return white_T_free(a, t);
  if (t == 0.0) return KernelValue{0.0, KernelMethod::quadrature, 0.0, false};
  const double hi = upper_limit(corr, t);
  const double term_tol = tol / 2.0;
  QuadOptions opt1;
  opt1.abs_tol = term_tol;
  opt1.osc_rate = std::abs(b) + std::abs(a + b);
  const auto lin = integrate_adaptive(
      [&](double x) {
        return f_eval(corr, x) * (t - x) * (std::cos(b * x) + std::cos((a + b) * x));
      },
      0.0, hi, opt1);
  QuadOptions opt2;
  opt2.abs_tol = term_tol;
  opt2.osc_rate = std::abs(a) + std::abs(b);
  const auto osc = integrate_adaptive(
      [&](double x) {
        return f_eval(corr, x) * std::sin(0.5 * a * (t - x)) *
               std::cos(0.5 * (a + 2.0 * b) * x);
      },
      0.0, hi, opt2);
  const double value =
      (2.0 / (a * a)) * (lin.value - (4.0 / a) * std::cos(0.5 * a * t) * osc.value);
  const double err = (2.0 / (a * a)) * (lin.err + 4.0 / std::abs(a) * osc.err);
  return KernelValue{cdouble(value, 0.0), KernelMethod::quadrature, err, false};
}

double rate_asymptote(double a, double b, const TemporalCorrelation& corr) {
  if (a == 0.0) throw PreconditionError("degenerate coefficient a = 0");
  return (f_tilde(corr, b) + f_tilde(corr, a + b)) / (a * a);
}

KernelValue dT_dt_numeric(const FrequencyCoefficients& coeffs, double t,
                          const TemporalCorrelation& corr, double dt) {
  require_time(t);
  if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
  const double fastest = std::max({std::abs(coeffs.a), std::abs(coeffs.b),
                                   std::abs(coeffs.c), std::abs(coeffs.d)});
  bool warn = dt * fastest > 0.1;
  cdouble diff;
  if (t < dt) {  // one-sided at the boundary
    const cdouble hi = colored_T(coeffs, t + dt, corr).value;
    const cdouble lo = colored_T(coeffs, t, corr).value;
    diff = (hi - lo) / dt;
    warn = true;
  } else {
    const cdouble hi = colored_T(coeffs, t + dt, corr).value;
    const cdouble lo = colored_T(coeffs, t - dt, corr).value;
    diff = (hi - lo) / (2.0 * dt);
  }
  return KernelValue{diff, KernelMethod::quadrature, std::nullopt, warn};
}

double averaged_dT_dt(const FrequencyCoefficients& coeffs, const TemporalCorrelation& corr,
                      double t0, double window, int n_samples, double dt) {
  if (n_samples < 2) throw PreconditionError("need at least two samples");
  const double h = window / (n_samples - 1);
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double w = (i == 0 || i == n_samples - 1) ? 0.5 : 1.0;
    sum += w * dT_dt_numeric(coeffs, t0 + i * h, corr, dt).value.real();
  }
  return sum * h / window;
}

}  // namespace crad
