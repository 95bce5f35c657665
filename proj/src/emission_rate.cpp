#include "crad/emission_rate.hpp"

#include <cmath>

#include "crad/errors.hpp"
#include "crad/parallel.hpp"
#include "crad/quadrature.hpp"

namespace crad {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
}  // namespace

double coeff_a(const Kinematics& kin, const PhysicalParams& params) {
  require_valid(params);
  if (!(kin.p > 0.0)) throw ParameterError("photon wavenumber must be positive");
  const double p = kin.p;
  const double qp = kin.q[2] * p;  // photon along +z
  return p * params.c - params.hbar * p * p / (2.0 * params.mass_m) -
         params.hbar * qp / params.mass_m;
}

double capital_lambda(const Kinematics& kin, const PhysicalParams& params) {
  require_valid(params);
  if (!(kin.p > 0.0)) throw ParameterError("photon wavenumber must be positive");
  if (!(kin.box_L > 0.0)) throw ParameterError("box side must be positive");
  const double L6 = std::pow(kin.box_L, 6);
  return params.gamma * params.hbar * params.charge_e * params.charge_e /
         (L6 * params.eps0_effective() * params.c * params.mass_m0 * params.mass_m0 * kin.p);
}

double beta_param(double p, const PhysicalParams& params) {
  return params.mass_m * params.r_C / (params.hbar * p);
}

double big_D(double p, const PhysicalParams& params) {
  return p * params.c + params.hbar * p * p / (2.0 * params.mass_m);
}

QzIntegral qz_integral(double p, double t, const PhysicalParams& params, double tol) {
  require_valid(params);
  if (!(p > 0.0)) throw ParameterError("photon wavenumber must be positive");
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  QzIntegral out;
  out.beta = beta_param(p, params);
  out.D = big_D(p, params);
  out.approx = kSqrtPi / (out.beta * out.D * out.D);
  out.approx_reliable = out.beta * out.D >= 10.0;

  // substitute u = z beta: (1/beta) int du e^{-u^2} (1-cos[(D - u/beta)t])/(D - u/beta)^2
  const double beta = out.beta;
  const double D = out.D;
  const double u_max = 8.0;
  QuadOptions opt;
  // tol is relative; the unscaled integral is of order sqrt(pi)/D^2
  opt.abs_tol = tol * kSqrtPi / (D * D);
  opt.osc_rate = t / beta;
  // 1 - cos[(D-z)t] = 2 sin^2 with the half angle keeps the removable point
  // z = D stable when beta D is small
  const auto res = integrate_adaptive(
      [&](double u) {
        const double denom = D - u / beta;
        const double half = sin_ratio(0.5 * denom * t);
        return std::exp(-u * u) * 0.5 * t * t * half * half;
      },
      -u_max, u_max, opt);
  out.numeric = res.value / beta;
  out.err_est = res.err / beta;
  return out;
}

namespace {

RateResult make_rate(double value, double p, const PhysicalParams& params, RateMethod method) {
  RateResult r;
  r.value = value;
  r.method = method;
  r.beta_D = beta_param(p, params) * big_D(p, params);
  r.beta_D_reliable = r.beta_D >= 10.0;
  return r;
}

}  // namespace

RateResult rate_white(double p, const PhysicalParams& params) {
  require_valid(params);
  if (!(p > 0.0)) throw ParameterError("photon wavenumber must be positive");
  const double lambda = collapse_rate_lambda(params);
  const double value =
      lambda * params.hbar * params.charge_e * params.charge_e /
      (2.0 * kPi * kPi * params.eps0_effective() * std::pow(params.c, 3) *
       params.mass_m0 * params.mass_m0 * params.r_C * params.r_C * p);
  RateResult r = make_rate(value, p, params, RateMethod::analytic);
  r.has_zero_freq_term = true;  // white bracket 1/2 [f~(0) + f~(pc)] = 1
  return r;
}

RateResult rate_colored_planewave(double p, const PhysicalParams& params,
                                  const TemporalCorrelation& corr) {
  RateResult base = rate_white(p, params);
  const double fpc = f_tilde(corr, p * params.c);
  const double bracket = 0.5 * (f_tilde(corr, 0.0) + fpc);
  RateResult r = make_rate(bracket * base.value, p, params, RateMethod::analytic);
  r.f_tilde_pc = fpc;
  r.has_zero_freq_term = true;
  return r;
}

RateResult rate_golden_rule(double p, const PhysicalParams& params,
                            const TemporalCorrelation& corr) {
  RateResult base = rate_white(p, params);
  const double fpc = f_tilde(corr, p * params.c);
  RateResult r = make_rate(0.5 * fpc * base.value, p, params, RateMethod::analytic);
  r.f_tilde_pc = fpc;
  r.has_zero_freq_term = false;
  return r;
}

RateResult rate_white_pipeline(double p, double t, const PhysicalParams& params, double tol) {
  // dGamma/dp = 4 pi p^2 (2 pi)^-6 (L^6 Lambda) (pi / r_C^4) (m/(hbar p)) I_z.
  // The transverse Gaussian integrals give pi / r_C^4 after the polarization
  // sum q_x^2 + q_y^2; all box factors cancel against the mode-count (L/2pi)^6.
  const Kinematics kin{p, {0.0, 0.0, -p}, 1.0};
  const double lambda_bar = capital_lambda(kin, params);  // box_L = 1 -> L^6 Lambda
  const QzIntegral qz = qz_integral(p, t, params, tol);
  const double value = 4.0 * kPi * p * p / std::pow(2.0 * kPi, 6) * lambda_bar *
                       (kPi / std::pow(params.r_C, 4)) *
                       (params.mass_m / (params.hbar * p)) * qz.numeric;
  RateResult r = make_rate(value, p, params, RateMethod::pipeline);
  r.beta_D_reliable = qz.approx_reliable;
  return r;
}

RateMode parse_rate_mode(const std::string& text) {
  if (text == "white") return RateMode::white;
  if (text == "planewave") return RateMode::planewave;
  if (text == "golden") return RateMode::golden;
  throw ConfigError("unknown rate mode '" + text + "' (white | planewave | golden)");
}

std::string rate_mode_name(RateMode mode) {
  switch (mode) {
    case RateMode::white:
      return "white";
    case RateMode::planewave:
      return "planewave";
    case RateMode::golden:
      return "golden";
  }
  return "?";
}

std::vector<SpectrumRow> spectrum_sweep(double p_min, double p_max, int n_points,
                                        const PhysicalParams& params,
                                        const TemporalCorrelation& corr, RateMode mode,
                                        int jobs) {
  if (!(p_min > 0.0) || !(p_max > p_min)) {
    throw ParameterError("need 0 < p_min < p_max");
  }
  if (n_points < 2) throw ParameterError("need n_points >= 2");
  require_valid(params);
  std::vector<SpectrumRow> rows(n_points);
  const double log_lo = std::log(p_min);
  const double log_hi = std::log(p_max);
  parallel_for(static_cast<std::size_t>(n_points), jobs, [&](std::size_t i) {
    const double frac = static_cast<double>(i) / (n_points - 1);
    const double p = std::exp(log_lo + frac * (log_hi - log_lo));
    RateResult r{};
    switch (mode) {
      case RateMode::white:
        r = rate_white(p, params);
        break;
      case RateMode::planewave:
        r = rate_colored_planewave(p, params, corr);
        break;
      case RateMode::golden:
        r = rate_golden_rule(p, params, corr);
        break;
    }
    rows[i] = SpectrumRow{p, r.value, r.f_tilde_pc, r.beta_D_reliable};
  });
  return rows;
}

std::pair<Vec3, Vec3> polarization_pair(const Vec3& dir) {
  const double n = std::sqrt(norm_sq(dir));
  if (!(n > 0.0)) throw ParameterError("direction must be nonzero");
  const Vec3 unit{dir[0] / n, dir[1] / n, dir[2] / n};
  // pick the axis least aligned with dir as the seed
  Vec3 seed{1.0, 0.0, 0.0};
  if (std::abs(unit[0]) > std::abs(unit[1])) seed = {0.0, 1.0, 0.0};
  if (std::abs(unit[2]) < std::min(std::abs(unit[0]), std::abs(unit[1]))) seed = {0.0, 0.0, 1.0};
  // Gram-Schmidt
  const double proj = dot(seed, unit);
  Vec3 e1{seed[0] - proj * unit[0], seed[1] - proj * unit[1], seed[2] - proj * unit[2]};
  const double n1 = std::sqrt(norm_sq(e1));
  e1 = {e1[0] / n1, e1[1] / n1, e1[2] / n1};
  const Vec3 e2{unit[1] * e1[2] - unit[2] * e1[1], unit[2] * e1[0] - unit[0] * e1[2],
                unit[0] * e1[1] - unit[1] * e1[0]};
  return {e1, e2};
}

}  // namespace crad
