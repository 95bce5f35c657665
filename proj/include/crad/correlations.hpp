#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crad/series.hpp"

namespace crad {

/// Temporal noise correlation f(t): even, normalized so that the integral
/// over the whole line is 1 (the white-noise limit is f -> delta).
class TemporalCorrelation {
 public:
  enum class Kind { white, exponential, gaussian, tabulated };

  static TemporalCorrelation white();
  static TemporalCorrelation exponential(double tau);
  static TemporalCorrelation gaussian(double tau);
  /// Samples (t, f(t)) with t ascending from 0; f extends evenly to t < 0.
  /// Normalization 2*integral[0,T] = 1 is checked to 1e-6.
  static TemporalCorrelation tabulated(std::vector<std::pair<double, double>> samples);
  /// Two-column CSV (t, f) with a header line; ragged or unsorted rows rejected.
  static TemporalCorrelation from_csv(const std::string& path);
  /// "white" | "exp:TAU" | "gauss:TAU" | "file:PATH"
  static TemporalCorrelation parse(const std::string& spec);

  Kind kind() const { return kind_; }
  bool is_white() const { return kind_ == Kind::white; }
  double tau() const;
  std::string tag() const;

  /// x beyond which the remaining mass of f is below eps; used to cut
  /// integration ranges.
  double support_hint(double eps = 1e-14) const;

  const std::vector<double>& table_ts() const;
  const std::vector<double>& table_fs() const;

 private:
  TemporalCorrelation(Kind kind, double tau) : kind_(kind), tau_(tau) {}
  Kind kind_;
  double tau_ = 0.0;
  std::vector<double> ts_, fs_;
};

/// Pointwise density f(t).  The white delta has no pointwise value and is
/// rejected.
double f_eval(const TemporalCorrelation& corr, double t);

/// Spectral weight f~(omega) = 2 int_0^inf f(t) cos(omega t) dt.
/// White -> 1; exponential -> 1/(1 + (omega tau)^2); gaussian ->
/// exp(-(omega tau)^2/2); tabulated -> segment-exact cosine transform of the
/// linear interpolant.
double f_tilde(const TemporalCorrelation& corr, double omega);

/// Independent quadrature oracle for f_tilde over [0, t_max].
double f_tilde_numeric(const TemporalCorrelation& corr, double omega, double t_max,
                       double abs_tol = 1e-8);

struct SpatialCorrelation {
  double r_C;
};

/// F(x) = (sqrt(4 pi) r_C)^-3 exp(-x^2 / 4 r_C^2), separable across axes.
double F_spatial(const Vec3& dx, const SpatialCorrelation& corr);
double F_spatial_axis(double dx, const SpatialCorrelation& corr);

/// Fourier transform exp(-k^2 r_C^2).
double F_tilde_spatial(const Vec3& k, const SpatialCorrelation& corr);
double F_tilde_spatial_axis(double k, const SpatialCorrelation& corr);

/// Spatially confined correlator F(x - y) exp(-(x + y)^2 / ell^2).
double confined_correlator(const Vec3& x, const Vec3& y, const SpatialCorrelation& corr,
                           double ell);

}  // namespace crad
