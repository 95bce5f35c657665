#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace crad {

using cdouble = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kSeriesThreshold = 1e-4;

/// (e^{ix} - 1)/(ix).  Five-term series below the threshold keeps full
/// double accuracy through x = 0.
inline cdouble phi_exp(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const cdouble ix(0.0, x);
    cdouble term(1.0, 0.0);
    cdouble sum(1.0, 0.0);
    for (int n = 2; n <= 5; ++n) {
      term *= ix / static_cast<double>(n);
      sum += term;
    }
    return sum;
  }
  const cdouble ix(0.0, x);
  return (std::exp(ix) - 1.0) / ix;
}

/// sin(x)/x with series continuation at x = 0.
inline double sin_ratio(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

/// sin(s*u/2)/s, finite through s = 0 where it tends to u/2.
inline double sin_half_ratio(double s, double u) {
  return 0.5 * u * sin_ratio(0.5 * s * u);
}

/// (x - sin x)/x^3; tends to 1/6 as x -> 0.
inline double x_minus_sin_over_x3(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return (1.0 / 6.0) * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return (x - std::sin(x)) / (x * x * x);
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm_sq(const Vec3& a) { return dot(a, a); }

inline Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 add(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

}  // namespace crad
