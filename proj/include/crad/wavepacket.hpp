#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "crad/series.hpp"

namespace crad {

using Index3 = std::array<int, 3>;

/// Quantization box plus the spatial confinement length of the noise.
/// ell may be infinite (unconfined noise).
struct CutoffGeometry {
  double box_L;
  double ell = std::numeric_limits<double>::infinity();

  bool ell_finite() const { return std::isfinite(ell); }
  double grid_spacing() const { return 2.0 * 3.14159265358979323846 / box_L; }

  /// r_C << ell << L and ell >> 1/width: the regime of the continuum
  /// replacement.
  bool physical_regime(double r_C, double packet_width) const;
};

/// Final-state wave packet on the reciprocal grid: amplitudes h(Delta) on
/// integer offsets |Delta_i| <= radius, with sum |h|^2 = 1.
class WavePacket {
 public:
  /// Isotropic Gaussian with momentum-space width w: |h|^2 ~ exp(-k^2/2w^2),
  /// truncated at the radius and renormalized on the grid.
  static WavePacket gaussian(double width, double grid_spacing, int radius);

  /// Explicit amplitudes in row-major order over the (2r+1)^3 cube;
  /// renormalized.
  static WavePacket from_amplitudes(double grid_spacing, int radius,
                                    std::vector<cdouble> amplitudes);

  cdouble amplitude(const Index3& delta) const;  // 0 outside the support
  double norm_sq() const;

  int radius() const { return radius_; }
  double width() const { return width_; }
  double grid_spacing() const { return spacing_; }
  bool separable() const { return separable_; }
  /// Per-axis real amplitudes (separable packets only), indexed delta + radius.
  const std::vector<double>& axis_amplitudes() const;

 private:
  WavePacket() = default;
  double spacing_ = 0.0;
  double width_ = 0.0;
  int radius_ = 0;
  bool separable_ = false;
  std::vector<double> axis_;     // separable representation
  std::vector<cdouble> dense_;   // general representation
};

/// Per-axis confinement factor (1/2L) int_{-L}^{L} dy e^{i kappa y/2}
/// e^{-y^2/ell^2} at kappa = (2 pi/L) * index.  Finite ell (<= L/5, so the
/// limits extend to infinity): (sqrt(pi) ell / 2L) exp(-kappa^2 ell^2/16).
/// Infinite ell: exactly delta_{index,0} on the grid.
double axis_y_factor(int kappa_index, const CutoffGeometry& geom);

/// Product of the three axis factors at physical kappa (must sit on the
/// reciprocal grid).
cdouble y_integral_factor(const Vec3& kappa, const CutoffGeometry& geom);
double y_integral_factor_idx(const Index3& kappa_index, const CutoffGeometry& geom);

/// K_jk = h*(k - q - p) h(j - q - p) * y factor at kappa = k - j.
/// All wavevectors are integer grid indices (physical value (2 pi/L) index).
cdouble K_kernel(const Index3& j, const Index3& k, const Index3& q, const Index3& p,
                 const WavePacket& packet, const CutoffGeometry& geom);

/// Sum_k K_kk.  Finite ell: (sqrt(pi) ell/2L)^3 * sum |h|^2 in closed form;
/// infinite ell: the Kronecker branch gives sum |h|^2 exactly.
double diagonal_sum(const WavePacket& packet, const CutoffGeometry& geom);

using ThetaWeight = std::function<cdouble(const Index3& j, const Index3& k)>;

/// E|T|^2 = sum_k sum_j Theta_kj K_kj, evaluated exactly over the packet
/// support centered at qp = q + p.  Work is split over k-rows in fixed
/// blocks and reduced in index order.
cdouble transition_prob_wavepacket(const ThetaWeight& theta, const WavePacket& packet,
                                   const CutoffGeometry& geom, const Index3& qp = {0, 0, 0},
                                   int jobs = 0);

/// Theta == 1 specialization.  For separable packets the double sum
/// factorizes exactly into per-axis sums, making large supports cheap.
double transition_prob_unit_theta(const WavePacket& packet, const CutoffGeometry& geom);

struct ContinuumReport {
  struct Row {
    double L;
    double diagonal;    // sum_k K_kk
    double deviation;   // |transition_prob(unit Theta) - 1|
  };
  std::vector<Row> rows;
  bool diagonal_monotone = false;
  /// Nonincreasing within a small slack: the deviation plateaus at the
  /// finite-(ell * width) floor once the box stops mattering.
  bool deviation_monotone = false;
};

/// Diagnostics over an increasing box sequence at fixed ell and fixed
/// physical packet width.
ContinuumReport continuum_limit_check(double packet_width, double ell,
                                      std::span<const double> L_sequence,
                                      double support_radius_widths = 5.0);

}  // namespace crad
