#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "crad/series.hpp"

namespace crad {

/// Box discretization of the noise field: modes j with |j_i| <= j_max per
/// axis, white in time with step dt.
struct BoxSpec {
  double L;
  int j_max;
  double dt;
  int dim;  // 1 or 3
  double r_C;

  void require_valid() const;
  /// k_max r_C >= 5: the Gaussian spectrum is resolved to exp(-25).
  bool spectrum_resolved() const;
  int modes_per_axis() const { return 2 * j_max + 1; }
  std::size_t n_modes() const;
  double k_of(int j) const { return 2.0 * 3.14159265358979323846 * j / L; }
};

/// One sampled realization of the Fourier-mode amplitudes
/// N~_L(j, t_n), time-major.  The reality constraint N~(-j) = N~(j)* holds
/// exactly by construction.
struct NoiseRealization {
  int j_max = 0;
  int dim = 1;
  std::uint64_t seed = 0;
  std::vector<std::vector<cdouble>> steps;  // [n_steps][n_modes]

  std::size_t mode_index(const std::array<int, 3>& j) const;
  cdouble mode(const std::array<int, 3>& j, int step) const;
};

/// Per-step variance L^dim F~(2 pi j/L) / dt (the time delta discretized as
/// variance 1/dt per step).
double mode_variance(const std::array<int, 3>& j, const BoxSpec& box);

/// Complex Gaussian draws per (mode orbit, step): paired modes {j, -j} get
/// independent real/imag parts of variance var/2 on the representative and
/// the conjugate on the mirror; self-conjugate j = 0 is real with full
/// variance.  Substreams are derived by stable hashing of (seed, orbit), so
/// results do not depend on evaluation order.
NoiseRealization sample_noise(const BoxSpec& box, int n_steps, std::uint64_t seed);

/// Position-space field N_L(x, t_n) = (1/L^dim) sum_j e^{i k_j . x} N~(j, n).
double field_value(const NoiseRealization& real, const BoxSpec& box, const Vec3& x, int step);

struct Estimate {
  double value;
  double std_err;
  int n;
};

/// Monte Carlo estimate of E[N(x) N(y)] dt at displacement dx (jackknife
/// standard error over realizations).
Estimate estimate_F_L(std::span<const NoiseRealization> realizations, const BoxSpec& box,
                      const Vec3& dx);

/// Truncated mode sum (1/L^dim) sum_j e^{i k_j . dx} F~(k_j) (real part; the
/// imaginary part cancels by symmetry).
double F_L_analytic(const BoxSpec& box, const Vec3& dx);

/// Continuum Gaussian correlator restricted to the box dimension.
double F_continuum(const BoxSpec& box, const Vec3& dx);

struct ConvergenceRow {
  double L;
  double max_abs_dev;   // max over the displacement window of |F_L - F|
  double mc_value;      // MC estimate at the probe displacement
  double mc_analytic;   // analytic value at the probe displacement
  double mc_std_err;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool analytic_monotone = false;  // strictly decreasing max deviation
  double probe_dx;
  double window_max;
};

/// Convergence of F_L to F over an increasing box sequence.  The deviation
/// is measured over a fixed physical displacement window (default
/// 1.75 * L_min), where small boxes expose their periodic images.  The
/// template's spectral resolution k_max r_C carries over to each L.
ConvergenceReport convergence_study(std::span<const double> L_sequence, const BoxSpec& tmpl,
                                    int n_realizations, std::uint64_t master_seed,
                                    int jobs = 0);

/// Deterministic substream seed for (master, index) pairs.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

}  // namespace crad
