#include "crad/noise_box.hpp"

#include <algorithm>
#include <cmath>

#include "crad/correlations.hpp"
#include "crad/errors.hpp"
#include "crad/parallel.hpp"

namespace crad {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Small deterministic Gaussian stream: splitmix64 counter feeding
/// Box-Muller pairs.  Identical on every platform, unlike
/// std::normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = kTwoPi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  double next_unit() {  // (0, 1]
    state_ = splitmix64(state_ ^ counter_++);
    return (static_cast<double>(state_ >> 11) + 1.0) * 0x1.0p-53;
  }
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ull + 0x9E3779B97F4A7C15ull));
}

void BoxSpec::require_valid() const {
  if (!(L > 0.0)) throw ParameterError("box side must be positive");
  if (j_max < 1) throw ParameterError("mode radius must be >= 1");
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  if (dim != 1 && dim != 3) throw ParameterError("dim must be 1 or 3");
  if (!(r_C > 0.0)) throw ParameterError("r_C must be positive");
}

bool BoxSpec::spectrum_resolved() const {
  return k_of(j_max) * r_C >= 5.0;
}

std::size_t BoxSpec::n_modes() const {
  std::size_t n = 1;
  for (int ax = 0; ax < dim; ++ax) n *= static_cast<std::size_t>(modes_per_axis());
  return n;
}

std::size_t NoiseRealization::mode_index(const std::array<int, 3>& j) const {
  const int n = 2 * j_max + 1;
  std::size_t idx = 0;
  for (int ax = 0; ax < dim; ++ax) {
    if (std::abs(j[ax]) > j_max) throw PreconditionError("mode index out of range");
    idx = idx * n + static_cast<std::size_t>(j[ax] + j_max);
  }
  return idx;
}

cdouble NoiseRealization::mode(const std::array<int, 3>& j, int step) const {
  return steps.at(step)[mode_index(j)];
}

double mode_variance(const std::array<int, 3>& j, const BoxSpec& box) {
  box.require_valid();
  double k2 = 0.0;
  for (int ax = 0; ax < box.dim; ++ax) {
    if (std::abs(j[ax]) > box.j_max) throw PreconditionError("mode index out of range");
    const double k = box.k_of(j[ax]);
    k2 += k * k;
  }
  const double f_tilde = std::exp(-k2 * box.r_C * box.r_C);
  return std::pow(box.L, box.dim) * f_tilde / box.dt;
}

namespace {

// Orbit enumeration: representative j is the lexicographically positive
// member of {j, -j}; j = 0 is self-conjugate.
bool is_representative(const std::array<int, 3>& j, int dim) {
  for (int ax = 0; ax < dim; ++ax) {
    if (j[ax] > 0) return true;
    if (j[ax] < 0) return false;
  }
  return true;  // zero mode
}

bool is_zero(const std::array<int, 3>& j, int dim) {
  for (int ax = 0; ax < dim; ++ax) {
    if (j[ax] != 0) return false;
  }
  return true;
}

}  // namespace

NoiseRealization sample_noise(const BoxSpec& box, int n_steps, std::uint64_t seed) {
  box.require_valid();
  if (n_steps < 1) throw ParameterError("need at least one time step");
  NoiseRealization real;
  real.j_max = box.j_max;
  real.dim = box.dim;
  real.seed = seed;
  real.steps.assign(static_cast<std::size_t>(n_steps),
                    std::vector<cdouble>(box.n_modes()));

  const int r = box.j_max;
  std::array<int, 3> j{0, 0, 0};
  auto sample_orbit = [&](const std::array<int, 3>& rep) {
    const std::size_t rep_idx = real.mode_index(rep);
    GaussianStream stream(substream_seed(seed, rep_idx));
    const double var = mode_variance(rep, box);
    if (is_zero(rep, box.dim)) {
      const double sigma = std::sqrt(var);
      for (int n = 0; n < n_steps; ++n) {
        real.steps[n][rep_idx] = cdouble(sigma * stream.next(), 0.0);
        stream.next();  // keep the pair cadence uniform across orbits
      }
      return;
    }
    const std::array<int, 3> mirror{-rep[0], -rep[1], -rep[2]};
    const std::size_t mirror_idx = real.mode_index(mirror);
    const double sigma = std::sqrt(0.5 * var);
    for (int n = 0; n < n_steps; ++n) {
      const cdouble z(sigma * stream.next(), sigma * stream.next());
      real.steps[n][rep_idx] = z;
      real.steps[n][mirror_idx] = std::conj(z);
    }
  };

  if (box.dim == 1) {
    for (j[0] = 0; j[0] <= r; ++j[0]) sample_orbit(j);
  } else {
    for (j[0] = -r; j[0] <= r; ++j[0]) {
      for (j[1] = -r; j[1] <= r; ++j[1]) {
        for (j[2] = -r; j[2] <= r; ++j[2]) {
          if (is_representative(j, 3)) sample_orbit(j);
        }
      }
    }
  }
  return real;
}

double field_value(const NoiseRealization& real, const BoxSpec& box, const Vec3& x, int step) {
  box.require_valid();
  const auto& modes = real.steps.at(step);
  const int r = box.j_max;
  cdouble sum{};
  std::array<int, 3> j{0, 0, 0};
  if (box.dim == 1) {
    for (j[0] = -r; j[0] <= r; ++j[0]) {
      const double phase = box.k_of(j[0]) * x[0];
      sum += std::polar(1.0, phase) * modes[real.mode_index(j)];
    }
  } else {
    for (j[0] = -r; j[0] <= r; ++j[0]) {
      for (j[1] = -r; j[1] <= r; ++j[1]) {
        for (j[2] = -r; j[2] <= r; ++j[2]) {
          const double phase =
              box.k_of(j[0]) * x[0] + box.k_of(j[1]) * x[1] + box.k_of(j[2]) * x[2];
          sum += std::polar(1.0, phase) * modes[real.mode_index(j)];
        }
      }
    }
  }
  return sum.real() / std::pow(box.L, box.dim);
}

Estimate estimate_F_L(std::span<const NoiseRealization> realizations, const BoxSpec& box,
                      const Vec3& dx) {
  if (realizations.size() < 2) {
    throw PreconditionError("need at least two realizations for a jackknife error");
  }
  const int R = static_cast<int>(realizations.size());
  std::vector<double> per_real(realizations.size());
  const Vec3 origin{0.0, 0.0, 0.0};
  for (std::size_t r = 0; r < realizations.size(); ++r) {
    const auto& real = realizations[r];
    double acc = 0.0;
    const int n_steps = static_cast<int>(real.steps.size());
    for (int n = 0; n < n_steps; ++n) {
      acc += field_value(real, box, dx, n) * field_value(real, box, origin, n);
    }
    per_real[r] = acc / n_steps * box.dt;
  }
  double mean = 0.0;
  for (const double v : per_real) mean += v;
  mean /= R;
  // jackknife over realizations
  double var = 0.0;
  for (const double v : per_real) {
    const double loo = (mean * R - v) / (R - 1);
    var += (loo - mean) * (loo - mean);
  }
  var *= static_cast<double>(R - 1) / R;
  return Estimate{mean, std::sqrt(var), R};
}

double F_L_analytic(const BoxSpec& box, const Vec3& dx) {
  box.require_valid();
  const int r = box.j_max;
  auto axis_sum = [&](double x) {
    cdouble sum{};
    for (int j = -r; j <= r; ++j) {
      const double k = box.k_of(j);
      sum += std::polar(1.0, k * x) * std::exp(-k * k * box.r_C * box.r_C);
    }
    return sum;
  };
  cdouble total(1.0, 0.0);
  for (int ax = 0; ax < box.dim; ++ax) total *= axis_sum(dx[ax]) / box.L;
  return total.real();
}

double F_continuum(const BoxSpec& box, const Vec3& dx) {
  const SpatialCorrelation corr{box.r_C};
  double value = 1.0;
  for (int ax = 0; ax < box.dim; ++ax) value *= F_spatial_axis(dx[ax], corr);
  return value;
}

ConvergenceReport convergence_study(std::span<const double> L_sequence, const BoxSpec& tmpl,
                                    int n_realizations, std::uint64_t master_seed, int jobs) {
  tmpl.require_valid();
  if (L_sequence.size() < 2) throw ParameterError("need at least two box sizes");
  if (n_realizations < 2) throw ParameterError("need at least two realizations");
  ConvergenceReport report;
  const double L_min = *std::min_element(L_sequence.begin(), L_sequence.end());
  report.window_max = 1.75 * L_min;
  report.probe_dx = tmpl.r_C;
  const double resolution = tmpl.k_of(tmpl.j_max) * tmpl.r_C;  // k_max r_C carried over
  const int n_steps = 4;

  double prev_L = 0.0;
  for (std::size_t li = 0; li < L_sequence.size(); ++li) {
    const double L = L_sequence[li];
    if (L <= prev_L) throw ParameterError("L sequence must be strictly increasing");
    prev_L = L;
    BoxSpec box = tmpl;
    box.L = L;
    box.j_max = static_cast<int>(std::ceil(resolution * L / (kTwoPi * tmpl.r_C)));
    box.require_valid();

    double max_dev = 0.0;
    const double step = tmpl.r_C / 2.0;
    for (double x = 0.0; x <= report.window_max + 0.5 * step; x += step) {
      const Vec3 dx{x, 0.0, 0.0};
      max_dev = std::max(max_dev, std::abs(F_L_analytic(box, dx) - F_continuum(box, dx)));
    }

    std::vector<NoiseRealization> reals(static_cast<std::size_t>(n_realizations));
    parallel_for(reals.size(), jobs, [&](std::size_t i) {
      reals[i] = sample_noise(box, n_steps, substream_seed(master_seed, li * 1000003ull + i));
    });
    const Vec3 probe{report.probe_dx, 0.0, 0.0};
    const Estimate mc = estimate_F_L(reals, box, probe);

    report.rows.push_back(
        {L, max_dev, mc.value, F_L_analytic(box, probe), mc.std_err});
  }
  report.analytic_monotone = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (!(report.rows[i].max_abs_dev < report.rows[i - 1].max_abs_dev)) {
      report.analytic_monotone = false;
    }
  }
  return report;
}

}  // namespace crad
