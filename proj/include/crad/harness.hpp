#pragma once

#include <cstdint>
#include <string>

#include "crad/config.hpp"
#include "crad/emission_rate.hpp"
#include "crad/params.hpp"
#include "crad/table.hpp"

namespace crad {

struct OutputSpec {
  std::string path = "-";  // '-' = stdout
  TableFormat format = TableFormat::csv;
  int precision = 12;
};

struct KernelTask {
  double a = 1.0, b = 0.0, c = -1.0, d = 0.0, t = 1.0;
  std::string corr = "white";
  bool oracle = false;
};

struct RateTask {
  double p = 0.0;        // single point when p_range is empty
  std::string p_range;   // "MIN:MAX:N"
  RateMode mode = RateMode::white;
  std::string corr = "white";
};

struct SuppressionTask {
  double L = 100.0;
  double ell = 10.0;
  double packet_width = 1.0;
  int grid_radius = 40;
  std::string sweep;  // "" | "ell" | "L"
  int n = 8;
};

struct NoiseboxTask {
  double L = 20.0;
  double rc = 1.0;
  int jmax = 16;
  double dt = 0.1;
  int dim = 1;
  int nreal = 200;
  std::uint64_t seed = 1;
  std::string convergence;  // "L1:L2:L3" switches to the convergence report
};

struct SweepTask {
  double p_min = 1.0;
  double p_max = 10.0;
  int n = 16;
  std::string corr = "white";
};

ResultTable run_kernel(const KernelTask& task);
ResultTable run_rate(const RateTask& task, const PhysicalParams& params, int jobs);
ResultTable run_suppression(const SuppressionTask& task);
ResultTable run_noisebox(const NoiseboxTask& task, int jobs);
ResultTable run_sweep(const SweepTask& task, const PhysicalParams& params, int jobs);

/// The factor-of-2 audit: windowed rate from the exact white free kernel
/// against the truncated (-t/ac) approximation, the white spectral bracket,
/// and the wave-packet suppression of the extra term.
ResultTable reproduce_factor_of_two();

/// Dispatches on [task] name; validates every key of every section.
/// Exit-code convention (applied by the CLI): 0 ok, 2 config error,
/// 3 numerical failure, 4 io failure.
ResultTable run_config(const Config& config, int jobs);

OutputSpec output_spec_from_config(const Config& config);

/// Equivalent canonical config for each task (flag-driven runs hash and
/// emit exactly what the config-file path would).
Config config_for(const KernelTask& task);
Config config_for(const RateTask& task, const PhysicalParams& params);
Config config_for(const SuppressionTask& task);
Config config_for(const NoiseboxTask& task);
Config config_for(const SweepTask& task, const PhysicalParams& params);
Config config_for_reproduce();

}  // namespace crad
