#include "crad/harness.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "crad/correlations.hpp"
#include "crad/noise_box.hpp"
#include "crad/time_kernels.hpp"
#include "crad/version.hpp"
#include "crad/wavepacket.hpp"

namespace crad {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void stamp(ResultTable& table, const Config& config, std::uint64_t seed) {
  table.metadata["version"] = kVersion;
  table.metadata["seed"] = std::to_string(seed);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config.canonical())));
  table.metadata["config_hash"] = buf;
}

void set_params_section(Config& config, const PhysicalParams& params) {
  auto& section = config.sections["params"];
  section["gamma"] = fmt(params.gamma);
  section["r_C"] = fmt(params.r_C);
  section["mass_m"] = fmt(params.mass_m);
  section["mass_m0"] = fmt(params.mass_m0);
  section["charge_e"] = fmt(params.charge_e);
  section["eps0"] = fmt(params.eps0);
  section["c"] = fmt(params.c);
  section["hbar"] = fmt(params.hbar);
  section["unit_system"] = params.unit_system == UnitSystem::SI ? "SI" : "CGS";
}

void check_keys(const Config& config, const std::string& section,
                const std::set<std::string>& allowed) {
  const auto it = config.sections.find(section);
  if (it == config.sections.end()) return;
  for (const auto& [key, value] : it->second) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
  }
}

std::vector<double> parse_colon_list(const std::string& text, const std::string& context) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) {
    values.push_back(parse_double(item, context));
  }
  if (values.empty()) throw ConfigError(context + ": empty list");
  return values;
}

}  // namespace

Config config_for(const KernelTask& task) {
  Config config;
  auto& t = config.sections["task"];
  t["name"] = "kernel";
  t["a"] = fmt(task.a);
  t["b"] = fmt(task.b);
  t["c"] = fmt(task.c);
  t["d"] = fmt(task.d);
  t["t"] = fmt(task.t);
  t["corr"] = task.corr;
  t["oracle"] = task.oracle ? "1" : "0";
  return config;
}

Config config_for(const RateTask& task, const PhysicalParams& params) {
  Config config;
  auto& t = config.sections["task"];
  t["name"] = "rate";
  if (task.p_range.empty()) {
    t["p"] = fmt(task.p);
  } else {
    t["p_range"] = task.p_range;
  }
  t["mode"] = rate_mode_name(task.mode);
  t["corr"] = task.corr;
  set_params_section(config, params);
  return config;
}

Config config_for(const SuppressionTask& task) {
  Config config;
  auto& t = config.sections["task"];
  t["name"] = "suppression";
  t["L"] = fmt(task.L);
  t["ell"] = fmt(task.ell);
  t["packet_width"] = fmt(task.packet_width);
  t["grid_radius"] = std::to_string(task.grid_radius);
  if (!task.sweep.empty()) t["sweep"] = task.sweep;
  t["n"] = std::to_string(task.n);
  return config;
}

Config config_for(const NoiseboxTask& task) {
  Config config;
  auto& t = config.sections["task"];
  t["name"] = "noisebox";
  t["L"] = fmt(task.L);
  t["rc"] = fmt(task.rc);
  t["jmax"] = std::to_string(task.jmax);
  t["dt"] = fmt(task.dt);
  t["dim"] = std::to_string(task.dim);
  t["nreal"] = std::to_string(task.nreal);
  t["seed"] = std::to_string(task.seed);
  if (!task.convergence.empty()) t["convergence"] = task.convergence;
  return config;
}

Config config_for(const SweepTask& task, const PhysicalParams& params) {
  Config config;
  auto& t = config.sections["task"];
  t["name"] = "sweep";
  t["p_min"] = fmt(task.p_min);
  t["p_max"] = fmt(task.p_max);
  t["n"] = std::to_string(task.n);
  t["corr"] = task.corr;
  set_params_section(config, params);
  return config;
}

Config config_for_reproduce() {
  Config config;
  config.sections["task"]["name"] = "reproduce";
  return config;
}

ResultTable run_kernel(const KernelTask& task) {
  const TemporalCorrelation corr = TemporalCorrelation::parse(task.corr);
  const FrequencyCoefficients coeffs =
      FrequencyCoefficients::checked(task.a, task.b, task.c, task.d);
  KernelValue value;
  if (task.oracle) {
    if (!corr.is_white()) {
      throw ConfigError("the oracle route evaluates the white kernel only");
    }
    value = white_T_oracle(coeffs, task.t, 1e-9);
  } else {
    value = colored_T(coeffs, task.t, corr);
  }
  ResultTable table;
  table.columns = {"a", "b", "c", "d", "t", "corr", "value_re", "value_im", "method", "err_est"};
  const char* method = value.method == KernelMethod::closed_form ? "closed_form"
                       : value.method == KernelMethod::quadrature ? "quadrature"
                                                                  : "limit";
  table.add_row({task.a, task.b, task.c, task.d, task.t, corr.tag(), value.value.real(),
                 value.value.imag(), std::string(method),
                 value.err_est ? Cell(*value.err_est) : Cell(std::string())});
  stamp(table, config_for(task), 0);
  return table;
}

ResultTable run_rate(const RateTask& task, const PhysicalParams& params, int jobs) {
  const TemporalCorrelation corr = TemporalCorrelation::parse(task.corr);
  ResultTable table;
  table.columns = {"p", "rate", "mode", "corr_tag", "f_tilde_pc", "beta_D_flag"};
  auto add = [&](const RateResult& r, double p) {
    table.add_row({p, r.value, rate_mode_name(task.mode), corr.tag(), r.f_tilde_pc,
                   std::string(r.beta_D_reliable ? "ok" : "low")});
  };
  auto eval = [&](double p) {
    switch (task.mode) {
      case RateMode::white:
        return rate_white(p, params);
      case RateMode::planewave:
        return rate_colored_planewave(p, params, corr);
      case RateMode::golden:
        return rate_golden_rule(p, params, corr);
    }
    throw ConfigError("bad mode");
  };
  if (task.p_range.empty()) {
    if (!(task.p > 0.0)) throw ConfigError("rate task needs p > 0 or p_range");
    add(eval(task.p), task.p);
  } else {
    const auto range = parse_colon_list(task.p_range, "task.p_range");
    if (range.size() != 3) throw ConfigError("p_range must be MIN:MAX:N");
    const int n = static_cast<int>(range[2]);
    const auto rows =
        spectrum_sweep(range[0], range[1], n, params, corr, task.mode, jobs);
    for (const auto& row : rows) {
      table.add_row({row.p, row.rate, rate_mode_name(task.mode), corr.tag(), row.f_tilde_pc,
                     std::string(row.beta_D_reliable ? "ok" : "low")});
    }
  }
  stamp(table, config_for(task, params), 0);
  return table;
}

namespace {

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [x, y] : points) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ResultTable run_suppression(const SuppressionTask& task) {
  ResultTable table;
  table.columns = {"L", "ell", "diagonal_sum", "offdiag_recovery", "slope_estimate"};

  std::vector<std::pair<double, double>> geometries;  // (L, ell)
  if (task.sweep == "ell") {
    for (int i = 0; i < task.n; ++i) {
      const double frac = task.n == 1 ? 0.0 : static_cast<double>(i) / (task.n - 1);
      const double ratio = 0.01 * std::pow(10.0, frac);  // ell/L over a decade
      geometries.emplace_back(task.L, ratio * task.L);
    }
  } else if (task.sweep == "L") {
    for (int i = 0; i < task.n; ++i) {
      const double frac = task.n == 1 ? 0.0 : static_cast<double>(i) / (task.n - 1);
      geometries.emplace_back(task.ell * 5.0 * std::pow(10.0, frac), task.ell);
    }
  } else if (task.sweep.empty()) {
    geometries.emplace_back(task.L, task.ell);
  } else {
    throw ConfigError("sweep must be 'ell' or 'L'");
  }

  std::vector<std::pair<double, double>> law_points;  // (ell/L, diagonal)
  std::vector<std::array<double, 4>> rows;
  for (const auto& [L, ell] : geometries) {
    const CutoffGeometry geom{L, ell};
    const double spacing = geom.grid_spacing();
    const WavePacket packet = WavePacket::gaussian(task.packet_width, spacing, task.grid_radius);
    const double diag = diagonal_sum(packet, geom);
    const double recovery = transition_prob_unit_theta(packet, geom);
    law_points.emplace_back(ell / L, diag);
    rows.push_back({L, ell, diag, recovery});
  }
  double slope;
  if (law_points.size() >= 2) {
    slope = fit_loglog_slope(law_points);
  } else {
    // two-point variation of the exact cubic law
    const auto& [L, ell] = geometries.front();
    const CutoffGeometry g1{L, ell}, g2{L, ell / 2.0};
    const WavePacket packet =
        WavePacket::gaussian(task.packet_width, g1.grid_spacing(), task.grid_radius);
    slope = std::log(diagonal_sum(packet, g1) / diagonal_sum(packet, g2)) / std::log(2.0);
  }
  for (const auto& row : rows) {
    table.add_row({row[0], row[1], row[2], row[3], slope});
  }
  stamp(table, config_for(task), 0);
  return table;
}

ResultTable run_noisebox(const NoiseboxTask& task, int jobs) {
  BoxSpec box{task.L, task.jmax, task.dt, task.dim, task.rc};
  box.require_valid();
  ResultTable table;
  if (!task.convergence.empty()) {
    const auto Ls = parse_colon_list(task.convergence, "task.convergence");
    const auto report = convergence_study(Ls, box, task.nreal, task.seed, jobs);
    table.columns = {"L", "max_abs_dev", "mc_value", "mc_analytic", "mc_std_err",
                     "analytic_monotone"};
    for (const auto& row : report.rows) {
      table.add_row({row.L, row.max_abs_dev, row.mc_value, row.mc_analytic, row.mc_std_err,
                     std::string(report.analytic_monotone ? "yes" : "no")});
    }
  } else {
    std::vector<NoiseRealization> reals(static_cast<std::size_t>(task.nreal));
    for (std::size_t i = 0; i < reals.size(); ++i) {
      reals[i] = sample_noise(box, 4, substream_seed(task.seed, i));
    }
    table.columns = {"dx", "F_L", "F_continuum", "mc_estimate", "mc_std_err"};
    const double max_dx = std::min(5.0 * task.rc, task.L / 2.0);
    for (double dx = 0.0; dx <= max_dx + 0.25 * task.rc; dx += 0.5 * task.rc) {
      const Vec3 v{dx, 0.0, 0.0};
      const Estimate mc = estimate_F_L(reals, box, v);
      table.add_row({dx, F_L_analytic(box, v), F_continuum(box, v), mc.value, mc.std_err});
    }
  }
  stamp(table, config_for(task), task.seed);
  return table;
}

ResultTable run_sweep(const SweepTask& task, const PhysicalParams& params, int jobs) {
  const TemporalCorrelation corr = TemporalCorrelation::parse(task.corr);
  ResultTable table;
  table.columns = {"p", "rate_white", "rate_planewave", "rate_golden", "f_tilde_pc"};
  const auto white = spectrum_sweep(task.p_min, task.p_max, task.n, params, corr,
                                    RateMode::white, jobs);
  const auto plane = spectrum_sweep(task.p_min, task.p_max, task.n, params, corr,
                                    RateMode::planewave, jobs);
  const auto golden = spectrum_sweep(task.p_min, task.p_max, task.n, params, corr,
                                     RateMode::golden, jobs);
  for (std::size_t i = 0; i < white.size(); ++i) {
    table.add_row({white[i].p, white[i].rate, plane[i].rate, golden[i].rate,
                   golden[i].f_tilde_pc});
  }
  stamp(table, config_for(task, params), 0);
  return table;
}

ResultTable reproduce_factor_of_two() {
  ResultTable table;
  table.columns = {"check", "value", "reference", "status"};

  // exact white free kernel vs the truncated -t/(ac) approximation, both as
  // windowed averages of dT/dt at a = 1
  const double a = 1.0;
  const FrequencyCoefficients coeffs{a, 0.0, -a, 0.0};
  const TemporalCorrelation white = TemporalCorrelation::white();
  const double period = 2.0 * kPi / a;
  const double t0 = 20.0 * period;
  const double window = 10.0 * period;
  const double exact_avg = averaged_dT_dt(coeffs, white, t0, window, 400, 1e-3);
  const double truncated_avg = -1.0 / (a * -a);  // d/dt of -t/(ac)
  const double ratio = exact_avg / truncated_avg;
  table.add_row({std::string("exact_to_truncated_ratio"), ratio, 2.0,
                 std::string(std::abs(ratio - 2.0) <= 0.02 ? "pass" : "fail")});

  // white spectral bracket 1/2 [f~(0) + f~(pc)]
  const double bracket = 0.5 * (f_tilde(white, 0.0) + f_tilde(white, 12.3));
  table.add_row({std::string("white_bracket"), bracket, 1.0,
                 std::string(bracket == 1.0 ? "pass" : "fail")});

  // wave-packet + confined-noise suppression at ell/L = 0.05
  const double L = 100.0, ell = 5.0, width = 1.0;
  const CutoffGeometry geom{L, ell};
  const WavePacket packet = WavePacket::gaussian(
      width, geom.grid_spacing(),
      static_cast<int>(std::ceil(5.0 * width / geom.grid_spacing())));
  const double weight = diagonal_sum(packet, geom) / transition_prob_unit_theta(packet, geom);
  table.add_row({std::string("extra_term_weight"), weight, 0.0,
                 std::string(weight < 1e-3 ? "pass" : "fail")});

  stamp(table, config_for_reproduce(), 0);
  return table;
}

OutputSpec output_spec_from_config(const Config& config) {
  check_keys(config, "output", {"path", "format", "precision"});
  OutputSpec spec;
  spec.path = config.get_or("output", "path", "-");
  spec.format = parse_format(config.get_or("output", "format", "csv"));
  spec.precision = static_cast<int>(config.get_int_or("output", "precision", 12));
  if (spec.precision < 1 || spec.precision > 17) {
    throw ConfigError("precision must be in [1, 17]");
  }
  return spec;
}

ResultTable run_config(const Config& config, int jobs) {
  for (const auto& [name, section] : config.sections) {
    (void)section;
    if (name != "task" && name != "params" && name != "output") {
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  const std::string name = config.get("task", "name");
  if (name == "kernel") {
    check_keys(config, "task", {"name", "a", "b", "c", "d", "t", "corr", "oracle"});
    KernelTask task;
    task.a = config.get_double("task", "a");
    task.b = config.get_double("task", "b");
    task.c = config.get_double("task", "c");
    task.d = config.get_double("task", "d");
    task.t = config.get_double("task", "t");
    task.corr = config.get_or("task", "corr", "white");
    task.oracle = config.get_int_or("task", "oracle", 0) != 0;
    return run_kernel(task);
  }
  if (name == "rate") {
    check_keys(config, "task", {"name", "p", "p_range", "mode", "corr"});
    RateTask task;
    if (config.has("task", "p")) task.p = config.get_double("task", "p");
    task.p_range = config.get_or("task", "p_range", "");
    task.mode = parse_rate_mode(config.get_or("task", "mode", "white"));
    task.corr = config.get_or("task", "corr", "white");
    const PhysicalParams params =
        config.sections.count("params") ? params_from_section(config.section("params"))
                                        : PhysicalParams::si_defaults();
    return run_rate(task, params, jobs);
  }
  if (name == "suppression") {
    check_keys(config, "task",
               {"name", "L", "ell", "packet_width", "grid_radius", "sweep", "n"});
    SuppressionTask task;
    task.L = config.get_double_or("task", "L", task.L);
    task.ell = config.get_double_or("task", "ell", task.ell);
    task.packet_width = config.get_double_or("task", "packet_width", task.packet_width);
    task.grid_radius = static_cast<int>(config.get_int_or("task", "grid_radius", task.grid_radius));
    task.sweep = config.get_or("task", "sweep", "");
    task.n = static_cast<int>(config.get_int_or("task", "n", task.n));
    return run_suppression(task);
  }
  if (name == "noisebox") {
    check_keys(config, "task",
               {"name", "L", "rc", "jmax", "dt", "dim", "nreal", "seed", "convergence"});
    NoiseboxTask task;
    task.L = config.get_double_or("task", "L", task.L);
    task.rc = config.get_double_or("task", "rc", task.rc);
    task.jmax = static_cast<int>(config.get_int_or("task", "jmax", task.jmax));
    task.dt = config.get_double_or("task", "dt", task.dt);
    task.dim = static_cast<int>(config.get_int_or("task", "dim", task.dim));
    task.nreal = static_cast<int>(config.get_int_or("task", "nreal", task.nreal));
    task.seed = static_cast<std::uint64_t>(config.get_int_or("task", "seed", 1));
    task.convergence = config.get_or("task", "convergence", "");
    return run_noisebox(task, jobs);
  }
  if (name == "sweep") {
    check_keys(config, "task", {"name", "p_min", "p_max", "n", "corr"});
    SweepTask task;
    task.p_min = config.get_double("task", "p_min");
    task.p_max = config.get_double("task", "p_max");
    task.n = static_cast<int>(config.get_int_or("task", "n", task.n));
    task.corr = config.get_or("task", "corr", "white");
    const PhysicalParams params =
        config.sections.count("params") ? params_from_section(config.section("params"))
                                        : PhysicalParams::si_defaults();
    return run_sweep(task, params, jobs);
  }
  if (name == "reproduce") {
    check_keys(config, "task", {"name"});
    return reproduce_factor_of_two();
  }
  throw ConfigError("unknown task '" + name + "'");
}

}  // namespace crad
