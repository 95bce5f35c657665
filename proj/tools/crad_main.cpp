#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crad/errors.hpp"
#include "crad/harness.hpp"
#include "crad/version.hpp"

namespace {

int emit(const crad::ResultTable& table, const crad::OutputSpec& spec) {
  if (spec.path == "-") {
    crad::write_table(table, std::cout, spec.format, spec.precision);
  } else {
    crad::write_table_file(table, spec.path, spec.format, spec.precision);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collapse-model radiation kernels and rates"};
  app.set_version_flag("--version", crad::kVersion);
  app.require_subcommand(0, 1);

  int jobs = 0;
  std::string config_path;
  app.add_option("--jobs", jobs, "worker count (CRAD_JOBS overrides 0 = auto)");
  app.add_option("--config", config_path, "run a [task] config file instead of a subcommand");

  crad::OutputSpec out;
  app.add_option("--out", out.path, "output path ('-' = stdout)");
  std::string format = "csv";
  app.add_option("--format", format, "csv | json");
  app.add_option("--precision", out.precision, "floating point digits (1-17)");

  // kernel ------------------------------------------------------------
  crad::KernelTask kernel;
  auto* cmd_kernel = app.add_subcommand("kernel", "time kernel T at one point");
  cmd_kernel->add_option("--a", kernel.a)->required();
  cmd_kernel->add_option("--b", kernel.b)->required();
  cmd_kernel->add_option("--c", kernel.c)->required();
  cmd_kernel->add_option("--d", kernel.d)->required();
  cmd_kernel->add_option("--t", kernel.t)->required();
  cmd_kernel->add_option("--corr", kernel.corr, "white | exp:TAU | gauss:TAU | file:PATH");
  cmd_kernel->add_flag("--oracle", kernel.oracle, "use the quadrature oracle route");

  // rate --------------------------------------------------------------
  crad::RateTask rate;
  std::string params_path;
  auto* cmd_rate = app.add_subcommand("rate", "emission rate dGamma/dp");
  cmd_rate->add_option("--p", rate.p);
  cmd_rate->add_option("--p-range", rate.p_range, "MIN:MAX:N");
  std::string mode = "white";
  cmd_rate->add_option("--mode", mode, "white | planewave | golden");
  cmd_rate->add_option("--corr", rate.corr);
  cmd_rate->add_option("--params", params_path, "config file with a [params] section");

  // suppression ---------------------------------------------------------
  crad::SuppressionTask suppression;
  auto* cmd_sup = app.add_subcommand("suppression", "wave-packet extra-term suppression");
  cmd_sup->add_option("--L", suppression.L);
  cmd_sup->add_option("--ell", suppression.ell);
  cmd_sup->add_option("--packet-width", suppression.packet_width);
  cmd_sup->add_option("--grid-radius", suppression.grid_radius);
  cmd_sup->add_option("--sweep", suppression.sweep, "ell | L");
  cmd_sup->add_option("--n", suppression.n, "sweep points");

  // noisebox ------------------------------------------------------------
  crad::NoiseboxTask noisebox;
  auto* cmd_noise = app.add_subcommand("noisebox", "box-discretized noise statistics");
  cmd_noise->add_option("--L", noisebox.L);
  cmd_noise->add_option("--rc", noisebox.rc);
  cmd_noise->add_option("--jmax", noisebox.jmax);
  cmd_noise->add_option("--dt", noisebox.dt);
  cmd_noise->add_option("--dim", noisebox.dim);
  cmd_noise->add_option("--nreal", noisebox.nreal);
  cmd_noise->add_option("--seed", noisebox.seed);
  cmd_noise->add_option("--convergence", noisebox.convergence, "L1:L2:... convergence report");

  // sweep ---------------------------------------------------------------
  crad::SweepTask sweep;
  std::string sweep_params_path;
  auto* cmd_sweep = app.add_subcommand("sweep", "all three rate modes over a p grid");
  cmd_sweep->add_option("--p-min", sweep.p_min)->required();
  cmd_sweep->add_option("--p-max", sweep.p_max)->required();
  cmd_sweep->add_option("--n", sweep.n);
  cmd_sweep->add_option("--corr", sweep.corr);
  cmd_sweep->add_option("--params", sweep_params_path);

  // reproduce -----------------------------------------------------------
  auto* cmd_repro = app.add_subcommand("reproduce", "factor-of-2 audit");

  CLI11_PARSE(app, argc, argv);

  try {
    out.format = crad::parse_format(format);
    auto load_params = [](const std::string& path) {
      if (path.empty()) return crad::PhysicalParams::si_defaults();
      const crad::Config cfg = crad::Config::parse_file(path);
      return crad::params_from_section(cfg.section("params"));
    };
    if (!config_path.empty()) {
      const crad::Config cfg = crad::Config::parse_file(config_path);
      const crad::ResultTable table = crad::run_config(cfg, jobs);
      crad::OutputSpec spec = crad::output_spec_from_config(cfg);
      if (out.path != "-") spec.path = out.path;  // command line wins
      return emit(table, spec);
    }
    if (cmd_kernel->parsed()) {
      rate.mode = crad::RateMode::white;
      return emit(crad::run_kernel(kernel), out);
    }
    if (cmd_rate->parsed()) {
      rate.mode = crad::parse_rate_mode(mode);
      return emit(crad::run_rate(rate, load_params(params_path), jobs), out);
    }
    if (cmd_sup->parsed()) {
      return emit(crad::run_suppression(suppression), out);
    }
    if (cmd_noise->parsed()) {
      return emit(crad::run_noisebox(noisebox, jobs), out);
    }
    if (cmd_sweep->parsed()) {
      return emit(crad::run_sweep(sweep, load_params(sweep_params_path), jobs), out);
    }
    if (cmd_repro->parsed()) {
      return emit(crad::reproduce_factor_of_two(), out);
    }
    std::cerr << app.help() << std::endl;
    return 2;
  } catch (const crad::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const crad::IoError& e) {
    std::cerr << "io error: " << e.what() << std::endl;
    return 4;
  } catch (const crad::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}
