#pragma once

#include <map>
#include <string>
#include <vector>

#include "crad/errors.hpp"

namespace crad {

enum class UnitSystem { SI, CGS };

/// Collapse and electromagnetic constants.  Magnitudes are in the active
/// unit system; in CGS the stored eps0 is ignored and 1/(4 pi) is used
/// wherever the permittivity appears.
struct PhysicalParams {
  double gamma;     // collapse coupling, length^3 / time
  double r_C;       // correlation length
  double mass_m;    // particle mass
  double mass_m0;   // reference nucleon mass
  double charge_e;  // elementary charge
  double eps0;      // vacuum permittivity (SI)
  double c;         // speed of light
  double hbar;      // reduced Planck constant
  UnitSystem unit_system = UnitSystem::SI;

  double eps0_effective() const;

  /// CODATA values with the conventional collapse parameters
  /// gamma = 4.45e-36 m^3/s, r_C = 1e-7 m; particle = electron.
  static PhysicalParams si_defaults();
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

/// Checks every invariant and reports all violated fields.
ValidationReport validate_params(const PhysicalParams& p);

/// Throws ParameterError naming every violated field.
void require_valid(const PhysicalParams& p);

/// GRW collapse rate  lambda = gamma / (8 pi^{3/2} r_C^3).
double collapse_rate_lambda(const PhysicalParams& p);

enum class Dimension { time, length, rate, wavenumber };

struct Quantity {
  double value;
  Dimension dim;
};

/// Dimensionless working scheme; kernels run on O(1) numbers instead of
/// SI magnitudes like 1e19 s^-1.
struct ReducedScales {
  double time_scale;
  double length_scale;
  double rate_scale;

  /// Scales adapted to a dominant angular frequency a: rate_scale = |a|,
  /// time_scale = 1/|a|.
  static ReducedScales for_rate(double a, double length_scale = 1.0);
};

void require_valid(const ReducedScales& s);

double to_reduced(const ReducedScales& s, const Quantity& q);
Quantity from_reduced(const ReducedScales& s, double value, Dimension dim);

/// Reads the [params] section; keys exactly: gamma, r_C, mass_m, mass_m0,
/// charge_e, eps0, c, hbar, unit_system.  Unknown keys are rejected.
PhysicalParams params_from_section(const std::map<std::string, std::string>& section);

}  // namespace crad
