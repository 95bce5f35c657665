#include "crad/params.hpp"

#include <cmath>
#include <set>

#include "crad/config.hpp"

namespace crad {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double PhysicalParams::eps0_effective() const {
  return unit_system == UnitSystem::CGS ? 1.0 / (4.0 * kPi) : eps0;
}

PhysicalParams PhysicalParams::si_defaults() {
  PhysicalParams p;
  p.gamma = 4.45e-36;
  p.r_C = 1.0e-7;
  p.mass_m = 9.1093837015e-31;
  p.mass_m0 = 1.67262192369e-27;
  p.charge_e = 1.602176634e-19;
  p.eps0 = 8.8541878128e-12;
  p.c = 2.99792458e8;
  p.hbar = 1.054571817e-34;
  p.unit_system = UnitSystem::SI;
  return p;
}

std::string ValidationReport::str() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

ValidationReport validate_params(const PhysicalParams& p) {
  ValidationReport report;
  auto positive = [&](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      report.violations.push_back(std::string(name) + " must be strictly positive");
    }
  };
  // gamma = 0 is the no-collapse limit and is allowed.
  if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma)) {
    report.violations.push_back("gamma must be non-negative");
  }
  positive(p.r_C, "r_C");
  positive(p.mass_m, "mass_m");
  positive(p.mass_m0, "mass_m0");
  positive(p.charge_e, "charge_e");
  if (p.unit_system == UnitSystem::SI) positive(p.eps0, "eps0");
  positive(p.c, "c");
  positive(p.hbar, "hbar");
  return report;
}

void require_valid(const PhysicalParams& p) {
  const ValidationReport report = validate_params(p);
  if (!report.ok()) throw ParameterError("invalid parameters: " + report.str());
}

double collapse_rate_lambda(const PhysicalParams& p) {
  require_valid(p);
  return p.gamma / (8.0 * std::pow(kPi, 1.5) * p.r_C * p.r_C * p.r_C);
}

ReducedScales ReducedScales::for_rate(double a, double length_scale) {
  if (!(std::abs(a) > 0.0)) throw ParameterError("reference rate must be nonzero");
  return ReducedScales{1.0 / std::abs(a), length_scale, std::abs(a)};
}

void require_valid(const ReducedScales& s) {
  if (!(s.time_scale > 0.0) || !(s.length_scale > 0.0) || !(s.rate_scale > 0.0)) {
    throw ParameterError("reduced scales must be strictly positive");
  }
}

namespace {

double scale_for(const ReducedScales& s, Dimension dim) {
  switch (dim) {
    case Dimension::time:
      return s.time_scale;
    case Dimension::length:
      return s.length_scale;
    case Dimension::rate:
      return s.rate_scale;
    case Dimension::wavenumber:
      return 1.0 / s.length_scale;
  }
  throw UnitError("unsupported dimension");
}

}  // namespace

double to_reduced(const ReducedScales& s, const Quantity& q) {
  require_valid(s);
  return q.value / scale_for(s, q.dim);
}

Quantity from_reduced(const ReducedScales& s, double value, Dimension dim) {
  require_valid(s);
  return Quantity{value * scale_for(s, dim), dim};
}

PhysicalParams params_from_section(const std::map<std::string, std::string>& section) {
  static const std::set<std::string> known = {"gamma", "r_C",  "mass_m", "mass_m0",
                                              "charge_e", "eps0", "c",  "hbar",
                                              "unit_system"};
  for (const auto& [key, value] : section) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in [params]");
  }
  PhysicalParams p = PhysicalParams::si_defaults();
  auto grab = [&](const char* key, double& field) {
    const auto it = section.find(key);
    if (it != section.end()) field = parse_double(it->second, std::string("params.") + key);
  };
  grab("gamma", p.gamma);
  grab("r_C", p.r_C);
  grab("mass_m", p.mass_m);
  grab("mass_m0", p.mass_m0);
  grab("charge_e", p.charge_e);
  grab("eps0", p.eps0);
  grab("c", p.c);
  grab("hbar", p.hbar);
  const auto us = section.find("unit_system");
  if (us != section.end()) {
    if (us->second == "SI") {
      p.unit_system = UnitSystem::SI;
    } else if (us->second == "CGS") {
      p.unit_system = UnitSystem::CGS;
    } else {
      throw ConfigError("unit_system must be SI or CGS, got '" + us->second + "'");
    }
  }
  require_valid(p);
  return p;
}

}  // namespace crad
