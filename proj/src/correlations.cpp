#include "crad/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crad/errors.hpp"
#include "crad/quadrature.hpp"

namespace crad {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.50662827463100050242;
}  // namespace

TemporalCorrelation TemporalCorrelation::white() {
  return TemporalCorrelation(Kind::white, 0.0);
}

TemporalCorrelation TemporalCorrelation::exponential(double tau) {
  if (!(tau > 0.0)) throw ParameterError("exponential correlation requires tau > 0");
  return TemporalCorrelation(Kind::exponential, tau);
}

TemporalCorrelation TemporalCorrelation::gaussian(double tau) {
  if (!(tau > 0.0)) throw ParameterError("gaussian correlation requires tau > 0");
  return TemporalCorrelation(Kind::gaussian, tau);
}

TemporalCorrelation TemporalCorrelation::tabulated(
    std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ParameterError("tabulated correlation needs >= 2 samples");
  TemporalCorrelation corr(Kind::tabulated, 0.0);
  corr.ts_.reserve(samples.size());
  corr.fs_.reserve(samples.size());
  double prev = -1.0;
  for (const auto& [t, f] : samples) {
    if (t < 0.0) throw ParameterError("tabulated samples must have t >= 0 (even extension)");
    if (t <= prev) throw ParameterError("tabulated samples must be strictly ascending in t");
    prev = t;
    corr.ts_.push_back(t);
    corr.fs_.push_back(f);
  }
  if (corr.ts_.front() != 0.0) {
    throw ParameterError("tabulated samples must start at t = 0");
  }
  // normalization: f even, so the full-line integral is twice the trapezoid
  double half = 0.0;
  for (std::size_t i = 1; i < corr.ts_.size(); ++i) {
    half += 0.5 * (corr.fs_[i] + corr.fs_[i - 1]) * (corr.ts_[i] - corr.ts_[i - 1]);
  }
  if (std::abs(2.0 * half - 1.0) > 1e-6) {
    throw ParameterError("tabulated correlation is not normalized: integral = " +
                         std::to_string(2.0 * half));
  }
  // correlation time proxy for support hints
  corr.tau_ = corr.ts_.back();
  return corr;
}

TemporalCorrelation TemporalCorrelation::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open correlation table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("empty correlation table: " + path);
  std::vector<std::pair<double, double>> samples;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t = 0.0, f = 0.0;
    std::string extra;
    if (!(row >> t >> f) || (row >> extra)) {
      throw ParameterError(path + ":" + std::to_string(lineno) + ": expected exactly two columns");
    }
    samples.emplace_back(t, f);
  }
  return tabulated(std::move(samples));
}

TemporalCorrelation TemporalCorrelation::parse(const std::string& spec) {
  if (spec == "white") return white();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (head == "exp") return exponential(std::stod(rest));
    if (head == "gauss") return gaussian(std::stod(rest));
    if (head == "file") return from_csv(rest);
  }
  throw ConfigError("unrecognized correlation spec '" + spec +
                    "' (expected white | exp:TAU | gauss:TAU | file:PATH)");
}

double TemporalCorrelation::tau() const {
  if (kind_ == Kind::white) throw PreconditionError("white correlation has no tau");
  return tau_;
}

std::string TemporalCorrelation::tag() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::white:
      return "white";
    case Kind::exponential:
      out << "exp:" << tau_;
      return out.str();
    case Kind::gaussian:
      out << "gauss:" << tau_;
      return out.str();
    case Kind::tabulated:
      out << "table[" << ts_.size() << "]";
      return out.str();
  }
  return "?";
}

double TemporalCorrelation::support_hint(double eps) const {
  switch (kind_) {
    case Kind::white:
      return 0.0;
    case Kind::exponential:
      // tail mass of e^{-|t|/tau}/(2 tau) beyond x is e^{-x/tau}/2
      return tau_ * std::log(0.5 / eps);
    case Kind::gaussian:
      return tau_ * std::sqrt(std::max(2.0 * std::log(1.0 / eps), 1.0));
    case Kind::tabulated:
      return ts_.back();
  }
  return 0.0;
}

const std::vector<double>& TemporalCorrelation::table_ts() const {
  if (kind_ != Kind::tabulated) throw PreconditionError("not a tabulated correlation");
  return ts_;
}

const std::vector<double>& TemporalCorrelation::table_fs() const {
  if (kind_ != Kind::tabulated) throw PreconditionError("not a tabulated correlation");
  return fs_;
}

double f_eval(const TemporalCorrelation& corr, double t) {
  const double at = std::abs(t);
  switch (corr.kind()) {
    case TemporalCorrelation::Kind::white:
      throw PreconditionError("white correlation has no pointwise value");
    case TemporalCorrelation::Kind::exponential:
      return std::exp(-at / corr.tau()) / (2.0 * corr.tau());
    case TemporalCorrelation::Kind::gaussian:
      return std::exp(-0.5 * at * at / (corr.tau() * corr.tau())) / (kSqrt2Pi * corr.tau());
    case TemporalCorrelation::Kind::tabulated:
      break;
  }
  // linear interpolation on |t|, zero outside the table
  const auto& ts = corr.table_ts();
  const auto& fs = corr.table_fs();
  if (at > ts.back()) return 0.0;
  const auto it = std::upper_bound(ts.begin(), ts.end(), at);
  if (it == ts.begin()) return fs.front();
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  if (i >= ts.size()) return fs.back();
  const double w = (at - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return fs[i - 1] + w * (fs[i] - fs[i - 1]);
}

double f_tilde(const TemporalCorrelation& corr, double omega) {
  const double w = std::abs(omega);
  switch (corr.kind()) {
    case TemporalCorrelation::Kind::white:
      return 1.0;
    case TemporalCorrelation::Kind::exponential: {
      const double wt = w * corr.tau();
      return 1.0 / (1.0 + wt * wt);
    }
    case TemporalCorrelation::Kind::gaussian: {
      const double wt = w * corr.tau();
      return std::exp(-0.5 * wt * wt);
    }
    case TemporalCorrelation::Kind::tabulated:
      break;
  }
  // segment-exact cosine transform of the piecewise-linear interpolant,
  // written about the segment midpoint so it stays stable as omega -> 0:
  //   int (A + B t) cos(w t) dt over [tm-h, tm+h]
  //     = (f0+f1)/2 * 2h sinc(wh) cos(w tm) - B sin(w tm) * 2h^2 S2(wh)
  // with S2(z) = (sin z - z cos z)/z^2.
  auto s2 = [](double z) {
    if (std::abs(z) < 1e-2) {
      const double z2 = z * z;
      return z / 3.0 * (1.0 - z2 / 10.0 * (1.0 - z2 / 28.0));
    }
    return (std::sin(z) - z * std::cos(z)) / (z * z);
  };
  const auto& ts = corr.table_ts();
  const auto& fs = corr.table_fs();
  double sum = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double h = 0.5 * (ts[i] - ts[i - 1]);
    const double tm = 0.5 * (ts[i] + ts[i - 1]);
    const double slope = (fs[i] - fs[i - 1]) / (2.0 * h);
    const double z = w * h;
    sum += (fs[i] + fs[i - 1]) * h * sin_ratio(z) * std::cos(w * tm) -
           slope * std::sin(w * tm) * 2.0 * h * h * s2(z);
  }
  return 2.0 * sum;
}

double f_tilde_numeric(const TemporalCorrelation& corr, double omega, double t_max,
                       double abs_tol) {
  if (corr.is_white()) {
    throw PreconditionError("f_tilde_numeric is undefined for the white delta");
  }
  if (!(t_max > 0.0)) throw PreconditionError("t_max must be positive");
  QuadOptions opt;
  opt.abs_tol = abs_tol;
  opt.osc_rate = std::abs(omega);
  const auto res = integrate_adaptive(
      [&](double t) { return f_eval(corr, t) * std::cos(omega * t); }, 0.0, t_max, opt);
  return 2.0 * res.value;
}

double F_spatial_axis(double dx, const SpatialCorrelation& corr) {
  const double r = corr.r_C;
  return std::exp(-dx * dx / (4.0 * r * r)) / (std::sqrt(4.0 * kPi) * r);
}

double F_spatial(const Vec3& dx, const SpatialCorrelation& corr) {
  return F_spatial_axis(dx[0], corr) * F_spatial_axis(dx[1], corr) *
         F_spatial_axis(dx[2], corr);
}

double F_tilde_spatial_axis(double k, const SpatialCorrelation& corr) {
  return std::exp(-k * k * corr.r_C * corr.r_C);
}

double F_tilde_spatial(const Vec3& k, const SpatialCorrelation& corr) {
  return std::exp(-norm_sq(k) * corr.r_C * corr.r_C);
}

double confined_correlator(const Vec3& x, const Vec3& y, const SpatialCorrelation& corr,
                           double ell) {
  if (!(ell > 0.0)) throw ParameterError("confinement length must be positive");
  const Vec3 sum = add(x, y);
  return F_spatial(sub(x, y), corr) * std::exp(-norm_sq(sum) / (ell * ell));
}

}  // namespace crad
