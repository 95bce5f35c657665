#pragma once

#include <utility>
#include <vector>

#include "crad/correlations.hpp"
#include "crad/params.hpp"
#include "crad/series.hpp"

namespace crad {

/// Free-particle kinematics in the frame where the particle starts at rest.
/// The photon travels along +z with wavenumber magnitude p.
struct Kinematics {
  double p;      // photon wavenumber
  Vec3 q;        // outgoing electron wavevector
  double box_L;  // quantization box side
};

enum class RateMethod { analytic, pipeline };

struct RateResult {
  double value;  // dGamma/dp
  RateMethod method = RateMethod::analytic;
  double beta_D;           // regime diagnostic beta * D
  bool beta_D_reliable;    // beta * D >= 10
  double f_tilde_pc = 1.0;
  // Marks a rate carrying the momentum-independent f~(0) term, the
  // plane-wave artifact suppressed by the wave-packet analysis.
  bool has_zero_freq_term = false;
};

/// a = p c - hbar p^2/(2m) - hbar (q . p)/m  with p along z.
double coeff_a(const Kinematics& kin, const PhysicalParams& params);

/// Lambda = (1/L^6) gamma hbar e^2 / (eps0 c m0^2 p).
double capital_lambda(const Kinematics& kin, const PhysicalParams& params);

double beta_param(double p, const PhysicalParams& params);  // m r_C/(hbar p)
double big_D(double p, const PhysicalParams& params);       // p c + hbar p^2/(2m)

struct QzIntegral {
  double numeric;   // adaptive quadrature of the z integral
  double err_est;
  double approx;    // sqrt(pi) / (beta D^2), large-t cosine-averaged
  double beta;
  double D;
  bool approx_reliable;  // beta * D >= 10
};

/// int dz e^{-z^2 beta^2} (1 - cos[(D - z) t]) / (D - z)^2, z in units set
/// by the substitution z = hbar p (q_z + p)/m.  tol is relative.
QzIntegral qz_integral(double p, double t, const PhysicalParams& params, double tol = 1e-8);

/// Analytic white-noise rate  dGamma/dp = lambda hbar e^2 /
/// (2 pi^2 eps0 c^3 m0^2 r_C^2 p).
RateResult rate_white(double p, const PhysicalParams& params);

/// Plane-wave colored rate  1/2 [f~(0) + f~(pc)] * white rate.  The f~(0)
/// term is flagged as the plane-wave artifact.
RateResult rate_colored_planewave(double p, const PhysicalParams& params,
                                  const TemporalCorrelation& corr);

/// Golden-Rule rate  1/2 f~(pc) * white rate — the answer that survives the
/// wave-packet + confined-noise analysis.
RateResult rate_golden_rule(double p, const PhysicalParams& params,
                            const TemporalCorrelation& corr);

/// Full numeric route to the white rate: constant prefactor, transverse
/// Gaussian integrals from the polarization sum, numeric q_z integral, and
/// the isotropic 4 pi p^2 shell.  tol is relative (passed to qz_integral).
RateResult rate_white_pipeline(double p, double t, const PhysicalParams& params,
                               double tol = 1e-8);

enum class RateMode { white, planewave, golden };

RateMode parse_rate_mode(const std::string& text);
std::string rate_mode_name(RateMode mode);

struct SpectrumRow {
  double p;
  double rate;
  double f_tilde_pc;
  bool beta_D_reliable;
};

/// Log-spaced grid of dGamma/dp, ascending in p; data-parallel with
/// index-ordered output.
std::vector<SpectrumRow> spectrum_sweep(double p_min, double p_max, int n_points,
                                        const PhysicalParams& params,
                                        const TemporalCorrelation& corr, RateMode mode,
                                        int jobs = 0);

/// Two linear polarization vectors orthogonal to dir and each other.
std::pair<Vec3, Vec3> polarization_pair(const Vec3& dir);

}  // namespace crad
