#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crad/emission_rate.hpp"

using namespace crad;

namespace {
constexpr double kPi = 3.14159265358979323846;

// dimensionless working set: hbar = m = c = 1
PhysicalParams reduced_params(double r_C) {
  PhysicalParams p;
  p.gamma = 1.0;
  p.r_C = r_C;
  p.mass_m = 1.0;
  p.mass_m0 = 1.0;
  p.charge_e = 1.0;
  p.eps0 = 1.0;
  p.c = 1.0;
  p.hbar = 1.0;
  p.unit_system = UnitSystem::SI;
  return p;
}
}  // namespace

TEST_CASE("coefficient a") {
  const PhysicalParams p = reduced_params(1.0);

  SUBCASE("electron at rest") {
    const Kinematics kin{2.0, {0.0, 0.0, 0.0}, 1.0};
    CHECK(coeff_a(kin, p) == doctest::Approx(2.0 - 2.0).epsilon(1e-14));  // pc - p^2/2m
  }
  SUBCASE("recoil substitution q = -p") {
    const Kinematics kin{2.0, {0.0, 0.0, -2.0}, 1.0};
    CHECK(coeff_a(kin, p) == doctest::Approx(2.0 + 2.0).epsilon(1e-14));  // pc + p^2/2m
  }
  SUBCASE("homogeneity in p at q = 0") {
    const Kinematics one{1.0, {0.0, 0.0, 0.0}, 1.0};
    const Kinematics two{2.0, {0.0, 0.0, 0.0}, 1.0};
    const double a1 = coeff_a(one, p);
    (void)a1;
    CHECK(coeff_a(two, p) == doctest::Approx(2.0 * 1.0 - 4.0 * 0.5).epsilon(1e-14));
  }
}

TEST_CASE("constant prefactor Lambda") {
  const PhysicalParams p = PhysicalParams::si_defaults();
  const double p_wn = 5e9;

  SUBCASE("box-size power") {
    const Kinematics base{p_wn, {0, 0, 0}, 1e-6};
    const Kinematics doubled{p_wn, {0, 0, 0}, 2e-6};
    CHECK(capital_lambda(doubled, p) ==
          doctest::Approx(capital_lambda(base, p) / 64.0).epsilon(1e-12));
  }
  SUBCASE("wavenumber power") {
    const Kinematics base{p_wn, {0, 0, 0}, 1e-6};
    const Kinematics doubled{2.0 * p_wn, {0, 0, 0}, 1e-6};
    CHECK(capital_lambda(doubled, p) ==
          doctest::Approx(capital_lambda(base, p) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("SI and CGS evaluations agree") {
  // SI inputs
  const PhysicalParams si = PhysicalParams::si_defaults();
  // the same physics in CGS: cm, g, s, statC; permittivity -> 1/4pi
  PhysicalParams cgs;
  cgs.gamma = si.gamma * 1e6;          // m^3/s -> cm^3/s
  cgs.r_C = si.r_C * 1e2;              // m -> cm
  cgs.mass_m = si.mass_m * 1e3;        // kg -> g
  cgs.mass_m0 = si.mass_m0 * 1e3;
  cgs.charge_e = 4.80320471257e-10;    // e in statC
  cgs.eps0 = 1.0;                      // ignored in CGS
  cgs.c = si.c * 1e2;                  // m/s -> cm/s
  cgs.hbar = si.hbar * 1e7;            // J s -> erg s
  cgs.unit_system = UnitSystem::CGS;

  const double p_si = 5.067e9;         // 1 keV photon, 1/m
  const double p_cgs = p_si / 1e2;     // 1/cm

  SUBCASE("white rate") {
    const double r_si = rate_white(p_si, si).value;            // s^-1 m
    const double r_cgs = rate_white(p_cgs, cgs).value / 1e2;   // s^-1 cm -> s^-1 m
    CHECK(r_cgs == doctest::Approx(r_si).epsilon(1e-10));
  }
  SUBCASE("prefactor") {
    const Kinematics kin_si{p_si, {0, 0, 0}, 1.0};
    const Kinematics kin_cgs{p_cgs, {0, 0, 0}, 1e2};
    // Lambda has dimensions of energy^2 x time^2 / (mass^2 length^5) ... the
    // cleanest check is through the final rate above; here just confirm both
    // evaluate finite and positive
    CHECK(capital_lambda(kin_si, si) > 0.0);
    CHECK(capital_lambda(kin_cgs, cgs) > 0.0);
  }
}

TEST_CASE("qz integral") {
  SUBCASE("reduced test point beta = 1, D = 100, t = 30") {
    // engineered params: hbar=m=c=1, p chosen so beta=1, D=100
    // beta = r_C/p, D = p + p^2/2 = 100 -> p = sqrt(2*100+1)-1 ~ 13.177...
    // simpler: pick p and r_C directly
    const double p_wn = std::sqrt(201.0) - 1.0;  // D = p + p^2/2 = 100
    PhysicalParams params = reduced_params(p_wn);  // beta = r_C/p = 1
    const QzIntegral qz = qz_integral(p_wn, 30.0, params, 1e-9);
    CHECK(qz.beta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qz.D == doctest::Approx(100.0).epsilon(1e-12));
    // frozen oracle value 1.7727197854734452e-4; the approximation
    // sqrt(pi)/(beta D^2) = 1.7724538509055160e-4 sits within 1%
    CHECK(qz.numeric == doctest::Approx(1.7727197854734452e-4).epsilon(1e-6));
    CHECK(qz.approx == doctest::Approx(1.7724538509055160e-4).epsilon(1e-12));
    CHECK(std::abs(qz.numeric - qz.approx) / qz.approx < 0.01);
    CHECK(qz.approx_reliable);
  }
  SUBCASE("doubling t changes nothing appreciable") {
    const double p_wn = std::sqrt(201.0) - 1.0;
    PhysicalParams params = reduced_params(p_wn);
    const QzIntegral q1 = qz_integral(p_wn, 30.0, params, 1e-9);
    const QzIntegral q2 = qz_integral(p_wn, 60.0, params, 1e-9);
    CHECK(q2.approx == q1.approx);
    CHECK(q2.numeric == doctest::Approx(q1.numeric).epsilon(1e-8));
  }
  SUBCASE("physical regime diagnostic") {
    const PhysicalParams p = PhysicalParams::si_defaults();
    const double p_keV = 5.067e9;  // 1 keV photon
    const double beta = beta_param(p_keV, p);
    const double D = big_D(p_keV, p);
    CHECK(beta > 1e-14);
    CHECK(beta < 1e-12);   // ~1e-13 s
    CHECK(D > 1e17);
    CHECK(D < 1e20);       // ~1e18..1e19 1/s
  }
  SUBCASE("unreliable regime flagged") {
    PhysicalParams params = reduced_params(1.0);
    const QzIntegral qz = qz_integral(1.0, 10.0, params, 1e-8);  // beta D ~ 1.5
    CHECK(!qz.approx_reliable);
  }
}

TEST_CASE("white rate") {
  const PhysicalParams p = PhysicalParams::si_defaults();

  SUBCASE("1/p law") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pick(1e8, 1e11);
    for (int i = 0; i < 10; ++i) {
      const double p1 = pick(rng);
      CHECK(rate_white(p1, p).value / rate_white(2.0 * p1, p).value ==
            doctest::Approx(2.0).epsilon(1e-12));
    }
  }
  SUBCASE("twice the Golden Rule value for white noise") {
    const double p_wn = 5e9;
    CHECK(rate_white(p_wn, p).value ==
          doctest::Approx(2.0 * rate_golden_rule(p_wn, p, TemporalCorrelation::white()).value)
              .epsilon(1e-14));
  }
}

TEST_CASE("pipeline reproduces the analytic rate") {
  // reduced regime with beta D = 1e6: p = 1e-3 keeps D ~ pc within 0.05%
  const double p_wn = 1e-3;
  PhysicalParams params = reduced_params(1e6 / (1.0 + p_wn / 2.0));
  const double betaD = beta_param(p_wn, params) * big_D(p_wn, params);
  CHECK(betaD == doctest::Approx(1e6).epsilon(1e-10));
  const double t = 10.0 * beta_param(p_wn, params);
  const RateResult pipe = rate_white_pipeline(p_wn, t, params, 1e-9);
  const RateResult ana = rate_white(p_wn, params);
  CHECK(pipe.method == RateMethod::pipeline);
  CHECK(pipe.value == doctest::Approx(ana.value).epsilon(0.02));
}

TEST_CASE("colored rates") {
  const PhysicalParams p = PhysicalParams::si_defaults();
  const double p_wn = 5e9;
  const double pc = p_wn * p.c;

  SUBCASE("white correlation collapses the bracket") {
    const auto r = rate_colored_planewave(p_wn, p, TemporalCorrelation::white());
    CHECK(r.value == doctest::Approx(rate_white(p_wn, p).value).epsilon(1e-14));
    CHECK(r.has_zero_freq_term);
  }
  SUBCASE("long correlation time floors at half the white rate") {
    const auto corr = TemporalCorrelation::exponential(1e3 / pc);
    const auto r = rate_colored_planewave(p_wn, p, corr);
    CHECK(r.value == doctest::Approx(0.5 * rate_white(p_wn, p).value).epsilon(1e-5));
  }
  SUBCASE("planewave minus golden equals the f~(0) floor") {
    for (const double tau_pc : {0.1, 1.0, 10.0}) {
      const auto corr = TemporalCorrelation::exponential(tau_pc / pc);
      const double white = rate_white(p_wn, p).value;
      const double diff = rate_colored_planewave(p_wn, p, corr).value -
                          rate_golden_rule(p_wn, p, corr).value;
      CHECK(diff == doctest::Approx(0.5 * white).epsilon(1e-12));
    }
  }
  SUBCASE("golden rule at pc tau = 1 gives a quarter of the white rate") {
    const auto corr = TemporalCorrelation::exponential(1.0 / pc);
    CHECK(rate_golden_rule(p_wn, p, corr).value ==
          doctest::Approx(0.25 * rate_white(p_wn, p).value).epsilon(1e-12));
  }
  SUBCASE("bracket bounds and ordering") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> pick_tau(-14.0, -8.0);
    for (int i = 0; i < 20; ++i) {
      const auto corr = TemporalCorrelation::exponential(std::pow(10.0, pick_tau(rng)));
      const double white = rate_white(p_wn, p).value;
      const double plane = rate_colored_planewave(p_wn, p, corr).value;
      const double golden = rate_golden_rule(p_wn, p, corr).value;
      CHECK(plane >= 0.5 * white - 1e-12 * white);
      CHECK(plane <= white + 1e-12 * white);
      CHECK(golden <= plane);
    }
  }
}

TEST_CASE("polarization sum") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  for (int i = 0; i < 30; ++i) {
    const Vec3 q{pick(rng), pick(rng), pick(rng)};
    const Vec3 z{0.0, 0.0, 1.0};
    const auto [e1, e2] = polarization_pair(z);
    const double sum = dot(e1, q) * dot(e1, q) + dot(e2, q) * dot(e2, q);
    CHECK(sum == doctest::Approx(q[0] * q[0] + q[1] * q[1]).epsilon(1e-12));
    // generic direction: sum = |q|^2 - (q . p_hat)^2
    Vec3 dir{pick(rng), pick(rng), pick(rng)};
    if (norm_sq(dir) < 1e-6) dir = {1.0, 0.0, 0.0};
    const auto [f1, f2] = polarization_pair(dir);
    const double n = std::sqrt(norm_sq(dir));
    const Vec3 unit{dir[0] / n, dir[1] / n, dir[2] / n};
    const double expected = norm_sq(q) - dot(q, unit) * dot(q, unit);
    CHECK(dot(f1, q) * dot(f1, q) + dot(f2, q) * dot(f2, q) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("spectrum sweep") {
  const PhysicalParams p = PhysicalParams::si_defaults();

  SUBCASE("white mode follows the exact 1/p law") {
    const auto rows = spectrum_sweep(1e9, 1e11, 12, p, TemporalCorrelation::white(),
                                     RateMode::white);
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].p > rows[i - 1].p);
      const double slope = std::log(rows[i].rate / rows[i - 1].rate) /
                           std::log(rows[i].p / rows[i - 1].p);
      CHECK(slope == doctest::Approx(-1.0).epsilon(1e-12));
    }
  }
  SUBCASE("golden mode with white correlation is exactly half the white mode") {
    const auto white = spectrum_sweep(1e9, 1e10, 8, p, TemporalCorrelation::white(),
                                      RateMode::white);
    const auto golden = spectrum_sweep(1e9, 1e10, 8, p, TemporalCorrelation::white(),
                                       RateMode::golden);
    for (std::size_t i = 0; i < white.size(); ++i) {
      CHECK(golden[i].rate == doctest::Approx(0.5 * white[i].rate).epsilon(1e-14));
    }
  }
  SUBCASE("planewave minus golden is constant relative to white") {
    const auto corr = TemporalCorrelation::exponential(1e-11);
    const auto white = spectrum_sweep(1e9, 1e10, 6, p, corr, RateMode::white);
    const auto plane = spectrum_sweep(1e9, 1e10, 6, p, corr, RateMode::planewave);
    const auto golden = spectrum_sweep(1e9, 1e10, 6, p, corr, RateMode::golden);
    for (std::size_t i = 0; i < white.size(); ++i) {
      const double ratio = (plane[i].rate - golden[i].rate) / white[i].rate;
      CHECK(ratio == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("worker count does not change results") {
    const auto corr = TemporalCorrelation::exponential(1e-11);
    const auto one = spectrum_sweep(1e9, 1e10, 40, p, corr, RateMode::planewave, 1);
    const auto many = spectrum_sweep(1e9, 1e10, 40, p, corr, RateMode::planewave, 7);
    REQUIRE(one.size() == many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(one[i].rate == many[i].rate);  // bit identical
    }
  }
  SUBCASE("invalid ranges rejected") {
    CHECK_THROWS_AS(spectrum_sweep(0.0, 1.0, 4, p, TemporalCorrelation::white(),
                                   RateMode::white),
                    ParameterError);
    CHECK_THROWS_AS(spectrum_sweep(2.0, 1.0, 4, p, TemporalCorrelation::white(),
                                   RateMode::white),
                    ParameterError);
    CHECK_THROWS_AS(spectrum_sweep(1.0, 2.0, 1, p, TemporalCorrelation::white(),
                                   RateMode::white),
                    ParameterError);
  }
}
