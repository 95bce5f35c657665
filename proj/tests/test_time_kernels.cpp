#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "crad/quadrature.hpp"
#include "crad/time_kernels.hpp"

using namespace crad;

namespace {

constexpr double kPi = 3.14159265358979323846;

FrequencyCoefficients random_coeffs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 3.0);
  std::uniform_real_distribution<double> any(-2.0, 2.0);
  std::bernoulli_distribution flip(0.5);
  const double a = (flip(rng) ? 1.0 : -1.0) * mag(rng);
  const double b = any(rng);
  const double c = (flip(rng) ? 1.0 : -1.0) * mag(rng);
  const double d = -(a + b + c);
  return FrequencyCoefficients{a, b, c, d};
}

// Brute-force oracle for the colored kernel, straight from the exact double
// integral
//   T = -(1/ac) int_0^t dt2 int_0^t dt4
//        (e^{iat} - e^{iat2})(e^{ict} - e^{ict4}) e^{ibt2} e^{idt4} f(t2-t4).
// The inner integral is restricted to the support of f around t4 = t2 and
// split there so the correlation peak is always resolved.
cdouble colored_T_brute(const FrequencyCoefficients& k, double t,
                        const TemporalCorrelation& corr) {
  const cdouble I(0.0, 1.0);
  const double support = corr.support_hint(1e-16);
  const cdouble eat = std::exp(I * k.a * t);
  const cdouble ect = std::exp(I * k.c * t);
  QuadOptions inner_opt;
  inner_opt.abs_tol = 1e-12;
  inner_opt.osc_rate = std::abs(k.c) + std::abs(k.d);
  QuadOptions outer_opt;
  outer_opt.abs_tol = 1e-9;
  outer_opt.osc_rate = std::abs(k.a) + std::abs(k.b);
  auto outer = [&](double t2) -> cdouble {
    auto inner = [&](double t4) -> cdouble {
      return (ect - std::exp(I * k.c * t4)) * std::exp(I * k.d * t4) *
             f_eval(corr, t2 - t4);
    };
    cdouble acc{};
    const double lo = std::max(0.0, t2 - support);
    const double hi = std::min(t, t2 + support);
    if (t2 > lo) acc += integrate_adaptive(inner, lo, t2, inner_opt).value;
    if (hi > t2) acc += integrate_adaptive(inner, t2, hi, inner_opt).value;
    return (eat - std::exp(I * k.a * t2)) * std::exp(I * k.b * t2) * acc;
  };
  const auto res = integrate_adaptive(outer, 0.0, t, outer_opt);
  return -res.value / (k.a * k.c);
}

}  // namespace

TEST_CASE("coefficient constraint") {
  CHECK_NOTHROW(FrequencyCoefficients::checked(1.0, 2.0, -1.5, -1.5));
  CHECK_THROWS_AS(FrequencyCoefficients::checked(1.0, 2.0, -1.5, -1.4), PreconditionError);
  const auto k = FrequencyCoefficients::checked(1.0, 2.0, -1.5, -1.5);
  CHECK(k.g() == doctest::Approx(0.5));
}

TEST_CASE("white kernel closed form") {
  SUBCASE("free-particle specialization at t = pi") {
    // a=1, c=-1, g=0: T = 2 (pi - sin pi) = 2 pi
    const auto v = white_T(FrequencyCoefficients{1.0, 0.5, -1.0, -0.5}, kPi);
    CHECK(v.value.real() == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(std::abs(v.value.imag()) < 1e-12 * 2.0 * kPi);
    CHECK(v.method == KernelMethod::closed_form);
    CHECK(!v.err_est.has_value());
  }
  SUBCASE("t = 0 vanishes") {
    const auto v = white_T(FrequencyCoefficients{1.0, 2.0, -1.5, -1.5}, 0.0);
    CHECK(std::abs(v.value) == 0.0);
  }
  SUBCASE("frozen point") {
    // independent high-precision evaluation of the closed form at
    // a=1, b=2, c=-1.5, d=-1.5, t=1
    const auto v = white_T(FrequencyCoefficients{1.0, 2.0, -1.5, -1.5}, 1.0);
    CHECK(v.value.real() == doctest::Approx(0.30158895644298214).epsilon(1e-12));
    CHECK(v.value.imag() == doctest::Approx(-0.05668269208638897).epsilon(1e-12));
  }
  SUBCASE("degenerate coefficients rejected") {
    CHECK_THROWS_AS(white_T(FrequencyCoefficients{0.0, 1.0, -2.0, 1.0}, 1.0),
                    PreconditionError);
    CHECK_THROWS_AS(white_T(FrequencyCoefficients{1.0, 1.0, 0.0, -2.0}, 1.0),
                    PreconditionError);
  }
}

TEST_CASE("white kernel against the quadrature oracle") {
  SUBCASE("free point") {
    const auto o = white_T_oracle(FrequencyCoefficients{1.0, 0.0, -1.0, 0.0}, 2.0, 1e-10);
    CHECK(o.value.real() == doctest::Approx(2.0 * (2.0 - std::sin(2.0))).epsilon(1e-9));
    CHECK(o.err_est.has_value());
  }
  SUBCASE("constraint enforcement") {
    CHECK_THROWS_AS(white_T_oracle(FrequencyCoefficients{1.0, 0.0, -2.0, 0.0}, 1.0, 1e-9),
                    PreconditionError);
  }
  SUBCASE("t = 0") {
    CHECK(std::abs(white_T_oracle(FrequencyCoefficients{1.0, 2.0, -1.5, -1.5}, 0.0, 1e-9)
                       .value) == 0.0);
  }
  SUBCASE("oracle equivalence on random coefficients") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> t_pick(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
      const auto k = random_coeffs(rng);
      const double t = t_pick(rng) / std::abs(k.a);
      const cdouble closed = white_T(k, t).value;
      const cdouble oracle = white_T_oracle(k, t, 1e-10).value;
      CHECK(std::abs(closed - oracle) < 1e-7 * (1.0 + std::abs(closed)));
    }
  }
}

TEST_CASE("free white kernel") {
  SUBCASE("small-argument series") {
    // frozen from 2 (t - sin t) at t = 1e-3 in exact arithmetic
    const auto v = white_T_free(1.0, 1e-3);
    CHECK(v.value.real() == doctest::Approx(3.3333331666666706e-10).epsilon(1e-15));
    CHECK(v.value.imag() == 0.0);
  }
  SUBCASE("t = pi") {
    CHECK(white_T_free(1.0, kPi).value.real() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  }
  SUBCASE("matches the g -> 0 limit of the general kernel") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mag(0.5, 3.0);
    std::uniform_real_distribution<double> t_pick(0.1, 10.0);
    for (int i = 0; i < 20; ++i) {
      const double a = mag(rng);
      const double t = t_pick(rng) / a;
      const double g = 1e-9 * a;
      const FrequencyCoefficients k{a, g / 2.0, -a - g, g / 2.0};
      const double free_value = white_T_free(a, t).value.real();
      const cdouble general = white_T(k, t).value;
      CHECK(std::abs(general - free_value) < 1e-6 * std::abs(free_value));
    }
  }
  SUBCASE("nonnegative and nondecreasing") {
    const double a = 1.7;
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.1 * i;
      const double v = white_T_free(a, t).value.real();
      CHECK(v >= 0.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("double integral I") {
  SUBCASE("frozen point against the 2D oracle") {
    // alpha = beta = 1, exponential tau = 0.01, t = 5; value frozen from the
    // brute-force double integral
    const auto corr = TemporalCorrelation::exponential(0.01);
    const auto v = double_integral_I(1.0, 1.0, 5.0, corr, 1e-10);
    CHECK(v.value.real() == doctest::Approx(-0.2727879190074019).epsilon(1e-6));
    CHECK(v.value.imag() == doctest::Approx(0.9221636537273003).epsilon(1e-6));
  }
  SUBCASE("removable singularity at alpha + beta = 0") {
    const auto corr = TemporalCorrelation::exponential(0.3);
    const cdouble at_zero = double_integral_I(1.2, -1.2, 2.0, corr).value;
    CHECK(std::isfinite(at_zero.real()));
    const cdouble near_plus = double_integral_I(1.2, -1.2 + 1e-9, 2.0, corr).value;
    const cdouble near_minus = double_integral_I(1.2, -1.2 - 1e-9, 2.0, corr).value;
    CHECK(std::abs(near_plus - at_zero) < 1e-7);
    CHECK(std::abs(near_minus - at_zero) < 1e-7);
  }
  SUBCASE("narrow correlation approaches the white building block") {
    // white limit: I -> (e^{i s t} - 1)/(i s), s = alpha + beta
    const double alpha = 1.3, beta = 0.4, t = 3.0;
    const cdouble I(0.0, 1.0);
    const double s = alpha + beta;
    const cdouble white_value = (std::exp(I * s * t) - 1.0) / (I * s);
    double prev = 1e300;
    for (const double tau : {0.1, 0.01, 0.001}) {
      const auto corr = TemporalCorrelation::exponential(tau);
      const double err =
          std::abs(double_integral_I(alpha, beta, t, corr).value - white_value);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 2e-3);
  }
  SUBCASE("white input rejected") {
    CHECK_THROWS_AS(double_integral_I(1.0, 1.0, 1.0, TemporalCorrelation::white()),
                    PreconditionError);
  }
}

TEST_CASE("colored kernel") {
  SUBCASE("white variant dispatches to the closed form") {
    const FrequencyCoefficients k{1.0, 2.0, -1.5, -1.5};
    const auto direct = white_T(k, 1.3);
    const auto dispatched = colored_T(k, 1.3, TemporalCorrelation::white());
    CHECK(dispatched.value == direct.value);
    CHECK(dispatched.method == KernelMethod::closed_form);
  }
  SUBCASE("matches the 2D brute-force oracle on random coefficients") {
    std::mt19937_64 rng(41);
    const auto corr = TemporalCorrelation::exponential(0.05);
    for (int i = 0; i < 6; ++i) {
      const auto k = random_coeffs(rng);
      const double t = 3.0;
      const cdouble fast = colored_T(k, t, corr, 1e-10).value;
      const cdouble brute = colored_T_brute(k, t, corr);
      CHECK(std::abs(fast - brute) < 1e-6);
    }
  }
  SUBCASE("white-noise limit is monotone") {
    const FrequencyCoefficients k{1.3, 0.4, -1.3, -0.4};
    const double t = 2.5;
    const double white_value = white_T(k, t).value.real();
    double prev = 1e300;
    for (const double scale : {0.1, 0.01, 0.001}) {
      const auto corr = TemporalCorrelation::exponential(scale / std::abs(k.a));
      const cdouble colored = colored_T(k, t, corr, 1e-11).value;
      const double err = std::abs(colored - white_T(k, t).value);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-3 * std::abs(white_value));
  }
  SUBCASE("t = 0 vanishes for every correlation") {
    const FrequencyCoefficients k{1.0, 2.0, -1.5, -1.5};
    CHECK(std::abs(colored_T(k, 0.0, TemporalCorrelation::exponential(0.2)).value) == 0.0);
    CHECK(std::abs(colored_T(k, 0.0, TemporalCorrelation::gaussian(0.2)).value) == 0.0);
    CHECK(std::abs(colored_T(k, 0.0, TemporalCorrelation::white()).value) == 0.0);
  }
}

TEST_CASE("free colored kernel") {
  SUBCASE("equals the general kernel at c = -a, d = -b") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> mag(0.5, 3.0);
    std::uniform_real_distribution<double> b_pick(-1.5, 1.5);
    const auto corr = TemporalCorrelation::exponential(0.07);
    for (int i = 0; i < 8; ++i) {
      const double a = mag(rng);
      const double b = b_pick(rng);
      const double t = 2.0;
      const cdouble general =
          colored_T(FrequencyCoefficients{a, b, -a, -b}, t, corr, 1e-12).value;
      const cdouble free_value = colored_T_free(a, b, t, corr, 1e-12).value;
      CHECK(std::abs(general - free_value) < 1e-10 * (1.0 + std::abs(general)));
      CHECK(std::abs(free_value.imag()) < 1e-12);
    }
  }
  SUBCASE("white variant uses the half-weight delta rule") {
    const double a = 1.4, t = 2.2;
    const auto v = colored_T_free(a, 0.7, t, TemporalCorrelation::white());
    CHECK(v.value.real() ==
          doctest::Approx(2.0 * (a * t - std::sin(a * t)) / (a * a * a)).epsilon(1e-13));
  }
  SUBCASE("b = 0 white reduces to the free white kernel") {
    const auto v = colored_T_free(2.0, 0.0, 1.5, TemporalCorrelation::white());
    CHECK(v.value == white_T_free(2.0, 1.5).value);
  }
}

TEST_CASE("rate asymptote") {
  SUBCASE("white gives 2/a^2") {
    CHECK(rate_asymptote(2.0, 0.7, TemporalCorrelation::white()) == doctest::Approx(0.5));
  }
  SUBCASE("exponential at b = 0") {
    const double tau = 0.8;
    CHECK(rate_asymptote(1.0, 0.0, TemporalCorrelation::exponential(tau)) ==
          doctest::Approx(1.0 + 1.0 / (1.0 + tau * tau)).epsilon(1e-14));
  }
  SUBCASE("matches the windowed numeric derivative at large t") {
    const double a = 2.0, b = 0.7, tau = 0.2;
    const auto corr = TemporalCorrelation::exponential(tau);
    const double slow = std::min({std::abs(b), std::abs(a + b)});
    const double window = 10.0 * 2.0 * kPi / slow;
    const double t0 = std::max(30.0 * tau, 20.0 * 2.0 * kPi / slow);
    const double fast = std::max(std::abs(a + b), std::abs(a));
    const int samples = static_cast<int>(16.0 * window * fast / (2.0 * kPi));
    const double dt = 0.005 * 2.0 * kPi / fast;
    const FrequencyCoefficients k{a, b, -a, -b};
    const double avg = averaged_dT_dt(k, corr, t0, window, samples, dt);
    const double target = rate_asymptote(a, b, corr);
    CHECK(avg == doctest::Approx(target).epsilon(0.02));
  }
}

TEST_CASE("numeric time derivative") {
  SUBCASE("white free: dT/dt = 2 (1 - cos a t)/a^2") {
    const double a = 1.0, t = 2.0;
    const auto v =
        dT_dt_numeric(FrequencyCoefficients{a, 0.0, -a, 0.0}, t, TemporalCorrelation::white(),
                      1e-4);
    CHECK(v.value.real() ==
          doctest::Approx(2.0 * (1.0 - std::cos(a * t)) / (a * a)).epsilon(1e-6));
    CHECK(!v.warn);
  }
  SUBCASE("boundary uses a flagged one-sided difference") {
    const auto v = dT_dt_numeric(FrequencyCoefficients{1.0, 0.0, -1.0, 0.0}, 1e-4,
                                 TemporalCorrelation::white(), 1e-3);
    CHECK(v.warn);
  }
  SUBCASE("coarse steps are flagged") {
    const auto v = dT_dt_numeric(FrequencyCoefficients{5.0, 0.0, -5.0, 0.0}, 2.0,
                                 TemporalCorrelation::white(), 0.1);
    CHECK(v.warn);
  }
}
