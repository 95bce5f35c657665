#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include "crad/errors.hpp"

namespace crad {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
namespace gk {

inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

}  // namespace gk

template <class T>
struct QuadResult {
  T value{};
  double err = 0.0;
  std::size_t evals = 0;
};

struct QuadOptions {
  double abs_tol = 1e-9;
  // Fastest phase rate (rad per unit x) of the integrand; initial panels are
  // sized at a quarter period so oscillations cannot be stepped over.
  double osc_rate = 0.0;
  std::size_t max_segments = 40000;
};

namespace detail {

template <class F, class T>
void gk15(F& f, double a, double b, T& value, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T res_g = gk::wg[3] * fc;
  T res_k = gk::wgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * gk::xgk[i];
    T fsum = f(c - dx) + f(c + dx);
    res_k += gk::wgk[i] * fsum;
    if (i % 2 == 1) res_g += gk::wg[i / 2] * fsum;
  }
  value = res_k * h;
  err = std::abs((res_k - res_g) * h);
}

struct Segment {
  double a, b, err;
  std::size_t id;
  bool operator<(const Segment& o) const {
    if (err != o.err) return err < o.err;
    return a < o.a;  // deterministic tie-break
  }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to an absolute
/// tolerance.  Throws QuadratureError if the segment budget is exhausted
/// before the tolerance is met.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, QuadOptions opt = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> out;
  if (a == b) return out;

  std::size_t n0 = 1;
  if (opt.osc_rate > 0.0) {
    const double quarter_periods = std::abs(b - a) * opt.osc_rate * 4.0 / (2.0 * 3.14159265358979323846);
    n0 = static_cast<std::size_t>(std::clamp(std::ceil(quarter_periods), 1.0, 4096.0));
  }

  std::vector<T> values;
  std::priority_queue<detail::Segment> queue;
  double total_err = 0.0;
  std::size_t n_segments = 0;

  auto push = [&](double lo, double hi) {
    T v;
    double e;
    detail::gk15(f, lo, hi, v, e);
    out.evals += 15;
    values.push_back(v);
    queue.push({lo, hi, e, values.size() - 1});
    total_err += e;
    ++n_segments;
  };

  for (std::size_t i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(n0);
    const double hi = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n0);
    push(lo, hi);
  }

  while (total_err > opt.abs_tol) {
    if (n_segments + 2 > opt.max_segments) break;
    detail::Segment worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval at rounding limit
    queue.pop();
    total_err -= worst.err;
    values[worst.id] = T{};  // children replace the parent's contribution
    push(worst.a, mid);
    push(mid, worst.b);
  }

  T sum{};
  for (const T& v : values) sum += v;
  out.value = sum;
  out.err = total_err;
  if (total_err > opt.abs_tol * 16.0) {
    throw QuadratureError("adaptive quadrature did not converge", std::abs(sum), total_err);
  }
  return out;
}

}  // namespace crad
