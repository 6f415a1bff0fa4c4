#pragma once

// Quadrature building blocks: adaptive 15-point Gauss-Kronrod on finite
// intervals and double-exponential trapezoidal rules for half-infinite and
// doubly-infinite integrals.  Integrands are expected to decay at least
// exponentially in the transformed variable (true of every density handled
// here once the tail is mapped through x = e^u).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "selfdecomp/detail/numerics.hpp"
#include "selfdecomp/errors.hpp"

namespace selfdecomp {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_refinements = 20;
  // Interval split between the head (0, c] and the tail [c, inf).
  double split_point = 1.0;
};

namespace quad {

namespace detail_q {

// QUADPACK 15-point Kronrod nodes/weights and the embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(T v) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return std::abs(v);
  } else {
    return std::fabs(v);
  }
}

template <class F, class T>
void gk15(F&& f, double a, double b, T& integral, double& error) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  T fk[8];
  fk[7] = f(mid);
  T resk = kWgk[7] * fk[7];
  T resg = kWg[3] * fk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(mid - dx);
    const T f2 = f(mid + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  integral = resk * half;
  error = magnitude((resk - resg) * half);
}

template <class T>
struct Segment {
  double a, b, error;
  T integral;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail_q

// Adaptive Gauss-Kronrod on [a, b]; value type follows the integrand.
template <class F, class T = std::invoke_result_t<F, double>>
T gauss_kronrod(F&& f, double a, double b, const QuadratureConfig& cfg) {
  using detail_q::Segment;
  if (a == b) return T{};
  std::priority_queue<Segment<T>> segs;
  T total{};
  double total_err = 0.0;
  {
    Segment<T> s{a, b, 0.0, T{}};
    detail_q::gk15(f, a, b, s.integral, s.error);
    total = s.integral;
    total_err = s.error;
    segs.push(s);
  }
  const int max_segments = 256 * std::max(1, cfg.max_refinements);
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * detail_q::magnitude(total))) {
    if (static_cast<int>(segs.size()) >= max_segments) {
      std::ostringstream os;
      os << "gauss_kronrod: refinement budget exhausted on [" << a << ", " << b
         << "], error " << total_err;
      throw quadrature_error(os.str());
    }
    Segment<T> worst = segs.top();
    segs.pop();
    total -= worst.integral;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at rounding resolution; accept its estimate
      total += worst.integral;
      break;
    }
    for (int half = 0; half < 2; ++half) {
      Segment<T> s{half == 0 ? worst.a : mid, half == 0 ? mid : worst.b, 0.0, T{}};
      detail_q::gk15(f, s.a, s.b, s.integral, s.error);
      total += s.integral;
      total_err += s.error;
      segs.push(s);
    }
  }
  return total;
}

namespace detail_q {

// Trapezoidal double-exponential rule over t in R for a transformed integrand
// g(t) (transformation weight included).  Converges at doubling levels.
template <class G, class T = std::invoke_result_t<G, double>>
T de_trapezoid(G&& g, const QuadratureConfig& cfg) {
  const int max_level = std::clamp(cfg.max_refinements, 4, 12);
  const double t_cut = 6.8;  // transformation weights overflow beyond this

  auto row_sum = [&](double h, double t0, double stride) {
    // sum g over t = t0 + k*stride*h, k = 0,1,2,... both directions handled by caller
    selfdecomp::detail::CompensatedSum<T> acc;
    int negligible = 0;
    for (double t = t0;; t += stride * h) {
      if (std::fabs(t) > t_cut) break;
      const T v = g(t);
      acc.add(v);
      const double m = magnitude(v);
      if (m < 1e-300) {
        if (++negligible >= 4) break;
      } else {
        negligible = 0;
      }
    }
    return acc.value();
  };

  double h = 1.0;
  T sum = g(0.0) + row_sum(h, h, 1.0) + row_sum(h, -h, -1.0);
  T prev = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    // new nodes are the odd multiples of h
    T odd = row_sum(2.0 * h, h, 1.0) + row_sum(2.0 * h, -h, -1.0);
    sum += odd;
    const T cur = sum * h;
    const double diff = magnitude(cur - prev);
    if (level >= 3 && diff <= std::max(cfg.abs_tol, cfg.rel_tol * magnitude(cur))) {
      return cur;
    }
    prev = cur;
  }
  // Accept the final level if the last two rows already agree reasonably;
  // otherwise report failure.
  const double diff = magnitude(prev - sum * h);
  if (diff <= 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * magnitude(prev))) return prev;
  throw quadrature_error("de_trapezoid: did not converge within level budget");
}

}  // namespace detail_q

// Integral of f over (a, inf) via the exp-sinh transformation
// x = a + exp((pi/2) sinh t).
template <class F, class T = std::invoke_result_t<F, double>>
T exp_sinh(F&& f, double a, const QuadratureConfig& cfg) {
  auto g = [&](double t) -> T {
    const double e = detail::kPi / 2.0 * std::sinh(t);
    if (e > 690.0) return T{};  // weight would overflow; integrand must decay
    const double w = std::exp(e);
    return f(a + w) * (detail::kPi / 2.0 * std::cosh(t) * w);
  };
  return detail_q::de_trapezoid(g, cfg);
}

// Integral of f over (-inf, b) via the mirrored exp-sinh transformation.
template <class F, class T = std::invoke_result_t<F, double>>
T exp_sinh_lower(F&& f, double b, const QuadratureConfig& cfg) {
  auto g = [&](double t) -> T {
    const double e = detail::kPi / 2.0 * std::sinh(t);
    if (e > 690.0) return T{};
    const double w = std::exp(e);
    return f(b - w) * (detail::kPi / 2.0 * std::cosh(t) * w);
  };
  return detail_q::de_trapezoid(g, cfg);
}

// Integral of f over the whole real line via the sinh-sinh transformation
// u = sinh((pi/2) sinh t); f must decay at least exponentially in u.
template <class F, class T = std::invoke_result_t<F, double>>
T sinh_sinh(F&& f, const QuadratureConfig& cfg) {
  auto g = [&](double t) -> T {
    const double e = detail::kPi / 2.0 * std::sinh(t);
    if (std::fabs(e) > 690.0) return T{};
    const double u = std::sinh(e);
    const double w = detail::kPi / 2.0 * std::cosh(t) * std::cosh(e);
    return f(u) * w;
  };
  return detail_q::de_trapezoid(g, cfg);
}

// Integral of an x^{c-1}-singular integrand over (0, b]: substitute x = v^{1/c}
// so the transformed integrand is bounded at 0.  c is the analytic head
// exponent of the integrand (integrand ~ kappa x^{c-1} as x -> 0+).
template <class F, class T = std::invoke_result_t<F, double>>
T head_integral(F&& f, double b, double c, const QuadratureConfig& cfg) {
  if (!(c > 0.0)) throw quadrature_error("head_integral: nonpositive head exponent");
  if (c >= 1.0) {
    return gauss_kronrod(f, 0.0, b, cfg);
  }
  const double inv_c = 1.0 / c;
  auto g = [&](double v) -> T {
    const double x = std::pow(v, inv_c);
    return f(x) * (inv_c * std::pow(v, inv_c - 1.0));
  };
  return gauss_kronrod(g, 0.0, std::pow(b, c), cfg);
}

}  // namespace quad
}  // namespace selfdecomp
