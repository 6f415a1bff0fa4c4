#pragma once

// Numerical Mellin transform on a strip, Mellin convolution, and the registry
// of closed-form Mellin transforms of every distribution family in the
// package.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>

#include "selfdecomp/distributions.hpp"
#include "selfdecomp/quadrature.hpp"
#include "selfdecomp/specfun.hpp"

namespace selfdecomp {

// Vertical strip lower < Re(z) < upper on which a Mellin transform is valid.
struct AnalyticStrip {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool contains(std::complex<double> z) const {
    return z.real() > lower && z.real() < upper;
  }
};

enum class MellinMethod { ClosedForm, Quadrature };

struct MellinValue {
  std::complex<double> z;
  std::complex<double> value;
  AnalyticStrip strip;
  MellinMethod method = MellinMethod::ClosedForm;
};

namespace detail_mellin {

inline void check_strip(std::complex<double> z, const AnalyticStrip& strip, const char* who) {
  if (!strip.contains(z)) {
    std::ostringstream os;
    os << who << ": Re(z) = " << z.real() << " outside strip (" << strip.lower << ", "
       << strip.upper << ")";
    throw strip_error(os.str());
  }
}

}  // namespace detail_mellin

// ---------------------------------------------------------------------------
// numeric transform
// ---------------------------------------------------------------------------

// (M f)(z) = int_0^inf f(x) x^{z-1} dx by quadrature.  head_exponent is the
// analytic exponent c of f at 0 (f ~ kappa x^{c-1}); the head substitution
// x = v^{1/(c + Re z - 1)} removes the endpoint singularity.  Real z uses the
// Gauss-Kronrod head plus an exp-sinh tail in u = log x; complex z integrates
// the whole u-line with the sinh-sinh rule.
template <class F>
MellinValue numeric_mellin(F&& f, std::complex<double> z, const AnalyticStrip& strip,
                           const QuadratureConfig& cfg = {}, double head_exponent = 1.0) {
  detail_mellin::check_strip(z, strip, "numeric_mellin");

  if (z.imag() == 0.0) {
    const double zr = z.real();
    auto integrand = [&](double x) { return f(x) * std::pow(x, zr - 1.0); };
    const double c_total = head_exponent + zr - 1.0;
    if (!(c_total > 0.0)) {
      throw quadrature_error("numeric_mellin: integrand not integrable at 0 (check strip)");
    }
    const double head = quad::head_integral(integrand, cfg.split_point, c_total, cfg);
    const double u0 = std::log(cfg.split_point);
    auto tail = [&](double u) {
      const double x = std::exp(u);
      if (!std::isfinite(x)) return 0.0;  // inside the strip the integrand has long decayed
      const double fx = f(x);
      if (fx == 0.0) return 0.0;
      const double lw = zr * u;
      return lw > 700.0 ? std::exp(lw + std::log(fx)) : fx * std::exp(lw);
    };
    const double rest = quad::exp_sinh(tail, u0, cfg);
    return {z, {head + rest, 0.0}, strip, MellinMethod::Quadrature};
  }

  auto g = [&](double u) -> std::complex<double> {
    const double x = std::exp(u);
    if (!(x > 0.0) || !std::isfinite(x)) return {0.0, 0.0};
    const double fx = f(x);
    if (fx == 0.0) return {0.0, 0.0};
    return fx * std::exp(z * u);
  };
  const std::complex<double> v = quad::sinh_sinh(g, cfg);
  return {z, v, strip, MellinMethod::Quadrature};
}

// Mellin convolution (f * g)(x) = int_0^inf f(x/y) g(y) dy/y: the density of
// the product of independent positive variables with densities f and g.
template <class F, class G>
double mellin_convolve(F&& f, G&& g, double x, const QuadratureConfig& cfg = {}) {
  if (!(x > 0.0)) throw std::domain_error("mellin_convolve: x must be positive");
  auto integrand = [&](double u) {
    const double y = std::exp(u);
    const double xi = x * std::exp(-u);
    // beyond the representable range every density here has decayed to zero
    if (!(y > 0.0) || !std::isfinite(y) || !(xi > 0.0) || !std::isfinite(xi)) return 0.0;
    return f(xi) * g(y);
  };
  return quad::sinh_sinh(integrand, cfg);
}

// ---------------------------------------------------------------------------
// closed-form registry
// ---------------------------------------------------------------------------

inline AnalyticStrip mellin_strip(const DistributionSpec& spec) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (spec.family()) {
    case Family::Exponential: return {0.0, inf};
    case Family::Gamma: return {1.0 - spec.r(), inf};
    case Family::Weibull: return {std::max(0.0, 1.0 - spec.k()), inf};
    case Family::MWright: return {0.0, inf};
    case Family::FoxHResidual: return {1.0 - spec.r(), inf};
    case Family::HalfNormal: return {0.0, inf};
    case Family::GaussianResidual: return {0.0, inf};
    case Family::OneSidedStable:
      // all negative moments exist; positive moments up to order beta.
      // Derived from the Laplace transform exp(-lambda^beta), not part of the
      // closed-form registry sources.
      return {-inf, 1.0 + spec.beta()};
  }
  throw std::logic_error("mellin_strip: unhandled family");
}

// Closed-form (M rho)(z) as a ratio of gamma functions.
inline MellinValue analytic_mellin(const DistributionSpec& spec, std::complex<double> z) {
  const AnalyticStrip strip = mellin_strip(spec);
  detail_mellin::check_strip(z, strip, ("analytic_mellin[" + spec.name() + "]").c_str());
  const std::complex<double> one(1.0, 0.0);
  std::complex<double> value;
  switch (spec.family()) {
    case Family::Exponential:
      value = std::exp(log_gamma(z));
      break;
    case Family::Gamma:
      value = std::exp(log_gamma(spec.r() - 1.0 + z) - std::lgamma(spec.r()));
      break;
    case Family::Weibull:
      value = std::exp(log_gamma((z - one) / spec.k() + one));
      break;
    case Family::MWright:
      value = std::exp(log_gamma(z) - log_gamma(spec.beta() * (z - one) + one));
      break;
    case Family::FoxHResidual:
      value = std::exp(log_gamma(spec.r() - 1.0 + z) -
                       log_gamma(spec.r() - spec.alpha() + spec.alpha() * z));
      break;
    case Family::HalfNormal:
      // 2^{z/2} Gamma(z/2) / sqrt(2 pi)
      value = std::exp(0.5 * z * std::log(2.0) + log_gamma(0.5 * z) -
                       0.5 * std::log(2.0 * detail::kPi));
      break;
    case Family::GaussianResidual: {
      const double a = spec.alpha();
      value = std::exp(0.5 * (1.0 - a) * (z - one) * std::log(2.0) +
                       log_gamma(0.5 + 0.5 * (z - one)) -
                       log_gamma(0.5 + 0.5 * a * (z - one)));
      break;
    }
    case Family::OneSidedStable: {
      const double b = spec.beta();
      value = std::exp(log_gamma(one + (one - z) / b) - log_gamma(2.0 * one - z));
      break;
    }
  }
  return {z, value, strip, MellinMethod::ClosedForm};
}

// Mellin transform of X^a for X ~ spec: (M rho_{X^a})(z) = (M rho_X)(a(z-1)+1),
// with the correspondingly transformed strip.
inline MellinValue mellin_of_power(const DistributionSpec& spec, double a,
                                   std::complex<double> z) {
  if (!(a > 0.0)) throw std::invalid_argument("mellin_of_power: exponent must be positive");
  const std::complex<double> w = a * (z - 1.0) + 1.0;
  const AnalyticStrip inner = mellin_strip(spec);
  const AnalyticStrip outer{(inner.lower - 1.0) / a + 1.0,
                            std::isinf(inner.upper) ? inner.upper : (inner.upper - 1.0) / a + 1.0};
  detail_mellin::check_strip(z, outer, "mellin_of_power");
  MellinValue base = analytic_mellin(spec, w);
  return {z, base.value, outer, MellinMethod::ClosedForm};
}

}  // namespace selfdecomp
