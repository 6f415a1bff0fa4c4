#pragma once

// Series/asymptotic evaluators for the special functions used throughout the
// package: reciprocal gamma, complex log-gamma, the Wright function
// W_{lambda,mu}, the M-Wright (Mainardi) function M_beta, the Fox-H residual
// density, the Gaussian residual density, and Mittag-Leffler functions.
//
// All evaluators are pure functions of their arguments and safe to call
// concurrently.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "selfdecomp/detail/numerics.hpp"
#include "selfdecomp/errors.hpp"

namespace selfdecomp {

struct SeriesConfig {
  int max_terms = 400;
  // Summation stops once |term| < term_tolerance * max(1, |partial sum|) and
  // term magnitudes have decreased for three consecutive indices.
  double term_tolerance = 1e-16;
  // Argument beyond which the asymptotic branch is used.  The effective
  // switch is min(switch_point, series_switch_bound(...)): beyond the bound
  // the alternating series cannot deliver 1e-10 in long double arithmetic.
  double switch_point = 5.0;
};

struct MWrightParams {
  double beta;

  explicit MWrightParams(double beta_) : beta(beta_) {
    if (!(beta > 0.0 && beta < 1.0)) {
      throw std::invalid_argument("MWrightParams: beta must lie in (0,1), got " +
                                  std::to_string(beta_));
    }
    if (beta < 0.05 || beta > 0.95) {
      // Outside [0.05, 0.95] the series/asymptotic pair cannot hold its
      // accuracy targets in double precision; reject rather than degrade.
      throw std::invalid_argument("MWrightParams: supported order range is [0.05, 0.95], got " +
                                  std::to_string(beta_));
    }
  }
};

struct WrightParams {
  double lambda;  // order, > -1
  double mu;      // shift

  WrightParams(double lambda_, double mu_) : lambda(lambda_), mu(mu_) {
    if (!(lambda > -1.0)) {
      throw std::invalid_argument("WrightParams: lambda must exceed -1");
    }
    if (lambda < 0.0 && (-lambda < 0.05 || -lambda > 0.95)) {
      throw std::invalid_argument("WrightParams: for lambda < 0 the supported range is -lambda in [0.05, 0.95]");
    }
    if (lambda < 0.0 && !(mu > 0.0)) {
      throw std::invalid_argument("WrightParams: mu must be positive for lambda < 0");
    }
  }
};

struct FoxHParams {
  double r;      // shape
  double alpha;  // decomposition exponent

  FoxHParams(double r_, double alpha_) : r(r_), alpha(alpha_) {
    if (!(r > 0.0)) throw std::invalid_argument("FoxHParams: r must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("FoxHParams: alpha must lie in (0,1)");
    }
    if (alpha < 0.05 || alpha > 0.95) {
      throw std::invalid_argument("FoxHParams: supported alpha range is [0.05, 0.95]");
    }
  }
};

// ---------------------------------------------------------------------------
// reciprocal gamma
// ---------------------------------------------------------------------------

// 1/Gamma(x), extended by continuity to 0 at the poles of Gamma.  For x < 0.5
// the reflection formula 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi keeps the
// zeros exact and avoids pole evaluation.  Saturates to +-inf for x < ~-178
// where |1/Gamma| exceeds the double range.
inline double reciprocal_gamma(double x) {
  if (!std::isfinite(x)) throw std::domain_error("reciprocal_gamma: non-finite argument");
  if (x >= 0.5) {
    return std::exp(-std::lgamma(x));
  }
  const double s = detail::sin_pi(x);
  if (s == 0.0) return 0.0;
  return s * std::exp(std::lgamma(1.0 - x) - detail::kLogPi);
}

// ---------------------------------------------------------------------------
// complex log-gamma
// ---------------------------------------------------------------------------

namespace detail {

// Stirling series, valid for Re(z) >= 12.
inline std::complex<double> log_gamma_stirling(std::complex<double> z) {
  // B_{2n} / (2n (2n-1))
  static constexpr double c[8] = {
      1.0 / 12.0,     -1.0 / 360.0,      1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,   -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0};
  const std::complex<double> w = 1.0 / (z * z);
  std::complex<double> s = c[7];
  for (int k = 6; k >= 0; --k) s = s * w + c[k];
  constexpr double half_log_two_pi = 0.91893853320467274178032973640561764;
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + s / z;
}

// log Gamma on Re(z) > 0 via upward recurrence into the Stirling region.
inline std::complex<double> log_gamma_right(std::complex<double> z) {
  std::complex<double> shift = 0.0;
  while (z.real() < 12.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return log_gamma_stirling(z) - shift;
}

// log sin(pi z), stable for large |Im z|.  Continuous on either open
// half-plane; on the real axis it matches the limit from above.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
  const double y = z.imag();
  if (y == 0.0) {
    const double s = sin_pi(z.real());
    if (s == 0.0) throw pole_error("log_sin_pi: integer argument");
    return {std::log(std::fabs(s)), s < 0.0 ? kPi : 0.0};
  }
  if (y > 0.0) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> w = std::exp(2.0 * kPi * i * z);  // |w| < 1
    return -i * kPi * z + std::log((w - 1.0) / (2.0 * i));
  }
  return std::conj(log_sin_pi(std::conj(z)));
}

}  // namespace detail

// Principal-branch log Gamma(z).  exp(log_gamma(z)) is accurate to ~1e-13
// relative over Re(z) in [-20, 50], |Im(z)| <= 50, away from the poles at
// nonpositive integers (which raise pole_error).
inline std::complex<double> log_gamma(std::complex<double> z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (x <= 0.0 && x == std::nearbyint(x)) {
      throw pole_error("log_gamma: pole at nonpositive integer " + std::to_string(x));
    }
    if (x > 0.0) return {std::lgamma(x), 0.0};
    // Gamma(x) = pi / (sin(pi x) Gamma(1-x)); imaginary part pi when
    // Gamma(x) < 0 (limit from the upper half-plane).
    const double s = detail::sin_pi(x);
    const double mag = detail::kLogPi - std::log(std::fabs(s)) - std::lgamma(1.0 - x);
    return {mag, s < 0.0 ? detail::kPi : 0.0};
  }
  if (z.real() >= 0.5) return detail::log_gamma_right(z);
  return detail::kLogPi - detail::log_sin_pi(z) - detail::log_gamma_right(1.0 - z);
}

// ---------------------------------------------------------------------------
// Wright function series engine
// ---------------------------------------------------------------------------

namespace detail {

// Largest |z| for which the alternating series of W_{-nu,mu}(-|z|) retains
// ~1e-10 absolute accuracy when summed in long double.  The term magnitudes
// peak near sigma^{1/2-mu} e^{+Y} with Y = (1-nu)(nu^nu |z|)^{1/(1-nu)}, so the
// bound solves Y - max(0, (mu - 1/2) log sigma) = 14.
inline double series_switch_bound(double nu, double mu) {
  double Y = 14.0;
  for (int i = 0; i < 4; ++i) {
    const double sigma = std::max(1.0, nu * Y / (1.0 - nu));
    Y = 14.0 + std::max(0.0, (mu - 0.5) * std::log(sigma));
  }
  return std::pow(Y / (1.0 - nu), 1.0 - nu) * std::pow(nu, -nu);
}

// W_{-nu,mu}(-x) for large x by saddle-point expansion of the Hankel-integral
// representation, with the first correction exponentiated:
//   sigma = (nu x)^{1/(1-nu)},  Y = (1-nu) sigma / nu,
//   W ~ [2 pi (1-nu)]^{-1/2} sigma^{1/2-mu} exp(-Y - c1/(nu Y)),
//   c1 = mu(mu+1)/2 - mu(2-nu)/2 - (2-nu)(3-nu)/8 + 5(2-nu)^2/24.
// Exact for (nu,mu) = (1/2,1/2); relative error ~ (c1/(nu Y))^2 otherwise.
inline double wright_asymptotic_neg(double nu, double mu, double x) {
  const double log_sigma = std::log(nu * x) / (1.0 - nu);
  const double sigma = std::exp(log_sigma);
  const double Y = (1.0 - nu) / nu * sigma;
  const double c1 = mu * (mu + 1.0) / 2.0 - mu * (2.0 - nu) / 2.0 -
                    (2.0 - nu) * (3.0 - nu) / 8.0 + 5.0 * (2.0 - nu) * (2.0 - nu) / 24.0;
  const double log_w = -0.5 * std::log(2.0 * kPi * (1.0 - nu)) + (0.5 - mu) * log_sigma -
                       Y - c1 / (nu * Y);
  return std::exp(log_w);
}

// sum_{l>=0} z^l / (l! Gamma(mu + lambda l)) in long double.  Terms are formed
// in sign/log space so that neither Gamma(mu + lambda l) nor z^l / l! can
// overflow on the way to a finite sum.
inline double wright_series(double lambda, double mu, double z, const SeriesConfig& cfg) {
  if (z == 0.0) return reciprocal_gamma(mu);

  const long double log_az = std::log(std::fabs(static_cast<long double>(z)));
  const bool z_negative = z < 0.0;

  CompensatedSum<long double> acc;
  long double prev_mag = std::numeric_limits<long double>::infinity();
  int decreasing = 0;

  for (int l = 0; l < cfg.max_terms; ++l) {
    const long double y = static_cast<long double>(mu) + static_cast<long double>(lambda) * l;

    long double log_mag;
    int sign = 1;
    if (y >= 0.5L) {
      log_mag = -std::lgamma(y);
    } else {
      const long double s = sin_pi(y);
      if (s == 0.0L) continue;  // pole of Gamma: the coefficient vanishes
      log_mag = std::lgamma(1.0L - y) - kLogPiL + std::log(std::fabs(s));
      sign = s > 0.0L ? 1 : -1;
    }
    log_mag += l * log_az - std::lgamma(static_cast<long double>(l) + 1.0L);
    if (z_negative && (l & 1)) sign = -sign;

    const long double mag = std::exp(log_mag);
    acc.add(sign > 0 ? mag : -mag);

    if (mag <= prev_mag) {
      ++decreasing;
    } else {
      decreasing = 0;
    }
    prev_mag = mag;

    if (decreasing >= 3 &&
        mag < cfg.term_tolerance * std::max(1.0L, std::fabs(acc.value()))) {
      return static_cast<double>(acc.value());
    }
  }
  std::ostringstream os;
  os << "wright_series: no convergence within " << cfg.max_terms
     << " terms (lambda=" << lambda << ", mu=" << mu << ", z=" << z << ")";
  throw convergence_error(os.str());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public evaluators
// ---------------------------------------------------------------------------

// W_{lambda,mu}(z) = sum_l z^l / (l! Gamma(lambda l + mu)).  For lambda < 0 and
// z below the effective switch point the saddle-point branch is used; the
// switch is the spec default capped by the cancellation bound of the series.
inline double wright_w(const WrightParams& p, double z, const SeriesConfig& cfg = {}) {
  if (!std::isfinite(z)) throw std::domain_error("wright_w: non-finite argument");
  if (p.lambda < 0.0 && z < 0.0) {
    const double nu = -p.lambda;
    const double x = -z;
    const double eff_switch =
        std::min(cfg.switch_point, detail::series_switch_bound(nu, p.mu));
    if (x > eff_switch) return detail::wright_asymptotic_neg(nu, p.mu, x);
  }
  return detail::wright_series(p.lambda, p.mu, z, cfg);
}

// M-Wright (Mainardi) function M_beta(t) = W_{-beta,1-beta}(-t), t >= 0.
// A probability density on [0,inf) for beta in (0,1).
inline double m_wright(const MWrightParams& p, double t, const SeriesConfig& cfg = {}) {
  if (!(t >= 0.0)) throw std::domain_error("m_wright: t must be >= 0");
  return wright_w(WrightParams(-p.beta, 1.0 - p.beta), -t, cfg);
}

// Fox-H residual density rho_{Y_{alpha,r}}(t) = t^{r-1} W_{-alpha,r(1-alpha)}(-t).
inline double foxh_residual_density(const FoxHParams& p, double t, const SeriesConfig& cfg = {}) {
  if (!(t > 0.0)) {
    if (t == 0.0 && p.r >= 1.0) {
      // finite limit: r > 1 vanishes, r = 1 reduces to M_alpha(0)
      return p.r > 1.0 ? 0.0 : reciprocal_gamma(1.0 - p.alpha);
    }
    throw std::domain_error("foxh_residual_density: t must be positive");
  }
  const double w = wright_w(WrightParams(-p.alpha, p.r * (1.0 - p.alpha)), -t, cfg);
  if (w == 0.0) return 0.0;  // tail underflow dominates the algebraic factor
  return std::pow(t, p.r - 1.0) * w;
}

// Gaussian residual density rho_{X_alpha}(t) =
//   2^{(alpha+1)/2} W_{-alpha,(1-alpha)/2}(-2^{alpha-1} t^2).
// Equivalently 2^alpha t H^{10}_{11}(2^{alpha-1} t^2 | (1/2-alpha,alpha),(-1/2,1)),
// the two forms coinciding term by term.
inline double gaussian_residual_density(double alpha, double t, const SeriesConfig& cfg = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("gaussian_residual_density: alpha must lie in (0,1)");
  }
  if (!(t >= 0.0)) throw std::domain_error("gaussian_residual_density: t must be >= 0");
  const double arg = std::exp2(alpha - 1.0) * t * t;
  const double w = wright_w(WrightParams(-alpha, (1.0 - alpha) / 2.0), -arg, cfg);
  return std::exp2((alpha + 1.0) / 2.0) * w;
}

// ---------------------------------------------------------------------------
// Mittag-Leffler functions at negative arguments
// ---------------------------------------------------------------------------

namespace detail {

// Algebraic tail expansion E_{alpha,mu}(-s) ~ sum_{k>=1} (-1)^{k+1} s^{-k} / Gamma(mu - alpha k),
// truncated at the smallest term.
inline double ml_asymptotic(double alpha, double mu, double s) {
  const double log_s = std::log(s);
  CompensatedSum<double> acc;
  double prev_mag = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 200; ++k) {
    const double y = mu - alpha * k;
    double log_mag;
    int sign = 1;
    if (y >= 0.5) {
      log_mag = -std::lgamma(y);
    } else {
      const double sp = sin_pi(y);
      if (sp == 0.0) continue;
      log_mag = std::lgamma(1.0 - y) - kLogPi + std::log(std::fabs(sp));
      sign = sp > 0.0 ? 1 : -1;
    }
    log_mag -= k * log_s;
    const double mag = std::exp(log_mag);
    if (mag >= prev_mag) break;  // asymptotic series started to diverge
    prev_mag = mag;
    if (k & 1 ? false : true) sign = -sign;  // (-1)^{k+1}
    acc.add(sign > 0 ? mag : -mag);
    if (mag < 1e-17 * std::max(1.0, std::fabs(acc.value()))) break;
  }
  return acc.value();
}

// E_{alpha,mu}(-s) alternating series in long double.
inline double ml_series(double alpha, double mu, double s, const SeriesConfig& cfg) {
  const long double log_s = std::log(static_cast<long double>(s));
  CompensatedSum<long double> acc;
  long double prev_mag = std::numeric_limits<long double>::infinity();
  int decreasing = 0;
  for (int n = 0; n < cfg.max_terms; ++n) {
    const long double y = static_cast<long double>(mu) + static_cast<long double>(alpha) * n;
    long double log_mag;
    int sign = (n & 1) ? -1 : 1;
    if (y >= 0.5L) {
      log_mag = -std::lgamma(y);
    } else {
      const long double sp = sin_pi(y);
      if (sp == 0.0L) continue;
      log_mag = std::lgamma(1.0L - y) - kLogPiL + std::log(std::fabs(sp));
      if (sp < 0.0L) sign = -sign;
    }
    log_mag += n * log_s;
    const long double mag = std::exp(log_mag);
    acc.add(sign > 0 ? mag : -mag);
    if (mag <= prev_mag) {
      ++decreasing;
    } else {
      decreasing = 0;
    }
    prev_mag = mag;
    if (decreasing >= 3 &&
        mag < cfg.term_tolerance * std::max(1.0L, std::fabs(acc.value()))) {
      return static_cast<double>(acc.value());
    }
  }
  std::ostringstream os;
  os << "ml_series: no convergence within " << cfg.max_terms << " terms (alpha=" << alpha
     << ", mu=" << mu << ", s=" << s << ")";
  throw convergence_error(os.str());
}

inline double ml_neg(double alpha, double mu, double s, const SeriesConfig& cfg) {
  if (s == 0.0) return reciprocal_gamma(mu);
  if (alpha == 1.0) {
    // closed forms in the exponential family
    if (mu == 1.0) return std::exp(-s);
    if (mu == 2.0) return -std::expm1(-s) / s;
  }
  // The series loses ~s^{1/alpha} digits of cancellation, the algebraic tail
  // gains them; cross over where the two error scales meet.
  const double v = std::pow(s, 1.0 / alpha);
  if (v > 18.7) return ml_asymptotic(alpha, mu, s);
  return ml_series(alpha, mu, s, cfg);
}

}  // namespace detail

// Mittag-Leffler E_beta(-s) for 0 < beta <= 1, s >= 0.
inline double mittag_leffler(double beta, double s, const SeriesConfig& cfg = {}) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("mittag_leffler: beta must lie in (0,1]");
  }
  if (!(s >= 0.0)) throw std::domain_error("mittag_leffler: s must be >= 0");
  if (beta == 1.0) return std::exp(-s);
  return detail::ml_neg(beta, 1.0, s, cfg);
}

// Generalized Mittag-Leffler E_{alpha,mu}(-s) for 0 < alpha <= 1, mu > 0, s >= 0.
inline double generalized_mittag_leffler(double alpha, double mu, double s,
                                         const SeriesConfig& cfg = {}) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("generalized_mittag_leffler: alpha must lie in (0,1]");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("generalized_mittag_leffler: mu must be positive");
  if (!(s >= 0.0)) throw std::domain_error("generalized_mittag_leffler: s must be >= 0");
  return detail::ml_neg(alpha, mu, s, cfg);
}

// Series config whose switch point is the cancellation bound for order nu,
// i.e. the largest argument the series can handle at ~1e-10 absolute accuracy.
// Use this instead of the conservative default when evaluating far tails.
inline SeriesConfig tuned_series_config(double nu, double mu) {
  SeriesConfig cfg;
  cfg.switch_point = detail::series_switch_bound(nu, mu);
  return cfg;
}

inline SeriesConfig tuned_series_config(const MWrightParams& p) {
  return tuned_series_config(p.beta, 1.0 - p.beta);
}

}  // namespace selfdecomp
