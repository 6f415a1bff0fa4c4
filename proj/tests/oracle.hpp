#pragma once

// Test-only high-precision oracles, independent of the library's evaluation
// paths.  Series are summed in 512-bit MPFR arithmetic, so cancellation that
// limits the double-precision evaluators is immaterial here.

#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr mpfr_prec_t kPrec = 512;

class Real {
 public:
  Real() { mpfr_init2(v, kPrec); mpfr_set_zero(v, 1); }
  explicit Real(double x) { mpfr_init2(v, kPrec); mpfr_set_d(v, x, MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v, kPrec); mpfr_set(v, o.v, MPFR_RNDN); }
  Real& operator=(const Real& o) {
    if (this != &o) mpfr_set(v, o.v, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v); }

  double to_double() const { return mpfr_get_d(v, MPFR_RNDN); }
  mpfr_ptr get() { return v; }
  mpfr_srcptr get() const { return v; }

 private:
  mpfr_t v;
};

// sum_{l=0}^{...} z^l / (l! Gamma(mu + lambda l)); coefficients at the poles
// of Gamma vanish.
inline double wright_series(double lambda, double mu, double z, int max_terms = 4000) {
  Real acc, term, y, zp, lf, g;
  mpfr_set_zero(acc.get(), 1);
  mpfr_set_d(zp.get(), 1.0, MPFR_RNDN);  // z^l
  mpfr_set_d(lf.get(), 1.0, MPFR_RNDN);  // l!
  for (int l = 0; l < max_terms; ++l) {
    // y = mu + lambda*l
    mpfr_set_d(y.get(), lambda, MPFR_RNDN);
    mpfr_mul_si(y.get(), y.get(), l, MPFR_RNDN);
    mpfr_add_d(y.get(), y.get(), mu, MPFR_RNDN);

    bool pole = false;
    if (mpfr_sgn(y.get()) <= 0) {
      Real r;
      mpfr_round(r.get(), y.get());
      mpfr_sub(r.get(), r.get(), y.get(), MPFR_RNDN);
      mpfr_abs(r.get(), r.get(), MPFR_RNDN);
      pole = mpfr_cmp_d(r.get(), 1e-80) < 0;
    }
    if (!pole) {
      mpfr_gamma(g.get(), y.get(), MPFR_RNDN);
      mpfr_mul(term.get(), g.get(), lf.get(), MPFR_RNDN);
      mpfr_div(term.get(), zp.get(), term.get(), MPFR_RNDN);
      mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
      if (l > 60) {
        Real scale, t_abs;
        mpfr_abs(scale.get(), acc.get(), MPFR_RNDN);
        if (mpfr_cmp_d(scale.get(), 1.0) < 0) mpfr_set_d(scale.get(), 1.0, MPFR_RNDN);
        mpfr_abs(t_abs.get(), term.get(), MPFR_RNDN);
        mpfr_div(t_abs.get(), t_abs.get(), scale.get(), MPFR_RNDN);
        if (mpfr_cmp_d(t_abs.get(), 1e-70) < 0) break;
      }
    }
    mpfr_mul_d(zp.get(), zp.get(), z, MPFR_RNDN);
    mpfr_mul_si(lf.get(), lf.get(), l + 1, MPFR_RNDN);
  }
  return acc.to_double();
}

inline double m_wright(double beta, double t) { return wright_series(-beta, 1.0 - beta, -t); }

// sum_n (-s)^n / Gamma(alpha n + mu)
inline double mittag_leffler(double alpha, double mu, double s, int max_terms = 6000) {
  Real acc, term, y, sp, g;
  mpfr_set_d(sp.get(), 1.0, MPFR_RNDN);  // (-s)^n
  for (int n = 0; n < max_terms; ++n) {
    mpfr_set_d(y.get(), alpha, MPFR_RNDN);
    mpfr_mul_si(y.get(), y.get(), n, MPFR_RNDN);
    mpfr_add_d(y.get(), y.get(), mu, MPFR_RNDN);
    mpfr_gamma(g.get(), y.get(), MPFR_RNDN);
    mpfr_div(term.get(), sp.get(), g.get(), MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
    if (n > 60) {
      Real scale, t_abs;
      mpfr_abs(scale.get(), acc.get(), MPFR_RNDN);
      if (mpfr_cmp_d(scale.get(), 1.0) < 0) mpfr_set_d(scale.get(), 1.0, MPFR_RNDN);
      mpfr_abs(t_abs.get(), term.get(), MPFR_RNDN);
      mpfr_div(t_abs.get(), t_abs.get(), scale.get(), MPFR_RNDN);
      if (mpfr_cmp_d(t_abs.get(), 1e-70) < 0) break;
    }
    mpfr_mul_d(sp.get(), sp.get(), -s, MPFR_RNDN);
  }
  return acc.to_double();
}

// gamma and 1/gamma at double arguments
inline double gamma_fn(double x) {
  Real r, y(x);
  mpfr_gamma(r.get(), y.get(), MPFR_RNDN);
  return r.to_double();
}

inline double reciprocal_gamma(double x) {
  if (x <= 0.0 && x == std::nearbyint(x)) return 0.0;
  Real r, y(x);
  mpfr_gamma(r.get(), y.get(), MPFR_RNDN);
  mpfr_d_div(r.get(), 1.0, r.get(), MPFR_RNDN);
  return r.to_double();
}

// Airy Ai via its Maclaurin series: Ai(x) = c1 f(x) - c2 g(x),
//   f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
inline double airy_ai(double x) {
  Real f, g, tf, tg, xr(x);
  mpfr_set_d(tf.get(), 1.0, MPFR_RNDN);
  Real x3;
  mpfr_pow_si(x3.get(), xr.get(), 3, MPFR_RNDN);
  mpfr_set(tg.get(), xr.get(), MPFR_RNDN);
  mpfr_set_zero(f.get(), 1);
  mpfr_set_zero(g.get(), 1);
  for (int k = 0; k < 400; ++k) {
    mpfr_add(f.get(), f.get(), tf.get(), MPFR_RNDN);
    mpfr_add(g.get(), g.get(), tg.get(), MPFR_RNDN);
    // tf *= x^3 (3k+1) / ((3k+1)(3k+2)(3k+3)) = x^3 / ((3k+2)(3k+3))
    mpfr_mul(tf.get(), tf.get(), x3.get(), MPFR_RNDN);
    mpfr_div_si(tf.get(), tf.get(), (3 * k + 2) * (3 * k + 3), MPFR_RNDN);
    // tg *= x^3 / ((3k+3)(3k+4))
    mpfr_mul(tg.get(), tg.get(), x3.get(), MPFR_RNDN);
    mpfr_div_si(tg.get(), tg.get(), (3 * k + 3) * (3 * k + 4), MPFR_RNDN);
  }
  // c1 = 3^{-2/3}/Gamma(2/3), c2 = 3^{-1/3}/Gamma(1/3)
  Real c1, c2, third, g23, g13, p;
  mpfr_set_d(third.get(), 1.0, MPFR_RNDN);
  mpfr_div_si(third.get(), third.get(), 3, MPFR_RNDN);
  Real twothird;
  mpfr_mul_si(twothird.get(), third.get(), 2, MPFR_RNDN);
  mpfr_gamma(g23.get(), twothird.get(), MPFR_RNDN);
  mpfr_gamma(g13.get(), third.get(), MPFR_RNDN);
  mpfr_set_si(p.get(), 3, MPFR_RNDN);
  Real m23, m13;
  mpfr_neg(m23.get(), twothird.get(), MPFR_RNDN);
  mpfr_pow(c1.get(), p.get(), m23.get(), MPFR_RNDN);
  mpfr_div(c1.get(), c1.get(), g23.get(), MPFR_RNDN);
  mpfr_neg(m13.get(), third.get(), MPFR_RNDN);
  mpfr_pow(c2.get(), p.get(), m13.get(), MPFR_RNDN);
  mpfr_div(c2.get(), c2.get(), g13.get(), MPFR_RNDN);

  Real out;
  mpfr_mul(out.get(), c1.get(), f.get(), MPFR_RNDN);
  Real t2;
  mpfr_mul(t2.get(), c2.get(), g.get(), MPFR_RNDN);
  mpfr_sub(out.get(), out.get(), t2.get(), MPFR_RNDN);
  return out.to_double();
}

}  // namespace oracle
