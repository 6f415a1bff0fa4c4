#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "oracle.hpp"
#include "selfdecomp/mellin.hpp"
#include "selfdecomp/rng.hpp"
#include "selfdecomp/specfun.hpp"

using namespace selfdecomp;
using Catch::Approx;

namespace {
constexpr double kInvGammaHalf = 0.56418958354775628695;     // 1/Gamma(1/2)
constexpr double kInvGammaMinusHalf = -0.28209479177387814;  // 1/Gamma(-1/2)
constexpr double kMHalfAtOne = 0.43939128946772240;          // pi^{-1/2} e^{-1/4}
constexpr double kInvGammaTwoThirds = 0.73848811162164831;   // 1/Gamma(2/3)
constexpr double kWrightRef = 0.35211575770841986;           // W_{-1/2,1/4}(-1)
constexpr double kEHalfAtOne = 0.42758357615580700;          // e erfc(1)
}  // namespace

TEST_CASE("reciprocal gamma basics") {
  CHECK(reciprocal_gamma(1.0) == 1.0);
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-3.0) == 0.0);
  CHECK(reciprocal_gamma(-0.5) == Approx(kInvGammaMinusHalf).epsilon(1e-13));
  CHECK(reciprocal_gamma(-0.5) == Approx(oracle::reciprocal_gamma(-0.5)).epsilon(1e-13));
  CHECK(reciprocal_gamma(0.5) == Approx(kInvGammaHalf).epsilon(1e-14));
  CHECK_THROWS_AS(reciprocal_gamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("reciprocal gamma against high-precision oracle on a grid") {
  for (double x = -20.25; x < 20.0; x += 0.5) {
    const double want = oracle::reciprocal_gamma(x);
    CHECK(reciprocal_gamma(x) == Approx(want).epsilon(1e-12).margin(1e-300));
  }
}

TEST_CASE("complex log gamma") {
  CHECK(log_gamma({0.5, 0.0}).real() == Approx(std::log(std::sqrt(detail::kPi))).epsilon(1e-14));
  CHECK(log_gamma({0.5, 0.0}).imag() == 0.0);
  CHECK(log_gamma({2.0, 0.0}).real() == Approx(0.0).margin(1e-15));

  const std::complex<double> z{1.5, 2.0};
  const auto lhs = std::exp(log_gamma(z + 1.0));
  const auto rhs = z * std::exp(log_gamma(z));
  CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-13);

  CHECK_THROWS_AS(log_gamma({0.0, 0.0}), pole_error);
  CHECK_THROWS_AS(log_gamma({-4.0, 0.0}), pole_error);

  // reflection region and conjugate symmetry
  for (const std::complex<double> w :
       {std::complex<double>{-5.5, 12.0}, {-19.5, 0.5}, {0.25, -3.0}, {40.0, 49.0}}) {
    const auto a = log_gamma(std::conj(w));
    const auto b = std::conj(log_gamma(w));
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
    // recurrence exp-identity holds everywhere off the poles
    const auto l = std::exp(log_gamma(w + 1.0));
    const auto r = w * std::exp(log_gamma(w));
    CHECK(std::abs(l - r) / std::abs(r) < 1e-12);
  }

  // real negative argument: Gamma(-0.5) = -2 sqrt(pi)
  const auto g = std::exp(log_gamma({-0.5, 0.0}));
  CHECK(g.real() == Approx(-2.0 * std::sqrt(detail::kPi)).epsilon(1e-13));
  CHECK(std::fabs(g.imag()) < 1e-12);
}

TEST_CASE("m_wright special values") {
  const MWrightParams half(0.5);
  CHECK(m_wright(half, 0.0) == Approx(kInvGammaHalf).epsilon(1e-14));
  CHECK(m_wright(half, 1.0) == Approx(kMHalfAtOne).epsilon(1e-13));

  const MWrightParams third(1.0 / 3.0);
  CHECK(m_wright(third, 0.0) == Approx(kInvGammaTwoThirds).epsilon(1e-13));
  CHECK(std::fabs(m_wright(third, 0.0) - kInvGammaTwoThirds) < 1e-12);
}

TEST_CASE("m_wright matches the Airy identity for beta = 1/3") {
  // M_{1/3}(t) = 3^{2/3} Ai(t / 3^{1/3}), checked against an independent
  // Maclaurin-series Airy oracle.
  const MWrightParams third(1.0 / 3.0);
  const SeriesConfig cfg = tuned_series_config(third);
  const double c = std::pow(3.0, 2.0 / 3.0);
  for (double t : {0.0, 0.3, 1.0, 2.5, 4.0, 6.0}) {
    const double want = c * oracle::airy_ai(t / std::pow(3.0, 1.0 / 3.0));
    CHECK(m_wright(third, t, cfg) == Approx(want).margin(1e-12));
  }
}

TEST_CASE("m_wright closed form for beta = 1/2 on [0, 10]") {
  const MWrightParams half(0.5);
  const SeriesConfig tuned = tuned_series_config(half);
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    const double want = std::exp(-0.25 * t * t) / std::sqrt(detail::kPi);
    CHECK(std::fabs(m_wright(half, t) - want) < 1e-10);         // default config
    CHECK(std::fabs(m_wright(half, t, tuned) - want) < 1e-10);  // tuned config
  }
}

TEST_CASE("wright_w basics and definitional identity") {
  CHECK(wright_w(WrightParams(-0.3, 0.7), 0.0) == Approx(reciprocal_gamma(0.7)).epsilon(1e-14));
  CHECK(wright_w(WrightParams(0.5, 2.0), 0.0) == Approx(reciprocal_gamma(2.0)).epsilon(1e-14));

  // M_beta(t) = W_{-beta,1-beta}(-t): same series, agreement at summation noise
  for (double beta : {0.2, 0.5, 0.8}) {
    const MWrightParams p(beta);
    for (double t : {0.0, 0.4, 1.0, 2.7, 4.9}) {
      CHECK(std::fabs(m_wright(p, t) - wright_w(WrightParams(-beta, 1.0 - beta), -t)) <= 1e-13);
    }
  }

  CHECK(wright_w(WrightParams(-0.5, 0.25), -1.0) == Approx(kWrightRef).epsilon(1e-13));
  CHECK(wright_w(WrightParams(-0.5, 0.25), -1.0) ==
        Approx(oracle::wright_series(-0.5, 0.25, -1.0)).epsilon(1e-13));
}

TEST_CASE("wright_w against oracle across orders and signs") {
  for (double nu : {0.1, 0.35, 0.6, 0.9}) {
    for (double mu : {0.2, 0.7, 1.4}) {
      for (double x : {0.05, 0.8, 2.0}) {
        const double want = oracle::wright_series(-nu, mu, -x);
        CHECK(wright_w(WrightParams(-nu, mu), -x) == Approx(want).margin(1e-12));
      }
    }
  }
  // positive arguments (monotone series, no cancellation)
  CHECK(wright_w(WrightParams(-0.4, 0.9), 1.5) ==
        Approx(oracle::wright_series(-0.4, 0.9, 1.5)).epsilon(1e-12));
}

TEST_CASE("series switch bound calibration against the oracle") {
  // At the cancellation bound the long-double series must still agree with
  // 512-bit summation to 1e-10 absolute; just beyond it the asymptotic branch
  // takes over and must hand off smoothly.
  for (double beta = 0.05; beta < 0.96; beta += 0.05) {
    const double mu = 1.0 - beta;
    const double bound = detail::series_switch_bound(beta, mu);
    SeriesConfig force_series;
    force_series.switch_point = bound;  // t == bound stays on the series branch
    const double t = bound;
    const double series = detail::wright_series(-beta, mu, -t, force_series);
    const double truth = oracle::wright_series(-beta, mu, -t);
    INFO("beta=" << beta << " bound=" << bound);
    CHECK(std::fabs(series - truth) < 1e-10);

    const double asym = detail::wright_asymptotic_neg(beta, mu, t);
    CHECK(std::fabs(asym - truth) < 2e-8);
    if (truth > 1e-12) CHECK(std::fabs(asym / truth - 1.0) < 2e-2);
  }
}

TEST_CASE("asymptotic branch matches the closed-order constants for M_beta") {
  // Leading order of the saddle-point branch equals
  //   A t^{(beta-1/2)/(1-beta)} exp(-B t^{1/(1-beta)})
  // with A = [2 pi (1-beta)]^{-1/2} beta^{(beta-1/2)/(1-beta)} and
  // B = (1-beta) beta^{beta/(1-beta)}.
  for (double beta : {0.2, 0.5, 0.8}) {
    const double mu = 1.0 - beta;
    const double t = 1.2 * detail::series_switch_bound(beta, mu);
    const double A = std::pow(2.0 * detail::kPi * (1.0 - beta), -0.5) *
                     std::pow(beta, (beta - 0.5) / (1.0 - beta));
    const double B = (1.0 - beta) * std::pow(beta, beta / (1.0 - beta));
    const double lead = A * std::pow(t, (beta - 0.5) / (1.0 - beta)) *
                        std::exp(-B * std::pow(t, 1.0 / (1.0 - beta)));
    // strip the exponentiated first-order correction to isolate leading order
    const double sigma = std::pow(beta * t, 1.0 / (1.0 - beta));
    const double Y = (1.0 - beta) / beta * sigma;
    const double c1 = mu * (mu + 1.0) / 2.0 - mu * (2.0 - beta) / 2.0 -
                      (2.0 - beta) * (3.0 - beta) / 8.0 +
                      5.0 * (2.0 - beta) * (2.0 - beta) / 24.0;
    const double mine = detail::wright_asymptotic_neg(beta, mu, t) * std::exp(c1 / (beta * Y));
    CHECK(mine == Approx(lead).epsilon(1e-12));
  }
}

TEST_CASE("fox-h residual density") {
  const FoxHParams p(2.0, 0.5);

  SECTION("normalization by quadrature") {
    QuadratureConfig qc;
    auto f = [&](double t) { return foxh_residual_density(p, t); };
    const auto norm = numeric_mellin(f, {1.0, 0.0}, {-1.0, 1e300}, qc, p.r);
    CHECK(norm.value.real() == Approx(1.0).epsilon(1e-9));
  }

  SECTION("leading behavior at 0+") {
    const double kappa = reciprocal_gamma(p.r * (1.0 - p.alpha));
    for (double t : {1e-7, 1e-5, 1e-3}) {
      CHECK(foxh_residual_density(p, t) / std::pow(t, p.r - 1.0) ==
            Approx(kappa).epsilon(1e-2 * t / 1e-3 + 1e-6));
    }
  }

  SECTION("r = 1 collapses to the M-Wright density") {
    const FoxHParams unit(1.0, 0.35);
    const MWrightParams mw(0.35);
    for (double t : {0.2, 1.0, 3.0}) {
      CHECK(foxh_residual_density(unit, t) == Approx(m_wright(mw, t)).epsilon(1e-13));
    }
  }

  SECTION("domain error for t <= 0 when the density diverges") {
    const FoxHParams small(0.5, 0.3);
    CHECK_THROWS_AS(foxh_residual_density(small, 0.0), std::domain_error);
    CHECK_THROWS_AS(foxh_residual_density(small, -1.0), std::domain_error);
    CHECK(foxh_residual_density(FoxHParams(2.0, 0.3), 0.0) == 0.0);
  }

  SECTION("fox-h / wright consistency") {
    for (double r : {0.5, 1.0, 2.5}) {
      for (double alpha : {0.3, 0.7}) {
        const FoxHParams q(r, alpha);
        for (double t : {0.1, 0.9, 2.2, 6.0}) {
          const double lhs = foxh_residual_density(q, t);
          const double rhs =
              std::pow(t, r - 1.0) * wright_w(WrightParams(-alpha, r * (1.0 - alpha)), -t);
          CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
        }
      }
    }
  }
}

TEST_CASE("gaussian residual density") {
  SECTION("limit at 0+") {
    for (double alpha : {0.3, 0.5, 0.7}) {
      const double want = std::exp2((alpha + 1.0) / 2.0) * reciprocal_gamma((1.0 - alpha) / 2.0);
      CHECK(gaussian_residual_density(alpha, 0.0) == Approx(want).epsilon(1e-13));
      CHECK(gaussian_residual_density(alpha, 1e-8) == Approx(want).epsilon(1e-6));
    }
  }

  SECTION("normalization for alpha = 0.5") {
    QuadratureConfig qc;
    auto f = [](double t) { return gaussian_residual_density(0.5, t); };
    const auto norm = numeric_mellin(f, {1.0, 0.0}, {0.0, 1e300}, qc, 1.0);
    CHECK(norm.value.real() == Approx(1.0).margin(1e-8));
  }

  SECTION("wright form equals the H-function change-of-variables form") {
    const double alpha = 0.3, t = 1.7;
    const double wright_form = gaussian_residual_density(alpha, t);
    const double arg = std::exp2(alpha - 1.0) * t * t;
    const double h_form = std::exp2(alpha) * t * foxh_residual_density(FoxHParams(0.5, alpha), arg);
    CHECK(std::fabs(wright_form - h_form) < 1e-10);
    CHECK(wright_form == Approx(0.27380640138802693).epsilon(1e-12));
  }
}

TEST_CASE("mittag-leffler functions") {
  CHECK(mittag_leffler(0.3, 0.0) == 1.0);
  CHECK(mittag_leffler(1.0, 2.3) == Approx(std::exp(-2.3)).epsilon(1e-15));
  CHECK(mittag_leffler(0.5, 1.0) == Approx(kEHalfAtOne).epsilon(1e-13));
  // independent erfc oracle: E_{1/2}(-x) = e^{x^2} erfc(x)
  for (double x : {0.3, 1.0, 2.0}) {
    const double want = std::exp(x * x) * std::erfc(x);
    CHECK(mittag_leffler(0.5, x) == Approx(want).epsilon(1e-12));
  }

  CHECK(generalized_mittag_leffler(0.4, 1.7, 0.0) == Approx(reciprocal_gamma(1.7)).epsilon(1e-14));
  CHECK(generalized_mittag_leffler(1.0, 1.0, 0.9) == Approx(std::exp(-0.9)).epsilon(1e-14));
  CHECK(generalized_mittag_leffler(1.0, 2.0, 1.0) ==
        Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));

  SECTION("series and asymptotic zones against oracle") {
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
      for (double mu : {1.0, 0.65, 1.45}) {
        for (double s : {0.1, 1.0, 4.0, 9.0, 25.0, 120.0}) {
          const double want = oracle::mittag_leffler(alpha, mu, s);
          INFO("alpha=" << alpha << " mu=" << mu << " s=" << s);
          CHECK(generalized_mittag_leffler(alpha, mu, s) == Approx(want).margin(5e-9));
        }
      }
    }
  }
}

TEST_CASE("laplace transform pairs by quadrature") {
  QuadratureConfig qc;

  SECTION("M-Wright / Mittag-Leffler") {
    for (double beta : {0.2, 0.5, 0.8}) {
      const MWrightParams p(beta);
      const SeriesConfig tuned = tuned_series_config(p);
      for (double s : {0.5, 1.0, 2.0}) {
        auto f = [&](double t) { return std::exp(-s * t) * m_wright(p, t, tuned); };
        const double lhs = quad::exp_sinh(f, 0.0, qc);
        INFO("beta=" << beta << " s=" << s);
        CHECK(std::fabs(lhs - mittag_leffler(beta, s)) < 1e-8);
      }
    }
  }

  SECTION("Wright / generalized Mittag-Leffler") {
    for (double r : {0.5, 2.5}) {
      for (double alpha : {0.3, 0.7}) {
        const double mu = r * (1.0 - alpha);
        const SeriesConfig tuned = tuned_series_config(alpha, mu);
        for (double s : {0.5, 2.0}) {
          auto f = [&](double t) {
            return std::exp(-s * t) * wright_w(WrightParams(-alpha, mu), -t, tuned);
          };
          const double lhs = quad::exp_sinh(f, 0.0, qc);
          const double rhs = generalized_mittag_leffler(alpha, mu + alpha, s);
          INFO("r=" << r << " alpha=" << alpha << " s=" << s);
          CHECK(std::fabs(lhs - rhs) < 1e-8);
        }
      }
    }
  }

  SECTION("resolvent identity") {
    for (double beta : {0.3, 0.7}) {
      for (double t : {0.5, 2.0}) {
        auto f = [&](double x) {
          return std::exp(-x) * mittag_leffler(beta, std::pow(x, beta) * t);
        };
        const double lhs = quad::exp_sinh(f, 0.0, qc);
        INFO("beta=" << beta << " t=" << t);
        CHECK(std::fabs(lhs - 1.0 / (1.0 + t)) < 1e-7);
      }
    }
  }
}

TEST_CASE("nonnegativity of the density evaluators") {
  rng::DrawStream gen(20240817, 0);
  for (int i = 0; i < 300; ++i) {
    const double beta = 0.05 + 0.9 * gen.next_unit();
    const double t = 5.0 * gen.next_unit();
    CHECK(m_wright(MWrightParams(beta), t) > -1e-12);

    const double r = 0.1 + 2.9 * gen.next_unit();
    CHECK(foxh_residual_density(FoxHParams(r, beta), t + 1e-6) > -1e-12);
    CHECK(gaussian_residual_density(beta, t) > -1e-12);
  }
}

TEST_CASE("series error handling") {
  SeriesConfig tiny;
  tiny.max_terms = 4;
  CHECK_THROWS_AS(m_wright(MWrightParams(0.5), 3.0, tiny), convergence_error);
  CHECK_THROWS_AS(m_wright(MWrightParams(0.5), -1.0), std::domain_error);
  CHECK_THROWS_AS(MWrightParams(0.999), std::invalid_argument);
  CHECK_THROWS_AS(MWrightParams(1.0), std::invalid_argument);
  CHECK_THROWS_AS(MWrightParams(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WrightParams(-1.2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(FoxHParams(-1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mittag_leffler(1.2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generalized_mittag_leffler(0.5, -1.0, 1.0), std::invalid_argument);
}
