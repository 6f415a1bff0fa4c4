#pragma once

// Distribution families of the package: reproducible samplers, pdf and
// numeric cdf evaluation, and tabulated inverse-CDF sampling for the two
// residual families whose laws have no elementary sampling representation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "selfdecomp/errors.hpp"
#include "selfdecomp/quadrature.hpp"
#include "selfdecomp/rng.hpp"
#include "selfdecomp/specfun.hpp"

namespace selfdecomp {

enum class Family {
  Exponential,
  Gamma,
  Weibull,
  OneSidedStable,
  MWright,
  FoxHResidual,
  GaussianResidual,
  HalfNormal,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Exponential: return "exponential";
    case Family::Gamma: return "gamma";
    case Family::Weibull: return "weibull";
    case Family::OneSidedStable: return "stable";
    case Family::MWright: return "mwright";
    case Family::FoxHResidual: return "foxh";
    case Family::GaussianResidual: return "gaussian-residual";
    case Family::HalfNormal: return "half-normal";
  }
  return "?";
}

class DistributionSpec {
 public:
  static DistributionSpec exponential() { return {Family::Exponential, 0.0, 0.0}; }

  static DistributionSpec gamma(double r) {
    require(r > 0.0, "gamma: r must be positive");
    return {Family::Gamma, r, 0.0};
  }

  static DistributionSpec weibull(double k) {
    require(k > 0.0, "weibull: shape k must be positive");
    return {Family::Weibull, k, 0.0};
  }

  static DistributionSpec one_sided_stable(double beta) {
    require(beta > 0.0 && beta < 1.0, "stable: beta must lie in (0,1)");
    require(beta >= 0.05 && beta <= 0.95, "stable: supported beta range is [0.05, 0.95]");
    return {Family::OneSidedStable, beta, 0.0};
  }

  static DistributionSpec m_wright(double beta) {
    MWrightParams check(beta);  // validates
    return {Family::MWright, check.beta, 0.0};
  }

  static DistributionSpec foxh_residual(double r, double alpha) {
    FoxHParams check(r, alpha);  // validates
    return {Family::FoxHResidual, check.r, check.alpha};
  }

  static DistributionSpec gaussian_residual(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "gaussian residual: alpha must lie in (0,1)");
    require(alpha >= 0.05 && alpha <= 0.95, "gaussian residual: supported alpha range is [0.05, 0.95]");
    return {Family::GaussianResidual, alpha, 0.0};
  }

  static DistributionSpec half_normal() { return {Family::HalfNormal, 0.0, 0.0}; }

  Family family() const { return family_; }
  double a() const { return a_; }
  double b() const { return b_; }

  double r() const { return a_; }      // Gamma, FoxHResidual
  double k() const { return a_; }      // Weibull
  double beta() const { return a_; }   // OneSidedStable, MWright
  double alpha() const {               // FoxHResidual, GaussianResidual
    return family_ == Family::FoxHResidual ? b_ : a_;
  }

  std::string name() const {
    char buf[96];
    switch (family_) {
      case Family::Gamma:
      case Family::Weibull:
      case Family::OneSidedStable:
      case Family::MWright:
      case Family::GaussianResidual:
        std::snprintf(buf, sizeof buf, "%s(%.12g)", family_name(family_), a_);
        return buf;
      case Family::FoxHResidual:
        std::snprintf(buf, sizeof buf, "%s(%.12g,%.12g)", family_name(family_), a_, b_);
        return buf;
      default:
        return family_name(family_);
    }
  }

  friend bool operator==(const DistributionSpec& x, const DistributionSpec& y) {
    return x.family_ == y.family_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  DistributionSpec(Family f, double a, double b) : family_(f), a_(a), b_(b) {}
  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  Family family_;
  double a_, b_;
};

// ---------------------------------------------------------------------------
// pdf
// ---------------------------------------------------------------------------

// Analytic head exponent c of the density (pdf ~ kappa x^{c-1} as x -> 0+);
// used by quadrature routines to remove the endpoint singularity.
inline double pdf_head_exponent(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::Gamma: return spec.r();
    case Family::Weibull: return spec.k();
    case Family::FoxHResidual: return spec.r();
    default: return 1.0;
  }
}

inline double pdf(const DistributionSpec& spec, double x) {
  if (!(x >= 0.0)) throw std::domain_error("pdf: support is [0, inf)");
  switch (spec.family()) {
    case Family::Exponential:
      return std::exp(-x);
    case Family::Gamma: {
      const double r = spec.r();
      if (x == 0.0) {
        if (r < 1.0) throw std::domain_error("pdf: gamma density diverges at 0 for r < 1");
        return r == 1.0 ? 1.0 : 0.0;
      }
      return std::exp((r - 1.0) * std::log(x) - x - std::lgamma(r));
    }
    case Family::Weibull: {
      const double k = spec.k();
      if (x == 0.0) {
        if (k < 1.0) throw std::domain_error("pdf: weibull density diverges at 0 for k < 1");
        return k == 1.0 ? 1.0 : 0.0;
      }
      return k * std::exp((k - 1.0) * std::log(x) - std::pow(x, k));
    }
    case Family::OneSidedStable: {
      // S_beta = Y_beta^{-1/beta} with Y_beta M-Wright distributed, hence
      // rho_S(x) = beta x^{-beta-1} M_beta(x^{-beta}).
      if (x == 0.0) return 0.0;
      const double beta = spec.beta();
      const MWrightParams p(beta);
      const double m = m_wright(p, std::pow(x, -beta), tuned_series_config(p));
      if (m == 0.0) return 0.0;  // head underflow beats the algebraic factor
      return beta * std::pow(x, -beta - 1.0) * m;
    }
    case Family::MWright: {
      const MWrightParams p(spec.beta());
      return m_wright(p, x, tuned_series_config(p));
    }
    case Family::FoxHResidual: {
      const FoxHParams p(spec.r(), spec.alpha());
      return foxh_residual_density(p, x, tuned_series_config(p.alpha, p.r * (1.0 - p.alpha)));
    }
    case Family::GaussianResidual: {
      const double a = spec.alpha();
      return gaussian_residual_density(a, x, tuned_series_config(a, (1.0 - a) / 2.0));
    }
    case Family::HalfNormal:
      return std::sqrt(2.0 / detail::kPi) * std::exp(-0.5 * x * x);
  }
  throw std::logic_error("pdf: unhandled family");
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

struct SampleBatch {
  DistributionSpec spec;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<double> values;
};

class InverseCdfTable;  // below
std::shared_ptr<const InverseCdfTable> find_table(const DistributionSpec& spec);

namespace detail_dist {

inline double draw_exponential(rng::DrawStream& s) { return -std::log(s.next_unit()); }

inline double draw_normal(rng::DrawStream& s) {
  const double u1 = s.next_unit();
  const double u2 = s.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * detail::kPi * u2);
}

// Kanter's representation of the one-sided stable law with Laplace transform
// exp(-lambda^beta):
//   S = sin(b phi) sin((1-b)phi)^{(1-b)/b} sin(phi)^{-1/b} E^{-(1-b)/b},
// phi uniform on (0, pi), E unit exponential.
inline double draw_stable(double beta, rng::DrawStream& s) {
  const double phi = detail::kPi * s.next_unit();
  const double e = draw_exponential(s);
  const double q = (1.0 - beta) / beta;
  return std::sin(beta * phi) * std::pow(std::sin((1.0 - beta) * phi), q) *
         std::pow(std::sin(phi), -1.0 / beta) * std::pow(e, -q);
}

// Marsaglia-Tsang squeeze rejection; boosted for r < 1.
inline double draw_gamma(double r, rng::DrawStream& s) {
  if (r < 1.0) {
    const double g = draw_gamma(r + 1.0, s);
    return g * std::pow(s.next_unit(), 1.0 / r);
  }
  const double d = r - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = draw_normal(s);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = s.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double draw_one(const DistributionSpec& spec, rng::DrawStream& s,
                       const InverseCdfTable* table);

}  // namespace detail_dist

// ---------------------------------------------------------------------------
// numeric cdf
// ---------------------------------------------------------------------------

inline double cdf_numeric(const DistributionSpec& spec, double x,
                          const QuadratureConfig& cfg = {}) {
  if (!(x > 0.0)) return 0.0;
  auto f = [&](double t) { return pdf(spec, t); };
  const double c = pdf_head_exponent(spec);
  const double split = std::min(x, cfg.split_point);
  double total = quad::head_integral(f, split, c, cfg);
  if (x > split) total += quad::gauss_kronrod(f, split, x, cfg);
  return total;
}

// ---------------------------------------------------------------------------
// inverse-CDF table
// ---------------------------------------------------------------------------

// Quantile table on a logit-spaced probability grid with analytic head
// extrapolation (cdf ~ kappa t^{c} near 0) and stretched-exponential tail
// extrapolation (log(1-p) linear in t^{b}).
class InverseCdfTable {
 public:
  InverseCdfTable(DistributionSpec spec, std::vector<double> probabilities,
                  std::vector<double> quantiles, double head_exponent, double tail_exponent)
      : spec_(spec),
        probabilities_(std::move(probabilities)),
        quantiles_(std::move(quantiles)),
        head_exponent_(head_exponent),
        tail_exponent_(tail_exponent) {
    if (probabilities_.size() != quantiles_.size() || probabilities_.size() < 8) {
      throw std::invalid_argument("InverseCdfTable: need matching grids with >= 8 nodes");
    }
    lo_ = logit(probabilities_.front());
    hi_ = logit(probabilities_.back());
    step_ = (hi_ - lo_) / static_cast<double>(probabilities_.size() - 1);
    const std::size_t m = quantiles_.size();
    const double qb1 = std::pow(quantiles_[m - 2], tail_exponent_);
    const double qb2 = std::pow(quantiles_[m - 1], tail_exponent_);
    tail_rate_ = (std::log1p(-probabilities_[m - 2]) - std::log1p(-probabilities_[m - 1])) /
                 (qb2 - qb1);
  }

  const DistributionSpec& spec() const { return spec_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<double>& quantiles() const { return quantiles_; }
  double head_exponent() const { return head_exponent_; }
  double tail_exponent() const { return tail_exponent_; }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
    if (p <= probabilities_.front()) {
      // cdf ~ kappa t^{c}:  q(p) = q0 (p/p0)^{1/c}
      return quantiles_.front() * std::pow(p / probabilities_.front(), 1.0 / head_exponent_);
    }
    if (p >= probabilities_.back()) {
      // log(1-p) ~ C - rate * t^{b}
      const double qb = std::pow(quantiles_.back(), tail_exponent_) +
                        (std::log1p(-probabilities_.back()) - std::log1p(-p)) / tail_rate_;
      return std::pow(qb, 1.0 / tail_exponent_);
    }
    const double l = logit(p);
    const double fi = (l - lo_) / step_;
    const std::size_t i = std::min(static_cast<std::size_t>(fi), probabilities_.size() - 2);
    const double w = fi - static_cast<double>(i);
    return quantiles_[i] * (1.0 - w) + quantiles_[i + 1] * w;
  }

 private:
  static double logit(double p) { return std::log(p / (1.0 - p)); }

  DistributionSpec spec_;
  std::vector<double> probabilities_;
  std::vector<double> quantiles_;
  double head_exponent_;
  double tail_exponent_;
  double lo_, hi_, step_, tail_rate_;
};

namespace detail_dist {

// Analytic support bracket [t_lo, t_hi] containing all but ~1e-8 of the mass.
inline void table_support(const DistributionSpec& spec, double& t_lo, double& t_hi,
                          double& head_c, double& tail_b) {
  if (spec.family() == Family::FoxHResidual) {
    const double r = spec.r(), a = spec.alpha();
    head_c = r;
    tail_b = 1.0 / (1.0 - a);
    const double B = (1.0 - a) * std::pow(a, a / (1.0 - a));
    t_hi = std::pow(42.0 / B, 1.0 - a);
    const double kappa = reciprocal_gamma(r * (1.0 - a));  // leading density coefficient
    t_lo = kappa > 0.0 ? std::pow(1e-9 * r / kappa, 1.0 / r) : 1e-9;
  } else if (spec.family() == Family::GaussianResidual) {
    const double a = spec.alpha();
    head_c = 1.0;
    tail_b = 2.0 / (1.0 - a);
    const double B = (1.0 - a) * std::pow(a, a / (1.0 - a));
    t_hi = std::sqrt(std::exp2(1.0 - a) * std::pow(42.0 / B, 1.0 - a));
    const double kappa = std::exp2((a + 1.0) / 2.0) * reciprocal_gamma((1.0 - a) / 2.0);
    t_lo = 1e-9 / kappa;
  } else {
    throw std::invalid_argument("inverse-CDF tables exist only for the residual families");
  }
}

}  // namespace detail_dist

inline InverseCdfTable build_inverse_cdf_table(const DistributionSpec& spec,
                                               std::size_t grid_size = 4096,
                                               const QuadratureConfig& cfg = {}) {
  if (grid_size < 16) throw std::invalid_argument("build_inverse_cdf_table: grid too small");
  double t_lo, t_hi, head_c, tail_b;
  detail_dist::table_support(spec, t_lo, t_hi, head_c, tail_b);

  // cumulative cdf over log-spaced panels
  const std::size_t panels = 2048;
  std::vector<double> ts(panels + 1), cum(panels + 1);
  const double llo = std::log(t_lo), lhi = std::log(t_hi);
  for (std::size_t i = 0; i <= panels; ++i) {
    ts[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / panels);
  }
  auto f = [&](double t) { return pdf(spec, t); };
  QuadratureConfig panel_cfg = cfg;
  panel_cfg.abs_tol = std::min(cfg.abs_tol, 1e-12);
  cum[0] = quad::head_integral(f, ts[0], head_c, panel_cfg);
  for (std::size_t i = 1; i <= panels; ++i) {
    cum[i] = cum[i - 1] + quad::gauss_kronrod(f, ts[i - 1], ts[i], panel_cfg);
  }

  // logit-spaced probability grid
  const double p0 = 1e-6;
  const double l0 = std::log(p0 / (1.0 - p0));
  const double l1 = -l0;
  std::vector<double> ps(grid_size), qs(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double l = l0 + (l1 - l0) * static_cast<double>(j) / static_cast<double>(grid_size - 1);
    ps[j] = 1.0 / (1.0 + std::exp(-l));
  }

  // invert: bracket on the cumulative grid, then Newton with local panels
  std::size_t k = 0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double p = ps[j];
    while (k + 1 <= panels && cum[k + 1] < p) ++k;
    double t, F;
    if (k + 1 > panels) {
      t = ts[panels];
      F = cum[panels];
    } else {
      const double c0 = cum[k], c1 = cum[k + 1];
      const double w = c1 > c0 ? (p - c0) / (c1 - c0) : 0.5;
      t = ts[k] * (1.0 - w) + ts[k + 1] * w;
      F = c0 + quad::gauss_kronrod(f, ts[k], t, panel_cfg);
    }
    for (int it = 0; it < 8; ++it) {
      const double d = pdf(spec, t);
      if (!(d > 0.0)) break;
      double dt = (p - F) / d;
      const double cap = 0.5 * (ts[std::min(k + 1, panels)] - ts[k]) + 1e-12;
      dt = std::clamp(dt, -cap, cap);
      if (t + dt <= 0.0) dt = -0.5 * t;
      F += quad::gauss_kronrod(f, t, t + dt, panel_cfg);
      t += dt;
      if (std::fabs(p - F) < 1e-10) break;
    }
    qs[j] = t;
  }
  return InverseCdfTable(spec, std::move(ps), std::move(qs), head_c, tail_b);
}

// ---------------------------------------------------------------------------
// table cache
// ---------------------------------------------------------------------------

class TableCache {
 public:
  static TableCache& instance() {
    static TableCache cache;
    return cache;
  }

  void put(std::shared_ptr<const InverseCdfTable> table) {
    std::lock_guard<std::mutex> lock(mu_);
    tables_[table->spec().name()] = std::move(table);
  }

  std::shared_ptr<const InverseCdfTable> find(const DistributionSpec& spec) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(spec.name());
    return it == tables_.end() ? nullptr : it->second;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const InverseCdfTable>> tables_;
};

inline std::shared_ptr<const InverseCdfTable> find_table(const DistributionSpec& spec) {
  return TableCache::instance().find(spec);
}

// Build the table if the cache has none, register it, and return it.
inline std::shared_ptr<const InverseCdfTable> ensure_table(const DistributionSpec& spec,
                                                           std::size_t grid_size = 4096,
                                                           const QuadratureConfig& cfg = {}) {
  if (auto t = find_table(spec)) return t;
  auto t = std::make_shared<const InverseCdfTable>(build_inverse_cdf_table(spec, grid_size, cfg));
  TableCache::instance().put(t);
  return t;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

namespace detail_dist {

inline double draw_one(const DistributionSpec& spec, rng::DrawStream& s,
                       const InverseCdfTable* table) {
  switch (spec.family()) {
    case Family::Exponential:
      return draw_exponential(s);
    case Family::Weibull:
      return std::pow(draw_exponential(s), 1.0 / spec.k());
    case Family::Gamma:
      return draw_gamma(spec.r(), s);
    case Family::OneSidedStable:
      return draw_stable(spec.beta(), s);
    case Family::MWright:
      // the residual representation: S_beta^{-beta}
      return std::pow(draw_stable(spec.beta(), s), -spec.beta());
    case Family::HalfNormal: {
      double v = std::fabs(draw_normal(s));
      while (v == 0.0) v = std::fabs(draw_normal(s));
      return v;
    }
    case Family::FoxHResidual:
    case Family::GaussianResidual:
      return table->quantile(s.next_unit());
  }
  throw std::logic_error("draw_one: unhandled family");
}

}  // namespace detail_dist

inline SampleBatch sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::shared_ptr<const InverseCdfTable> table;
  if (spec.family() == Family::FoxHResidual || spec.family() == Family::GaussianResidual) {
    table = find_table(spec);
    if (!table) {
      throw table_error("sample: no inverse-CDF table registered for " + spec.name() +
                        "; build one with build_inverse_cdf_table");
    }
  }
  SampleBatch batch{spec, seed, n, {}};
  batch.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rng::DrawStream s(seed, i);
    batch.values[i] = detail_dist::draw_one(spec, s, table.get());
  }
  return batch;
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

inline void write_values_csv(std::ostream& os, const std::vector<double>& values) {
  os << "value\n";
  char buf[40];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    os << buf;
  }
}

inline std::vector<double> read_values_csv(std::istream& is) {
  std::string line;
  std::vector<double> out;
  if (!std::getline(is, line) || line != "value") {
    throw std::runtime_error("read_values_csv: expected header 'value'");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(std::strtod(line.c_str(), nullptr));
  }
  return out;
}

inline constexpr const char* kTableFormatVersion = "selfdecomp-inverse-cdf-table v1";

inline void write_table_csv(std::ostream& os, const InverseCdfTable& table) {
  char buf[160];
  os << "# " << kTableFormatVersion << "\n";
  const auto& spec = table.spec();
  std::snprintf(buf, sizeof buf, "# family=%s a=%.17g b=%.17g head=%.17g tail=%.17g\n",
                family_name(spec.family()), spec.a(), spec.b(), table.head_exponent(),
                table.tail_exponent());
  os << buf << "p,q\n";
  for (std::size_t i = 0; i < table.probabilities().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", table.probabilities()[i],
                  table.quantiles()[i]);
    os << buf;
  }
}

inline InverseCdfTable read_table_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != std::string("# ") + kTableFormatVersion) {
    throw std::runtime_error("read_table_csv: missing or mismatched version header");
  }
  if (!std::getline(is, line) || line.rfind("# family=", 0) != 0) {
    throw std::runtime_error("read_table_csv: missing parameter header");
  }
  char fam[64];
  double a = 0, b = 0, head = 0, tail = 0;
  if (std::sscanf(line.c_str(), "# family=%63s a=%lg b=%lg head=%lg tail=%lg", fam, &a, &b,
                  &head, &tail) != 5) {
    throw std::runtime_error("read_table_csv: malformed parameter header");
  }
  DistributionSpec spec = std::string(fam) == "foxh" ? DistributionSpec::foxh_residual(a, b)
                                                     : DistributionSpec::gaussian_residual(a);
  if (!std::getline(is, line) || line != "p,q") {
    throw std::runtime_error("read_table_csv: missing column header");
  }
  std::vector<double> ps, qs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    char* end = nullptr;
    const double p = std::strtod(line.c_str(), &end);
    if (!end || *end != ',') throw std::runtime_error("read_table_csv: malformed row");
    const double q = std::strtod(end + 1, nullptr);
    ps.push_back(p);
    qs.push_back(q);
  }
  return InverseCdfTable(spec, std::move(ps), std::move(qs), head, tail);
}

}  // namespace selfdecomp
