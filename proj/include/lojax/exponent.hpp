#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "lojax/charpoly.hpp"
#include "lojax/parallel.hpp"

namespace lojax {

/// Certified upper-bound exponent for |f|^theta <= C ||grad f|| near 0.
struct ExponentCertificate {
  Rational theta;                     // max over j of j / ord_j, exact
  long maximizing_j = 0;
  std::vector<OrderEstimate> orders;  // j = 1..mu
  long mu = 0;
  bool bound_ok = false;              // ord_j >= j+1 for every j with a_j != 0
  CharPolyMethod method = CharPolyMethod::exact;
};

/// theta = max_{j : a_j != 0} j / ord_0 a_j as an exact rational.
/// Identically-zero coefficients (INFINITE order) are excluded from the max.
inline ExponentCertificate gradient_exponent(const CharPoly& P) {
  ExponentCertificate cert;
  cert.mu = P.mu;
  cert.method = P.method;
  cert.orders = coefficient_orders(P);
  bool any = false;
  for (const auto& est : cert.orders) {
    if (est.infinite()) continue;
    if (!est.stable)
      throw FitUnstableError("order fit for a_" + std::to_string(est.j) +
                             " failed the integer guard (slope " + std::to_string(est.slope) +
                             ")");
    if (*est.value < 1) throw Error("internal: coefficient order below 1");
    Rational candidate(est.j, *est.value);
    if (!any || candidate > cert.theta) {
      cert.theta = candidate;
      cert.maximizing_j = est.j;
      any = true;
    }
  }
  if (!any)
    throw Error("internal: every coefficient vanished identically (impossible for mu >= 1)");
  cert.bound_ok = true;
  for (const auto& est : cert.orders)
    if (!est.infinite() && *est.value < est.j + 1) cert.bound_ok = false;
  return cert;
}

struct OrderBoundReport {
  bool ok = false;                     // ord_j >= j+1 for all j with a_j != 0
  std::vector<OrderEstimate> orders;
  bool initial_form_checked = false;   // exact path only
  bool initial_form_is_t_mu = false;
};

/// ord_0 a_j >= j+1 for every nonzero coefficient; on the exact path this is
/// cross-checked against in P = t^mu and the two answers must agree.
inline OrderBoundReport check_order_bound(const CharPoly& P) {
  OrderBoundReport rep;
  rep.orders = coefficient_orders(P);
  rep.ok = true;
  for (const auto& est : rep.orders) {
    if (est.infinite()) continue;
    if (!est.stable)
      throw FitUnstableError("order fit for a_" + std::to_string(est.j) + " is unstable");
    if (*est.value < est.j + 1) rep.ok = false;
  }
  if (P.is_exact()) {
    rep.initial_form_checked = true;
    Polynomial in_p = P.eliminant.initial_form();
    Monomial t_mu(P.eliminant.nvars());
    t_mu[P.eliminant.nvars() - 1] = static_cast<int>(P.mu);
    rep.initial_form_is_t_mu =
        in_p.term_count() == 1 && in_p.coefficient(t_mu) == GaussianRational(1);
    if (rep.initial_form_is_t_mu != rep.ok)
      throw Error("internal: initial-form and order-bound checks disagree");
  }
  return rep;
}

struct VietaReport {
  double max_ratio = 0.0;  // |f(z)| / (2 max_j |a_j(g(z))|^{1/j}), sup over samples
  long samples_used = 0;
  long samples_skipped = 0;
  bool ok = false;  // max_ratio <= 1 + 1e-9
};

/// Root bound from the monic factorization: |f(z)| <= 2 max_j |a_j(g(z))|^{1/j}.
inline VietaReport vieta_bound_check(const CharPoly& P, long n_samples, double sample_radius,
                                     std::uint64_t seed, const FibreConfig& cfg = {}) {
  VietaReport rep;
  const std::size_t m = P.f.nvars();
  for (long s = 0; s < n_samples; ++s) {
    Rng rng(derive_seed(seed, 0x71E7A, static_cast<std::uint64_t>(s)));
    ComplexPoint z = rng.polydisc(m, sample_radius);
    ComplexPoint w(P.g.size());
    for (std::size_t i = 0; i < P.g.size(); ++i) w[i] = P.g[i].evaluate(z);
    auto coeffs = coefficient_values_at(P, w, cfg, derive_seed(seed, 0x71E7B, static_cast<std::uint64_t>(s)));
    if (!coeffs) {
      ++rep.samples_skipped;
      continue;
    }
    double bound = 0.0;
    for (std::size_t j = 0; j < coeffs->size(); ++j)
      bound = std::max(bound, std::pow(std::abs((*coeffs)[j]), 1.0 / static_cast<double>(j + 1)));
    double fz = std::abs(P.f.evaluate(z));
    double ratio;
    if (bound > 0.0)
      ratio = fz / (2.0 * bound);
    else
      ratio = fz <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.samples_used;
  }
  rep.ok = rep.samples_used > 0 && rep.max_ratio <= 1.0 + 1e-9;
  return rep;
}

enum class ShellVerdict { BOUNDED, DIVERGENT, INCONCLUSIVE };

inline const char* to_string(ShellVerdict v) {
  switch (v) {
    case ShellVerdict::BOUNDED: return "BOUNDED";
    case ShellVerdict::DIVERGENT: return "DIVERGENT";
    case ShellVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

struct ShellConfig {
  int shells = 8;
  double radius_start = 0.1;
  double radius_ratio = 0.5;
  int samples_per_shell = 500;
  std::uint64_t seed = 0x4C4F4A4158ULL;
  int jobs = 1;
};

struct ShellReport {
  std::vector<double> radii;
  std::vector<double> sup_q;            // per-shell sup of |f|^theta / ||grad f||
  std::vector<ComplexPoint> argmax;     // per-shell maximizer
  std::vector<double> max_abs_f;        // per-shell max |f| (one-sidedness needs < 1)
  int samples_per_shell = 0;
  double constant = 0.0;                // C = max over shells
  int constant_shell = 0;               // shell index attaining C
  ShellVerdict verdict = ShellVerdict::INCONCLUSIVE;
  bool f_below_one = false;
};

namespace detail {

inline ShellVerdict shell_verdict(const std::vector<double>& sup) {
  if (sup.size() < 3) return ShellVerdict::INCONCLUSIVE;
  double a = sup[sup.size() - 3], b = sup[sup.size() - 2], c = sup[sup.size() - 1];
  double lo = std::min({a, b, c}), hi = std::max({a, b, c});
  if (a < b && b < c && c >= 2.0 * a) return ShellVerdict::DIVERGENT;
  if (lo > 0.0 && hi <= 1.15 * lo) return ShellVerdict::BOUNDED;
  if (a >= b && b >= c) return ShellVerdict::BOUNDED;
  return ShellVerdict::INCONCLUSIVE;
}

}  // namespace detail

/// Samples |f|^theta / ||grad f|| on shrinking spherical shells. The same
/// deterministic direction set is reused on every shell so shell sups are
/// directly comparable. Points where the gradient vanishes to double
/// precision are skipped.
inline ShellReport empirical_verify(const Germ& f, double theta, const ShellConfig& cfg = {}) {
  if (!(theta > 0.0 && theta < 1.0))
    throw PreconditionError("empirical verification requires 0 < theta < 1");
  const std::size_t m = f.poly().nvars();
  std::vector<Polynomial> grad = gradient(f.poly());
  std::vector<ComplexPoint> dirs(static_cast<std::size_t>(cfg.samples_per_shell));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    Rng rng(derive_seed(cfg.seed, 0x5E11, i));
    dirs[i] = rng.sphere_direction(m);
  }
  ShellReport rep;
  rep.samples_per_shell = cfg.samples_per_shell;
  double r = cfg.radius_start;
  for (int shell = 0; shell < cfg.shells; ++shell, r *= cfg.radius_ratio) {
    std::vector<double> q_of(dirs.size(), -1.0);
    std::vector<double> f_of(dirs.size(), 0.0);
    parallel_chunks(dirs.size(), cfg.jobs, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t d = lo; d < hi; ++d) {
        ComplexPoint z(m);
        for (std::size_t i = 0; i < m; ++i) z[i] = r * dirs[d][i];
        double gn2 = 0.0;
        for (const auto& gi : grad) gn2 += std::norm(gi.evaluate(z));
        double gn = std::sqrt(gn2);
        f_of[d] = std::abs(f.poly().evaluate(z));
        if (gn > 1e-300) q_of[d] = std::pow(f_of[d], theta) / gn;
      }
    });
    double sup = 0.0, fmax = 0.0;
    std::size_t best_idx = 0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      fmax = std::max(fmax, f_of[d]);
      if (q_of[d] > sup) {
        sup = q_of[d];
        best_idx = d;
      }
    }
    ComplexPoint best(m);
    for (std::size_t i = 0; i < m; ++i) best[i] = r * dirs[best_idx][i];
    rep.radii.push_back(r);
    rep.sup_q.push_back(sup);
    rep.argmax.push_back(best);
    rep.max_abs_f.push_back(fmax);
  }
  rep.verdict = detail::shell_verdict(rep.sup_q);
  for (std::size_t i = 0; i < rep.sup_q.size(); ++i)
    if (rep.sup_q[i] > rep.constant) {
      rep.constant = rep.sup_q[i];
      rep.constant_shell = static_cast<int>(i);
    }
  rep.f_below_one = true;
  for (double v : rep.max_abs_f)
    if (v >= 1.0) rep.f_below_one = false;
  return rep;
}

inline ShellReport empirical_verify(const Germ& f, const Rational& theta,
                                    const ShellConfig& cfg = {}) {
  return empirical_verify(f, to_double(theta), cfg);
}

}  // namespace lojax
