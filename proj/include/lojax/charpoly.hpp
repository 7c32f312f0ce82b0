#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lojax/fibres.hpp"
#include "lojax/milnor.hpp"

namespace lojax {

enum class CharPolyMethod { exact, numeric };

/// Per-ray sampled coefficient tables for the numeric path.
struct RaySamples {
  ComplexPoint direction;                       // unit sphere direction in w-space
  std::vector<double> radii;                    // decreasing
  std::vector<bool> usable;                     // fibre complete at that radius
  std::vector<std::vector<Cplx>> coeff_values;  // [radius][j-1] = a_j(radius * direction)
  std::vector<int> lost_paths;

  std::size_t usable_count() const {
    std::size_t n = 0;
    for (bool u : usable) n += u ? 1 : 0;
    return n;
  }
};

/// Monic degree-mu polynomial in t whose roots over w are the f-values on the
/// fibre of g. Exact coefficients are polynomials in w; numeric ones are
/// per-ray sample tables.
struct CharPoly {
  long mu = 0;
  CharPolyMethod method = CharPolyMethod::exact;

  // exact path
  Polynomial eliminant;                  // context (w..., t), monic in t
  std::vector<Polynomial> exact_coeffs;  // a_1..a_mu over the w context
  std::vector<std::string> w_vars;
  std::string t_var;

  // numeric path
  std::vector<RaySamples> rays;

  // source germ and map (z context)
  Polynomial f;
  std::vector<Polynomial> g;

  bool is_exact() const { return method == CharPolyMethod::exact; }
};

struct OrderEstimate {
  int j = 0;
  std::optional<long> value;  // nullopt = INFINITE (coefficient identically zero)
  enum class Method { exact, fitted } method = Method::exact;
  double slope = 0.0;             // raw minimal slope over rays (fitted only)
  double max_fit_residual = 0.0;  // worst per-ray least-squares residual
  bool stable = true;             // |slope - nearest integer| < 0.1

  bool infinite() const { return !value.has_value(); }
};

namespace detail {

/// Embeds a polynomial into a larger context, matching variables by name.
inline Polynomial embed(const Polynomial& p, const std::vector<std::string>& target) {
  std::vector<std::size_t> at(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    auto it = std::find(target.begin(), target.end(), p.vars()[i]);
    if (it == target.end()) throw Error("embed: variable '" + p.vars()[i] + "' missing");
    at[i] = static_cast<std::size_t>(it - target.begin());
  }
  Polynomial r(target);
  for (const auto& [m, c] : p.terms()) {
    Monomial rm(target.size());
    for (std::size_t i = 0; i < p.nvars(); ++i) rm[at[i]] = m[i];
    r.add_term(rm, c);
  }
  return r;
}

inline std::string fresh_name(std::string base, const std::vector<std::string>& taken) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
  return base;
}

/// Target coordinate names for the w-block and the t variable, avoiding the
/// source variables.
inline std::pair<std::vector<std::string>, std::string> target_names(
    const std::vector<std::string>& src, std::size_t m) {
  std::vector<std::string> w;
  std::vector<std::string> taken = src;
  for (std::size_t i = 0; i < m; ++i) {
    std::string base = m == 1 ? "w" : "w" + std::to_string(i + 1);
    std::string name = fresh_name(base, taken);
    taken.push_back(name);
    w.push_back(name);
  }
  std::string t = fresh_name("t", taken);
  return {w, t};
}

/// Monic coefficients of prod_i (T - roots[i]): returns c_1..c_n with
/// prod (T - v_i) = T^n + c_1 T^{n-1} + ... + c_n.
inline std::vector<Cplx> coeffs_from_roots(const std::vector<Cplx>& roots) {
  std::vector<Cplx> c(roots.size() + 1, Cplx(0.0, 0.0));
  c[0] = Cplx(1.0, 0.0);
  for (std::size_t k = 0; k < roots.size(); ++k)
    for (std::size_t j = k + 1; j-- > 0;) c[j + 1] -= roots[k] * c[j];
  return {c.begin() + 1, c.end()};
}

}  // namespace detail

/// The gradient as a polynomial map (the default g of the construction).
inline PolyMap jacobian_map(const Germ& f) { return PolyMap(gradient(f.poly())); }

/// Local multiplicity of the map germ g at the origin (its covering number);
/// equals the Milnor number when g is a gradient.
inline std::optional<long> local_multiplicity(const std::vector<Polynomial>& g,
                                              const BasisOptions& opts = {}) {
  return quotient_dimension(local_standard_basis(g, opts));
}

/// Global count of g = w solutions with multiplicity (finite iff the variety
/// of <g> is finite); used to gate the exact elimination path.
inline std::optional<long> global_multiplicity(const std::vector<Polynomial>& g,
                                               const BasisOptions& opts = {}) {
  return quotient_dimension(groebner(g, MonomialOrder::global(), opts));
}

struct Eliminant {
  Polynomial P;  // context (w..., t), monic in t
  long t_degree = 0;
  std::vector<std::string> w_vars;
  std::string t_var;
};

/// Eliminates z from <g_1 - w_1, ..., g_m - w_m, t - f> and normalizes the
/// single generator monic in t. This is the characteristic polynomial of the
/// *global* covering of g; it coincides with the germ-level one exactly when
/// g has no zeros away from the origin.
inline Eliminant compute_eliminant(const Polynomial& f, const std::vector<Polynomial>& g,
                                   const BasisOptions& opts = {}) {
  const auto& zv = f.vars();
  const std::size_t m = zv.size();
  if (g.size() != m) throw Error("characteristic polynomial requires a square map");
  auto [wv, tname] = detail::target_names(zv, m);
  std::vector<std::string> all = zv;
  all.insert(all.end(), wv.begin(), wv.end());
  all.push_back(tname);

  std::vector<Polynomial> gens;
  for (std::size_t i = 0; i < m; ++i) {
    Polynomial gi = detail::embed(g[i], all);
    auto at = std::find(all.begin(), all.end(), wv[i]);
    gi -= Polynomial::variable(all, static_cast<std::size_t>(at - all.begin()));
    gens.push_back(std::move(gi));
  }
  Polynomial tf = Polynomial::variable(all, all.size() - 1) - detail::embed(f, all);
  gens.push_back(std::move(tf));

  std::vector<Polynomial> el = eliminate(gens, m, opts);
  if (el.size() != 1)
    throw GlobalLocalMismatchError(-1, -1,
                                   "elimination ideal is not principal (" +
                                       std::to_string(el.size()) + " generators)");
  Polynomial E = el[0];
  const std::size_t t_idx = wv.size();  // context of E is (w..., t)
  long dt = 0;
  for (const auto& [mo, c] : E.terms()) dt = std::max<long>(dt, mo[t_idx]);
  // Leading t-coefficient must be a nonzero constant for a monic normal form.
  Polynomial lead(E.vars());
  for (const auto& [mo, c] : E.terms())
    if (mo[t_idx] == dt) lead.add_term(mo, c);
  Monomial pure_t(E.vars().size());
  pure_t[t_idx] = static_cast<int>(dt);
  if (lead.term_count() != 1 || lead.coefficient(pure_t).is_zero())
    throw GlobalLocalMismatchError(dt, -1, "eliminant is not monic in t up to a constant");
  E = (GaussianRational(1) / lead.coefficient(pure_t)) * E;
  return Eliminant{std::move(E), dt, wv, tname};
}

namespace detail {

inline std::vector<Polynomial> extract_coeffs(const Eliminant& el, long mu) {
  std::vector<Polynomial> coeffs;
  const std::size_t t_idx = el.w_vars.size();
  for (long j = 1; j <= mu; ++j) {
    Polynomial aj(el.w_vars);
    for (const auto& [mo, c] : el.P.terms()) {
      if (mo[t_idx] != mu - j) continue;
      Monomial wm(el.w_vars.size());
      for (std::size_t i = 0; i < el.w_vars.size(); ++i) wm[i] = mo[i];
      aj.add_term(wm, c);
    }
    coeffs.push_back(std::move(aj));
  }
  return coeffs;
}

inline bool annihilation_identity_holds(const Eliminant& el, const Polynomial& f,
                                        const std::vector<Polynomial>& g) {
  std::map<std::string, Polynomial> bind;
  for (std::size_t i = 0; i < g.size(); ++i) bind.emplace(el.w_vars[i], g[i]);
  bind.emplace(el.t_var, f);
  return el.P.substitute(f.vars(), bind).is_zero();
}

}  // namespace detail

/// Exact characteristic polynomial of f with respect to g (default: the
/// gradient). Requires the global zero set of <g> to be the origin alone,
/// checked as global multiplicity == local multiplicity; otherwise throws
/// GlobalLocalMismatchError and the caller falls back to the numeric path.
inline CharPoly charpoly_exact(const Germ& f, const std::vector<Polynomial>& g,
                               const BasisOptions& opts = {}) {
  std::optional<long> mu_local = local_multiplicity(g, opts);
  if (!mu_local || *mu_local < 1)
    throw PreconditionError("characteristic polynomial: g must have an isolated zero at 0");
  std::optional<long> mu_global = global_multiplicity(g, opts);
  if (!mu_global || *mu_global != *mu_local)
    throw GlobalLocalMismatchError(mu_global ? *mu_global : -1, *mu_local,
                                   "g vanishes away from the origin; exact path refused");
  Eliminant el = compute_eliminant(f.poly(), g, opts);
  if (el.t_degree != *mu_local)
    throw GlobalLocalMismatchError(el.t_degree, *mu_local,
                                   "eliminant degree in t differs from the multiplicity");
  if (!detail::annihilation_identity_holds(el, f.poly(), g))
    throw Error("internal: exact characteristic polynomial fails P(g, f) = 0");

  CharPoly P;
  P.mu = *mu_local;
  P.method = CharPolyMethod::exact;
  P.exact_coeffs = detail::extract_coeffs(el, P.mu);
  for (const auto& aj : P.exact_coeffs)
    if (!aj.constant_term().is_zero()) throw Error("internal: a_j(0) != 0 on the exact path");
  P.eliminant = std::move(el.P);
  P.w_vars = std::move(el.w_vars);
  P.t_var = std::move(el.t_var);
  P.f = f.poly();
  P.g = g;
  return P;
}

inline CharPoly charpoly_exact(const Germ& f, const BasisOptions& opts = {}) {
  return charpoly_exact(f, gradient(f.poly()), opts);
}

struct RayConfig {
  int random_rays = 3;
  int coordinate_rays = 2;
  int radii_count = 8;
  double radius_start = 0.1;
  double radius_ratio = 0.5;
};

inline std::vector<double> make_radii(const RayConfig& rc) {
  std::vector<double> radii(static_cast<std::size_t>(rc.radii_count));
  double r = rc.radius_start;
  for (auto& s : radii) {
    s = r;
    r *= rc.radius_ratio;
  }
  return radii;
}

inline std::vector<ComplexPoint> make_rays(std::size_t m, const RayConfig& rc,
                                           std::uint64_t seed) {
  std::vector<ComplexPoint> rays;
  for (int i = 0; i < rc.coordinate_rays; ++i) {
    ComplexPoint e(m, Cplx(0.0, 0.0));
    if (m == 1)
      e[0] = i == 0 ? Cplx(1.0, 0.0) : Cplx(0.0, 1.0);
    else if (static_cast<std::size_t>(i) < m)
      e[static_cast<std::size_t>(i)] = Cplx(1.0, 0.0);
    else
      continue;
    rays.push_back(std::move(e));
  }
  for (int i = 0; i < rc.random_rays; ++i) {
    Rng rng(derive_seed(seed, 0xA11, static_cast<std::uint64_t>(i)));
    rays.push_back(rng.sphere_direction(m));
  }
  return rays;
}

/// Numeric characteristic polynomial: per ray and radius the fibre of g is
/// tracked inward and a_j(w) is read off as the monic-coefficient of the
/// f-values over the fibre. Incomplete fibres are recorded and excluded.
inline CharPoly charpoly_numeric(const Germ& f, const std::vector<Polynomial>& g, long mu,
                                 const std::vector<ComplexPoint>& rays,
                                 const std::vector<double>& radii, const FibreConfig& cfg) {
  if (mu < 1) throw PreconditionError("characteristic polynomial requires mu >= 1");
  PolyMap gmap(g);
  CharPoly P;
  P.mu = mu;
  P.method = CharPolyMethod::numeric;
  P.f = f.poly();
  P.g = g;
  std::size_t best_usable = 0;
  for (std::size_t r = 0; r < rays.size(); ++r) {
    std::vector<Fibre> fibres = track_ray(gmap, rays[r], radii, mu, cfg, r);
    RaySamples rs;
    rs.direction = rays[r];
    rs.radii = radii;
    for (const auto& fib : fibres) {
      rs.usable.push_back(fib.complete);
      rs.lost_paths.push_back(fib.lost_paths);
      if (fib.complete) {
        std::vector<Cplx> values;
        values.reserve(fib.points.size());
        for (const auto& z : fib.points) values.push_back(f.poly().evaluate(z));
        rs.coeff_values.push_back(detail::coeffs_from_roots(values));
      } else {
        rs.coeff_values.emplace_back();
      }
    }
    best_usable = std::max(best_usable, rs.usable_count());
    P.rays.push_back(std::move(rs));
  }
  if (best_usable < 4)
    throw TooFewSamplesError("fewer than 4 usable radii on every ray");
  return P;
}

inline CharPoly charpoly_numeric(const Germ& f, const std::vector<Polynomial>& g, long mu,
                                 const FibreConfig& cfg, const RayConfig& rc = {}) {
  return charpoly_numeric(f, g, mu, make_rays(f.poly().nvars(), rc, cfg.seed), make_radii(rc),
                          cfg);
}

/// Order of vanishing of the j-th coefficient (1-based). Exact coefficients
/// use ord directly; sampled ones use the minimum over rays of the
/// least-squares slope of log|a_j| against log s, with an integer guard.
inline OrderEstimate ord_of_coefficient(const CharPoly& P, int j) {
  if (j < 1 || j > P.mu) throw Error("coefficient index out of range");
  OrderEstimate est;
  est.j = j;
  if (P.is_exact()) {
    est.method = OrderEstimate::Method::exact;
    auto o = P.exact_coeffs[static_cast<std::size_t>(j - 1)].ord_zero();
    if (o) est.value = *o;
    return est;
  }
  est.method = OrderEstimate::Method::fitted;
  constexpr double kZeroFloor = 1e-13;
  int rays_with_enough = 0;
  bool have_slope = false;
  double min_slope = 0.0, min_res = 0.0;
  for (const auto& ray : P.rays) {
    std::vector<double> xs, ys;
    bool all_below_floor = true;
    for (std::size_t k = 0; k < ray.radii.size(); ++k) {
      if (!ray.usable[k]) continue;
      double a = std::abs(ray.coeff_values[k][static_cast<std::size_t>(j - 1)]);
      if (a >= kZeroFloor) all_below_floor = false;
      if (a > 0.0) {
        xs.push_back(std::log(ray.radii[k]));
        ys.push_back(std::log(a));
      }
    }
    if (ray.usable_count() >= 4) ++rays_with_enough;
    if (all_below_floor || xs.size() < 4) continue;  // identically-zero or starved ray
    // Fit the asymptotic regime: the four smallest usable radii. Larger radii
    // carry higher-order contamination that biases the slope.
    if (xs.size() > 4) {
      xs.erase(xs.begin(), xs.end() - 4);
      ys.erase(ys.begin(), ys.end() - 4);
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    double res = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
      res = std::max(res, std::abs(ys[k] - slope * xs[k] - icpt));
    if (!have_slope || slope < min_slope) {
      min_slope = slope;
      min_res = res;
      have_slope = true;
    }
  }
  if (rays_with_enough < 3)
    throw TooFewSamplesError("order fit needs >= 4 usable radii on >= 3 rays");
  if (!have_slope) {
    est.value = std::nullopt;  // a_j == 0 along every ray
    return est;
  }
  est.slope = min_slope;
  est.max_fit_residual = min_res;
  long rounded = std::lround(min_slope);
  est.stable = std::abs(min_slope - static_cast<double>(rounded)) < 0.1 && rounded >= 1;
  est.value = rounded;
  return est;
}

inline std::vector<OrderEstimate> coefficient_orders(const CharPoly& P) {
  std::vector<OrderEstimate> out;
  for (int j = 1; j <= P.mu; ++j) out.push_back(ord_of_coefficient(P, j));
  return out;
}

/// Values (a_1(w), ..., a_mu(w)) at a numeric point of the target space.
/// Exact coefficients evaluate directly; sampled ones solve the fibre at w
/// and rebuild the symmetric functions (nullopt if that fibre is incomplete).
inline std::optional<std::vector<Cplx>> coefficient_values_at(const CharPoly& P,
                                                              const ComplexPoint& w,
                                                              const FibreConfig& cfg,
                                                              std::uint64_t stream = 0) {
  if (P.is_exact()) {
    std::vector<Cplx> vals;
    vals.reserve(P.exact_coeffs.size());
    for (const auto& aj : P.exact_coeffs) vals.push_back(aj.evaluate(w));
    return vals;
  }
  PolyMap gmap(P.g);
  Fibre fib = solve_fibre(gmap, w, P.mu, cfg, stream);
  if (!fib.complete) return std::nullopt;
  std::vector<Cplx> values;
  values.reserve(fib.points.size());
  for (const auto& z : fib.points) values.push_back(P.f.evaluate(z));
  return detail::coeffs_from_roots(values);
}

struct AnnihilationReport {
  bool exact_path = false;
  bool identity_zero = false;   // exact path: expanded polynomial is zero
  double max_residual = 0.0;    // numeric path
  double tolerance = 0.0;
  long samples_used = 0;
  long samples_skipped = 0;
  bool ok = false;
};

/// Checks P(g(z), f(z)) = 0: as an exact polynomial identity on the exact
/// path, or as a residual bound over sample points on the numeric path.
inline AnnihilationReport verify_annihilation(const CharPoly& P,
                                              const std::vector<ComplexPoint>& samples = {},
                                              const FibreConfig& cfg = {}) {
  AnnihilationReport rep;
  if (P.is_exact()) {
    rep.exact_path = true;
    Eliminant el{P.eliminant, P.mu, P.w_vars, P.t_var};
    rep.identity_zero = detail::annihilation_identity_holds(el, P.f, P.g);
    rep.ok = rep.identity_zero;
    return rep;
  }
  if (samples.empty()) throw Error("numeric annihilation check needs sample points");
  PolyMap gmap(P.g);
  double max_f = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    ComplexPoint w = gmap.evaluate(samples[s]);
    Fibre fib = solve_fibre(gmap, w, P.mu, cfg, derive_seed(cfg.seed, 0xA22, s));
    if (!fib.complete) {
      ++rep.samples_skipped;
      continue;
    }
    Cplx fz = P.f.evaluate(samples[s]);
    Cplx prod(1.0, 0.0);
    for (const auto& z : fib.points) prod *= fz - P.f.evaluate(z);
    rep.max_residual = std::max(rep.max_residual, std::abs(prod));
    max_f = std::max(max_f, std::abs(fz));
    ++rep.samples_used;
  }
  rep.tolerance = 1e-8 * (1.0 + std::pow(max_f, static_cast<double>(P.mu)));
  rep.ok = rep.samples_used > 0 && rep.max_residual <= rep.tolerance;
  return rep;
}

}  // namespace lojax
