#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lojax/exponent.hpp"

namespace lojax {

/// Holomorphic unfolding f(x, t) with an m-variable x-block and a k-variable
/// t-block. The identity f(0, t) = 0 is enforced exactly at construction.
class Unfolding {
public:
  Unfolding(Polynomial f, std::size_t m, std::size_t k) : f_(std::move(f)), m_(m), k_(k) {
    if (f_.nvars() != m_ + k_) throw Error("unfolding: context size must be m + k");
    if (m_ == 0) throw Error("unfolding: x-block must be nonempty");
    std::map<std::string, GaussianRational> zero_x;
    for (std::size_t i = 0; i < m_; ++i) zero_x.emplace(f_.vars()[i], GaussianRational(0));
    Polynomial f0t = f_.substitute(zero_x);
    if (!f0t.is_zero())
      throw PreconditionError("unfolding requires f(0,t) = 0 identically; got f(0,t) = " +
                              f0t.str());
  }

  const Polynomial& poly() const { return f_; }
  std::size_t m() const { return m_; }
  std::size_t k() const { return k_; }

  std::vector<std::string> x_vars() const {
    return {f_.vars().begin(), f_.vars().begin() + static_cast<std::ptrdiff_t>(m_)};
  }
  std::vector<std::string> t_vars() const {
    return {f_.vars().begin() + static_cast<std::ptrdiff_t>(m_), f_.vars().end()};
  }

  /// Partial gradient with respect to the x-block, in the full (x,t) context.
  std::vector<Polynomial> x_gradient() const { return gradient(f_, x_vars()); }

  /// The slice germ f_t0 in the x-variables (exact substitution).
  Germ slice(const std::vector<GaussianRational>& t0) const {
    if (t0.size() != k_) throw Error("slice: expected " + std::to_string(k_) + " coordinates");
    std::map<std::string, GaussianRational> bind;
    auto tv = t_vars();
    for (std::size_t l = 0; l < k_; ++l) bind.emplace(tv[l], t0[l]);
    return Germ(f_.substitute(bind));
  }

  Germ centre_slice() const { return slice(std::vector<GaussianRational>(k_)); }

  long mu0(const BasisOptions& opts = {}) const {
    if (!mu0_) mu0_ = milnor_number(centre_slice(), opts);
    return *mu0_;
  }

private:
  Polynomial f_;
  std::size_t m_, k_;
  mutable std::optional<long> mu0_;
};

/// G(x,t) = (df/dx_1, ..., df/dx_m, t_1, ..., t_k) as a square map on m+k
/// variables.
inline PolyMap build_G(const Unfolding& u) {
  std::vector<Polynomial> comps = u.x_gradient();
  for (std::size_t l = 0; l < u.k(); ++l)
    comps.push_back(Polynomial::variable(u.poly().vars(), u.m() + l));
  return PolyMap(std::move(comps));
}

/// Multiplicity of G at the origin; must equal mu0 (the coverings of the
/// slices are all mu0-sheeted).
inline long mu_of_G(const Unfolding& u, const BasisOptions& opts = {}) {
  std::optional<long> dim = quotient_dimension(local_standard_basis(build_G(u).components(), opts));
  if (!dim) throw NotIsolatedError("G does not have an isolated zero at the origin");
  if (*dim != u.mu0(opts))
    throw PreconditionError("multiplicity of G (" + std::to_string(*dim) +
                            ") differs from mu0 (" + std::to_string(u.mu0(opts)) + ")");
  return *dim;
}

using GridPoint = std::vector<GaussianRational>;

/// Deterministic default parameter grid: k-fold product of
/// {0, 1/8, -1/8, 1/4, -1/4, i/8}, smallest norms first, at most 25 points.
inline std::vector<GridPoint> default_grid(std::size_t k, std::size_t max_points = 25) {
  std::vector<GaussianRational> base = {
      GaussianRational(0),
      GaussianRational(Rational(1, 8)),
      GaussianRational(Rational(-1, 8)),
      GaussianRational(Rational(1, 4)),
      GaussianRational(Rational(-1, 4)),
      GaussianRational(Rational(0), Rational(1, 8)),
  };
  std::vector<GridPoint> grid;
  std::vector<std::size_t> idx(k, 0);
  for (;;) {
    GridPoint p;
    for (std::size_t l = 0; l < k; ++l) p.push_back(base[idx[l]]);
    grid.push_back(std::move(p));
    std::size_t l = 0;
    while (l < k && ++idx[l] == base.size()) idx[l++] = 0;
    if (l == k) break;
  }
  std::stable_sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) {
    Rational na(0), nb(0);
    for (const auto& c : a) na += c.norm2();
    for (const auto& c : b) nb += c.norm2();
    return na < nb;
  });
  if (grid.size() > max_points) grid.resize(max_points);
  return grid;
}

enum class Constancy { CONSTANT_ON_GRID, NON_CONSTANT, ERROR };

inline const char* to_string(Constancy c) {
  switch (c) {
    case Constancy::CONSTANT_ON_GRID: return "CONSTANT_ON_GRID";
    case Constancy::NON_CONSTANT: return "NON_CONSTANT";
    case Constancy::ERROR: return "ERROR";
  }
  return "?";
}

struct GridMuTable {
  std::vector<GridPoint> grid;
  std::vector<std::optional<long>> mu_t;  // nullopt = NOT_ISOLATED at that point
  Constancy verdict = Constancy::ERROR;
};

/// mu_t per grid point by exact slicing; CONSTANT_ON_GRID iff all equal mu0.
inline GridMuTable mu_constancy_grid(const Unfolding& u, const std::vector<GridPoint>& grid,
                                     const BasisOptions& opts = {}) {
  GridMuTable table;
  table.grid = grid;
  long mu0 = u.mu0(opts);
  bool any_error = false, all_equal = true;
  for (const auto& t0 : grid) {
    std::optional<long> mu = milnor_number_opt(u.slice(t0), opts);
    if (!mu) any_error = true;
    else if (*mu != mu0) all_equal = false;
    table.mu_t.push_back(mu);
  }
  table.verdict = any_error ? Constancy::ERROR
                            : (all_equal ? Constancy::CONSTANT_ON_GRID : Constancy::NON_CONSTANT);
  return table;
}

enum class SymbolicVerdict { PROVED, REFUTED, UNDECIDED };

inline const char* to_string(SymbolicVerdict v) {
  switch (v) {
    case SymbolicVerdict::PROVED: return "PROVED";
    case SymbolicVerdict::REFUTED: return "REFUTED";
    case SymbolicVerdict::UNDECIDED: return "UNDECIDED";
  }
  return "?";
}

struct SymbolicConstancy {
  SymbolicVerdict verdict = SymbolicVerdict::UNDECIDED;
  std::vector<long> witness_power;  // per x-variable: smallest n with x_i^n in the ideal
  long power_cap = 0;
};

/// Certifies that the x-critical set of the unfolding is exactly {x = 0}:
/// REFUTED if some df/dx_j does not vanish on {x = 0}; PROVED if moreover
/// every x_i has a power (n <= cap) inside the localized partial-Jacobian
/// ideal in all m+k variables; UNDECIDED when the power cap runs out.
inline SymbolicConstancy mu_constancy_symbolic(const Unfolding& u, long power_cap = -1,
                                               const BasisOptions& opts = {}) {
  SymbolicConstancy out;
  out.power_cap = power_cap > 0 ? power_cap : u.mu0(opts) + 2;
  std::vector<Polynomial> jac = u.x_gradient();
  std::map<std::string, GaussianRational> zero_x;
  auto xv = u.x_vars();
  for (const auto& name : xv) zero_x.emplace(name, GaussianRational(0));
  for (const auto& dj : jac) {
    if (!dj.substitute(zero_x).is_zero()) {
      out.verdict = SymbolicVerdict::REFUTED;
      return out;
    }
  }
  BasisResult sb = local_standard_basis(jac, opts);
  out.witness_power.assign(xv.size(), -1);
  bool all_found = true;
  for (std::size_t i = 0; i < xv.size(); ++i) {
    for (long n = 1; n <= out.power_cap; ++n) {
      Polynomial p = Polynomial::variable(u.poly().vars(), i, static_cast<int>(n));
      if (normal_form(p, sb, opts).is_zero()) {
        out.witness_power[i] = n;
        break;
      }
    }
    if (out.witness_power[i] < 0) all_found = false;
  }
  out.verdict = all_found ? SymbolicVerdict::PROVED : SymbolicVerdict::UNDECIDED;
  return out;
}

/// Family characteristic polynomial P(w, t, s) of f with respect to G.
/// Exactly: the eliminant E with E = lead(w,t) * (s^mu + sum a_j s^{mu-j}),
/// where lead is a unit at the origin (coefficients of the germ-level P live
/// in the local ring, so a_j = numerator_j / lead). Normalized so that
/// lead(0,0) = 1.
struct FamilyCharPoly {
  long mu = 0;
  CharPolyMethod method = CharPolyMethod::exact;

  // exact path
  Polynomial eliminant;  // context (w..., t..., s)
  Polynomial lead;       // s^mu coefficient over (w..., t...), lead(0,0) = 1
  std::vector<Polynomial> numerators;  // n_j = lead * a_j over (w..., t...)
  std::vector<std::string> w_vars, t_vars;
  std::string s_var;

  // numeric path (rays in C^{m+k}; tables exactly as the germ-level version)
  std::optional<CharPoly> sampled;

  bool is_exact() const { return method == CharPolyMethod::exact; }

  /// a_j values at a numeric (w, t) point (exact path).
  std::vector<Cplx> coefficient_values(const ComplexPoint& wt) const {
    if (!is_exact()) throw Error("exact coefficient evaluation on a sampled family charpoly");
    Cplx den = lead.evaluate(wt);
    std::vector<Cplx> vals;
    vals.reserve(numerators.size());
    for (const auto& n : numerators) vals.push_back(n.evaluate(wt) / den);
    return vals;
  }
};

/// Exact family characteristic polynomial by eliminating the x-block from
/// <g_i(x,t) - w_i, s - f(x,t)>. Requires established mu-constancy.
inline FamilyCharPoly family_charpoly_exact(const Unfolding& u, bool constancy_established,
                                            const BasisOptions& opts = {}) {
  if (!constancy_established)
    throw PreconditionError("family characteristic polynomial requires mu-constancy");
  long mu = u.mu0(opts);
  const auto& fv = u.poly().vars();
  const std::size_t m = u.m(), k = u.k();

  std::vector<std::string> wv;
  {
    std::vector<std::string> taken = fv;
    for (std::size_t i = 0; i < m; ++i) {
      std::string name = detail::fresh_name(m == 1 ? "w" : "w" + std::to_string(i + 1), taken);
      taken.push_back(name);
      wv.push_back(name);
    }
  }
  std::vector<std::string> all(fv.begin(), fv.begin() + static_cast<std::ptrdiff_t>(m));
  all.insert(all.end(), wv.begin(), wv.end());
  all.insert(all.end(), fv.begin() + static_cast<std::ptrdiff_t>(m), fv.end());
  std::string sname = detail::fresh_name("s", all);
  all.push_back(sname);

  std::vector<Polynomial> jac = u.x_gradient();
  std::vector<Polynomial> gens;
  for (std::size_t i = 0; i < m; ++i) {
    Polynomial gi = detail::embed(jac[i], all);
    auto at = std::find(all.begin(), all.end(), wv[i]);
    gi -= Polynomial::variable(all, static_cast<std::size_t>(at - all.begin()));
    gens.push_back(std::move(gi));
  }
  gens.push_back(Polynomial::variable(all, all.size() - 1) - detail::embed(u.poly(), all));

  std::vector<Polynomial> el = eliminate(gens, m, opts);
  if (el.size() != 1)
    throw GlobalLocalMismatchError(-1, mu, "family elimination ideal is not principal");
  Polynomial E = el[0];  // context (w..., t..., s)

  FamilyCharPoly P;
  P.mu = mu;
  P.method = CharPolyMethod::exact;
  P.w_vars = wv;
  auto tv = u.t_vars();
  P.t_vars = tv;
  P.s_var = sname;

  const std::size_t s_idx = E.nvars() - 1;
  long ds = 0;
  for (const auto& [mo, c] : E.terms()) ds = std::max<long>(ds, mo[s_idx]);
  if (ds != mu) throw GlobalLocalMismatchError(ds, mu, "family eliminant degree in s != mu");

  std::vector<std::string> wt_vars(E.vars().begin(), E.vars().end() - 1);
  auto s_coefficient = [&](long power) {
    Polynomial c(wt_vars);
    for (const auto& [mo, co] : E.terms()) {
      if (mo[s_idx] != power) continue;
      Monomial rm(wt_vars.size());
      for (std::size_t i = 0; i < wt_vars.size(); ++i) rm[i] = mo[i];
      c.add_term(rm, co);
    }
    return c;
  };
  Polynomial lead = s_coefficient(mu);
  GaussianRational lead0 = lead.constant_term();
  if (lead0.is_zero())
    throw GlobalLocalMismatchError(ds, mu, "family eliminant lead coefficient vanishes at 0");
  E = (GaussianRational(1) / lead0) * E;
  P.lead = (GaussianRational(1) / lead0) * lead;
  for (long j = 1; j <= mu; ++j) P.numerators.push_back(s_coefficient(mu - j));
  for (auto& n : P.numerators) n = (GaussianRational(1) / lead0) * n;

  // P(g(x,t), t, f(x,t)) = 0 as an exact identity.
  {
    std::map<std::string, Polynomial> bind;
    for (std::size_t i = 0; i < m; ++i) bind.emplace(wv[i], jac[i]);
    bind.emplace(sname, u.poly());
    if (!E.substitute(fv, bind).is_zero())
      throw Error("internal: family charpoly fails P(g, t, f) = 0");
  }
  // a_j(0, t) = 0 identically: numerators vanish on {w = 0}.
  {
    std::map<std::string, GaussianRational> zero_w;
    for (const auto& name : wv) zero_w.emplace(name, GaussianRational(0));
    for (const auto& n : P.numerators)
      if (!n.substitute(zero_w).is_zero())
        throw Error("internal: family charpoly has a_j(0, t) != 0");
  }
  P.eliminant = std::move(E);
  return P;
}

/// Numeric family characteristic polynomial: ray-sampled fibres of G in
/// C^{m+k}, exactly as the germ-level numeric path.
inline FamilyCharPoly family_charpoly_numeric(const Unfolding& u, bool constancy_established,
                                              const FibreConfig& cfg, const RayConfig& rc = {},
                                              const BasisOptions& opts = {}) {
  if (!constancy_established)
    throw PreconditionError("family characteristic polynomial requires mu-constancy");
  FamilyCharPoly P;
  P.mu = u.mu0(opts);
  P.method = CharPolyMethod::numeric;
  P.t_vars = u.t_vars();
  P.sampled = charpoly_numeric(Germ(u.poly()), build_G(u).components(), P.mu, cfg, rc);
  return P;
}

/// Specializes the exact family charpoly at t = t0 and renders it monic in s
/// over the w-context (lead(w, t0) must be constant in w for this to exist).
inline Polynomial specialize_family_charpoly(const FamilyCharPoly& P,
                                             const std::vector<GaussianRational>& t0) {
  if (!P.is_exact()) throw Error("specialization needs the exact family charpoly");
  std::map<std::string, GaussianRational> bind;
  for (std::size_t l = 0; l < P.t_vars.size(); ++l) bind.emplace(P.t_vars[l], t0[l]);
  Polynomial lead_t = P.lead.substitute(bind);
  if (!lead_t.is_constant() || lead_t.constant_term().is_zero())
    throw Error("family charpoly does not specialize to a monic slice at this t");
  return (GaussianRational(1) / lead_t.constant_term()) * P.eliminant.substitute(bind);
}

struct HartogsConfig {
  int shells = 8;
  double radius_start = 0.1;
  double radius_ratio = 0.5;
  int samples_per_shell = 200;
  double t_radius = 0.1;    // parameter polydisc for the exact path
  int exponent_offset = 1;  // denominator ||y||^{j + offset}; j+1 is the theorem bound
  std::uint64_t seed = 0x4C4F4A4158ULL;
};

struct HartogsReport {
  std::vector<double> radii;
  std::vector<std::vector<double>> sup_ratio;  // [j-1][shell]
  std::vector<double> overall_sup;             // per j
  std::vector<bool> growth_flag;               // three-shell growth heuristic per j
  bool any_growth = false;
};

/// sup |a_j(y, t)| / ||y||^(j+offset) over shrinking y-shells; the theorem
/// bound (offset 1) must stay bounded, a stiffer denominator must not.
inline HartogsReport hartogs_bound_check(const FamilyCharPoly& P, const HartogsConfig& cfg = {}) {
  HartogsReport rep;
  const std::size_t mu = static_cast<std::size_t>(P.mu);
  rep.sup_ratio.assign(mu, {});
  if (P.is_exact()) {
    const std::size_t m = P.w_vars.size();
    const std::size_t k = P.t_vars.size();
    double r = cfg.radius_start;
    for (int shell = 0; shell < cfg.shells; ++shell, r *= cfg.radius_ratio) {
      std::vector<double> sup(mu, 0.0);
      for (int s = 0; s < cfg.samples_per_shell; ++s) {
        Rng rng(derive_seed(cfg.seed, 0xA47, static_cast<std::uint64_t>(s)));
        ComplexPoint dir = rng.sphere_direction(m);
        ComplexPoint wt(m + k);
        for (std::size_t i = 0; i < m; ++i) wt[i] = r * dir[i];
        for (std::size_t l = 0; l < k; ++l) wt[m + l] = rng.disc(cfg.t_radius);
        std::vector<Cplx> vals = P.coefficient_values(wt);
        for (std::size_t j = 0; j < mu; ++j) {
          double denom =
              std::pow(r, static_cast<double>(j + 1) + static_cast<double>(cfg.exponent_offset));
          sup[j] = std::max(sup[j], std::abs(vals[j]) / denom);
        }
      }
      rep.radii.push_back(r);
      for (std::size_t j = 0; j < mu; ++j) rep.sup_ratio[j].push_back(sup[j]);
    }
  } else {
    // Sampled path: each ray point is (y, t) = s (u_y, u_t), so ||y|| = s |u_y|.
    const CharPoly& S = *P.sampled;
    const std::size_t m_total = S.f.nvars();
    const std::size_t k = P.t_vars.size();
    const std::size_t m = m_total - k;
    rep.radii = S.rays.empty() ? std::vector<double>{} : S.rays.front().radii;
    for (std::size_t j = 0; j < mu; ++j) rep.sup_ratio[j].assign(rep.radii.size(), 0.0);
    for (const auto& ray : S.rays) {
      double ynorm = 0.0;
      for (std::size_t i = 0; i < m; ++i) ynorm += std::norm(ray.direction[i]);
      ynorm = std::sqrt(ynorm);
      if (ynorm < 1e-12) continue;
      for (std::size_t kk = 0; kk < ray.radii.size(); ++kk) {
        if (!ray.usable[kk]) continue;
        double yr = ray.radii[kk] * ynorm;
        for (std::size_t j = 0; j < mu; ++j) {
          double denom =
              std::pow(yr, static_cast<double>(j + 1) + static_cast<double>(cfg.exponent_offset));
          rep.sup_ratio[j][kk] =
              std::max(rep.sup_ratio[j][kk], std::abs(ray.coeff_values[kk][j]) / denom);
        }
      }
    }
  }
  for (std::size_t j = 0; j < mu; ++j) {
    double overall = 0.0;
    for (double v : rep.sup_ratio[j]) overall = std::max(overall, v);
    rep.overall_sup.push_back(overall);
    rep.growth_flag.push_back(detail::shell_verdict(rep.sup_ratio[j]) == ShellVerdict::DIVERGENT);
    if (rep.growth_flag.back()) rep.any_growth = true;
  }
  return rep;
}

struct UniformExponentReport {
  Rational theta_star;  // mu0 / (mu0 + 1), exact
  std::vector<GridPoint> grid;
  std::vector<ShellReport> per_t;
  ShellReport joint;  // (x,t)-shells against the full gradient
  double shared_constant = 0.0;
  std::size_t shared_constant_t_index = 0;
  int shared_constant_shell = 0;
  bool no_blowup_trend = false;  // shared C attained away from the smallest shell
  bool all_bounded = false;
  bool ok = false;
};

/// Verifies |f_t|^{mu/(mu+1)} <= C ||grad f_t|| with one shared constant over
/// the grid, plus the joint inequality in all m+k variables.
inline UniformExponentReport uniform_exponent_verify(const Unfolding& u,
                                                     const std::vector<GridPoint>& grid,
                                                     bool constancy_established,
                                                     const ShellConfig& shells = {},
                                                     const BasisOptions& opts = {}) {
  if (!constancy_established)
    throw PreconditionError("uniform exponent verification requires mu-constancy on the grid");
  UniformExponentReport rep;
  long mu = u.mu0(opts);
  rep.theta_star = Rational(mu, mu + 1);
  rep.grid = grid;
  double theta = to_double(rep.theta_star);
  rep.all_bounded = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ShellConfig cfg = shells;
    cfg.seed = derive_seed(shells.seed, 0x6E1D, i);
    ShellReport sr = empirical_verify(u.slice(grid[i]), theta, cfg);
    if (sr.verdict != ShellVerdict::BOUNDED) rep.all_bounded = false;
    if (sr.constant > rep.shared_constant) {
      rep.shared_constant = sr.constant;
      rep.shared_constant_t_index = i;
      rep.shared_constant_shell = sr.constant_shell;
    }
    rep.per_t.push_back(std::move(sr));
  }
  rep.no_blowup_trend = rep.shared_constant_shell + 1 < shells.shells;
  ShellConfig jcfg = shells;
  jcfg.seed = derive_seed(shells.seed, 0x6E1D, 0xFFFF);
  rep.joint = empirical_verify(Germ(u.poly()), theta, jcfg);
  rep.ok = rep.all_bounded && rep.joint.verdict == ShellVerdict::BOUNDED && rep.no_blowup_trend;
  return rep;
}

struct SemicontinuityReport {
  long mu0 = 0;
  std::vector<GridPoint> grid;
  std::vector<std::optional<long>> mu_t;
  std::vector<bool> le_mu0;                  // mu_t <= mu0 (hard assertion)
  std::vector<ShellVerdict> slice_verdicts;  // per-t at exponent mu0/(mu0+1)
  std::vector<double> slice_constants;       // per-t constant C_t
  bool pass = false;
};

/// mu_t <= mu0 across the grid (a violation is a hard failure), and the
/// per-slice inequality at the centre exponent mu0/(mu0+1) with per-t
/// constants.
inline SemicontinuityReport semicontinuity_check(const Unfolding& u,
                                                 const std::vector<GridPoint>& grid,
                                                 const ShellConfig& shells = {},
                                                 const BasisOptions& opts = {}) {
  SemicontinuityReport rep;
  rep.mu0 = u.mu0(opts);
  rep.grid = grid;
  double theta = to_double(Rational(rep.mu0, rep.mu0 + 1));
  std::vector<Polynomial> jac = u.x_gradient();
  auto xv = u.x_vars();
  auto tv = u.t_vars();
  rep.pass = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::map<std::string, GaussianRational> origin;
    for (const auto& name : xv) origin.emplace(name, GaussianRational(0));
    for (std::size_t l = 0; l < tv.size(); ++l) origin.emplace(tv[l], grid[i][l]);
    for (const auto& dj : jac)
      if (!dj.substitute(origin).is_zero())
        throw PreconditionError("semicontinuity check requires g_t(0) = 0 at every grid point");
    std::optional<long> mu = milnor_number_opt(u.slice(grid[i]), opts);
    rep.mu_t.push_back(mu);
    bool le = mu.has_value() && *mu <= rep.mu0;
    rep.le_mu0.push_back(le);
    if (!le) rep.pass = false;
    ShellConfig cfg = shells;
    cfg.seed = derive_seed(shells.seed, 0x5EC0, i);
    ShellReport sr = empirical_verify(u.slice(grid[i]), theta, cfg);
    rep.slice_verdicts.push_back(sr.verdict);
    rep.slice_constants.push_back(sr.constant);
  }
  return rep;
}

struct StollConfig {
  int rays = 50;
  int radii_count = 6;
  double radius_start = 1e-2;
  double radius_ratio = 0.5;
  double near_factor = 0.25;      // convergence cutoff rho * near_factor
  double pass_fraction = 0.95;
  FibreConfig fibre = [] {
    FibreConfig c;
    c.rho = 0.125;        // must contain every sheet of the slice covering
    c.auto_halve = false;  // the whole polydisc fibre is the point here
    return c;
  }();
};

struct StollReport {
  GridPoint t;
  long mu0 = 0;
  std::optional<long> mu_t;
  int rays = 0;
  int passed = 0;      // mu0 points in the polydisc and mu_t of them near 0
  int over_count = 0;  // rays reporting more than mu0 points (must be 0)
  bool ok = false;
};

/// Sheet-count check at a grid point: the fibre of grad f_t over generic
/// small w has mu0 points in the polydisc, of which exactly mu_t converge to
/// the origin along a shrinking ray (counted inside rho * near_factor at the
/// smallest radius).
inline StollReport stoll_sheet_check(const Unfolding& u, const GridPoint& t0,
                                     const StollConfig& cfg = {}, const BasisOptions& opts = {}) {
  StollReport rep;
  rep.t = t0;
  rep.mu0 = u.mu0(opts);
  Germ ft = u.slice(t0);
  rep.mu_t = milnor_number_opt(ft, opts);
  if (!rep.mu_t) return rep;
  PolyMap g(gradient(ft.poly()));
  std::vector<double> radii(static_cast<std::size_t>(cfg.radii_count));
  double r = cfg.radius_start;
  for (auto& s : radii) {
    s = r;
    r *= cfg.radius_ratio;
  }
  rep.rays = cfg.rays;
  for (int ray = 0; ray < cfg.rays; ++ray) {
    Rng rng(derive_seed(cfg.fibre.seed, 0x570LL, static_cast<std::uint64_t>(ray)));
    ComplexPoint dir = rng.sphere_direction(u.m());
    std::vector<Fibre> fibres =
        track_ray(g, dir, radii, rep.mu0, cfg.fibre, static_cast<std::uint64_t>(ray));
    const Fibre& last = fibres.back();
    if (last.points.size() > static_cast<std::size_t>(rep.mu0)) ++rep.over_count;
    long near = 0;
    for (const auto& z : last.points)
      if (norm(z) <= cfg.fibre.rho * cfg.near_factor) ++near;
    if (last.points.size() == static_cast<std::size_t>(rep.mu0) && near == *rep.mu_t) ++rep.passed;
  }
  rep.ok = rep.over_count == 0 &&
           rep.passed >= static_cast<int>(std::ceil(cfg.pass_fraction * cfg.rays));
  return rep;
}

struct FamilyConfig {
  std::optional<std::vector<GridPoint>> grid;  // default: default_grid(k)
  BasisOptions basis;
  ShellConfig shells;
  FibreConfig fibre;
  RayConfig rays;
  HartogsConfig hartogs;
  StollConfig stoll;
  long symbolic_power_cap = -1;  // -1: mu0 + 2
  bool run_charpoly = true;
  bool run_hartogs = true;
  bool run_stoll = true;
};

/// Full family analysis: constancy (grid + symbolic), the family charpoly
/// with its checks, the uniform exponent, semicontinuity, and sheet counts.
struct FamilyReport {
  long mu0 = 0;
  long mu_G = 0;
  GridMuTable mu_table;
  SymbolicConstancy symbolic;
  bool constancy_established = false;
  Rational theta_star;
  std::optional<FamilyCharPoly> charpoly;
  std::string charpoly_note;
  std::optional<HartogsReport> hartogs;
  std::optional<UniformExponentReport> uniform;
  std::optional<SemicontinuityReport> semicontinuity;
  std::string semicontinuity_note;
  std::vector<StollReport> stoll;
  bool hard_failure = false;
};

inline FamilyReport analyze_family(const Unfolding& u, const FamilyConfig& cfg = {}) {
  FamilyReport rep;
  rep.mu0 = u.mu0(cfg.basis);
  rep.mu_G = mu_of_G(u, cfg.basis);
  rep.theta_star = Rational(rep.mu0, rep.mu0 + 1);
  std::vector<GridPoint> grid = cfg.grid ? *cfg.grid : default_grid(u.k());
  rep.mu_table = mu_constancy_grid(u, grid, cfg.basis);
  rep.symbolic = mu_constancy_symbolic(u, cfg.symbolic_power_cap, cfg.basis);
  rep.constancy_established = rep.symbolic.verdict == SymbolicVerdict::PROVED ||
                              rep.mu_table.verdict == Constancy::CONSTANT_ON_GRID;
  if (rep.constancy_established) {
    if (cfg.run_charpoly) {
      try {
        rep.charpoly = family_charpoly_exact(u, true, cfg.basis);
      } catch (const GlobalLocalMismatchError& e) {
        rep.charpoly_note = std::string("exact path refused: ") + e.what();
        rep.charpoly = family_charpoly_numeric(u, true, cfg.fibre, cfg.rays, cfg.basis);
      }
      if (cfg.run_hartogs) rep.hartogs = hartogs_bound_check(*rep.charpoly, cfg.hartogs);
    }
    rep.uniform = uniform_exponent_verify(u, grid, true, cfg.shells, cfg.basis);
  }
  // Semicontinuity needs g_t(0) = 0 on the grid, i.e. the symbolic check must
  // not be REFUTED.
  if (rep.symbolic.verdict != SymbolicVerdict::REFUTED) {
    rep.semicontinuity = semicontinuity_check(u, grid, cfg.shells, cfg.basis);
    if (!rep.semicontinuity->pass) rep.hard_failure = true;
  } else {
    rep.semicontinuity_note = "skipped: g_t(0) != 0 for some t";
  }
  if (cfg.run_stoll && rep.mu_table.verdict == Constancy::NON_CONSTANT) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!rep.mu_table.mu_t[i] || *rep.mu_table.mu_t[i] >= rep.mu0) continue;
      rep.stoll.push_back(stoll_sheet_check(u, grid[i], cfg.stoll, cfg.basis));
      if (!rep.stoll.back().ok) rep.hard_failure = true;
    }
  }
  if (rep.uniform && !rep.uniform->ok) rep.hard_failure = true;
  return rep;
}

}  // namespace lojax
