#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "lojax/order.hpp"
#include "lojax/polynomial.hpp"

namespace lojax {

struct BasisOptions {
  /// Any intermediate polynomial whose total degree exceeds this aborts the
  /// computation with ResourceLimitError (never a wrong answer).
  int degree_cap = 30;
};

struct BasisResult {
  std::vector<Polynomial> generators;  // monic, sorted by descending leading monomial
  MonomialOrder order = MonomialOrder::global();
  bool reduced = false;
  bool local = false;

  std::vector<Monomial> leading_monomials() const;
};

namespace detail {

struct Term {
  Monomial m;
  GaussianRational c;
};
using TermVec = std::vector<Term>;  // strictly descending in the active order

inline TermVec to_termvec(const Polynomial& p, const MonomialOrder& ord) {
  TermVec v;
  v.reserve(p.term_count());
  for (const auto& [m, c] : p.terms()) v.push_back({m, c});
  std::sort(v.begin(), v.end(),
            [&](const Term& a, const Term& b) { return ord.greater(a.m, b.m); });
  return v;
}

inline Polynomial to_poly(const TermVec& v, const std::vector<std::string>& vars) {
  Polynomial p(vars);
  for (const auto& t : v) p.add_term(t.m, t.c);
  return p;
}

inline int total_degree(const TermVec& v) {
  int d = -1;
  for (const auto& t : v) d = std::max(d, t.m.degree());
  return d;
}

inline void check_cap(const TermVec& v, const BasisOptions& opts) {
  if (total_degree(v) > opts.degree_cap)
    throw ResourceLimitError("degree cap " + std::to_string(opts.degree_cap) +
                             " exceeded during basis computation");
}

inline void make_monic(TermVec& v) {
  if (v.empty() || v.front().c.is_one()) return;
  GaussianRational lead = v.front().c;
  for (auto& t : v) t.c /= lead;
}

/// deg(f) - deg(LM f); 0 for global degree orders, >= 0 for local ones.
inline int ecart(const TermVec& v) { return total_degree(v) - v.front().m.degree(); }

/// a - c * x^shift * b, with shifted b's lead expected to cancel a's lead.
inline TermVec reduce_step(const TermVec& a, const GaussianRational& c, const Monomial& shift,
                           const TermVec& b, const MonomialOrder& ord) {
  TermVec r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    Monomial bm = b[j].m * shift;
    int cmp = ord.compare(a[i].m, bm);
    if (cmp > 0) {
      r.push_back(a[i++]);
    } else if (cmp < 0) {
      r.push_back({std::move(bm), -(c * b[j].c)});
      ++j;
    } else {
      GaussianRational nc = a[i].c - c * b[j].c;
      if (!nc.is_zero()) r.push_back({a[i].m, std::move(nc)});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.push_back({b[j].m * shift, -(c * b[j].c)});
  return r;
}

inline TermVec spoly(const TermVec& f, const TermVec& g, const MonomialOrder& ord) {
  Monomial u = lcm(f.front().m, g.front().m);
  Monomial a = u / f.front().m;
  Monomial b = u / g.front().m;
  // (x^a f)/lc(f) - (x^b g)/lc(g); with monic inputs this is x^a f - x^b g.
  TermVec lhs;
  lhs.reserve(f.size());
  GaussianRational inv_f = GaussianRational(1) / f.front().c;
  for (const auto& t : f) lhs.push_back({t.m * a, t.c * inv_f});
  return reduce_step(lhs, GaussianRational(1) / g.front().c, b, g, ord);
}

/// Classical full normal form for global orders: no remainder term is
/// divisible by any leading monomial of G.
inline TermVec nf_global(TermVec h, const std::vector<TermVec>& basis, const MonomialOrder& ord,
                         const BasisOptions& opts) {
  TermVec rem;
  while (!h.empty()) {
    bool reduced_once = false;
    for (const auto& g : basis) {
      if (g.front().m.divides(h.front().m)) {
        h = reduce_step(h, h.front().c / g.front().c, h.front().m / g.front().m, g, ord);
        check_cap(h, opts);
        reduced_once = true;
        break;
      }
    }
    if (!reduced_once) {
      rem.push_back(h.front());
      h.erase(h.begin());
    }
  }
  return rem;
}

/// Mora weak normal form (ecart-minimizing reducer, reducer set extension).
/// Returns a form whose leading monomial is not divisible by any leading
/// monomial of the (extended) reducer set; zero iff h lies in the ideal
/// generated by `basis` in the localization the order describes.
inline TermVec nf_mora(TermVec h, const std::vector<TermVec>& basis, const MonomialOrder& ord,
                       const BasisOptions& opts, std::vector<TermVec>* carry = nullptr) {
  std::vector<TermVec> local_pool;
  std::vector<TermVec>& pool = carry ? *carry : local_pool;
  auto divisor = [&](const Monomial& m) -> const TermVec* {
    const TermVec* best = nullptr;
    int best_ecart = 0;
    for (const auto& g : basis) {
      if (!g.front().m.divides(m)) continue;
      int e = ecart(g);
      if (!best || e < best_ecart) {
        best = &g;
        best_ecart = e;
      }
    }
    for (const auto& g : pool) {
      if (!g.front().m.divides(m)) continue;
      int e = ecart(g);
      if (!best || e < best_ecart) {
        best = &g;
        best_ecart = e;
      }
    }
    return best;
  };
  while (!h.empty()) {
    const TermVec* g = divisor(h.front().m);
    if (!g) return h;
    TermVec red = *g;  // copy first: pool growth below may invalidate g
    if (ecart(red) > ecart(h)) pool.push_back(h);
    h = reduce_step(h, h.front().c / red.front().c, h.front().m / red.front().m, red, ord);
    check_cap(h, opts);
  }
  return h;
}

/// Local normal form with tail handling: peels irreducible leading terms and
/// keeps reducing the tail with the shared Mora reducer pool. The remainder
/// has no term divisible by a basis leading monomial; it is zero iff the
/// input lies in the localized ideal.
inline TermVec nf_local(TermVec h, const std::vector<TermVec>& basis, const MonomialOrder& ord,
                        const BasisOptions& opts) {
  TermVec rem;
  std::vector<TermVec> pool;
  while (!h.empty()) {
    h = nf_mora(std::move(h), basis, ord, opts, &pool);
    if (h.empty()) break;
    rem.push_back(h.front());
    h.erase(h.begin());
  }
  return rem;
}

struct Pair {
  std::size_t i, j;
  Monomial lcm_m;
  int sugar;
};

/// Buchberger / Mora completion with the Gebauer-Moeller pair update. The
/// product criterion is applied for global orders only.
class BasisEngine {
public:
  BasisEngine(std::vector<Polynomial> gens, MonomialOrder order, BasisOptions opts)
      : order_(order), opts_(opts) {
    if (gens.empty()) throw Error("basis: empty generator list");
    vars_ = gens.front().vars();
    for (const auto& g : gens)
      if (g.vars() != vars_) throw Error("basis: mixed variable contexts");
    std::vector<TermVec> in;
    for (const auto& g : gens)
      if (!g.is_zero()) {
        TermVec v = to_termvec(g, order_);
        make_monic(v);
        in.push_back(std::move(v));
      }
    std::sort(in.begin(), in.end(), [&](const TermVec& a, const TermVec& b) {
      int c = order_.compare(a.front().m, b.front().m);
      if (c != 0) return c < 0;
      return a.size() < b.size();
    });
    in.erase(std::unique(in.begin(), in.end(),
                         [](const TermVec& a, const TermVec& b) {
                           if (a.size() != b.size()) return false;
                           for (std::size_t k = 0; k < a.size(); ++k)
                             if (a[k].m != b[k].m || a[k].c != b[k].c) return false;
                           return true;
                         }),
             in.end());
    for (auto& v : in) add_generator(std::move(v));
  }

  BasisResult run() {
    while (!pairs_.empty()) {
      std::size_t best = select_pair();
      Pair p = pairs_[best];
      pairs_.erase(pairs_.begin() + static_cast<std::ptrdiff_t>(best));
      TermVec s = spoly(g_[p.i], g_[p.j], order_);
      if (s.empty()) continue;
      check_cap(s, opts_);
      TermVec r = order_.is_local() ? nf_mora(std::move(s), g_, order_, opts_)
                                    : nf_global(std::move(s), g_, order_, opts_);
      if (!r.empty()) {
        make_monic(r);
        add_generator(std::move(r));
      }
    }
    autoreduce();
    BasisResult out;
    out.order = order_;
    out.local = order_.is_local();
    out.reduced = true;
    for (const auto& v : g_) out.generators.push_back(to_poly(v, vars_));
    return out;
  }

private:
  void add_generator(TermVec v) {
    std::size_t t = g_.size();
    // Gebauer-Moeller update of the pending pair set.
    std::vector<Pair> fresh;
    for (std::size_t i = 0; i < t; ++i) {
      Pair p;
      p.i = i;
      p.j = t;
      p.lcm_m = lcm(g_[i].front().m, v.front().m);
      p.sugar = pair_sugar(i, v, p.lcm_m);
      fresh.push_back(std::move(p));
    }
    // M rule: drop (i,t) if some (j,t) has a properly dividing lcm.
    std::vector<bool> keep(fresh.size(), true);
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = 0; b < fresh.size(); ++b) {
        if (a == b || !keep[a] || !keep[b]) continue;
        if (fresh[b].lcm_m.divides(fresh[a].lcm_m) && fresh[b].lcm_m != fresh[a].lcm_m)
          keep[a] = false;
      }
    // F rule: among equal lcms keep the first.
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = a + 1; b < fresh.size(); ++b)
        if (keep[a] && keep[b] && fresh[a].lcm_m == fresh[b].lcm_m) keep[b] = false;
    // Product criterion (global orders only).
    if (order_.is_global())
      for (std::size_t a = 0; a < fresh.size(); ++a)
        if (keep[a] && fresh[a].lcm_m == g_[fresh[a].i].front().m * v.front().m) keep[a] = false;
    // Chain rule on old pairs.
    std::vector<Pair> survivors;
    for (const auto& p : pairs_) {
      bool drop = v.front().m.divides(p.lcm_m) &&
                  lcm(g_[p.i].front().m, v.front().m) != p.lcm_m &&
                  lcm(g_[p.j].front().m, v.front().m) != p.lcm_m;
      if (!drop) survivors.push_back(p);
    }
    pairs_ = std::move(survivors);
    for (std::size_t a = 0; a < fresh.size(); ++a)
      if (keep[a]) pairs_.push_back(std::move(fresh[a]));
    sugar_.push_back(total_degree(v));
    g_.push_back(std::move(v));
  }

  int pair_sugar(std::size_t i, const TermVec& v, const Monomial& u) const {
    int si = sugar_[i] + (u / g_[i].front().m).degree();
    int sj = total_degree(v) + (u / v.front().m).degree();
    return std::max(si, sj);
  }

  std::size_t select_pair() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const Pair& a = pairs_[k];
      const Pair& b = pairs_[best];
      if (a.sugar != b.sugar) {
        if (a.sugar < b.sugar) best = k;
        continue;
      }
      int da = a.lcm_m.degree(), db = b.lcm_m.degree();
      if (da != db) {
        if (da < db) best = k;
        continue;
      }
      int c = order_.compare(a.lcm_m, b.lcm_m);
      if (c != 0) {
        if (c < 0) best = k;
        continue;
      }
      if (a.i != b.i ? a.i < b.i : a.j < b.j) best = k;
    }
    return best;
  }

  void autoreduce() {
    // Minimalize: drop generators whose lead is divisible by another lead.
    // Divisibility increases total degree, so scan degree-ascending
    // regardless of the active order.
    std::sort(g_.begin(), g_.end(), [](const TermVec& a, const TermVec& b) {
      return GrlexLess{}(a.front().m, b.front().m);
    });
    std::vector<TermVec> minimal;
    for (auto& gen : g_) {
      bool redundant = false;
      for (const auto& kept : minimal)
        if (kept.front().m.divides(gen.front().m)) {
          redundant = true;
          break;
        }
      if (!redundant) minimal.push_back(std::move(gen));
    }
    g_ = std::move(minimal);
    std::sort(g_.begin(), g_.end(), [&](const TermVec& a, const TermVec& b) {
      return order_.greater(a.front().m, b.front().m);
    });
    // Tail reduction.
    if (order_.is_local()) {
      for (std::size_t k = 0; k < g_.size(); ++k) tail_reduce_local(k);
    } else {
      for (std::size_t k = 0; k < g_.size(); ++k) {
        std::vector<TermVec> others;
        for (std::size_t j = 0; j < g_.size(); ++j)
          if (j != k) others.push_back(g_[j]);
        if (others.empty()) continue;
        TermVec lead{g_[k].front()};
        TermVec tail(g_[k].begin() + 1, g_[k].end());
        TermVec red = nf_global(std::move(tail), others, order_, opts_);
        for (auto& t : red) lead.push_back(std::move(t));
        g_[k] = std::move(lead);
      }
    }
    for (auto& v : g_) make_monic(v);
  }

  /// Tail cleanup for local orders: cancel tail terms divisible by a
  /// *monomial* generator. Only monomial reducers strictly shrink the term
  /// multiset, so this terminates; reducing by generators with tails would
  /// spiral into ever-higher degrees under a local order.
  void tail_reduce_local(std::size_t k) {
    TermVec& f = g_[k];
    for (;;) {
      std::size_t pos = 0;
      const TermVec* red = nullptr;
      for (std::size_t t = 1; t < f.size() && !red; ++t)
        for (std::size_t j = 0; j < g_.size(); ++j) {
          if (j == k || g_[j].size() != 1) continue;
          if (g_[j].front().m.divides(f[t].m)) {
            pos = t;
            red = &g_[j];
            break;
          }
        }
      if (!red) return;
      f = reduce_step(f, f[pos].c / red->front().c, f[pos].m / red->front().m, *red, order_);
    }
  }

  std::vector<std::string> vars_;
  MonomialOrder order_;
  BasisOptions opts_;
  std::vector<TermVec> g_;
  std::vector<int> sugar_;
  std::vector<Pair> pairs_;
};

}  // namespace detail

inline std::vector<Monomial> BasisResult::leading_monomials() const {
  std::vector<Monomial> lm;
  for (const auto& g : generators) {
    detail::TermVec v = detail::to_termvec(g, order);
    if (!v.empty()) lm.push_back(v.front().m);
  }
  return lm;
}

/// Reduced Groebner basis with respect to a global order.
inline BasisResult groebner(const std::vector<Polynomial>& gens,
                            MonomialOrder order = MonomialOrder::global(),
                            const BasisOptions& opts = {}) {
  if (!order.is_global()) throw Error("groebner requires a global order");
  return detail::BasisEngine(gens, order, opts).run();
}

/// Mora standard basis with respect to negdegrevlex; the leading-term ideal
/// is correct for the localization at the origin.
inline BasisResult local_standard_basis(const std::vector<Polynomial>& gens,
                                        const BasisOptions& opts = {}) {
  return detail::BasisEngine(gens, MonomialOrder::local(), opts).run();
}

/// Remainder with no term divisible by any basis leading monomial.
/// Zero remainder is exactly ideal membership (localized ideal when local).
inline Polynomial normal_form(const Polynomial& p, const BasisResult& basis,
                              const BasisOptions& opts = {}) {
  if (p.is_zero()) return p;
  std::vector<detail::TermVec> b;
  for (const auto& g : basis.generators) b.push_back(detail::to_termvec(g, basis.order));
  detail::TermVec h = detail::to_termvec(p, basis.order);
  detail::TermVec r = basis.order.is_local() ? detail::nf_local(std::move(h), b, basis.order, opts)
                                             : detail::nf_global(std::move(h), b, basis.order, opts);
  return detail::to_poly(r, p.vars());
}

/// Number of monomials outside the leading-term ideal; nullopt = INFINITE.
inline std::optional<long> quotient_dimension(const BasisResult& basis) {
  std::vector<Monomial> lm = basis.leading_monomials();
  if (lm.empty()) return std::nullopt;  // zero ideal, nonzero context
  std::size_t n = lm.front().nvars();
  for (const auto& m : lm)
    if (m.is_one()) return 0;  // unit ideal
  if (n == 0) return std::nullopt;
  // Finite iff every variable has a pure power among the leading monomials.
  std::vector<int> box(n, -1);
  for (const auto& m : lm) {
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i] == m.degree() && m[i] > 0) {
        if (box[i] < 0 || m[i] < box[i]) box[i] = m[i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (box[i] < 0) return std::nullopt;
  long count = 0;
  Monomial probe(n);
  auto rec = [&](auto&& self, std::size_t var) -> void {
    if (var == n) {
      for (const auto& m : lm)
        if (m.divides(probe)) return;
      ++count;
      return;
    }
    for (int e = 0; e < box[var]; ++e) {
      probe[var] = e;
      self(self, var + 1);
    }
    probe[var] = 0;
  };
  rec(rec, 0);
  return count;
}

/// Generators of the elimination ideal: intersect with the subring in the
/// variables after the first `drop_count`. Output context drops that block.
inline std::vector<Polynomial> eliminate(const std::vector<Polynomial>& gens,
                                         std::size_t drop_count,
                                         const BasisOptions& opts = {}) {
  if (gens.empty()) throw Error("eliminate: empty generator list");
  const auto& vars = gens.front().vars();
  if (drop_count == 0 || drop_count >= vars.size())
    throw Error("eliminate: drop block must be a proper nonempty prefix");
  BasisResult gb = groebner(gens, MonomialOrder::elimination(drop_count), opts);
  std::vector<std::string> rest(vars.begin() + static_cast<std::ptrdiff_t>(drop_count), vars.end());
  std::vector<Polynomial> out;
  for (const auto& g : gb.generators) {
    bool uses_dropped = false;
    for (const auto& [m, c] : g.terms())
      for (std::size_t i = 0; i < drop_count && !uses_dropped; ++i)
        if (m[i] > 0) uses_dropped = true;
    if (uses_dropped) continue;
    Polynomial q(rest);
    for (const auto& [m, c] : g.terms()) {
      Monomial rm(rest.size());
      for (std::size_t i = drop_count; i < vars.size(); ++i) rm[i - drop_count] = m[i];
      q.add_term(rm, c);
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace lojax
