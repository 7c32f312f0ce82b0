#pragma once

#include <optional>

#include "lojax/basis.hpp"

namespace lojax {

/// A polynomial germ at the origin: f(0) = 0 is enforced at construction
/// (nonzero constant terms are rejected, never translated away).
class Germ {
public:
  explicit Germ(Polynomial f) : f_(std::move(f)) {
    if (!f_.constant_term().is_zero())
      throw PreconditionError("germ must vanish at the origin (nonzero constant term)");
  }

  const Polynomial& poly() const { return f_; }
  const std::vector<std::string>& vars() const { return f_.vars(); }

  const std::optional<long>& cached_mu() const { return mu_; }
  void cache_mu(long mu) const { mu_ = mu; }

private:
  Polynomial f_;
  mutable std::optional<long> mu_;
};

/// Local Jacobian quotient dimension; nullopt = positive-dimensional critical
/// locus at the origin.
inline std::optional<long> milnor_number_opt(const Germ& g, const BasisOptions& opts = {}) {
  if (g.cached_mu()) return *g.cached_mu();
  BasisResult sb = local_standard_basis(gradient(g.poly()), opts);
  std::optional<long> dim = quotient_dimension(sb);
  if (dim) g.cache_mu(*dim);
  return dim;
}

/// Milnor number of the germ at zero. Throws NotIsolatedError when the
/// critical locus through the origin is positive-dimensional.
inline long milnor_number(const Germ& g, const BasisOptions& opts = {}) {
  std::optional<long> mu = milnor_number_opt(g, opts);
  if (!mu)
    throw NotIsolatedError("the singularity of '" + g.poly().str() +
                           "' at the origin is not isolated");
  return *mu;
}

inline bool is_isolated_singularity(const Germ& g, const BasisOptions& opts = {}) {
  return milnor_number_opt(g, opts).has_value();
}

}  // namespace lojax
