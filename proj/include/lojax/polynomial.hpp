#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lojax/gaussian.hpp"
#include "lojax/monomial.hpp"

namespace lojax {

/// Exact multivariate polynomial over Gaussian rationals, tied to an ordered
/// variable context. No zero coefficients are stored; term iteration is
/// graded-lexicographic, so every derived output is reproducible.
class Polynomial {
public:
  using Terms = std::map<Monomial, GaussianRational, GrlexLess>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial zero(std::vector<std::string> vars) { return Polynomial(std::move(vars)); }

  static Polynomial constant(std::vector<std::string> vars, GaussianRational c) {
    Polynomial p(std::move(vars));
    if (!c.is_zero()) p.terms_.emplace(Monomial(p.vars_.size()), std::move(c));
    return p;
  }

  static Polynomial variable(std::vector<std::string> vars, std::size_t index, int exponent = 1) {
    Polynomial p(std::move(vars));
    Monomial m(p.vars_.size());
    m[index] = exponent;
    if (exponent >= 0) p.terms_.emplace(std::move(m), GaussianRational(1));
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }

  GaussianRational constant_term() const {
    auto it = terms_.find(Monomial(vars_.size()));
    return it == terms_.end() ? GaussianRational(0) : it->second;
  }

  GaussianRational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? GaussianRational(0) : it->second;
  }

  void add_term(const Monomial& m, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
  }

  /// Order of vanishing at 0: minimum total degree of a stored term.
  /// std::nullopt encodes INFINITE (the zero polynomial).
  std::optional<int> ord_zero() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.degree();
  }

  /// Lowest-degree homogeneous part. Requires a nonzero polynomial.
  Polynomial initial_form() const {
    if (terms_.empty()) throw Error("initial form of the zero polynomial");
    int o = terms_.begin()->first.degree();
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_) {
      if (m.degree() != o) break;  // grlex: all order-o terms come first
      r.terms_.emplace(m, c);
    }
    return r;
  }

  /// Terms of exactly the given total degree (empty polynomial if none).
  Polynomial homogeneous_part(int deg) const {
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == deg) r.terms_.emplace(m, c);
    return r;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_) {
      int e = m[var];
      if (e == 0) continue;
      Monomial dm = m;
      dm[var] = e - 1;
      r.add_term(dm, c * GaussianRational(e));
    }
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check_context(b);
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    a.check_context(b);
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  Polynomial operator-() const {
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_context(b);
    Polynomial r(a.vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend Polynomial operator*(const GaussianRational& c, const Polynomial& p) {
    Polynomial r(p.vars_);
    if (c.is_zero()) return r;
    for (const auto& [m, pc] : p.terms_) r.terms_.emplace(m, c * pc);
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned e) const {
    Polynomial r = constant(vars_, GaussianRational(1));
    Polynomial base = *this;
    while (e) {
      if (e & 1u) r *= base;
      if (e >>= 1u) base *= base;
    }
    return r;
  }

  /// Numeric evaluation at a complex point (dimension must match). Terms are
  /// accumulated in canonical order with per-variable power tables.
  std::complex<double> evaluate(std::span<const std::complex<double>> z) const {
    if (z.size() != vars_.size()) throw Error("evaluation point dimension mismatch");
    std::vector<std::vector<std::complex<double>>> pw = power_tables(z);
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [m, c] : terms_) {
      std::complex<double> t = c.to_complex();
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (m[i] > 0) t *= pw[i][static_cast<std::size_t>(m[i])];
      acc += t;
    }
    return acc;
  }

  /// Exact evaluation at a Gaussian-rational point.
  GaussianRational evaluate_exact(std::span<const GaussianRational> z) const {
    if (z.size() != vars_.size()) throw Error("evaluation point dimension mismatch");
    GaussianRational acc(0);
    for (const auto& [m, c] : terms_) {
      GaussianRational t = c;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (m[i] > 0) t *= lojax::pow(z[i], static_cast<unsigned>(m[i]));
      acc += t;
    }
    return acc;
  }

  /// Exact scalar substitution for a subset of variables. The result lives in
  /// the context of the remaining (unbound) variables, in the original order.
  Polynomial substitute(const std::map<std::string, GaussianRational>& bindings) const {
    std::vector<std::string> rest;
    std::vector<std::size_t> keep;
    std::vector<std::optional<GaussianRational>> value(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto it = bindings.find(vars_[i]);
      if (it == bindings.end()) {
        keep.push_back(i);
        rest.push_back(vars_[i]);
      } else {
        value[i] = it->second;
      }
    }
    for (const auto& [name, v] : bindings)
      if (std::find(vars_.begin(), vars_.end(), name) == vars_.end())
        throw Error("substitute: unknown variable '" + name + "'");
    Polynomial r(rest);
    for (const auto& [m, c] : terms_) {
      GaussianRational coeff = c;
      Monomial rm(rest.size());
      for (std::size_t i = 0, j = 0; i < vars_.size(); ++i) {
        if (value[i]) {
          if (m[i] > 0) coeff *= lojax::pow(*value[i], static_cast<unsigned>(m[i]));
        } else {
          rm[j++] = m[i];
        }
      }
      r.add_term(rm, coeff);
    }
    return r;
  }

  /// Full polynomial substitution: every variable of *this is mapped to a
  /// polynomial over the given target context (variables absent from
  /// `bindings` must themselves be target variables and map to themselves).
  Polynomial substitute(const std::vector<std::string>& target_vars,
                        const std::map<std::string, Polynomial>& bindings) const {
    std::vector<Polynomial> image;
    image.reserve(vars_.size());
    for (const auto& name : vars_) {
      auto it = bindings.find(name);
      if (it != bindings.end()) {
        if (it->second.vars() != target_vars)
          throw Error("substitute: binding for '" + name + "' has a different context");
        image.push_back(it->second);
      } else {
        auto pos = std::find(target_vars.begin(), target_vars.end(), name);
        if (pos == target_vars.end())
          throw Error("substitute: variable '" + name + "' missing from target context");
        image.push_back(variable(target_vars, static_cast<std::size_t>(pos - target_vars.begin())));
      }
    }
    Polynomial acc = zero(target_vars);
    for (const auto& [m, c] : terms_) {
      Polynomial t = constant(target_vars, c);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (m[i] > 0) t *= image[i].pow(static_cast<unsigned>(m[i]));
      acc += t;
    }
    return acc;
  }

  /// Renders in the input grammar (highest-degree terms first).
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      std::string coeff = c.str();
      bool negated = false;
      if (c.is_real() && c.re < 0) {
        coeff = to_string(-c.re);
        negated = true;
      }
      std::string mono = monomial_str(m);
      std::string piece;
      if (mono.empty()) {
        piece = c.is_real() ? coeff : "(" + c.str() + ")";
        if (!c.is_real()) negated = false;
      } else if (c.is_real() && (c.re == 1 || c.re == -1) && c.im == 0) {
        negated = (c.re == -1);
        piece = mono;
      } else if (c.is_real()) {
        piece = coeff + "*" + mono;
      } else {
        piece = "(" + c.str() + ")*" + mono;
      }
      if (out.empty())
        out += negated ? "-" + piece : piece;
      else
        out += negated ? " - " + piece : " + " + piece;
    }
    return out;
  }

  std::string monomial_str(const Monomial& m) const {
    std::string s;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (m[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += vars_[i];
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s;
  }

private:
  void check_context(const Polynomial& other) const {
    if (vars_ != other.vars_) throw Error("polynomial context mismatch");
  }

  std::vector<std::vector<std::complex<double>>> power_tables(
      std::span<const std::complex<double>> z) const {
    std::vector<int> maxe(vars_.size(), 0);
    for (const auto& [m, c] : terms_)
      for (std::size_t i = 0; i < vars_.size(); ++i) maxe[i] = std::max(maxe[i], m[i]);
    std::vector<std::vector<std::complex<double>>> pw(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      pw[i].resize(static_cast<std::size_t>(maxe[i]) + 1);
      pw[i][0] = {1.0, 0.0};
      for (int e = 1; e <= maxe[i]; ++e) pw[i][static_cast<std::size_t>(e)] = pw[i][static_cast<std::size_t>(e - 1)] * z[i];
    }
    return pw;
  }

  std::vector<std::string> vars_;
  Terms terms_;
};

/// Partial derivatives with respect to an ordered subset of the context.
inline std::vector<Polynomial> gradient(const Polynomial& f, const std::vector<std::string>& wrt) {
  std::vector<Polynomial> g;
  g.reserve(wrt.size());
  for (const auto& name : wrt) {
    auto pos = std::find(f.vars().begin(), f.vars().end(), name);
    if (pos == f.vars().end()) throw Error("gradient: unknown variable '" + name + "'");
    g.push_back(f.derivative(static_cast<std::size_t>(pos - f.vars().begin())));
  }
  return g;
}

/// Gradient with respect to the full context.
inline std::vector<Polynomial> gradient(const Polynomial& f) { return gradient(f, f.vars()); }

}  // namespace lojax
