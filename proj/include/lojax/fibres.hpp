#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "lojax/polynomial.hpp"
#include "lojax/rng.hpp"

namespace lojax {

using Cplx = std::complex<double>;
using ComplexPoint = std::vector<Cplx>;

inline double norm2(const ComplexPoint& z) {
  double s = 0.0;
  for (const auto& zi : z) s += std::norm(zi);
  return s;
}
inline double norm(const ComplexPoint& z) { return std::sqrt(norm2(z)); }
inline double distance(const ComplexPoint& a, const ComplexPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}
inline bool in_polydisc(const ComplexPoint& z, double radius) {
  for (const auto& zi : z)
    if (std::abs(zi) > radius * (1.0 + 1e-9)) return false;
  return true;
}

/// Square polynomial map with its exact Jacobian precomputed once.
class PolyMap {
public:
  explicit PolyMap(std::vector<Polynomial> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw Error("polynomial map needs at least one component");
    const auto& vars = comps_.front().vars();
    for (const auto& c : comps_)
      if (c.vars() != vars) throw Error("polynomial map: mixed contexts");
    jac_.resize(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i)
      for (std::size_t j = 0; j < vars.size(); ++j) jac_[i].push_back(comps_[i].derivative(j));
  }

  std::size_t dimension() const { return comps_.front().nvars(); }
  std::size_t n_components() const { return comps_.size(); }
  const std::vector<Polynomial>& components() const { return comps_; }
  const std::vector<std::string>& vars() const { return comps_.front().vars(); }

  ComplexPoint evaluate(const ComplexPoint& z) const {
    ComplexPoint v(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) v[i] = comps_[i].evaluate(z);
    return v;
  }

  /// Row-major n_components x dimension Jacobian at z.
  std::vector<Cplx> jacobian(const ComplexPoint& z) const {
    std::vector<Cplx> J(comps_.size() * dimension());
    for (std::size_t i = 0; i < comps_.size(); ++i)
      for (std::size_t j = 0; j < dimension(); ++j) J[i * dimension() + j] = jac_[i][j].evaluate(z);
    return J;
  }

private:
  std::vector<Polynomial> comps_;
  std::vector<std::vector<Polynomial>> jac_;
};

/// In-place LU solve with partial pivoting; false on a (near) singular matrix.
inline bool lu_solve(std::vector<Cplx>& A, ComplexPoint& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(A[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::abs(A[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-154) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      Cplx factor = A[r * n + col] / A[col * n + col];
      if (factor == Cplx(0.0, 0.0)) continue;
      for (std::size_t c = col; c < n; ++c) A[r * n + c] -= factor * A[col * n + c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    Cplx acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= A[r * n + c] * b[c];
    b[r] = acc / A[r * n + r];
  }
  return true;
}

struct FibreConfig {
  double rho = 0.5;              // polydisc radius (the neighbourhood of the covering)
  double newton_tol = 1e-12;     // residual tolerance
  double dedupe_radius = 1e-8;   // distinct-root separation
  int multistarts_per_sheet = 200;
  int max_newton_iters = 50;
  int polish_iters = 10;
  int max_halvings = 4;          // spurious-far-root response
  bool auto_halve = true;
  std::uint64_t seed = 0x4C4F4A4158ULL;

  void validate() const {
    if (rho <= 0.0) throw Error("fibre config: rho must be positive");
    if (dedupe_radius <= newton_tol)
      throw Error("fibre config: dedupe radius must exceed the newton tolerance");
  }
};

struct Fibre {
  ComplexPoint w;
  std::vector<ComplexPoint> points;  // pairwise > dedupe_radius apart, sorted
  bool complete = false;             // found exactly mu_target distinct points
  double max_residual = 0.0;
  double rho_used = 0.0;
  int lost_paths = 0;  // continuation bookkeeping (track_ray only)
};

/// Damped Newton iteration for g(z) = w from z0. Returns nullopt on a
/// singular Jacobian or failure to reach the tolerance within the budget.
/// Converged roots are polished with full steps while the residual improves,
/// so clustered sheets collapse below the dedupe radius.
inline std::optional<ComplexPoint> newton_refine(const PolyMap& g, const ComplexPoint& w,
                                                 ComplexPoint z0, const FibreConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.dimension();
  if (g.n_components() != n) throw Error("newton: map is not square");
  if (w.size() != n || z0.size() != n) throw Error("newton: dimension mismatch");

  auto residual = [&](const ComplexPoint& z) {
    ComplexPoint r = g.evaluate(z);
    for (std::size_t i = 0; i < n; ++i) r[i] -= w[i];
    return r;
  };

  ComplexPoint z = std::move(z0);
  ComplexPoint r = residual(z);
  double rn = norm(r);
  bool converged = rn <= cfg.newton_tol;
  for (int it = 0; it < cfg.max_newton_iters && !converged; ++it) {
    std::vector<Cplx> J = g.jacobian(z);
    ComplexPoint step = r;
    if (!lu_solve(J, step, n)) return std::nullopt;
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h < 7; ++h) {
      ComplexPoint zt(n);
      for (std::size_t i = 0; i < n; ++i) zt[i] = z[i] - lambda * step[i];
      ComplexPoint rt = residual(zt);
      double rtn = norm(rt);
      if (rtn < rn) {
        z = std::move(zt);
        r = std::move(rt);
        rn = rtn;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) return std::nullopt;
    converged = rn <= cfg.newton_tol;
  }
  if (!converged) return std::nullopt;
  for (int p = 0; p < cfg.polish_iters && rn > 0.0; ++p) {
    std::vector<Cplx> J = g.jacobian(z);
    ComplexPoint step = r;
    if (!lu_solve(J, step, n)) break;
    ComplexPoint zt(n);
    for (std::size_t i = 0; i < n; ++i) zt[i] = z[i] - step[i];
    ComplexPoint rt = residual(zt);
    double rtn = norm(rt);
    if (rtn >= rn) break;
    z = std::move(zt);
    r = std::move(rt);
    rn = rtn;
  }
  return z;
}

namespace detail {

inline void dedupe_insert(std::vector<ComplexPoint>& points, ComplexPoint z, double delta) {
  for (const auto& p : points)
    if (distance(p, z) <= delta) return;
  points.push_back(std::move(z));
}

inline void sort_points(std::vector<ComplexPoint>& points) {
  std::sort(points.begin(), points.end(), [](const ComplexPoint& a, const ComplexPoint& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
      if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
  });
}

inline double fibre_residual(const PolyMap& g, const ComplexPoint& w,
                             const std::vector<ComplexPoint>& points) {
  double worst = 0.0;
  for (const auto& z : points) {
    ComplexPoint r = g.evaluate(z);
    for (std::size_t i = 0; i < w.size(); ++i) r[i] -= w[i];
    worst = std::max(worst, norm(r));
  }
  return worst;
}

}  // namespace detail

/// Multistart Newton solve of g(z) = w inside the polydisc. An incomplete
/// fibre (count != mu_target) is reported, never hidden. If more than
/// mu_target distinct roots enter, the polydisc is halved and the solve
/// rerun, up to max_halvings times.
inline Fibre solve_fibre(const PolyMap& g, const ComplexPoint& w, long mu_target,
                         const FibreConfig& cfg, std::uint64_t stream = 0) {
  cfg.validate();
  if (mu_target < 1) throw Error("solve_fibre: mu_target must be >= 1");
  const std::size_t n = g.dimension();
  const long starts = cfg.multistarts_per_sheet * mu_target;
  double rho = cfg.rho;
  std::vector<ComplexPoint> points;
  for (int attempt = 0;; ++attempt) {
    points.clear();
    for (long s = 0; s < starts; ++s) {
      Rng rng(derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(attempt),
                          static_cast<std::uint64_t>(s)));
      ComplexPoint z0 = rng.polydisc(n, rho);
      auto z = newton_refine(g, w, std::move(z0), cfg);
      if (z && in_polydisc(*z, rho)) detail::dedupe_insert(points, std::move(*z), cfg.dedupe_radius);
    }
    if (cfg.auto_halve && attempt < cfg.max_halvings &&
        points.size() > static_cast<std::size_t>(mu_target)) {
      rho *= 0.5;
      continue;
    }
    break;
  }
  detail::sort_points(points);
  Fibre f;
  f.w = w;
  f.max_residual = detail::fibre_residual(g, w, points);
  f.points = std::move(points);
  f.complete = f.points.size() == static_cast<std::size_t>(mu_target);
  f.rho_used = rho;
  return f;
}

/// Fibres along w = s * w0 for decreasing radii s. The largest radius is
/// solved by multistart; later radii continue by Newton from the previous
/// fibre points and are topped up by multistart when paths are lost.
inline std::vector<Fibre> track_ray(const PolyMap& g, const ComplexPoint& w0,
                                    const std::vector<double>& radii, long mu_target,
                                    const FibreConfig& cfg, std::uint64_t stream = 0) {
  cfg.validate();
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] < radii[k - 1])) throw Error("track_ray: radii must decrease");
  std::vector<Fibre> out;
  const std::size_t n = g.dimension();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    ComplexPoint w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = radii[k] * w0[i];
    if (k == 0) {
      out.push_back(solve_fibre(g, w, mu_target, cfg, derive_seed(stream, 0)));
      continue;
    }
    const Fibre& prev = out.back();
    std::vector<ComplexPoint> points;
    for (const auto& p : prev.points) {
      auto z = newton_refine(g, w, p, cfg);
      if (z && in_polydisc(*z, prev.rho_used))
        detail::dedupe_insert(points, std::move(*z), cfg.dedupe_radius);
    }
    int lost = static_cast<int>(prev.points.size()) - static_cast<int>(points.size());
    if (points.size() < static_cast<std::size_t>(mu_target)) {
      const long starts = cfg.multistarts_per_sheet * mu_target;
      for (long s = 0; s < starts; ++s) {
        Rng rng(derive_seed(cfg.seed, stream, k, static_cast<std::uint64_t>(s)));
        auto z = newton_refine(g, w, rng.polydisc(n, prev.rho_used), cfg);
        if (z && in_polydisc(*z, prev.rho_used))
          detail::dedupe_insert(points, std::move(*z), cfg.dedupe_radius);
      }
    }
    detail::sort_points(points);
    Fibre f;
    f.w = std::move(w);
    f.max_residual = detail::fibre_residual(g, f.w, points);
    f.points = std::move(points);
    f.complete = f.points.size() == static_cast<std::size_t>(mu_target);
    f.rho_used = prev.rho_used;
    f.lost_paths = std::max(lost, 0);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace lojax
