#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "lojax/exponent.hpp"
#include "lojax/family.hpp"

namespace lojax {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";  // clamped below
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void json_escape(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      case '\r': os << "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

}  // namespace detail

/// Serializes with a fixed float policy: every double is rendered with up to
/// 17 significant digits (round-trip exact), so identical inputs produce
/// byte-identical reports.
inline void write_json(std::ostream& os, const Json& j, int indent = 2, int depth = 0) {
  auto pad = [&](int d) {
    for (int i = 0; i < d * indent; ++i) os << ' ';
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        pad(depth + 1);
        detail::json_escape(os, it.key());
        os << ": ";
        write_json(os, it.value(), indent, depth + 1);
        if (i + 1 < j.size()) os << ",";
        os << "\n";
      }
      pad(depth);
      os << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        write_json(os, j[i], indent, depth + 1);
        if (i + 1 < j.size()) os << ",";
        os << "\n";
      }
      pad(depth);
      os << "]";
      return;
    }
    case Json::value_t::string:
      detail::json_escape(os, j.get<std::string>());
      return;
    case Json::value_t::boolean:
      os << (j.get<bool>() ? "true" : "false");
      return;
    case Json::value_t::number_float: {
      double v = j.get<double>();
      if (std::isnan(v) || std::isinf(v))
        os << "null";
      else
        os << detail::format_double(v);
      return;
    }
    case Json::value_t::number_integer:
      os << j.get<long long>();
      return;
    case Json::value_t::number_unsigned:
      os << j.get<unsigned long long>();
      return;
    default:
      os << "null";
      return;
  }
}

inline std::string json_to_string(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Domain value -> JSON

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const GaussianRational& c) { return c.str(); }

inline Json to_json(const Cplx& z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const ComplexPoint& p) {
  Json a = Json::array();
  for (const auto& z : p) a.push_back(to_json(z));
  return a;
}

inline Json to_json(const GridPoint& p) {
  Json a = Json::array();
  for (const auto& c : p) a.push_back(Json::array({to_string(c.re), to_string(c.im)}));
  return a;
}

inline Json to_json(const OrderEstimate& e) {
  Json j;
  j["j"] = e.j;
  if (e.infinite())
    j["ord"] = "INFINITE";
  else
    j["ord"] = *e.value;
  j["method"] = e.method == OrderEstimate::Method::exact ? "exact" : "fitted";
  if (e.method == OrderEstimate::Method::fitted && !e.infinite()) {
    j["slope"] = e.slope;
    j["max_fit_residual"] = e.max_fit_residual;
    j["stable"] = e.stable;
  }
  return j;
}

inline Json to_json(const ShellReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["constant"] = r.constant;
  j["constant_shell"] = r.constant_shell;
  j["samples_per_shell"] = r.samples_per_shell;
  j["f_below_one"] = r.f_below_one;
  j["radii"] = r.radii;
  j["sup_q"] = r.sup_q;
  j["max_abs_f"] = r.max_abs_f;
  return j;
}

inline Json to_json(const CharPoly& P) {
  Json j;
  j["mu"] = P.mu;
  j["method"] = P.is_exact() ? "exact" : "numeric";
  if (P.is_exact()) {
    j["P"] = P.eliminant.str();
    j["vars"] = P.eliminant.vars();
    Json coeffs = Json::array();
    for (std::size_t k = 0; k < P.exact_coeffs.size(); ++k) {
      Json c;
      c["j"] = k + 1;
      c["a_j"] = P.exact_coeffs[k].str();
      coeffs.push_back(std::move(c));
    }
    j["coefficients"] = std::move(coeffs);
  } else {
    Json rays = Json::array();
    for (const auto& ray : P.rays) {
      Json r;
      r["direction"] = to_json(ray.direction);
      r["radii"] = ray.radii;
      r["usable"] = ray.usable;
      r["lost_paths"] = ray.lost_paths;
      rays.push_back(std::move(r));
    }
    j["rays"] = std::move(rays);
  }
  return j;
}

inline Json to_json(const ExponentCertificate& c) {
  Json j;
  j["theta"] = to_json(c.theta);
  j["theta_float"] = to_double(c.theta);
  j["maximizing_j"] = c.maximizing_j;
  j["mu"] = c.mu;
  j["bound_ok"] = c.bound_ok;
  j["mu_over_mu_plus_1"] = to_json(Rational(c.mu, c.mu + 1));
  j["method"] = c.method == CharPolyMethod::exact ? "exact" : "numeric";
  Json orders = Json::array();
  for (const auto& e : c.orders) orders.push_back(to_json(e));
  j["orders"] = std::move(orders);
  return j;
}

// ---------------------------------------------------------------------------
// CSV emitters

inline std::string csv_shells(const ShellReport& r) {
  std::ostringstream os;
  os << "radius,sup_q,max_abs_f,argmax\n";
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    os << detail::format_double(r.radii[i]) << "," << detail::format_double(r.sup_q[i]) << ","
       << detail::format_double(r.max_abs_f[i]) << ",\"";
    for (std::size_t c = 0; c < r.argmax[i].size(); ++c) {
      if (c) os << ";";
      os << detail::format_double(r.argmax[i][c].real()) << "+"
         << detail::format_double(r.argmax[i][c].imag()) << "i";
    }
    os << "\"\n";
  }
  return os.str();
}

inline std::string csv_coefficient_samples(const CharPoly& P) {
  std::ostringstream os;
  os << "ray,radius,j,re_a_j,im_a_j,usable\n";
  for (std::size_t r = 0; r < P.rays.size(); ++r) {
    const auto& ray = P.rays[r];
    for (std::size_t k = 0; k < ray.radii.size(); ++k) {
      for (long j = 1; j <= P.mu; ++j) {
        os << r << "," << detail::format_double(ray.radii[k]) << "," << j << ",";
        if (ray.usable[k]) {
          const Cplx& v = ray.coeff_values[k][static_cast<std::size_t>(j - 1)];
          os << detail::format_double(v.real()) << "," << detail::format_double(v.imag()) << ",1\n";
        } else {
          os << ",,0\n";
        }
      }
    }
  }
  return os.str();
}

inline std::string csv_fibres(const std::vector<Fibre>& fibres) {
  std::ostringstream os;
  os << "radius_index,point_index,coordinates,residual,complete\n";
  for (std::size_t k = 0; k < fibres.size(); ++k) {
    const Fibre& f = fibres[k];
    for (std::size_t p = 0; p < f.points.size(); ++p) {
      os << k << "," << p << ",\"";
      for (std::size_t c = 0; c < f.points[p].size(); ++c) {
        if (c) os << ";";
        os << detail::format_double(f.points[p][c].real()) << "+"
           << detail::format_double(f.points[p][c].imag()) << "i";
      }
      os << "\"," << detail::format_double(f.max_residual) << "," << (f.complete ? 1 : 0) << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG scatter (pure emission, no display dependency)

/// Log-log scatter of (log ||grad f||, log |f|) samples with the line of
/// slope 1/theta through the anchor point overlaid.
inline std::string svg_loglog_scatter(const std::vector<std::pair<double, double>>& pts,
                                      double theta, const std::string& title) {
  const double W = 640, H = 480, L = 60, R = 20, T = 40, B = 50;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    if (first) {
      xmin = xmax = x;
      ymin = ymax = y;
      first = false;
    } else {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax - xmin < 1e-9) xmax = xmin + 1;
  if (ymax - ymin < 1e-9) ymax = ymin + 1;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  auto num = [&](double v) { return detail::format_double(v); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"12\">log ||grad f||</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << H / 2
     << ")\">log |f|</text>\n";
  for (int corner = 0; corner < 2; ++corner) {
    double xv = corner ? xmax : xmin;
    double yv = corner ? ymax : ymin;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 16
       << "\" text-anchor=\"middle\" font-size=\"10\">" << num(xv) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 3
       << "\" text-anchor=\"end\" font-size=\"10\">" << num(yv) << "</text>\n";
  }
  // Reference line of slope 1/theta anchored at the sample maximizing
  // y - x/theta (the tightest bound line lies on or above every sample).
  if (theta > 0 && !pts.empty()) {
    double best = -1e308;
    for (const auto& [x, y] : pts)
      if (std::isfinite(x) && std::isfinite(y)) best = std::max(best, y - x / theta);
    double y0 = best + xmin / theta;
    double y1 = best + xmax / theta;
    os << "<line x1=\"" << sx(xmin) << "\" y1=\"" << sy(y0) << "\" x2=\"" << sx(xmax)
       << "\" y2=\"" << sy(y1) << "\" stroke=\"#c02020\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14
       << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#c02020\">slope 1/theta</text>\n";
  }
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y)
       << "\" r=\"2\" fill=\"#3060c0\" fill-opacity=\"0.6\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lojax
