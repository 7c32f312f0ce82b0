#pragma once

#include <complex>
#include <string>

#include "lojax/rational.hpp"

namespace lojax {

/// Exact complex number a + b*i with rational a, b. Field arithmetic throughout.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design
  GaussianRational(long n) : re(n) {}                 // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  bool is_one() const { return re == 1 && im == 0; }

  /// |z|^2 as an exact rational.
  Rational norm2() const { return re * re + im * im; }

  GaussianRational conj() const { return {re, -im}; }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    if (a.im == 0 && b.im == 0) return {a.re * b.re, Rational(0)};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    if (b.is_zero()) throw Error("division by zero");
    if (a.im == 0 && b.im == 0) return {a.re / b.re, Rational(0)};
    Rational n = b.norm2();
    GaussianRational num = a * b.conj();
    return {num.re / n, num.im / n};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  /// Total order used only for deterministic tie-breaking, not magnitude.
  friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }

  /// Renders in the input grammar: "3", "-1/2", "i", "2*i", "1/2+3*i".
  std::string str() const {
    if (is_zero()) return "0";
    if (im == 0) return to_string(re);
    std::string im_part;
    if (im == 1) im_part = "i";
    else if (im == -1) im_part = "-i";
    else im_part = to_string(im) + "*i";
    if (re == 0) return im_part;
    if (im > 0 && im_part[0] != '-') return to_string(re) + "+" + im_part;
    return to_string(re) + im_part;  // im_part carries its sign
  }
};

inline GaussianRational pow(const GaussianRational& b, unsigned e) {
  GaussianRational r(1);
  GaussianRational base = b;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

}  // namespace lojax
