#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "lojax/errors.hpp"

namespace lojax {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p" or "p/q" with optional leading '-'. Throws ParseError.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&](const char* why) { return ParseError(0, std::string(why) + ": '" + text + "'"); };
  if (text.empty()) throw bad("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw bad("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw bad("invalid rational literal");
  }
}

}  // namespace lojax
