#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "gdms/errors.hpp"

namespace gdms {

// Exact rational arithmetic for everything affine/triadic; quad-precision
// (113-bit mantissa) binary float for values of the form d^t that leave the
// rational field.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Quad = boost::multiprecision::cpp_bin_float_quad;

inline Quad to_quad(const Rat& r) {
  return Quad(boost::multiprecision::numerator(r)) /
         Quad(boost::multiprecision::denominator(r));
}

inline Int pow_int(Int base, unsigned long exp) {
  Int result = 1;
  while (exp) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

inline Rat pow_rat(const Rat& base, long exp) {
  if (exp == 0) return Rat(1);
  Int n = boost::multiprecision::numerator(base);
  Int d = boost::multiprecision::denominator(base);
  if (exp < 0) {
    if (n == 0) throw invalid_input("pow_rat: zero to negative power");
    std::swap(n, d);
    exp = -exp;
  }
  return Rat(pow_int(n, static_cast<unsigned long>(exp)),
             pow_int(d, static_cast<unsigned long>(exp)));
}

// d^t for d > 0. Single evaluation path so that every module producing a
// value for the same (d, t) produces the identical quad bits.
inline Quad pow_qt(const Quad& d, const Quad& t) {
  if (d <= 0) throw invalid_input("pow_qt: non-positive base");
  if (t == 0) return Quad(1);
  return exp(t * log(d));
}

inline Quad pow_qt(const Rat& d, const Quad& t) { return pow_qt(to_quad(d), t); }

// Parses "p/q", integer, or plain decimal strings to an exact rational.
inline Rat parse_rational(const std::string& s) {
  if (s.empty()) throw invalid_input("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Int num(s.substr(0, slash));
      Int den(s.substr(slash + 1));
      if (den == 0) throw invalid_input("rational with zero denominator: " + s);
      return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(Int(s));
    std::string head = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    Int scale = pow_int(10, static_cast<unsigned long>(frac.size()));
    Int num = Int(head) * scale + (frac.empty() ? Int(0) : Int(frac));
    Rat r(num, scale);
    return neg ? -r : r;
  } catch (const std::exception& e) {
    throw invalid_input("cannot parse rational '" + s + "': " + e.what());
  }
}

inline std::string rational_to_string(const Rat& r) {
  const Int& n = boost::multiprecision::numerator(r);
  const Int& d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

}  // namespace gdms
