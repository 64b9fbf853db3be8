#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace toricdt {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Int>;
using RationalVector = std::vector<Rational>;

/// Bad input: malformed data, violated preconditions. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical invariant failed on data that passed input validation.
/// Maps to CLI exit code 2.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Int abs_value(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd(Int a, Int b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Int r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Int content(const IntVector& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline bool is_zero(const IntVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

/// Divides out the gcd of the coordinates. The zero vector is returned as is.
inline IntVector primitive(IntVector v) {
  const Int g = content(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

inline Int dot(const IntVector& a, const IntVector& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const IntVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

inline IntVector negated(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

/// Clears denominators and returns the primitive integer vector on the same ray.
inline IntVector primitive_integer_multiple(const RationalVector& v) {
  Int l = 1;
  for (const auto& x : v) {
    const Int d = boost::multiprecision::denominator(x);
    l = l / gcd(l, d) * d;
  }
  IntVector out;
  out.reserve(v.size());
  for (const auto& x : v)
    out.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
  return primitive(std::move(out));
}

inline std::string to_string(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + ")";
}

inline IntVector int_vector(std::initializer_list<long long> xs) {
  IntVector v;
  for (long long x : xs) v.emplace_back(x);
  return v;
}

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Returns p when q = p^e for a prime p and e >= 1, else 0.
inline Int prime_of_prime_power(Int q) {
  if (q < 2) return 0;
  Int p = 0;
  for (Int d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) return q;
  while (q % p == 0) q /= p;
  return q == 1 ? p : Int(0);
}

inline Int power(const Int& base, std::size_t e) {
  Int r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace toricdt
