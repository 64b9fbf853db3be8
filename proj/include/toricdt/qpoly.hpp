#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toricdt/integer.hpp"

namespace toricdt {

/// Polynomial in q with exact integer coefficients; coeffs()[k] is the
/// coefficient of q^k. The coefficient of q^k of a cohomology polynomial is
/// the dimension of the weight 2k piece in degree 2k.
class QPolynomial {
 public:
  QPolynomial() = default;
  QPolynomial(Int constant) : coeffs_{std::move(constant)} { trim(); }
  QPolynomial(long long constant) : QPolynomial(Int(constant)) {}
  explicit QPolynomial(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static QPolynomial from(std::initializer_list<long long> cs) {
    std::vector<Int> v;
    for (auto c : cs) v.emplace_back(c);
    return QPolynomial(std::move(v));
  }
  static QPolynomial monomial(std::size_t k, Int c = 1) {
    std::vector<Int> v(k + 1);
    v[k] = std::move(c);
    return QPolynomial(std::move(v));
  }
  /// (q - 1)^k
  static QPolynomial q_minus_one_power(std::size_t k) {
    QPolynomial r(1);
    const QPolynomial base = from({-1, 1});
    for (std::size_t i = 0; i < k; ++i) r = r * base;
    return r;
  }

  const std::vector<Int>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  Int coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Int(0); }

  Int evaluate(const Int& q) const {
    Int r = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * q + *it;
    return r;
  }

  bool has_nonnegative_coefficients() const {
    for (const auto& c : coeffs_)
      if (c < 0) return false;
    return true;
  }

  /// q^n p(1/q); requires degree <= n.
  QPolynomial reflected(std::size_t n) const {
    std::vector<Int> v(n + 1);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) v.at(n - k) = coeffs_[k];
    return QPolynomial(std::move(v));
  }

  bool is_palindromic(std::size_t n) const {
    return degree() <= static_cast<long>(n) && reflected(n) == *this;
  }

  /// Exact division by (q - 1)^k, or nullopt when there is a remainder.
  std::optional<QPolynomial> divided_by_q_minus_one_power(std::size_t k) const {
    std::vector<Int> cur = coeffs_;
    for (std::size_t i = 0; i < k; ++i) {
      if (cur.empty()) return QPolynomial();
      // synthetic division by (q - 1)
      std::vector<Int> quot(cur.size() - 1);
      Int carry = 0;
      for (std::size_t j = cur.size(); j-- > 1;) {
        carry += cur[j];
        quot[j - 1] = carry;
      }
      if (carry + cur[0] != 0) return std::nullopt;
      cur = std::move(quot);
    }
    return QPolynomial(std::move(cur));
  }

  QPolynomial& operator+=(const QPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  QPolynomial& operator-=(const QPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
  friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }
  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return QPolynomial(std::move(v));
  }
  friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

  /// "1 + 2q + q^2"
  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const Int& c = coeffs_[k];
      if (c == 0) continue;
      const Int a = abs_value(c);
      if (s.empty())
        s += c < 0 ? "-" : "";
      else
        s += c < 0 ? " - " : " + ";
      if (k == 0 || a != 1) s += a.str();
      if (k >= 1) s += "q";
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<Int> coeffs_;
};

}  // namespace toricdt
