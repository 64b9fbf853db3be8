#pragma once

// Stalks of intersection complexes of toric varieties at torus-fixed points,
// and IH Poincare polynomials.
//
// For a cone c of dimension n with proper faces tau, set
//   S(q) = sum_{tau < c} g_tau(q) (q - 1)^(n - dim tau).
// The stalk polynomial g_c satisfies q^n g_c(1/q) = S(q) + g_c(q) with
// deg g_c < n/2, so g_c is read off the low half of -S and the high half of S
// is an independent consistency check.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "toricdt/cone.hpp"
#include "toricdt/fan.hpp"
#include "toricdt/qpoly.hpp"

namespace toricdt {

class ConsistencyFailure : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class NotComplete : public InputError {
 public:
  using InputError::InputError;
};

class NotContractibleType : public InputError {
 public:
  using InputError::InputError;
};

/// Memo table of stalk polynomials keyed by the exact ray set of a cone.
/// Safe to share between threads.
class GCache {
 public:
  std::optional<QPolynomial> find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    ++hits_;
    return it->second;
  }
  void insert(const std::string& key, const QPolynomial& g) {
    std::lock_guard lock(mutex_);
    table_.emplace(key, g);
  }
  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return table_.size();
  }
  std::size_t hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
  }

  static GCache& shared() {
    static GCache cache;
    return cache;
  }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, QPolynomial> table_;
  mutable std::size_t hits_ = 0;
};

namespace detail {

// g from the g's of the proper faces. `face_dims` and `face_gs` describe the
// proper faces of a cone of dimension n.
inline QPolynomial g_from_faces(std::size_t n, const std::vector<std::size_t>& face_dims,
                                const std::vector<QPolynomial>& face_gs, const std::string& what) {
  if (n == 0) return QPolynomial(1);
  QPolynomial s;
  for (std::size_t i = 0; i < face_dims.size(); ++i)
    s += face_gs[i] * QPolynomial::q_minus_one_power(n - face_dims[i]);
  std::vector<Int> low;
  for (std::size_t k = 0; 2 * k < n; ++k) low.push_back(-s.coeff(k));
  QPolynomial g(std::move(low));
  for (std::size_t k = 0; k <= n; ++k) {
    if (2 * k < n) continue;
    const Int expect = (2 * k == n) ? Int(0) : g.coeff(n - k);
    if (s.coeff(k) != expect)
      throw ConsistencyFailure("ConsistencyFailure: stalk recursion for " + what + " mismatches at degree " +
                               std::to_string(k) + " (S = " + s.to_string() + ")");
  }
  if (s.degree() > static_cast<long>(n)) throw ConsistencyFailure("ConsistencyFailure: deg S > dim for " + what);
  return g;
}

}  // namespace detail

/// Stalk polynomial g_c(q) of the intersection complex of U_c at its
/// distinguished point. Depends only on the face lattice of c.
inline QPolynomial g_stalk(const Cone& c, GCache& cache = GCache::shared()) {
  if (auto hit = cache.find(c.key())) return *hit;
  const auto fs = faces(c);  // sorted by dim; fs.back() == c
  std::vector<QPolynomial> gs(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (auto hit = cache.find(fs[i].key())) {
      gs[i] = *hit;
      continue;
    }
    std::vector<std::size_t> dims;
    std::vector<QPolynomial> sub;
    for (std::size_t j = 0; j < i; ++j) {
      if (fs[j].dim() >= fs[i].dim()) continue;
      if (!std::includes(fs[i].rays().begin(), fs[i].rays().end(), fs[j].rays().begin(), fs[j].rays().end()))
        continue;
      dims.push_back(fs[j].dim());
      sub.push_back(gs[j]);
    }
    gs[i] = detail::g_from_faces(fs[i].dim(), dims, sub, fs[i].to_string());
    cache.insert(fs[i].key(), gs[i]);
  }
  return gs.back();
}

/// Stalk of the intersection complex of V(tau) at the distinguished point of
/// O(sigma), tau <= sigma.
inline QPolynomial local_ih(const Fan& f, std::size_t tau, std::size_t sigma, GCache& cache = GCache::shared()) {
  if (!f.is_face(tau, sigma)) throw InputError("local_ih: tau is not a face of sigma");
  if (tau == sigma) return QPolynomial(1);
  const LatticeSplitting split = split_along(f.cone(tau).rays(), f.rank());
  const Cone image = project_cone(f.cone(sigma), split.to_quotient());
  QPolynomial g = g_stalk(image, cache);
  const std::size_t rel = f.cone(sigma).dim() - f.cone(tau).dim();
  if (2 * g.degree() >= static_cast<long>(rel))
    throw ConsistencyFailure("ConsistencyFailure: local IH violates the support degree bound");
  return g;
}

/// IH Poincare polynomial of a complete toric variety,
/// sum_sigma g_sigma(q) (q - 1)^(rank - dim sigma).
inline QPolynomial global_ih(const Fan& f, GCache& cache = GCache::shared()) {
  if (auto w = completeness_witness(f)) throw NotComplete("NotComplete: " + to_string(*w) + " is not in the support");
  QPolynomial p;
  for (const auto& c : f.cones()) p += g_stalk(c, cache) * QPolynomial::q_minus_one_power(f.rank() - c.dim());
  if (!p.has_nonnegative_coefficients())
    throw ConsistencyFailure("ConsistencyFailure: IH polynomial " + p.to_string() + " has a negative coefficient");
  if (!p.is_palindromic(f.rank()))
    throw ConsistencyFailure("ConsistencyFailure: IH polynomial " + p.to_string() + " is not palindromic");
  return p;
}

/// Global IH of a contractible-type toric variety: equal to the stalk at its fixed point.
inline QPolynomial ih_contractible(const Fan& f, GCache& cache = GCache::shared()) {
  const auto zeta = contractible_type(f);
  if (!zeta) throw NotContractibleType("NotContractibleType: fan is not the face fan of a spanning cone");
  return g_stalk(*zeta, cache);
}

}  // namespace toricdt
