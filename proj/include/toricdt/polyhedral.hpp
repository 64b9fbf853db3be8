#pragma once

// Homogeneous polyhedral sets given by linear constraints over Q, with exact
// feasibility (Fourier-Motzkin elimination, strict inequalities allowed),
// set differences of closed cones and extreme-ray enumeration.

#include <algorithm>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "toricdt/integer.hpp"
#include "toricdt/lattice.hpp"

namespace toricdt {

enum class Relation { ge, gt, eq };

/// coeffs . x  (>= | > | =)  0
struct LinearConstraint {
  IntVector coeffs;
  Relation rel = Relation::ge;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// {x in Q^dim : all constraints hold}.
struct HCone {
  std::size_t dim = 0;
  std::vector<LinearConstraint> constraints;

  bool contains(const RationalVector& x) const {
    for (const auto& c : constraints) {
      const Rational v = dot(c.coeffs, x);
      if ((c.rel == Relation::ge && v < 0) || (c.rel == Relation::gt && v <= 0) || (c.rel == Relation::eq && v != 0))
        return false;
    }
    return true;
  }

  HCone intersected(const HCone& other) const {
    HCone out = *this;
    out.constraints.insert(out.constraints.end(), other.constraints.begin(), other.constraints.end());
    return out;
  }

  /// {y : M y in this}.
  HCone pulled_back(const IntMatrix& m) const {
    HCone out;
    out.dim = m.cols();
    for (const auto& c : constraints) out.constraints.push_back({m.pull_back(c.coeffs), c.rel});
    return out;
  }
};

namespace detail {

inline LinearConstraint normalized(LinearConstraint c) {
  c.coeffs = primitive(std::move(c.coeffs));
  if (c.rel == Relation::eq) {
    for (const auto& x : c.coeffs)
      if (x != 0) {
        if (x < 0) c.coeffs = negated(std::move(c.coeffs));
        break;
      }
  }
  return c;
}

// Deduplicates; a strict constraint absorbs the non-strict one with the same
// normal. Returns false if a constraint with zero coefficients is violated.
inline bool simplify(std::vector<LinearConstraint>& cs) {
  std::map<std::pair<IntVector, int>, Relation> seen;
  std::vector<LinearConstraint> out;
  for (auto& c : cs) {
    c = normalized(std::move(c));
    if (is_zero(c.coeffs)) {
      if (c.rel == Relation::gt) return false;
      continue;
    }
    const int kind = c.rel == Relation::eq ? 1 : 0;
    auto [it, inserted] = seen.try_emplace({c.coeffs, kind}, c.rel);
    if (!inserted && c.rel == Relation::gt) it->second = Relation::gt;
  }
  for (const auto& [key, rel] : seen) out.push_back({key.first, rel});
  cs = std::move(out);
  return true;
}

struct EqualityStep {
  std::size_t var;
  IntVector eq;
};
struct EliminationStep {
  std::size_t var;
  std::vector<LinearConstraint> bounds;  // constraints with nonzero coefficient on var
};
using Step = std::variant<EqualityStep, EliminationStep>;

}  // namespace detail

/// A point satisfying every constraint, or nullopt if none exists. Exact.
inline std::optional<RationalVector> find_point(std::vector<LinearConstraint> cs, std::size_t dim) {
  using namespace detail;
  if (!simplify(cs)) return std::nullopt;
  std::vector<Step> steps;
  std::vector<bool> eliminated(dim, false);

  // Equalities first: Gaussian substitution keeps the inequality directions.
  for (;;) {
    auto it = std::find_if(cs.begin(), cs.end(), [](const LinearConstraint& c) { return c.rel == Relation::eq; });
    if (it == cs.end()) break;
    const IntVector e = it->coeffs;
    cs.erase(it);
    std::size_t var = 0;
    while (e[var] == 0) ++var;
    const Int ej = abs_value(e[var]);
    const int sign = e[var] > 0 ? 1 : -1;
    for (auto& c : cs) {
      if (c.coeffs[var] == 0) continue;
      const Int cj = c.coeffs[var];
      for (std::size_t k = 0; k < dim; ++k) c.coeffs[k] = ej * c.coeffs[k] - sign * cj * e[k];
    }
    steps.push_back(EqualityStep{var, e});
    eliminated[var] = true;
    if (!simplify(cs)) return std::nullopt;
  }

  for (;;) {
    std::optional<std::size_t> best;
    std::size_t best_cost = 0;
    for (std::size_t v = 0; v < dim; ++v) {
      if (eliminated[v]) continue;
      std::size_t pos = 0, neg = 0;
      for (const auto& c : cs) {
        if (c.coeffs[v] > 0) ++pos;
        if (c.coeffs[v] < 0) ++neg;
      }
      if (pos + neg == 0) continue;
      const std::size_t cost = pos * neg;
      if (!best || cost < best_cost) {
        best = v;
        best_cost = cost;
      }
    }
    if (!best) break;
    const std::size_t v = *best;
    std::vector<LinearConstraint> pos, neg, rest, bounds;
    for (auto& c : cs) {
      if (c.coeffs[v] > 0)
        pos.push_back(c);
      else if (c.coeffs[v] < 0)
        neg.push_back(c);
      else
        rest.push_back(c);
    }
    bounds = pos;
    bounds.insert(bounds.end(), neg.begin(), neg.end());
    for (const auto& p : pos)
      for (const auto& n : neg) {
        LinearConstraint comb;
        comb.coeffs.resize(dim);
        const Int a = -n.coeffs[v];
        const Int b = p.coeffs[v];
        for (std::size_t k = 0; k < dim; ++k) comb.coeffs[k] = a * p.coeffs[k] + b * n.coeffs[k];
        comb.rel = (p.rel == Relation::gt || n.rel == Relation::gt) ? Relation::gt : Relation::ge;
        rest.push_back(std::move(comb));
      }
    steps.push_back(EliminationStep{v, std::move(bounds)});
    eliminated[v] = true;
    cs = std::move(rest);
    if (!simplify(cs)) return std::nullopt;
  }
  // Remaining constraints are trivial; simplify() has already rejected 0 > 0.

  RationalVector x(dim);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (const auto* eqs = std::get_if<EqualityStep>(&*it)) {
      Rational rest = 0;
      for (std::size_t k = 0; k < dim; ++k)
        if (k != eqs->var) rest += Rational(eqs->eq[k]) * x[k];
      x[eqs->var] = -rest / Rational(eqs->eq[eqs->var]);
      continue;
    }
    const auto& el = std::get<EliminationStep>(*it);
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& c : el.bounds) {
      Rational rest = 0;
      for (std::size_t k = 0; k < dim; ++k)
        if (k != el.var) rest += Rational(c.coeffs[k]) * x[k];
      const Rational bound = -rest / Rational(c.coeffs[el.var]);
      const bool strict = c.rel == Relation::gt;
      if (c.coeffs[el.var] > 0) {
        if (!lo || bound > *lo || (bound == *lo && strict)) {
          lo = bound;
          lo_strict = strict;
        }
      } else {
        if (!hi || bound < *hi || (bound == *hi && strict)) {
          hi = bound;
          hi_strict = strict;
        }
      }
    }
    Rational val = 0;
    if (lo && hi) {
      if (*lo > *hi || (*lo == *hi && (lo_strict || hi_strict)))
        throw InvariantViolation("Fourier-Motzkin back substitution found an empty interval");
      val = (*lo == *hi) ? *lo : (*lo + *hi) / 2;
    } else if (lo) {
      val = *lo + 1;
    } else if (hi) {
      val = *hi - 1;
    }
    x[el.var] = val;
  }
  return x;
}

inline std::optional<RationalVector> find_point(const HCone& c) { return find_point(c.constraints, c.dim); }

namespace detail {

inline std::optional<RationalVector> difference_rec(const std::vector<LinearConstraint>& region, std::size_t dim,
                                                    const std::vector<HCone>& covers, std::size_t idx) {
  auto pt = find_point(region, dim);
  if (!pt) return pt;
  std::vector<LinearConstraint> prefix = region;
  for (;; ++idx) {
    if (idx == covers.size()) return pt;
    prefix.insert(prefix.end(), covers[idx].constraints.begin(), covers[idx].constraints.end());
    const bool meets = find_point(prefix, dim).has_value();
    prefix.resize(region.size());
    if (meets) break;
  }
  for (const auto& c : covers[idx].constraints) {
    std::vector<std::vector<LinearConstraint>> pieces;
    if (c.rel == Relation::eq) {
      pieces.push_back(prefix);
      pieces.back().push_back({c.coeffs, Relation::gt});
      pieces.push_back(prefix);
      pieces.back().push_back({negated(c.coeffs), Relation::gt});
    } else {
      // x outside {c >= 0} (or {c > 0}) means -c > 0 (or -c >= 0).
      pieces.push_back(prefix);
      pieces.back().push_back({negated(c.coeffs), c.rel == Relation::gt ? Relation::ge : Relation::gt});
    }
    for (const auto& piece : pieces)
      if (auto w = difference_rec(piece, dim, covers, idx + 1)) return w;
    prefix.push_back(c);
    if (!find_point(prefix, dim)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// A point of region \ (covers[0] u covers[1] u ...), or nullopt when the
/// region is covered. Exact: the region is split along the constraints of
/// each cover in turn.
inline std::optional<RationalVector> difference_witness(const HCone& region, const std::vector<HCone>& covers) {
  return detail::difference_rec(region.constraints, region.dim, covers, 0);
}

/// Extreme rays (primitive integer generators) of a pointed cone. Throws
/// InvariantViolation if the cone contains a line.
inline std::vector<IntVector> extreme_rays(const HCone& cone) {
  const std::size_t n = cone.dim;
  std::vector<IntVector> eqs, ineqs;
  for (const auto& c : cone.constraints) {
    if (c.rel == Relation::eq)
      eqs.push_back(c.coeffs);
    else if (c.rel == Relation::ge)
      ineqs.push_back(c.coeffs);
    else
      throw InputError("extreme_rays: strict constraints are not supported");
  }
  const std::size_t eq_rank = vector_rank(eqs, n);
  if (eq_rank >= n) return {};
  const std::size_t need = n - 1 - eq_rank;
  std::vector<IntVector> rays;
  auto consider = [&](const std::vector<IntVector>& rows) {
    const auto ker = nullspace(rows, n);
    if (ker.size() != 1) return;
    int ok_signs = 0;
    for (int sign : {1, -1}) {
      IntVector v = sign > 0 ? ker[0] : negated(ker[0]);
      bool inside = true;
      for (const auto& a : ineqs)
        if (dot(a, v) < 0) {
          inside = false;
          break;
        }
      if (!inside) continue;
      ++ok_signs;
      if (std::find(rays.begin(), rays.end(), v) == rays.end()) rays.push_back(v);
    }
    if (ok_signs == 2) throw InvariantViolation("extreme_rays: cone contains a line");
  };
  if (need > ineqs.size()) return {};
  std::vector<std::size_t> idx(need);
  for (std::size_t i = 0; i < need; ++i) idx[i] = i;
  for (;;) {
    std::vector<IntVector> rows = eqs;
    for (auto i : idx) rows.push_back(ineqs[i]);
    consider(rows);
    std::size_t k = need;
    while (k > 0 && idx[k - 1] == ineqs.size() - need + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < need; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(rays.begin(), rays.end());
  return rays;
}

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    std::size_t j = k;
    while (j > 0 && idx[j - 1] == n - k + j - 1) --j;
    if (j == 0) break;
    ++idx[j - 1];
    for (std::size_t t = j; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

}  // namespace toricdt
