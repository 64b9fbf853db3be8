#pragma once

// Numerical form of the decomposition theorem for proper toric maps: the
// multiplicities m_{sigma,k} of the summands I_{V(sigma)}(-k)[-2k] in
// R f_* I_X, recovered from fiber stalk polynomials by unitriangular
// elimination over the cone poset of the target.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricdt/fan.hpp"
#include "toricdt/ih.hpp"
#include "toricdt/qpoly.hpp"
#include "toricdt/toricmap.hpp"

namespace toricdt {

class InexactDivision : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class NegativeMultiplicity : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

/// One isotypic summand: multiplicity copies of IC(closure of the image orbit,
/// L)(-twist_k)[-2 twist_k], with L of rank ls_rank.
struct DTSummand {
  std::size_t support = 0;        // cone index in the support fan (target, or Stein intermediate)
  std::string support_id;
  std::optional<std::size_t> image_orbit;  // cone of the target containing the image orbit
  std::optional<std::string> image_orbit_id;
  int twist_k = 0;
  Int multiplicity = 0;
  Int ls_rank = 1;
  int dim_x = 0;
  int dim_v = 0;  // dim V(support)

  int shift() const { return 2 * twist_k; }
  /// Perverse degree b with twist (b + dim X - dim V)/2 = k.
  int b_index() const { return 2 * twist_k - dim_x + dim_v; }

  friend bool operator==(const DTSummand&, const DTSummand&) = default;
};

struct DTSummandTable {
  std::vector<DTSummand> entries;  // sorted by (support, twist_k)
  int dim_x = 0;
  std::optional<Int> p;
  bool fibration = true;

  /// m_{support, k}; zero when absent.
  Int multiplicity(std::size_t support, int k) const {
    for (const auto& e : entries)
      if (e.support == support && e.twist_k == k) return e.multiplicity;
    return 0;
  }

  std::vector<std::size_t> supports() const {
    std::vector<std::size_t> s;
    for (const auto& e : entries)
      if (std::find(s.begin(), s.end(), e.support) == s.end()) s.push_back(e.support);
    return s;
  }

  friend bool operator==(const DTSummandTable&, const DTSummandTable&) = default;
};

/// Twist beta = (b + dimX - dimV)/2 when b + dimX - dimV is even.
inline std::optional<int> ev_beta(int dim_x, int dim_v, int b) {
  const int s = b + dim_x - dim_v;
  if (s % 2 != 0) return std::nullopt;
  return s / 2;
}

/// Poincare polynomial of H*(f^-1(y_sigma), I_X) for a fibration:
///   [ sum_{bar xi = sigma} g_xi(q) (q - 1)^dim O(xi) ] / (q - 1)^dim O(sigma),
/// with the division required to be exact.
inline QPolynomial stalk_polynomial(const FanMap& f, std::size_t sigma, GCache& cache = GCache::shared()) {
  QPolynomial total;
  for (auto xi : f.preimage_cones(sigma))
    total += g_stalk(f.source.cone(xi), cache) * QPolynomial::q_minus_one_power(f.source.orbit_dim(xi));
  auto p = total.divided_by_q_minus_one_power(f.target.orbit_dim(sigma));
  if (!p)
    throw InexactDivision("InexactDivision: fiber count over " + f.target.cone(sigma).to_string() +
                          " is not divisible by (q-1)^" + std::to_string(f.target.orbit_dim(sigma)));
  if (p->coeff(0) < 1)
    throw InvariantViolation("stalk polynomial over " + f.target.cone(sigma).to_string() +
                             " has constant term < 1");
  return *p;
}

/// Summand table of a proper toric fibration. Cones of the target are visited
/// in increasing (dim, rays) order, a linear extension of the face order.
inline DTSummandTable deconvolve(const FanMap& f, GCache& cache = GCache::shared()) {
  if (!is_fibration(f)) throw InputError("deconvolve: map is not a proper toric fibration");
  DTSummandTable table;
  table.dim_x = static_cast<int>(f.source.rank());
  std::map<std::size_t, std::vector<Int>> mult;  // sigma -> m_{sigma,k}
  for (std::size_t sigma = 0; sigma < f.target.size(); ++sigma) {
    QPolynomial residual = stalk_polynomial(f, sigma, cache);
    for (auto tau : f.target.faces_of(sigma)) {
      if (tau == sigma) continue;
      auto it = mult.find(tau);
      if (it == mult.end()) continue;
      const QPolynomial g = local_ih(f.target, tau, sigma, cache);
      for (std::size_t k = 0; k < it->second.size(); ++k)
        if (it->second[k] != 0) residual -= QPolynomial::monomial(k, it->second[k]) * g;
    }
    if (!residual.has_nonnegative_coefficients())
      throw NegativeMultiplicity("NegativeMultiplicity: residual " + residual.to_string() + " over " +
                                 f.target.cone(sigma).to_string());
    if (!residual.is_zero()) mult[sigma] = residual.coeffs();
  }
  if (f.target.size() == 0 || mult.count(0) == 0 || mult[0].at(0) != 1)
    throw InvariantViolation("generic summand does not have multiplicity 1 at twist 0");
  for (const auto& [sigma, ms] : mult)
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (ms[k] == 0) continue;
      DTSummand s;
      s.support = sigma;
      s.support_id = f.target.cone(sigma).id();
      s.twist_k = static_cast<int>(k);
      s.multiplicity = ms[k];
      s.ls_rank = 1;
      s.dim_x = table.dim_x;
      s.dim_v = static_cast<int>(f.target.orbit_dim(sigma));
      table.entries.push_back(std::move(s));
    }
  return table;
}

/// Summand table of a proper toric map: deconvolve the fibration part of the
/// Stein factorization, then push each summand through the finite part. The
/// support becomes the closure of the image orbit and the coefficient system
/// has rank |Gamma|, which depends on p.
inline DTSummandTable summands_proper(const FanMap& f, const Int& p, GCache& cache = GCache::shared()) {
  if (!is_prime(p)) throw InputError("summands_proper: p must be prime");
  const SteinData st = stein_factorization(f);
  DTSummandTable table = deconvolve(st.g, cache);
  table.p = p;
  table.fibration = is_surjective(f.matrix);
  for (auto& e : table.entries) {
    const OrbitMapFactorization o = orbit_map_factorization(st.h, e.support, p);
    e.ls_rank = local_system_rank(o);
    if (!table.fibration) {
      e.image_orbit = o.target_orbit;
      e.image_orbit_id = f.target.cone(o.target_orbit).id();
    }
  }
  return table;
}

struct DualityViolation {
  std::size_t support;
  std::string support_id;
  int k;
  int k_dual;
  Int m;
  Int m_dual;
};

struct DualityReport {
  std::vector<DualityViolation> violations;
  bool pass() const { return violations.empty(); }
};

/// m_{sigma,k} = m_{sigma, dimX - dimV(sigma) - k}.
inline DualityReport verify_duality(const DTSummandTable& t) {
  DualityReport r;
  for (const auto& e : t.entries) {
    const int kd = e.dim_x - e.dim_v - e.twist_k;
    const Int md = kd < 0 ? Int(0) : t.multiplicity(e.support, kd);
    if (md != e.multiplicity) r.violations.push_back({e.support, e.support_id, e.twist_k, kd, e.multiplicity, md});
  }
  return r;
}

struct RhlViolation {
  std::size_t support;
  std::string support_id;
  int b;
  Int s_b;
  Int bound;  // s_{b+2}
};

struct RhlReport {
  std::vector<RhlViolation> violations;
  bool asserted_projective = false;
  /// Whether s_b >= sum_{l>=1} s_{b+2l} also holds everywhere.
  bool cumulative_form_holds = true;
  bool pass() const { return violations.empty(); }
  std::string label() const { return asserted_projective ? "asserted-projective" : "advisory"; }
};

/// Relative hard Lefschetz: for every support and every b >= 0 in the parity
/// class, s_b >= s_{b+2}, i.e. the primitive parts s_b - s_{b+2} are >= 0.
inline RhlReport verify_rhl(const DTSummandTable& t, bool asserted_projective = false) {
  RhlReport r;
  r.asserted_projective = asserted_projective;
  for (auto sigma : t.supports()) {
    std::map<int, Int> s;  // b -> s_b
    int d = 0;
    std::string id;
    for (const auto& e : t.entries)
      if (e.support == sigma) {
        s[e.b_index()] = e.multiplicity;
        d = e.dim_x - e.dim_v;
        id = e.support_id;
      }
    const int top = std::max(d, s.empty() ? 0 : s.rbegin()->first);
    for (int b = d % 2; b <= top; b += 2) {
      const Int sb = s.count(b) ? s[b] : Int(0);
      const Int next = s.count(b + 2) ? s[b + 2] : Int(0);
      if (sb < next) r.violations.push_back({sigma, id, b, sb, next});
      Int tail = 0;
      for (int c = b + 2; c <= top; c += 2) tail += s.count(c) ? s[c] : Int(0);
      if (sb < tail) r.cumulative_form_holds = false;
    }
  }
  return r;
}

/// The constant map from a complete fan to a point: its summands are the
/// Betti numbers of IH*(X), and must agree with global_ih.
inline DTSummandTable constant_map_ih(const FanMap& f, GCache& cache = GCache::shared()) {
  if (f.target.rank() != 0) throw InputError("constant_map_ih: target must have rank 0");
  DTSummandTable t = deconvolve(f, cache);
  QPolynomial sum;
  for (const auto& e : t.entries) sum += QPolynomial::monomial(static_cast<std::size_t>(e.twist_k), e.multiplicity);
  const QPolynomial ih = global_ih(f.source, cache);
  if (sum != ih)
    throw ConsistencyFailure("ConsistencyFailure: point summands " + sum.to_string() + " != IH " + ih.to_string());
  return t;
}

}  // namespace toricdt
