#pragma once

// Frobenius-trace verification. Every complex in sight is pure, even and
// Tate, so the trace of Frobenius on a stalk is its Poincare polynomial at q,
// and point counts over split tori give independent access to the same
// numbers.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricdt/decomp.hpp"
#include "toricdt/fan.hpp"
#include "toricdt/ih.hpp"
#include "toricdt/lattice.hpp"
#include "toricdt/qpoly.hpp"
#include "toricdt/toricmap.hpp"

namespace toricdt {

struct CountCheck {
  std::string name;
  std::optional<Int> q;      // nullopt for polynomial-level checks
  std::vector<Int> expected;  // one value, or coefficients
  std::vector<Int> observed;
  bool pass = false;
};

struct CountReport {
  std::vector<Int> q_values;
  std::vector<CountCheck> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CountCheck& c) { return c.pass; });
  }
  void add(std::string name, std::optional<Int> q, std::vector<Int> expected, std::vector<Int> observed) {
    const bool ok = expected == observed;
    checks.push_back({std::move(name), std::move(q), std::move(expected), std::move(observed), ok});
  }
};

/// #O(sigma)(F_q) = (q - 1)^(rank - dim sigma).
inline Int orbit_count(const Fan& f, std::size_t sigma, const Int& q) {
  if (q < 2) throw InputError("orbit_count: q must be >= 2");
  return power(q - 1, f.orbit_dim(sigma));
}

/// Trace of Frobenius on IH_c of a complete toric variety, orbit by orbit.
inline Int weighted_count(const Fan& f, const Int& q, GCache& cache = GCache::shared()) {
  if (!is_complete(f)) throw NotComplete("weighted_count: fan is not complete");
  Int total = 0;
  for (std::size_t s = 0; s < f.size(); ++s) total += g_stalk(f.cone(s), cache).evaluate(q) * orbit_count(f, s, q);
  return total;
}

/// Trace on the fiber over the distinguished point of O(sigma) for a fibration:
/// the orbit-weighted count of f^-1(O(sigma)) divided by #O(sigma)(F_q).
inline Int fiber_count_fibration(const FanMap& f, std::size_t sigma, const Int& q, GCache& cache = GCache::shared()) {
  Int total = 0;
  for (auto xi : f.preimage_cones(sigma))
    total += g_stalk(f.source.cone(xi), cache).evaluate(q) * orbit_count(f.source, xi, q);
  const Int base = orbit_count(f.target, sigma, q);
  if (total % base != 0)
    throw InexactDivision("InexactDivision: fiber count over " + f.target.cone(sigma).to_string() +
                          " at q = " + q.str());
  return total / base;
}

/// #(kernel of the orbit torus map O(xi) -> O(sigma))(F_q), from the lattice
/// map N_X(xi) -> N_Y(sigma): a split torus of the kernel rank times prod mu_d.
inline Int orbit_fiber_points(const FanMap& f, std::size_t xi, const Int& q) {
  const std::size_t sigma = f.bar.at(xi);
  const LatticeSplitting src = split_along(f.source.cone(xi).rays(), f.source.rank());
  const LatticeSplitting dst = split_along(f.target.cone(sigma).rays(), f.target.rank());
  const IntMatrix phi = dst.to_quotient() * f.matrix * src.section();
  const SNFResult snf = smith_normal_form(phi);
  Int count = power(q - 1, phi.cols() - snf.rank());
  for (const auto& d : snf.diag)
    if (d > 1) count *= gcd(d, q - 1);
  return count;
}

/// Direct trace on the fiber over y_sigma for any proper toric map, orbit by
/// orbit of the source, without factoring the map.
inline Int fiber_count_direct(const FanMap& f, std::size_t sigma, const Int& q, GCache& cache = GCache::shared()) {
  Int total = 0;
  for (auto xi : f.preimage_cones(sigma))
    total += orbit_fiber_points(f, xi, q) * g_stalk(f.source.cone(xi), cache).evaluate(q);
  return total;
}

/// Trace on the fiber over y_sigma through the Stein factorization: the fiber
/// is the disjoint union of g-fibers over the points of h^-1(y_sigma).
inline Int fiber_count_general(const FanMap& f, const Int& p, std::size_t sigma, const Int& q,
                               GCache& cache = GCache::shared()) {
  if (prime_of_prime_power(q) != p) throw InputError("fiber_count_general: q must be a power of p");
  const SteinData st = stein_factorization(f);
  Int total = 0;
  for (auto zeta : st.h.preimage_cones(sigma)) {
    const OrbitMapFactorization o = orbit_map_factorization(st.h, zeta, p);
    total += rational_point_count_of_kernel(o.gamma, q) * stalk_polynomial(st.g, zeta, cache).evaluate(q);
  }
  return total;
}

/// IH(X) = sum m_{sigma,k} q^k IH(V(sigma)) as polynomials, for a fibration
/// with complete source. The left side never looks at the table.
inline CountCheck global_consistency(const FanMap& f, const DTSummandTable& table, GCache& cache = GCache::shared()) {
  const QPolynomial lhs = global_ih(f.source, cache);
  QPolynomial rhs;
  std::map<std::size_t, QPolynomial> star_ih;
  for (const auto& e : table.entries) {
    auto it = star_ih.find(e.support);
    if (it == star_ih.end())
      it = star_ih.emplace(e.support, global_ih(star_quotient_fan(f.target, e.support).fan, cache)).first;
    rhs += QPolynomial::monomial(static_cast<std::size_t>(e.twist_k), e.multiplicity) * it->second;
  }
  CountCheck c{"global_consistency", std::nullopt, lhs.coeffs(), rhs.coeffs(), lhs == rhs};
  return c;
}

/// g of a cone recovered from a resolution of its affine toric variety,
/// without the face-lattice recursion: stalks of the resolution are counted
/// orbit by orbit, and at each cone tau the residual splits as
/// G_{0,tau} + M_tau with deg G_{0,tau} < dim(tau)/2 and M_tau self-dual about
/// dim(tau)/2. Intermediate local stalks G_{tau',tau} are recovered the same
/// way from resolutions of the quotient cones.
inline QPolynomial g_via_resolution(const Cone& c, ResolveOrder order = ResolveOrder::first,
                                    std::map<std::string, QPolynomial>* memo = nullptr) {
  std::map<std::string, QPolynomial> local_memo;
  if (!memo) memo = &local_memo;
  if (auto it = memo->find(c.key()); it != memo->end()) return it->second;

  const Fan y = Fan(c.rank(), {c});
  const Fan w = resolve(y, order);
  for (const auto& xi : w.cones())
    if (!is_smooth(xi)) throw InvariantViolation("g_via_resolution: resolution is not smooth");
  const FanMap f = build_map(IntMatrix::identity(c.rank()), w, y);

  std::vector<std::vector<Int>> mult(y.size());
  std::vector<QPolynomial> g0(y.size());
  for (std::size_t tau = 0; tau < y.size(); ++tau) {
    QPolynomial total;
    for (auto xi : f.preimage_cones(tau)) total += QPolynomial::q_minus_one_power(w.orbit_dim(xi));
    auto pt = total.divided_by_q_minus_one_power(y.orbit_dim(tau));
    if (!pt) throw InexactDivision("g_via_resolution: inexact fiber division");
    QPolynomial q_res = *pt;
    const std::size_t n = y.cone(tau).dim();
    if (n == 0) {
      if (q_res != QPolynomial(1)) throw InvariantViolation("g_via_resolution: resolution is not birational");
      g0[tau] = QPolynomial(1);
      mult[tau] = {1};
      continue;
    }
    for (auto mid : y.faces_of(tau)) {
      if (mid == tau || mid == 0 || mult[mid].empty()) continue;
      const LatticeSplitting split = split_along(y.cone(mid).rays(), y.rank());
      const QPolynomial g = g_via_resolution(project_cone(y.cone(tau), split.to_quotient()), order, memo);
      for (std::size_t k = 0; k < mult[mid].size(); ++k)
        if (mult[mid][k] != 0) q_res -= QPolynomial::monomial(k, mult[mid][k]) * g;
    }
    std::vector<Int> gc, mc(n + 1);
    for (std::size_t k = 0; 2 * k < n; ++k) gc.push_back(q_res.coeff(k) - q_res.coeff(n - k));
    for (std::size_t k = 0; k <= n; ++k) mc[k] = (2 * k < n) ? q_res.coeff(n - k) : q_res.coeff(k);
    QPolynomial m(mc);
    if (q_res.degree() > static_cast<long>(n) || !m.has_nonnegative_coefficients() || QPolynomial(gc).coeff(0) != 1)
      throw InvariantViolation("g_via_resolution: residual at " + y.cone(tau).to_string() +
                               " does not split as IC stalk plus self-dual part: " + q_res.to_string());
    g0[tau] = QPolynomial(gc);
    mult[tau] = m.coeffs();
  }
  const QPolynomial out = g0.back();
  memo->emplace(c.key(), out);
  return out;
}

/// Default sample of field sizes.
inline std::vector<Int> default_q_values() {
  std::vector<Int> v;
  for (int q : {2, 3, 4, 5, 7, 8, 9}) v.emplace_back(q);
  return v;
}

/// Powers of p among the defaults and below 50, plus every power of p below 50
/// congruent to 1 mod the kernel exponent (and the first such power beyond 50
/// if there is none below).
inline std::vector<Int> q_values_for_prime(const Int& p, const Int& exponent) {
  std::vector<Int> v;
  for (Int q = p; q < 50; q *= p) v.push_back(q);
  bool hit = std::any_of(v.begin(), v.end(), [&](const Int& q) { return (q - 1) % exponent == 0; });
  for (Int q = p; !hit; q *= p)
    if ((q - 1) % exponent == 0) {
      v.push_back(q);
      hit = true;
    }
  return v;
}

/// Full verification of a proper toric map. p is required unless f is a fibration.
inline CountReport verify_map(const FanMap& f, std::optional<Int> p, std::optional<std::vector<Int>> qs,
                              GCache& cache = GCache::shared()) {
  CountReport r;
  const bool fibration = is_fibration(f);
  if (!check_proper(f).proper) throw InputError("verify: map is not proper");
  if (!fibration && !p) throw InputError("verify: --p is required for maps that are not fibrations");
  if (p && !is_prime(*p)) throw InputError("verify: p must be prime");

  if (fibration) {
    r.q_values = qs ? *qs : default_q_values();
    const DTSummandTable table = deconvolve(f, cache);
    for (std::size_t s = 0; s < f.target.size(); ++s) {
      const QPolynomial stalk = stalk_polynomial(f, s, cache);
      for (const auto& q : r.q_values)
        r.add("fiber_count[" + f.target.cone(s).id() + "]", q, {stalk.evaluate(q)},
              {fiber_count_fibration(f, s, q, cache)});
    }
    const auto dual = verify_duality(table);
    r.add("duality", std::nullopt, {0}, {Int(dual.violations.size())});
    if (is_complete(f.source)) {
      const QPolynomial ih = global_ih(f.source, cache);
      for (const auto& q : r.q_values) r.add("weighted_count", q, {ih.evaluate(q)}, {weighted_count(f.source, q, cache)});
      r.checks.push_back(global_consistency(f, table, cache));
    }
    return r;
  }

  const SteinData st = stein_factorization(f);
  Int exponent = 1;
  for (std::size_t z = 0; z < st.z_fan.size(); ++z) {
    const auto o = orbit_map_factorization(st.h, z, *p);
    for (const auto& d : o.gamma.divisors) exponent = exponent / gcd(exponent, d) * d;
  }
  if (qs) {
    for (const auto& q : *qs)
      if (prime_of_prime_power(q) != *p) throw InputError("verify: q = " + q.str() + " is not a power of p");
    r.q_values = *qs;
  } else {
    r.q_values = q_values_for_prime(*p, exponent);
  }
  const DTSummandTable table = summands_proper(f, *p, cache);
  for (std::size_t s = 0; s < f.target.size(); ++s)
    for (const auto& q : r.q_values)
      r.add("fiber_count_general[" + f.target.cone(s).id() + "]", q, {fiber_count_direct(f, s, q, cache)},
            {fiber_count_general(f, *p, s, q, cache)});
  const auto dual = verify_duality(table);
  r.add("duality", std::nullopt, {0}, {Int(dual.violations.size())});
  return r;
}

}  // namespace toricdt
