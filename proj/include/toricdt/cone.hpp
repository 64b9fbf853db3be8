#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "toricdt/integer.hpp"
#include "toricdt/lattice.hpp"
#include "toricdt/polyhedral.hpp"

namespace toricdt {

class NotPointed : public InputError {
 public:
  using InputError::InputError;
};

/// Strongly convex rational polyhedral cone in Z^rank, stored by its primitive
/// extreme rays in lexicographic order.
///
/// A rational point x lies in the cone iff every facet normal is >= 0 on x and
/// every span equation vanishes on x.
class Cone {
 public:
  Cone() = default;

  /// Primitivizes and deduplicates the generators, drops generators that are
  /// not extreme, and computes facet normals exactly. Throws NotPointed if the
  /// generated cone contains a line.
  static Cone from_rays(std::vector<IntVector> generators, std::size_t rank) {
    Cone c;
    c.rank_ = rank;
    std::vector<IntVector> rays;
    for (auto& g : generators) {
      if (g.size() != rank) throw InputError("cone generator has wrong length " + toricdt::to_string(g));
      if (toricdt::is_zero(g)) continue;
      rays.push_back(primitive(std::move(g)));
    }
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());

    const LatticeSplitting split = split_along(rays, rank);
    const std::size_t d = split.sub_rank;
    c.dim_ = d;
    const IntMatrix to_span = split.to_sub();
    c.span_equations_ = split.to_quotient().row_list();
    if (d == 0) return c;

    std::vector<IntVector> local;
    for (const auto& r : rays) local.push_back(to_span.apply(r));

    std::vector<IntVector> normals;
    for (const auto& subset : subsets_of_size(local.size(), d - 1)) {
      std::vector<IntVector> rows;
      for (auto i : subset) rows.push_back(local[i]);
      const auto ker = nullspace(rows, d);
      if (ker.size() != 1) continue;
      bool has_pos = false, has_neg = false;
      for (const auto& y : local) {
        const Int v = dot(ker[0], y);
        if (v > 0) has_pos = true;
        if (v < 0) has_neg = true;
      }
      if (has_pos && has_neg) continue;
      if (!has_pos && !has_neg) continue;  // all rays on the hyperplane: d-1 dimensional input
      IntVector n = has_neg ? negated(ker[0]) : ker[0];
      if (std::find(normals.begin(), normals.end(), n) == normals.end()) normals.push_back(std::move(n));
    }
    if (vector_rank(normals, d) != d) throw NotPointed("cone generated by the given rays contains a line");

    std::vector<IntVector> extreme;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      std::vector<IntVector> tight;
      for (const auto& n : normals)
        if (dot(n, local[i]) == 0) tight.push_back(n);
      if (vector_rank(tight, d) == d - 1) extreme.push_back(rays[i]);
    }
    c.rays_ = std::move(extreme);
    for (const auto& n : normals) c.facet_normals_.push_back(to_span.pull_back(n));
    std::sort(c.facet_normals_.begin(), c.facet_normals_.end());
    return c;
  }

  static Cone zero(std::size_t rank) { return from_rays({}, rank); }

  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return dim_; }
  const std::vector<IntVector>& rays() const { return rays_; }
  const std::vector<IntVector>& facet_normals() const { return facet_normals_; }
  const std::vector<IntVector>& span_equations() const { return span_equations_; }

  bool is_zero() const { return dim_ == 0; }
  bool is_full_dimensional() const { return dim_ == rank_; }

  bool contains(const RationalVector& x) const { return h_representation().contains(x); }
  bool contains(const IntVector& x) const {
    for (const auto& n : facet_normals_)
      if (dot(n, x) < 0) return false;
    for (const auto& e : span_equations_)
      if (dot(e, x) != 0) return false;
    return true;
  }
  bool contains(const Cone& other) const {
    return std::all_of(other.rays_.begin(), other.rays_.end(), [&](const IntVector& r) { return contains(r); });
  }
  bool has_ray(const IntVector& r) const { return std::binary_search(rays_.begin(), rays_.end(), r); }

  HCone h_representation() const {
    HCone h;
    h.dim = rank_;
    for (const auto& n : facet_normals_) h.constraints.push_back({n, Relation::ge});
    for (const auto& e : span_equations_) h.constraints.push_back({e, Relation::eq});
    return h;
  }

  /// Rays lying on the hyperplane of each facet, as index sets into rays().
  std::vector<std::vector<std::size_t>> facet_ray_sets() const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& n : facet_normals_) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < rays_.size(); ++i)
        if (dot(n, rays_[i]) == 0) s.push_back(i);
      out.push_back(std::move(s));
    }
    return out;
  }

  /// Stable identifier: FNV-1a hash of the rank and the sorted primitive rays.
  std::string id() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&](const std::string& s) {
      for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
      }
    };
    feed(key());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  /// Exact textual key: rank followed by the sorted rays.
  std::string key() const {
    std::string s = std::to_string(rank_) + ":";
    for (const auto& r : rays_) s += toricdt::to_string(r);
    return s;
  }

  std::string to_string() const {
    std::string s = "cone{";
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      if (i) s += ",";
      s += toricdt::to_string(rays_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const Cone& a, const Cone& b) { return a.rank_ == b.rank_ && a.rays_ == b.rays_; }
  friend bool operator<(const Cone& a, const Cone& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    return a.rays_ < b.rays_;
  }

 private:
  std::size_t rank_ = 0;
  std::size_t dim_ = 0;
  std::vector<IntVector> rays_;
  std::vector<IntVector> facet_normals_;
  std::vector<IntVector> span_equations_;
};

/// All faces of c, including the zero cone and c itself, ordered by (dim, rays).
inline std::vector<Cone> faces(const Cone& c) {
  std::set<std::vector<std::size_t>> sets;
  std::vector<std::size_t> all(c.rays().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  sets.insert(all);
  std::vector<std::vector<std::size_t>> frontier = c.facet_ray_sets();
  // Proper faces are exactly the intersections of families of facets.
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (auto& f : frontier) {
      if (!sets.insert(f).second) continue;
      for (const auto& g : c.facet_ray_sets()) {
        std::vector<std::size_t> meet;
        std::set_intersection(f.begin(), f.end(), g.begin(), g.end(), std::back_inserter(meet));
        if (!sets.count(meet)) next.push_back(std::move(meet));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Cone> out;
  for (const auto& s : sets) {
    std::vector<IntVector> rays;
    for (auto i : s) rays.push_back(c.rays()[i]);
    out.push_back(Cone::from_rays(std::move(rays), c.rank()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_simplicial(const Cone& c) { return c.rays().size() == c.dim(); }

/// Simplicial with rays extending to a lattice basis.
inline bool is_smooth(const Cone& c) {
  if (!is_simplicial(c)) return false;
  const SNFResult snf = smith_normal_form(IntMatrix::from_columns(c.rays(), c.rank()));
  return std::all_of(snf.diag.begin(), snf.diag.end(), [](const Int& d) { return d == 1; });
}

/// Index of the sublattice spanned by the rays of a simplicial cone inside
/// the lattice points of its span.
inline Int multiplicity(const Cone& c) {
  const SNFResult snf = smith_normal_form(IntMatrix::from_columns(c.rays(), c.rank()));
  Int m = 1;
  for (const auto& d : snf.diag) m *= d;
  return m;
}

}  // namespace toricdt
