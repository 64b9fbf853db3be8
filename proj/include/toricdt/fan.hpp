#pragma once

// Fans, their cone posets, orbit closures (star quotients), local models and
// toric resolutions by stellar subdivision.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricdt/cone.hpp"
#include "toricdt/lattice.hpp"
#include "toricdt/polyhedral.hpp"

namespace toricdt {

class FanError : public InputError {
 public:
  using InputError::InputError;
};

/// Finite set of cones in Z^rank. Cones are indexed in (dim, rays) order, so
/// index 0 is always the zero cone and every face of a cone has a smaller index.
/// Cone i indexes the torus orbit O(i) of dimension rank - dim(i).
class Fan {
 public:
  enum class Closure { add_faces, as_given };

  Fan() : Fan(0, {}) {}

  Fan(std::size_t rank, std::vector<Cone> cones, Closure closure = Closure::add_faces,
      std::vector<IntVector> ray_order = {})
      : rank_(rank) {
    std::map<std::vector<IntVector>, Cone> by_rays;
    by_rays.emplace(std::vector<IntVector>{}, Cone::zero(rank));
    for (auto& c : cones) {
      if (c.rank() != rank) throw FanError("cone " + c.to_string() + " has the wrong ambient rank");
      if (closure == Closure::add_faces)
        for (auto& f : faces(c)) by_rays.emplace(f.rays(), std::move(f));
      else
        by_rays.emplace(c.rays(), std::move(c));
    }
    for (auto& [rays, c] : by_rays) cones_.push_back(std::move(c));
    std::sort(cones_.begin(), cones_.end());
    for (std::size_t i = 0; i < cones_.size(); ++i) index_.emplace(cones_[i].rays(), i);

    rays_ = std::move(ray_order);
    for (const auto& c : cones_)
      for (const auto& r : c.rays())
        if (std::find(rays_.begin(), rays_.end(), r) == rays_.end()) rays_.push_back(r);

    faces_.resize(cones_.size());
    for (std::size_t i = 0; i < cones_.size(); ++i)
      for (const auto& f : faces(cones_[i]))
        if (auto j = index_of(f)) faces_[i].push_back(*j);
    for (auto& fs : faces_) std::sort(fs.begin(), fs.end());
  }

  /// Fan generated by maximal cones given as index lists into `rays`.
  static Fan from_max_cones(std::size_t rank, std::vector<IntVector> rays,
                            const std::vector<std::vector<std::size_t>>& max_cones) {
    for (auto& r : rays) {
      if (r.size() != rank) throw FanError("ray " + to_string(r) + " does not have length " + std::to_string(rank));
      if (toricdt::is_zero(r)) throw FanError("zero ray");
      r = primitive(std::move(r));
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = i + 1; j < rays.size(); ++j)
        if (rays[i] == rays[j])
          throw FanError("duplicate ray " + to_string(rays[i]) + " at indices " + std::to_string(i) + " and " +
                         std::to_string(j));
    std::vector<Cone> cones;
    for (const auto& mc : max_cones) {
      std::vector<IntVector> gens;
      for (auto i : mc) {
        if (i >= rays.size()) throw FanError("cone refers to missing ray index " + std::to_string(i));
        gens.push_back(rays[i]);
      }
      Cone c;
      try {
        c = Cone::from_rays(gens, rank);
      } catch (const NotPointed&) {
        throw FanError("cone on rays " + index_list(mc) + " is not strongly convex");
      }
      if (c.rays().size() != std::set<IntVector>(gens.begin(), gens.end()).size())
        throw FanError("cone on rays " + index_list(mc) + " lists a generator that is not an extreme ray");
      cones.push_back(std::move(c));
    }
    return Fan(rank, std::move(cones), Closure::add_faces, std::move(rays));
  }

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return cones_.size(); }
  const std::vector<Cone>& cones() const { return cones_; }
  const Cone& cone(std::size_t i) const { return cones_.at(i); }
  /// Ray list: the input order when loaded from data, then any further rays.
  const std::vector<IntVector>& rays() const { return rays_; }

  std::optional<std::size_t> index_of(const Cone& c) const { return index_of_rays(c.rays()); }
  std::optional<std::size_t> index_of_rays(const std::vector<IntVector>& sorted_rays) const {
    auto it = index_.find(sorted_rays);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Index of the cone generated by rays()[i] for i in the list.
  std::optional<std::size_t> index_of_ray_indices(const std::vector<std::size_t>& idx) const {
    std::vector<IntVector> rs;
    for (auto i : idx) {
      if (i >= rays_.size()) return std::nullopt;
      rs.push_back(rays_[i]);
    }
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    return index_of_rays(rs);
  }

  std::vector<std::size_t> ray_indices(std::size_t cone) const {
    std::vector<std::size_t> out;
    for (const auto& r : cones_[cone].rays())
      out.push_back(static_cast<std::size_t>(std::find(rays_.begin(), rays_.end(), r) - rays_.begin()));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Faces of cone i present in the fan (all of them for a valid fan), including i.
  const std::vector<std::size_t>& faces_of(std::size_t i) const { return faces_.at(i); }

  /// tau <= sigma in the face order.
  bool is_face(std::size_t tau, std::size_t sigma) const {
    return std::binary_search(faces_[sigma].begin(), faces_[sigma].end(), tau);
  }

  std::vector<std::size_t> maximal_cones() const {
    std::vector<bool> covered(cones_.size(), false);
    for (std::size_t i = 0; i < cones_.size(); ++i)
      for (auto j : faces_[i])
        if (j != i) covered[j] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cones_.size(); ++i)
      if (!covered[i]) out.push_back(i);
    return out;
  }

  std::size_t orbit_dim(std::size_t i) const { return rank_ - cones_[i].dim(); }

  std::vector<HCone> maximal_h_cones() const {
    std::vector<HCone> out;
    for (auto i : maximal_cones()) out.push_back(cones_[i].h_representation());
    return out;
  }

  static std::string index_list(const std::vector<std::size_t>& idx) {
    std::string s = "[";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s + "]";
  }

 private:
  std::size_t rank_ = 0;
  std::vector<Cone> cones_;
  std::vector<IntVector> rays_;
  std::map<std::vector<IntVector>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> faces_;
};

struct FanViolation {
  enum class Kind { missing_face, bad_intersection };
  Kind kind;
  std::string message;
  std::vector<std::size_t> cones;     // offending cone indices
  std::optional<Cone> missing;        // for missing_face
  std::optional<IntVector> witness;   // point of the intersection outside the common face
};

struct FanReport {
  std::vector<FanViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// s1 cap s2 is the cone on their common rays iff some u is positive on the
/// other rays of s1, negative on the other rays of s2 and zero on the common ones.
inline bool separated_at(const Cone& s1, const Cone& s2, const std::vector<IntVector>& common) {
  std::vector<LinearConstraint> cs;
  for (const auto& r : common) cs.push_back({r, Relation::eq});
  for (const auto& r : s1.rays())
    if (!std::binary_search(common.begin(), common.end(), r)) cs.push_back({r, Relation::gt});
  for (const auto& r : s2.rays())
    if (!std::binary_search(common.begin(), common.end(), r)) cs.push_back({negated(r), Relation::gt});
  return find_point(cs, s1.rank()).has_value();
}

/// Fan axioms, checked exactly: closure under faces, and each pairwise
/// intersection of maximal cones is a common face of both.
inline FanReport validate_fan(const Fan& f) {
  FanReport report;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (const auto& face : faces(f.cone(i)))
      if (!f.index_of(face))
        report.violations.push_back({FanViolation::Kind::missing_face,
                                     "face " + face.to_string() + " of " + f.cone(i).to_string() + " is missing",
                                     {i},
                                     face,
                                     std::nullopt});
  const auto maxes = f.maximal_cones();
  for (std::size_t a = 0; a < maxes.size(); ++a)
    for (std::size_t b = a + 1; b < maxes.size(); ++b) {
      const Cone& s1 = f.cone(maxes[a]);
      const Cone& s2 = f.cone(maxes[b]);
      std::vector<IntVector> common;
      std::set_intersection(s1.rays().begin(), s1.rays().end(), s2.rays().begin(), s2.rays().end(),
                            std::back_inserter(common));
      if (separated_at(s1, s2, common)) continue;
      const Cone tau = Cone::from_rays(common, f.rank());
      auto is_face_of = [&](const Cone& s) {
        const auto fs = faces(s);
        return std::find(fs.begin(), fs.end(), tau) != fs.end();
      };
      std::optional<IntVector> witness;
      if (auto w = difference_witness(s1.h_representation().intersected(s2.h_representation()),
                                      {tau.h_representation()}))
        witness = primitive_integer_multiple(*w);
      if (witness || !is_face_of(s1) || !is_face_of(s2)) {
        std::string msg = "intersection of " + s1.to_string() + " and " + s2.to_string() + " is not a common face";
        if (witness) msg += "; witness " + to_string(*witness);
        report.violations.push_back(
            {FanViolation::Kind::bad_intersection, msg, {maxes[a], maxes[b]}, std::nullopt, witness});
      }
    }
  return report;
}

/// Support of the fan is all of R^rank.
inline std::optional<IntVector> completeness_witness(const Fan& f) {
  HCone whole;
  whole.dim = f.rank();
  if (auto w = difference_witness(whole, f.maximal_h_cones())) return primitive_integer_multiple(*w);
  return std::nullopt;
}
inline bool is_complete(const Fan& f) { return !completeness_witness(f); }

/// A point of |a| not in |b|, if any.
inline std::optional<IntVector> support_excess(const Fan& a, const Fan& b) {
  const auto covers = b.maximal_h_cones();
  for (auto i : a.maximal_cones())
    if (auto w = difference_witness(a.cone(i).h_representation(), covers)) return primitive_integer_multiple(*w);
  return std::nullopt;
}
inline bool same_support(const Fan& a, const Fan& b) { return !support_excess(a, b) && !support_excess(b, a); }

/// The unique cone spanning R^rank when the fan consists of its faces.
inline std::optional<Cone> contractible_type(const Fan& f) {
  const auto maxes = f.maximal_cones();
  if (maxes.size() != 1) return std::nullopt;
  const Cone& c = f.cone(maxes[0]);
  if (!c.is_full_dimensional()) return std::nullopt;
  return c;
}

/// sigma re-expressed in N_sigma = Z^rank intersected with span(sigma), with the
/// splitting N = N_sigma (+) N(sigma) used to do so.
struct LocalModel {
  Fan fan;                    // faces of sigma in Z^dim(sigma): contractible type
  Cone cone;                  // sigma in local coordinates
  LatticeSplitting splitting; // to_sub(): N -> N_sigma, to_quotient(): N -> N(sigma)
};

inline LocalModel local_model(const Fan& f, std::size_t sigma) {
  const Cone& s = f.cone(sigma);
  LatticeSplitting split = split_along(s.rays(), f.rank());
  const IntMatrix to_sub = split.to_sub();
  std::vector<IntVector> local;
  for (const auto& r : s.rays()) local.push_back(to_sub.apply(r));
  Cone c = Cone::from_rays(local, split.sub_rank);
  return LocalModel{Fan(split.sub_rank, {c}), c, std::move(split)};
}

/// The fan of the orbit closure V(sigma): images in N / (N cap span sigma) of
/// the cones rho >= sigma.
struct StarFan {
  Fan fan;
  std::size_t sigma = 0;
  std::size_t quotient_rank = 0;
  IntMatrix projection;                 // N -> N(sigma)
  std::vector<std::size_t> base_index;  // quotient cone index -> rho in the base fan
};

/// Image of cone `rho` under the quotient projection (rho must contain sigma).
inline Cone project_cone(const Cone& rho, const IntMatrix& projection) {
  std::vector<IntVector> imgs;
  for (const auto& r : rho.rays()) imgs.push_back(projection.apply(r));
  try {
    return Cone::from_rays(std::move(imgs), projection.rows());
  } catch (const NotPointed&) {
    throw InvariantViolation("ImageNotPointed: projection of " + rho.to_string() + " is not strongly convex");
  }
}

inline StarFan star_quotient_fan(const Fan& f, std::size_t sigma) {
  const LatticeSplitting split = split_along(f.cone(sigma).rays(), f.rank());
  StarFan out;
  out.sigma = sigma;
  out.quotient_rank = f.rank() - split.sub_rank;
  out.projection = split.to_quotient();
  std::vector<Cone> images;
  std::vector<std::size_t> origin;
  for (std::size_t rho = 0; rho < f.size(); ++rho) {
    if (!f.is_face(sigma, rho)) continue;
    images.push_back(project_cone(f.cone(rho), out.projection));
    origin.push_back(rho);
  }
  out.fan = Fan(out.quotient_rank, images, Fan::Closure::as_given);
  if (out.fan.size() != images.size())
    throw InvariantViolation("star quotient: distinct cones above a face have equal images");
  out.base_index.resize(images.size());
  for (std::size_t k = 0; k < images.size(); ++k) out.base_index[*out.fan.index_of(images[k])] = origin[k];
  return out;
}

/// Star subdivision at a primitive vector v of the support: each cone sigma
/// containing v is replaced by the cones cone(tau, v), tau a face of sigma
/// not containing v. Subdividing at an existing ray leaves the fan unchanged.
inline Fan stellar_subdivide(const Fan& f, IntVector v) {
  if (v.size() != f.rank()) throw InputError("subdivision ray has wrong length");
  if (is_zero(v)) throw InputError("cannot subdivide at the zero vector");
  v = primitive(std::move(v));
  if (std::find(f.rays().begin(), f.rays().end(), v) != f.rays().end()) return f;
  std::vector<Cone> out;
  bool inside = false;
  for (auto i : f.maximal_cones()) {
    const Cone& s = f.cone(i);
    if (!s.contains(v)) {
      out.push_back(s);
      continue;
    }
    inside = true;
    for (const auto& tau : faces(s)) {
      if (tau.contains(v) || tau.dim() + 1 != s.dim()) continue;
      auto gens = tau.rays();
      gens.push_back(v);
      out.push_back(Cone::from_rays(std::move(gens), f.rank()));
    }
  }
  if (!inside) throw InputError("RayOutsideSupport: " + to_string(v) + " is not in the support of the fan");
  auto order = f.rays();
  order.push_back(v);
  return Fan(f.rank(), std::move(out), Fan::Closure::add_faces, std::move(order));
}

/// Which candidate to act on first when several cones need work.
enum class ResolveOrder { first, last };

/// Lattice points of the half-open parallelepiped of a simplicial cone,
/// other than 0, as primitive vectors.
inline std::vector<IntVector> parallelepiped_points(const Cone& c) {
  const SNFResult snf = smith_normal_form(IntMatrix::from_columns(c.rays(), c.rank()));
  const std::size_t d = c.dim();
  std::vector<IntVector> out;
  std::vector<Int> k(d, 0);
  for (;;) {
    IntVector w(c.rank());
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t r = 0; r < c.rank(); ++r) w[r] += k[i] * snf.left_inverse(r, i);
    if (!is_zero(w)) {
      const auto lambda = *solve_in_span(c.rays(), w);
      RationalVector pt(c.rank());
      for (std::size_t i = 0; i < d; ++i) {
        Rational frac = lambda[i] - Rational(boost::multiprecision::numerator(lambda[i]) /
                                             boost::multiprecision::denominator(lambda[i]));
        if (frac < 0) frac += 1;
        for (std::size_t r = 0; r < c.rank(); ++r) pt[r] += frac * Rational(c.rays()[i][r]);
      }
      bool nonzero = false;
      for (const auto& x : pt) nonzero = nonzero || x != 0;
      if (nonzero) {
        IntVector p = primitive_integer_multiple(pt);
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
      }
    }
    std::size_t i = 0;
    while (i < d) {
      k[i] += 1;
      if (k[i] < snf.diag[i]) break;
      k[i] = 0;
      ++i;
    }
    if (i == d) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Smooth refinement with the same support by iterated stellar subdivision:
/// lowest-dimensional non-simplicial cones are subdivided at their ray sum
/// (plus the last ray for ResolveOrder::last), then non-smooth simplicial
/// cones at a lattice point of the fundamental parallelepiped with the
/// smallest (first) or largest (last) coordinate sum.
inline Fan resolve(const Fan& f, ResolveOrder order = ResolveOrder::first) {
  Fan cur = f;
  auto pick = [&](auto&& pred) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!pred(cur.cone(i))) continue;
      if (!best || cur.cone(i).dim() < cur.cone(*best).dim() ||
          (order == ResolveOrder::last && cur.cone(i).dim() == cur.cone(*best).dim()))
        best = i;
    }
    return best;
  };
  while (auto i = pick([](const Cone& c) { return !is_simplicial(c); })) {
    const auto& rays = cur.cone(*i).rays();
    IntVector sum(cur.rank());
    for (const auto& r : rays)
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += r[k];
    if (order == ResolveOrder::last)
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += rays.back()[k];
    cur = stellar_subdivide(cur, sum);
  }
  while (auto i = pick([](const Cone& c) { return !is_smooth(c); })) {
    const Cone& c = cur.cone(*i);
    auto pts = parallelepiped_points(c);
    auto weight = [&](const IntVector& p) {
      Rational s = 0;
      for (const auto& x : *solve_in_span(c.rays(), p)) s += x;
      return s;
    };
    std::stable_sort(pts.begin(), pts.end(),
                     [&](const IntVector& a, const IntVector& b) { return weight(a) < weight(b); });
    cur = stellar_subdivide(cur, order == ResolveOrder::first ? pts.front() : pts.back());
  }
  return cur;
}

}  // namespace toricdt
