#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "toricdt/cone.hpp"
#include "toricdt/fan.hpp"
#include "toricdt/lattice.hpp"
#include "toricdt/polyhedral.hpp"

namespace toricdt {

class Incompatible : public InputError {
 public:
  Incompatible(const std::string& what, std::size_t cone) : InputError(what), cone_(cone) {}
  std::size_t cone() const { return cone_; }

 private:
  std::size_t cone_;
};

/// Raised when the candidate fan of the Stein intermediate fails validation.
class FanConstructionFailed : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

/// A toric map given by a lattice map N_X -> N_Y compatible with the fans.
/// bar[sigma] is the smallest target cone containing the image of sigma.
struct FanMap {
  IntMatrix matrix;
  Fan source;
  Fan target;
  std::vector<std::size_t> bar;

  /// Source cones sigma with bar(sigma) == tau.
  std::vector<std::size_t> preimage_cones(std::size_t tau) const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < bar.size(); ++s)
      if (bar[s] == tau) out.push_back(s);
    return out;
  }
};

inline Cone image_cone(const IntMatrix& m, const Cone& c) {
  std::vector<IntVector> imgs;
  for (const auto& r : c.rays()) imgs.push_back(m.apply(r));
  return Cone::from_rays(std::move(imgs), m.rows());
}

inline FanMap build_map(IntMatrix matrix, Fan source, Fan target) {
  if (matrix.cols() != source.rank() || matrix.rows() != target.rank())
    throw InputError("map matrix is " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                     " but the fans have ranks " + std::to_string(source.rank()) + " -> " +
                     std::to_string(target.rank()));
  FanMap f{std::move(matrix), std::move(source), std::move(target), {}};
  f.bar.resize(f.source.size());
  for (std::size_t s = 0; s < f.source.size(); ++s) {
    std::vector<IntVector> imgs;
    for (const auto& r : f.source.cone(s).rays()) imgs.push_back(f.matrix.apply(r));
    std::optional<std::size_t> best;
    for (std::size_t t = 0; t < f.target.size(); ++t) {
      const Cone& tau = f.target.cone(t);
      if (!std::all_of(imgs.begin(), imgs.end(), [&](const IntVector& v) { return tau.contains(v); })) continue;
      if (!best || tau.dim() < f.target.cone(*best).dim()) best = t;
    }
    if (!best)
      throw Incompatible("Incompatible: image of source cone " + f.source.cone(s).to_string() +
                             " lies in no target cone",
                         s);
    f.bar[s] = *best;
  }
  return f;
}

struct ProperCertificate {
  bool proper = false;
  std::optional<IntVector> witness;  // in f^-1(|target|) but not in |source|
};

/// Exact test of f^-1(|target|) = |source|: for each maximal target cone tau,
/// the preimage polyhedron of tau minus the source cones mapping into tau
/// must be empty.
inline ProperCertificate check_proper(const FanMap& f) {
  for (auto t : f.target.maximal_cones()) {
    const HCone pre = f.target.cone(t).h_representation().pulled_back(f.matrix);
    std::vector<std::size_t> inside;
    for (std::size_t s = 0; s < f.source.size(); ++s)
      if (f.target.is_face(f.bar[s], t)) inside.push_back(s);
    std::vector<HCone> covers;
    for (auto s : inside) {
      const bool maximal = std::none_of(inside.begin(), inside.end(),
                                        [&](std::size_t o) { return o != s && f.source.is_face(s, o); });
      if (maximal) covers.push_back(f.source.cone(s).h_representation());
    }
    if (auto w = difference_witness(pre, covers)) return {false, primitive_integer_multiple(*w)};
  }
  return {true, std::nullopt};
}

/// Proper with surjective lattice map.
inline bool is_fibration(const FanMap& f) { return is_surjective(f.matrix) && check_proper(f).proper; }

/// f = h o g through the toric variety Z with lattice N_Z = f_N(N_X).
struct SteinData {
  IntMatrix z_basis;  // columns: basis of N_Z inside N_Y
  Fan z_fan;
  FanMap g;
  FanMap h;
};

inline SteinData stein_factorization(const FanMap& f) {
  if (!check_proper(f).proper) throw InputError("stein_factorization: map is not proper");
  const std::size_t ny = f.target.rank();
  const auto basis = image_lattice(f.matrix);
  const std::size_t r = basis.size();
  IntMatrix b = IntMatrix::from_columns(basis, ny);

  IntMatrix g(r, f.matrix.cols());
  for (std::size_t j = 0; j < f.matrix.cols(); ++j) {
    const auto coords = solve_in_span(basis, f.matrix.column(j));
    if (!coords) throw InvariantViolation("stein: column outside the image lattice");
    for (std::size_t i = 0; i < r; ++i) {
      if (boost::multiprecision::denominator((*coords)[i]) != 1)
        throw InvariantViolation("stein: image lattice basis does not generate the image");
      g(i, j) = boost::multiprecision::numerator((*coords)[i]);
    }
  }

  std::vector<HCone> image_covers;
  for (auto s : f.source.maximal_cones()) image_covers.push_back(image_cone(g, f.source.cone(s)).h_representation());

  std::vector<Cone> z_cones;
  for (const auto& tau : f.target.cones()) {
    const HCone slice = tau.h_representation().pulled_back(b);
    if (auto w = difference_witness(slice, image_covers)) {
      (void)w;
      continue;  // tau cap V leaves the image of |source|
    }
    Cone c = Cone::from_rays(extreme_rays(slice), r);
    if (std::find(z_cones.begin(), z_cones.end(), c) == z_cones.end()) z_cones.push_back(std::move(c));
  }
  Fan z_fan(r, z_cones, Fan::Closure::as_given);
  const FanReport rep = validate_fan(z_fan);
  if (!rep.ok()) throw FanConstructionFailed("FanConstructionFailed: " + rep.violations.front().message);

  SteinData out{b, z_fan, {}, {}};
  try {
    out.g = build_map(g, f.source, z_fan);
    out.h = build_map(b, z_fan, f.target);
  } catch (const Incompatible& e) {
    throw FanConstructionFailed(std::string("FanConstructionFailed: ") + e.what());
  }
  if (!(out.h.matrix * out.g.matrix == f.matrix)) throw FanConstructionFailed("FanConstructionFailed: h g != f");
  if (!is_fibration(out.g)) throw FanConstructionFailed("FanConstructionFailed: g is not a fibration");
  if (!check_proper(out.h).proper) throw FanConstructionFailed("FanConstructionFailed: h is not proper");
  return out;
}

/// Data of the map of orbit tori O_Z(zeta) -> O_Y(bar zeta) induced by a finite
/// toric map: the image subtorus, the prime-to-p kernel Gamma and the p-part.
struct OrbitMapFactorization {
  std::size_t zeta = 0;
  std::size_t target_orbit = 0;
  IntMatrix orbit_map;                      // N_Z(zeta) -> N_Y(bar zeta)
  std::vector<IntVector> image_sublattice;  // in coordinates of N_Y(bar zeta)
  TorsionInvariants kernel;                 // full kernel (all elementary divisors)
  TorsionInvariants gamma;                  // prime-to-p part
  Int p_part = 1;
};

inline OrbitMapFactorization orbit_map_factorization(const FanMap& h, std::size_t zeta, const Int& p) {
  if (!is_prime(p)) throw InputError("orbit_map_factorization: p must be prime");
  if (matrix_rank(h.matrix) != h.matrix.cols()) throw InputError("orbit_map_factorization: map is not finite");
  const std::size_t target = h.bar.at(zeta);
  const LatticeSplitting src = split_along(h.source.cone(zeta).rays(), h.source.rank());
  const LatticeSplitting dst = split_along(h.target.cone(target).rays(), h.target.rank());
  OrbitMapFactorization o;
  o.zeta = zeta;
  o.target_orbit = target;
  o.orbit_map = dst.to_quotient() * h.matrix * src.section();
  o.image_sublattice = image_lattice(o.orbit_map);
  o.kernel = torsion_invariants(o.orbit_map);
  for (const auto& d : o.kernel.divisors) {
    const Int e = prime_to_p_part(d, p);
    if (e > 1) {
      o.gamma.divisors.push_back(e);
      o.gamma.order *= e;
    }
  }
  o.p_part = o.kernel.order / o.gamma.order;
  return o;
}

/// Rank of the local system h_* Q on the image orbit: the separable degree |Gamma|.
inline Int local_system_rank(const OrbitMapFactorization& o) { return o.gamma.order; }

}  // namespace toricdt
