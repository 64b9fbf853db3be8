#include <gtest/gtest.h>

#include "corpus.hpp"
#include "toricdt/fan.hpp"
#include "toricdt/toricmap.hpp"

using namespace toricdt;
using corpus::mat;
using corpus::v;

namespace {

// Oracle for support equality: every lattice point in a box lies in some cone
// of one fan iff it lies in some cone of the other.
bool same_support_on_box(const Fan& a, const Fan& b, int r) {
  auto in = [](const Fan& f, const IntVector& x) {
    for (auto i : f.maximal_cones())
      if (f.cone(i).contains(x)) return true;
    return false;
  };
  std::vector<long long> x(a.rank(), -r);
  for (;;) {
    IntVector p;
    for (auto c : x) p.emplace_back(c);
    if (in(a, p) != in(b, p)) return false;
    std::size_t i = 0;
    while (i < x.size() && ++x[i] > r) x[i++] = -r;
    if (i == x.size()) break;
  }
  return true;
}

}  // namespace

TEST(Fan, LoaderPrimitivizesAndRejectsDuplicates) {
  const Fan f = corpus::fan(2, {v({2, 0}), v({0, 3})}, {{0, 1}});
  EXPECT_EQ(f.rays(), (std::vector<IntVector>{v({1, 0}), v({0, 1})}));
  EXPECT_THROW(corpus::fan(2, {v({1, 0}), v({2, 0})}, {{0}}), FanError);
  EXPECT_THROW(corpus::fan(2, {v({1, 0})}, {{0, 1}}), FanError);
  EXPECT_THROW(corpus::fan(2, {v({1, 0}), v({-1, 0})}, {{0, 1}}), FanError);
}

TEST(Fan, FacesAreDerived) {
  const Fan f = corpus::a2();
  EXPECT_EQ(f.size(), 4u);
  EXPECT_TRUE(f.cone(0).is_zero());
  EXPECT_EQ(f.maximal_cones().size(), 1u);
  EXPECT_TRUE(validate_fan(f).ok());
}

TEST(Fan, ValidateExamples) {
  EXPECT_TRUE(validate_fan(corpus::a2()).ok());
  EXPECT_TRUE(validate_fan(corpus::p2()).ok());
  // Two 2-cones overlapping in half of a face.
  const Fan bad = corpus::fan(2, {v({1, 0}), v({1, 2}), v({0, 1})}, {{0, 2}, {1, 2}});
  const FanReport r = validate_fan(bad);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].kind, FanViolation::Kind::bad_intersection);
  EXPECT_EQ(r.violations[0].cones.size(), 2u);
}

TEST(Fan, OverlapInRankThreeHasWitness) {
  const Fan bad = corpus::fan(3, {v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1}), v({1, 1, 0}), v({0, 0, -1})},
                              {{0, 1, 2}, {3, 1, 4}});
  const FanReport r = validate_fan(bad);
  ASSERT_FALSE(r.ok());
  ASSERT_TRUE(r.violations[0].witness);
  const IntVector w = *r.violations[0].witness;
  EXPECT_TRUE(bad.cone(r.violations[0].cones[0]).contains(w));
  EXPECT_TRUE(bad.cone(r.violations[0].cones[1]).contains(w));
}

TEST(Fan, Completeness) {
  EXPECT_TRUE(is_complete(corpus::p2()));
  EXPECT_TRUE(is_complete(corpus::bl3_p2()));
  EXPECT_TRUE(is_complete(corpus::cube_face_fan()));
  EXPECT_TRUE(is_complete(corpus::pn(3)));
  auto w = completeness_witness(corpus::a2());
  ASSERT_TRUE(w);
  EXPECT_FALSE(corpus::a2().cone(3).contains(*w));
}

TEST(Fan, ContractibleType) {
  EXPECT_EQ(*contractible_type(corpus::a2()), Cone::from_rays({v({1, 0}), v({0, 1})}, 2));
  EXPECT_FALSE(contractible_type(corpus::fan(2, {v({1, 0})}, {{0}})));
  EXPECT_FALSE(contractible_type(corpus::p2()));
}

TEST(Fan, LocalModel) {
  const Fan f = corpus::fan(2, {v({1, 0}), v({2, 1})}, {{0, 1}});
  const auto ray = f.index_of_ray_indices({1});
  const LocalModel m = local_model(f, *ray);
  EXPECT_EQ(m.fan.rank(), 1u);
  EXPECT_TRUE(contractible_type(m.fan));
  const LocalModel full = local_model(corpus::a2(), 3);
  EXPECT_EQ(full.fan.rank(), 2u);
  EXPECT_EQ(full.splitting.sub_rank, 2u);
}

TEST(Fan, StarQuotient) {
  const Fan p2 = corpus::p2();
  EXPECT_EQ(star_quotient_fan(p2, 0).fan.size(), p2.size());
  const auto maxc = p2.maximal_cones().front();
  EXPECT_EQ(star_quotient_fan(p2, maxc).fan.rank(), 0u);
  const auto e1 = *p2.index_of_ray_indices({0});
  const StarFan s = star_quotient_fan(p2, e1);
  EXPECT_EQ(s.fan.rank(), 1u);
  EXPECT_TRUE(is_complete(s.fan));
  EXPECT_EQ(s.fan.maximal_cones().size(), 2u);
}

TEST(Fan, StellarSubdivision) {
  const Fan b = stellar_subdivide(corpus::a2(), v({1, 1}));
  EXPECT_EQ(b.maximal_cones().size(), 2u);
  for (auto i : b.maximal_cones()) EXPECT_TRUE(is_smooth(b.cone(i)));
  const Fan s = stellar_subdivide(corpus::square_cone(), v({1, 1, 2}));
  EXPECT_EQ(s.maximal_cones().size(), 4u);
  for (auto i : s.maximal_cones()) EXPECT_TRUE(is_simplicial(s.cone(i)));
  EXPECT_TRUE(same_support(s, corpus::square_cone()));
  const Fan same = stellar_subdivide(corpus::a2(), v({1, 0}));
  EXPECT_EQ(same.cones(), corpus::a2().cones());
  EXPECT_THROW(stellar_subdivide(corpus::a2(), v({-1, 0})), InputError);
}

TEST(Fan, Resolve) {
  EXPECT_EQ(resolve(corpus::p2()).cones(), corpus::p2().cones());
  const Fan a1sing = corpus::fan(2, {v({1, 0}), v({1, 2})}, {{0, 1}});
  const Fan r = resolve(a1sing);
  EXPECT_EQ(r.maximal_cones().size(), 2u);
  EXPECT_TRUE(std::find(r.rays().begin(), r.rays().end(), v({1, 1})) != r.rays().end());
  for (const Fan& f : {corpus::square_cone(), corpus::p112(), corpus::p123(), corpus::cube_face_fan()})
    for (auto order : {ResolveOrder::first, ResolveOrder::last}) {
      const Fan res = resolve(f, order);
      EXPECT_TRUE(validate_fan(res).ok());
      for (const auto& c : res.cones()) EXPECT_TRUE(is_smooth(c));
      EXPECT_TRUE(same_support(res, f));
      EXPECT_TRUE(same_support_on_box(res, f, 3));
    }
}

TEST(ToricMap, BarMap) {
  const FanMap f = corpus::identity_map(corpus::blowup_a2(), corpus::a2());
  const auto diag = *f.source.index_of_ray_indices({1});
  EXPECT_EQ(f.bar[diag], 3u);
  const FanMap z = build_map(IntMatrix(1, 2), corpus::p2(), corpus::a1());
  for (auto b : z.bar) EXPECT_EQ(b, 0u);
}

TEST(ToricMap, Incompatible) {
  const Fan rotated = corpus::fan(2, {v({1, 1}), v({-1, 1}), v({0, -1})}, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_THROW(corpus::identity_map(corpus::p2(), rotated), Incompatible);
}

TEST(ToricMap, Properness) {
  EXPECT_TRUE(check_proper(corpus::identity_map(corpus::blowup_a2(), corpus::a2())).proper);
  const ProperCertificate c = check_proper(corpus::torus_into_a1());
  EXPECT_FALSE(c.proper);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(*c.witness, v({1}));
  const Fan a1xp1 = corpus::fan(2, {v({1, 0}), v({0, 1}), v({0, -1})}, {{0, 1}, {0, 2}});
  EXPECT_TRUE(check_proper(build_map(mat({{1, 0}}, 2), a1xp1, corpus::a1())).proper);
  EXPECT_FALSE(check_proper(build_map(mat({{1, 0}}, 2), corpus::a2(), corpus::a1())).proper);
  // A^2 minus a coordinate axis over A^2 is not proper.
  const Fan partial = corpus::fan(2, {v({1, 0}), v({0, 1})}, {{0}, {1}});
  EXPECT_FALSE(check_proper(corpus::identity_map(partial, corpus::a2())).proper);
}

TEST(ToricMap, Fibration) {
  EXPECT_TRUE(is_fibration(corpus::identity_map(corpus::blowup_a2(), corpus::a2())));
  EXPECT_FALSE(is_fibration(corpus::times_m_a1(3)));
  EXPECT_TRUE(is_fibration(corpus::to_point(corpus::p2())));
  EXPECT_TRUE(is_fibration(build_map(mat({{1, 0}}, 2), corpus::hirzebruch(1), corpus::p1())));
}

TEST(ToricMap, SteinOfTimesTwo) {
  const SteinData st = stein_factorization(corpus::times_m_a1(2));
  EXPECT_EQ(st.z_basis, mat({{2}}, 1));
  EXPECT_EQ(abs_value(st.g.matrix(0, 0)), 1);
  EXPECT_EQ(st.h.matrix * st.g.matrix, mat({{2}}, 1));
  EXPECT_EQ(torsion_invariants(st.h.matrix).order, 2);
}

TEST(ToricMap, SteinOfFibrationIsTrivial) {
  const FanMap f = corpus::identity_map(corpus::blowup_a2(), corpus::a2());
  const SteinData st = stein_factorization(f);
  EXPECT_TRUE(is_surjective(st.h.matrix));
  EXPECT_EQ(torsion_invariants(st.h.matrix).order, 1);
  EXPECT_EQ(st.z_fan.size(), f.target.size());
}

TEST(ToricMap, SteinOfDiagonalEmbedding) {
  const FanMap f = build_map(mat({{1}, {1}}, 1), corpus::a1(), corpus::a2());
  const SteinData st = stein_factorization(f);
  EXPECT_EQ(st.z_fan.rank(), 1u);
  EXPECT_EQ(st.z_fan.size(), 2u);
  EXPECT_TRUE(check_proper(st.h).proper);
  EXPECT_EQ(st.h.matrix * st.g.matrix, f.matrix);
}

TEST(ToricMap, OrbitMapFactorization) {
  const FanMap id = corpus::identity_map(corpus::a1(), corpus::a1());
  auto o = orbit_map_factorization(id, 0, Int(3));
  EXPECT_TRUE(o.gamma.divisors.empty());
  EXPECT_EQ(o.p_part, 1);
  EXPECT_EQ(local_system_rank(o), 1);
  const FanMap two = corpus::times_m_a1(2);
  o = orbit_map_factorization(two, 0, Int(3));
  EXPECT_EQ(o.gamma.divisors, std::vector<Int>{2});
  EXPECT_EQ(o.p_part, 1);
  EXPECT_EQ(local_system_rank(o), 2);
  o = orbit_map_factorization(two, 0, Int(2));
  EXPECT_TRUE(o.gamma.divisors.empty());
  EXPECT_EQ(o.p_part, 2);
  EXPECT_EQ(local_system_rank(o), 1);
  EXPECT_EQ(local_system_rank(orbit_map_factorization(corpus::times_m_a1(6), 0, Int(3))), 2);
}
