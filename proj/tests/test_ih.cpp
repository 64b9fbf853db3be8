#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "toricdt/ih.hpp"
#include "toricdt/oracle.hpp"
#include "toricdt/qpoly.hpp"

using namespace toricdt;
using corpus::v;

namespace {

// g of a 3-cone over an m-gon is 1 + (m - 3) q: it has m rays, m 2-faces,
// so S = (q-1)^3 + m (q-1)^2 + m (q-1) and the low half of -S is 1 + (m-3) q.
QPolynomial g_polygon_cone(std::size_t rays) { return QPolynomial(std::vector<Int>{1, Int(rays) - 3}); }

// Oracle for the h-vector of a simplicial complete fan in rank 2 or 3 from its
// face numbers: h(q) = sum_i f_i (q - 1)^(n - i).
QPolynomial h_from_face_numbers(const Fan& f) {
  QPolynomial h;
  std::vector<long long> counts(f.rank() + 1);
  for (const auto& c : f.cones()) ++counts[c.dim()];
  for (std::size_t i = 0; i <= f.rank(); ++i)
    h += QPolynomial(Int(counts[i])) * QPolynomial::q_minus_one_power(f.rank() - i);
  return h;
}

}  // namespace

TEST(QPolynomial, Arithmetic) {
  const QPolynomial a = QPolynomial::from({1, 1});
  EXPECT_EQ(a * a, QPolynomial::from({1, 2, 1}));
  EXPECT_EQ((a * a).to_string(), "1 + 2q + q^2");
  EXPECT_EQ(QPolynomial::q_minus_one_power(2), QPolynomial::from({1, -2, 1}));
  EXPECT_EQ(QPolynomial().degree(), -1);
  EXPECT_EQ(QPolynomial::from({1, 2, 1}).evaluate(Int(3)), 16);
  EXPECT_TRUE(QPolynomial::from({1, 2, 1}).is_palindromic(2));
  EXPECT_FALSE(QPolynomial::from({1, 2}).is_palindromic(2));
  EXPECT_EQ((a - a).to_string(), "0");
  EXPECT_EQ(QPolynomial::from({0, -1, 0, 3}).to_string(), "-q + 3q^3");
}

TEST(QPolynomial, ExactDivisionByPowersOfQMinusOne) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Int> cs;
    for (int i = 0; i < 4; ++i) cs.emplace_back(d(rng));
    const QPolynomial p(cs);
    const std::size_t k = t % 4;
    const QPolynomial prod = p * QPolynomial::q_minus_one_power(k);
    auto back = prod.divided_by_q_minus_one_power(k);
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, p);
    if (!p.is_zero() && p.evaluate(Int(1)) != 0) {
      EXPECT_FALSE(prod.divided_by_q_minus_one_power(k + 1));
    }
  }
  EXPECT_FALSE(QPolynomial::from({1, 1}).divided_by_q_minus_one_power(1));
}

TEST(GStalk, Examples) {
  EXPECT_EQ(g_stalk(Cone::zero(3)), QPolynomial(1));
  EXPECT_EQ(g_stalk(Cone::from_rays({v({1, 0, 0}), v({1, 2, 0}), v({1, 1, 3})}, 3)), QPolynomial(1));
  EXPECT_EQ(g_stalk(corpus::polygon_cone(4)), QPolynomial::from({1, 1}));
}

TEST(GStalk, PolygonConesMatchRayCountOracle) {
  for (int m = 3; m <= 8; ++m) EXPECT_EQ(g_stalk(corpus::polygon_cone(m)), g_polygon_cone(m)) << "m = " << m;
}

TEST(GStalk, SimplicialConesHaveTrivialStalk) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-3, 3);
  int done = 0;
  while (done < 20) {
    std::vector<IntVector> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(v({d(rng), d(rng), d(rng)}));
    if (vector_rank(gens, 3) != 3) continue;
    EXPECT_EQ(g_stalk(Cone::from_rays(gens, 3)), QPolynomial(1));
    ++done;
  }
}

TEST(GStalk, CacheIsUsed) {
  GCache cache;
  g_stalk(corpus::polygon_cone(6), cache);
  const auto n = cache.size();
  EXPECT_GT(n, 0u);
  g_stalk(corpus::polygon_cone(6), cache);
  EXPECT_EQ(cache.size(), n);
  EXPECT_GT(cache.hits(), 0u);
}

TEST(GStalk, AgreesWithResolutionRoute) {
  for (int m = 3; m <= 6; ++m) EXPECT_EQ(g_via_resolution(corpus::polygon_cone(m)), g_stalk(corpus::polygon_cone(m)));
  const Cone a1sing = Cone::from_rays({v({1, 0}), v({1, 2})}, 2);
  EXPECT_EQ(g_via_resolution(a1sing), QPolynomial(1));
}

TEST(LocalIh, Examples) {
  const Fan sq = corpus::square_cone();
  const auto top = sq.maximal_cones().front();
  EXPECT_EQ(local_ih(sq, top, top), QPolynomial(1));
  EXPECT_EQ(local_ih(sq, 0, top), QPolynomial::from({1, 1}));
  for (std::size_t t = 1; t < sq.size(); ++t)
    if (t != top) {
      EXPECT_EQ(local_ih(sq, t, top), QPolynomial(1));
    }
  const Fan a2 = corpus::a2();
  for (auto t : a2.faces_of(3)) EXPECT_EQ(local_ih(a2, t, 3), QPolynomial(1));
  EXPECT_THROW(local_ih(corpus::p2(), 1, 2), InputError);
}

TEST(GlobalIh, Examples) {
  EXPECT_EQ(global_ih(corpus::p2()), QPolynomial::from({1, 1, 1}));
  EXPECT_EQ(global_ih(corpus::p1xp1()), QPolynomial::from({1, 2, 1}));
  EXPECT_EQ(global_ih(corpus::bl3_p2()), QPolynomial::from({1, 4, 1}));
  EXPECT_EQ(global_ih(corpus::pn(4)), QPolynomial::from({1, 1, 1, 1, 1}));
  EXPECT_EQ(global_ih(corpus::cube_face_fan()), QPolynomial::from({1, 5, 5, 1}));
  EXPECT_THROW(global_ih(corpus::a2()), NotComplete);
}

TEST(GlobalIh, SimplicialFansMatchFaceNumbers) {
  for (const Fan& f : {corpus::p2(), corpus::p112(), corpus::p123(), corpus::bl3_p2(), corpus::pn(3), corpus::p2xp1()})
    EXPECT_EQ(global_ih(f), h_from_face_numbers(f));
}

TEST(GlobalIh, PalindromicAndNonnegativeOnResolutions) {
  for (const Fan& f : {resolve(corpus::p123()), resolve(corpus::cube_face_fan())}) {
    const QPolynomial p = global_ih(f);
    EXPECT_TRUE(p.is_palindromic(f.rank()));
    EXPECT_TRUE(p.has_nonnegative_coefficients());
  }
}

TEST(IhContractible, Examples) {
  EXPECT_EQ(ih_contractible(corpus::a2()), QPolynomial(1));
  EXPECT_EQ(ih_contractible(corpus::square_cone()), QPolynomial::from({1, 1}));
  EXPECT_EQ(ih_contractible(corpus::a1()), QPolynomial(1));
  EXPECT_THROW(ih_contractible(corpus::p2()), NotContractibleType);
}
