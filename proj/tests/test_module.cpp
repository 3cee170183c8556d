#include <gtest/gtest.h>

#include "phigamma/errors.hpp"
#include "phigamma/module.hpp"

using namespace phigamma;

namespace {

CtxPtr ctx_for(u64 p) {
  static CtxPtr c3 = make_ctx(3, 6, -40, 160), c5 = make_ctx(5, 6, -40, 160);
  return p == 3 ? c3 : c5;
}

Series sample(const CtxPtr& c, int lo, int n, u64 seed) {
  std::vector<u64> v(n);
  u64 x = seed * 2654435761u + 1;
  for (auto& e : v) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    e = (x >> 20) % c->q;
  }
  return Series::exact(c, lo, v);
}

struct Corpus {
  Character d1, d2;
  ModulePtr split, tri;
};

Corpus corpus(u64 p) {
  auto c = ctx_for(p);
  Corpus k;
  k.d1 = Character::chi(p, 6, 1).with_at_p(2);
  k.d2 = Character::finite(p, 6, 1, c->q - 1).with_at_p(p + 2);
  k.split = make_split(c, k.d1, k.d2);
  k.tri = build_triangular(c, k.d1, k.d2, Series::monomial(c, 1, 1));
  return k;
}

class ModuleTest : public ::testing::TestWithParam<u64> {};

}  // namespace

TEST_P(ModuleTest, RankOnePsi) {
  auto c = ctx_for(GetParam());
  auto d = Character::chi(c->p, c->N, 2).with_at_p(4);
  auto D = make_rank_one(c, d);
  auto f = sample(c, -5, 30, 3);
  auto x = apply_psi(elem(D, {f}));
  auto expect = psi_scalar(f).scale(invm(4, c->q));
  EXPECT_TRUE(x.v[0] == expect);
}

TEST_P(ModuleTest, TriangularStructure) {
  auto k = corpus(GetParam());
  const Module& D = *k.tri;
  EXPECT_TRUE(check_etale(D));
  const i64 g = 1 + static_cast<i64>(GetParam());
  for (i64 a : std::initializer_list<i64>{2, g, -1}) {
    EXPECT_TRUE(check_commutation(D, a)) << a;
    EXPECT_TRUE(mat::equal(D.G(a), D.G_split(a))) << a;
  }
  EXPECT_TRUE(check_cocycle(D, 2, g));
  EXPECT_TRUE(check_cocycle(D, -1, 2));
  EXPECT_TRUE(mat::equal(D.G(1), mat::identity(D.ctx, 2)));
}

TEST_P(ModuleTest, SplitHasTrivialCocycle) {
  auto k = corpus(GetParam());
  auto g = k.split->G(2);
  EXPECT_TRUE(g[0][1].is_zero());
  EXPECT_TRUE(check_commutation(*k.split, 2));
}

TEST_P(ModuleTest, PsiPhiOnModules) {
  auto k = corpus(GetParam());
  auto c = ctx_for(GetParam());
  for (auto D : {k.split, k.tri, tate_dual(k.tri)}) {
    auto x = elem(D, {sample(c, -4, 25, 1), sample(c, -3, 25, 2)});
    auto y = apply_psi(apply_phi(x));
    EXPECT_TRUE(y == x);
    EXPECT_GE(elem_cap(y) - c->N, 21);  // covers every input degree
    for (int j = 1; j < static_cast<int>(c->p); ++j) {
      auto z = apply_psi(mul_scalar(Series::one_plus_x_pow(c, j), apply_phi(x)));
      EXPECT_TRUE(z == elem_zero(D)) << j;
    }
  }
}

TEST_P(ModuleTest, SigmaComposition) {
  auto k = corpus(GetParam());
  auto c = ctx_for(GetParam());
  auto x = elem(k.tri, {sample(c, -4, 25, 5), sample(c, -3, 25, 6)});
  EXPECT_TRUE(apply_sigma(2, apply_sigma(-1, x)) == apply_sigma(-2, x));
  EXPECT_TRUE(apply_sigma(2, apply_phi(x)) == apply_phi(apply_sigma(2, x)));
}

TEST_P(ModuleTest, DualStructure) {
  auto k = corpus(GetParam());
  auto Ds = tate_dual(k.tri);
  EXPECT_TRUE(check_etale(*Ds));
  EXPECT_TRUE(check_commutation(*Ds, 2));
  EXPECT_TRUE(mat::equal(Ds->G(2), Ds->G_split(2)));
  auto chi = Character::chi(GetParam(), 6, 1);
  EXPECT_TRUE(Ds->det == k.tri->det.inverse() * chi * chi);
}

TEST_P(ModuleTest, TwistDeterminant) {
  auto k = corpus(GetParam());
  auto d = Character::chi(GetParam(), 6, 3).with_at_p(7);
  auto T = twist(k.tri, d);
  EXPECT_TRUE(T->det == k.tri->det * d * d);
  EXPECT_TRUE(check_commutation(*T, 2));
  auto R = twist(make_rank_one(ctx_for(GetParam()), k.d1), k.d2);
  EXPECT_TRUE(R->eta[0] == k.d1 * k.d2);
  auto Tr = twist(k.tri, Character::trivial(GetParam(), 6));
  EXPECT_TRUE(mat::equal(Tr->P, k.tri->P));
}

TEST_P(ModuleTest, PsiFixedPoint) {
  auto c = ctx_for(GetParam());
  auto D = make_rank_one(c, Character::trivial(c->p, c->N));
  EXPECT_TRUE(is_psi_fixed(elem(D, {Series::monomial(c, 1, -1)}), 1));
  EXPECT_TRUE(is_psi_fixed(elem_zero(D), 1));
  EXPECT_FALSE(is_psi_fixed(elem(D, {Series::monomial(c, 1, 1)}), 1));
}

TEST_P(ModuleTest, DualEmbedding) {
  auto k = corpus(GetParam());
  auto c = ctx_for(GetParam());
  auto e2 = elem(k.split, {Series::zero(c), Series::constant(c, 1)});
  auto f = rank2_dual_embed(e2);
  // the functional sends e1 to (e1 ^ e2)/z = 1 and e2 to 0
  EXPECT_TRUE(f[0] == Series::constant(c, 1));
  EXPECT_TRUE(f[1] == Series::zero(c));
  auto x = elem(k.tri, {sample(c, -2, 10, 1), sample(c, -2, 10, 2)});
  auto fx = rank2_dual_embed(x);
  EXPECT_TRUE((fx[0] * x.v[0] + fx[1] * x.v[1]) == Series::zero(c));
  EXPECT_THROW(rank2_dual_embed(elem(make_rank_one(c, k.d1), {Series::zero(c)})), RankMismatch);
}

TEST_P(ModuleTest, TriangularRejectsNegativeU) {
  auto c = ctx_for(GetParam());
  auto k = corpus(GetParam());
  EXPECT_THROW(build_triangular(c, k.d1, k.d2, Series::monomial(c, 1, -1)), ConfigInvalid);
}

INSTANTIATE_TEST_SUITE_P(Primes, ModuleTest, ::testing::Values(3u, 5u));
