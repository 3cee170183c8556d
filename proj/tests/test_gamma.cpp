#include <gtest/gtest.h>

#include "phigamma/errors.hpp"
#include "phigamma/gamma.hpp"

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

// f - phi(psi(f)) always lies in the psi = 0 part
Series psi_zero_sample(const CtxPtr& c, u64 seed) {
  auto f = sample(c, -6, 40, seed);
  return f - frobenius(psi_scalar(f));
}

i64 inverse_unit(i64 a, const Ctx& c) { return static_cast<i64>(invm(redm(a, c.qbig), c.qbig)); }

class GammaTest : public ::testing::TestWithParam<u64> {};

}  // namespace

TEST_P(GammaTest, DiracRoundTrip) {
  auto c = ctx_for(GetParam());
  auto E = c->engine(c);
  for (i64 a : std::initializer_list<i64>{1, 2, -1, 7, static_cast<i64>(1 + c->p), -11}) {
    auto x = Series::one_plus_x_pow(c, a);
    auto th = E->from_x(x);
    EXPECT_TRUE(E->equal(th, E->dirac(a))) << a;
    auto back = E->to_x(E->dirac(a));
    EXPECT_TRUE(back == x) << a;
    EXPECT_GE(back.exact_hi(), 100) << a;
  }
}

TEST_P(GammaTest, RandomRoundTrip) {
  auto c = ctx_for(GetParam());
  auto E = c->engine(c);
  for (u64 seed = 1; seed <= 5; ++seed) {
    auto x = psi_zero_sample(c, seed);
    auto th = E->from_x(x);
    auto y = E->to_x(th);
    auto ag = agree(x, y);
    EXPECT_TRUE(ag.equal) << seed << " mismatch at " << ag.first_mismatch;
    EXPECT_GE(ag.exact_hi, 60);
  }
}

TEST_P(GammaTest, NotPsiZeroRejected) {
  auto c = ctx_for(GetParam());
  auto E = c->engine(c);
  EXPECT_THROW(E->from_x(Series::monomial(c, 1, -1)), NotPsiZero);
}

TEST_P(GammaTest, DiracAlgebra) {
  auto c = ctx_for(GetParam());
  auto E = c->engine(c);
  EXPECT_TRUE(E->equal(E->mul(E->dirac(2), E->dirac(-7)), E->dirac(-14)));
  EXPECT_TRUE(E->equal(E->involute(E->dirac(2)), E->dirac(inverse_unit(2, *c))));
  auto d = Character::chi(c->p, c->N, 2) * Character::finite(c->p, c->N, 1, c->q - 1);
  for (i64 a : {2, -1, 4}) {
    auto tw = E->twist(E->dirac(a), d);
    EXPECT_TRUE(E->equal(tw, E->scale(E->dirac(a), d(a)))) << a;
    EXPECT_EQ(E->specialize(E->dirac(a), d), invm(d(a), c->q));
  }
}

TEST_P(GammaTest, ActionMatchesSigma) {
  auto c = ctx_for(GetParam());
  auto E = c->engine(c);
  auto x = psi_zero_sample(c, 17);
  auto th = E->from_x(x);
  for (i64 a : std::initializer_list<i64>{2, -1, static_cast<i64>(1 + c->p)}) {
    auto lhs = E->to_x(E->mul(E->dirac(a), th));
    auto ag = agree(lhs, sigma(a, x));
    EXPECT_TRUE(ag.equal) << a;
    EXPECT_GE(ag.exact_hi, 60);
  }
}

TEST_P(GammaTest, CosetMasses) {
  auto c = ctx_for(GetParam());
  auto E = c->engine(c);
  auto lam = E->add(E->scale(E->dirac(2), 5), E->dirac(1 + static_cast<i64>(c->p)));
  EXPECT_EQ(E->coset_mass(lam, 2, 1), 5u);
  EXPECT_EQ(E->coset_mass(lam, 1, 1), 1u);
  EXPECT_EQ(E->coset_mass(lam, 1, 2), 0u);
  EXPECT_EQ(E->coset_mass(lam, 1 + static_cast<i64>(c->p), 2), 1u);
}

INSTANTIATE_TEST_SUITE_P(Primes, GammaTest, ::testing::Values(3u, 5u));
