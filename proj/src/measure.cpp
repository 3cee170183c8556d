#include "phigamma/measure.hpp"

#include "phigamma/errors.hpp"

namespace phigamma {

EnginePtr engine_of(const CtxPtr& c) { return c->engine(c); }

Measure measure_zero(const CtxPtr& c) {
  auto e = engine_of(c);
  return Measure{e, e->zero()};
}

Measure from_group_element(const CtxPtr& c, i64 a) {
  auto e = engine_of(c);
  return Measure{e, e->dirac(a)};
}

Measure group_ring(const CtxPtr& c, const std::vector<std::pair<u64, i64>>& terms) {
  Measure m = measure_zero(c);
  for (auto& [coef, a] : terms) m = m + scale(from_group_element(c, a), coef);
  return m;
}

Measure from_amice(const CtxPtr& c, const Series& a) {
  auto e = engine_of(c);
  return Measure{e, e->from_x(a)};
}

Series amice(const Measure& m) { return m.eng->to_x(m.lam); }

Measure operator+(const Measure& a, const Measure& b) { return Measure{a.eng, a.eng->add(a.lam, b.lam)}; }
Measure operator-(const Measure& a, const Measure& b) { return Measure{a.eng, a.eng->sub(a.lam, b.lam)}; }
Measure scale(const Measure& a, u64 s) { return Measure{a.eng, a.eng->scale(a.lam, s)}; }
Measure convolve(const Measure& a, const Measure& b) { return Measure{a.eng, a.eng->mul(a.lam, b.lam)}; }
Measure involute(const Measure& a) { return Measure{a.eng, a.eng->involute(a.lam)}; }
Measure g_twist(const Measure& a, const Character& d) { return Measure{a.eng, a.eng->twist(a.lam, d.inverse())}; }
Measure char_twist(const Measure& a, const Character& d) { return Measure{a.eng, a.eng->twist(a.lam, d)}; }
u64 coset_mass(const Measure& a, i64 unit, int n) { return a.eng->coset_mass(a.lam, unit, n); }
u64 specialize(const Measure& a, const Character& d) { return a.eng->specialize(a.lam, d); }
bool operator==(const Measure& a, const Measure& b) { return a.eng->equal(a.lam, b.lam); }
int measure_cap(const Measure& a) { return a.eng->cap(a.lam); }

PsiZero certify(const ModElem& x) {
  auto e = engine_of(x.mod->ctx);
  PsiZero r{x.mod, {}};
  for (auto& s : to_split(x)) r.theta.push_back(e->from_x(s));
  return r;
}

ModElem realize(const PsiZero& x) {
  auto e = engine_of(x.mod->ctx);
  Vec w;
  for (auto& t : x.theta) w.push_back(e->to_x(t));
  return from_split(x.mod, w);
}

PsiZero psi_zero_of(const ModulePtr& D, std::vector<GammaElt> theta) {
  if (static_cast<int>(theta.size()) != D->rank) throw RankMismatch("coordinate count differs from rank");
  return PsiZero{D, std::move(theta)};
}

PsiZero operator+(const PsiZero& a, const PsiZero& b) {
  auto e = engine_of(a.mod->ctx);
  PsiZero r = a;
  for (std::size_t i = 0; i < r.theta.size(); ++i) r.theta[i] = e->add(a.theta[i], b.theta[i]);
  return r;
}

PsiZero operator-(const PsiZero& a, const PsiZero& b) {
  auto e = engine_of(a.mod->ctx);
  PsiZero r = a;
  for (std::size_t i = 0; i < r.theta.size(); ++i) r.theta[i] = e->sub(a.theta[i], b.theta[i]);
  return r;
}

PsiZero scale(const PsiZero& a, u64 s) {
  auto e = engine_of(a.mod->ctx);
  PsiZero r = a;
  for (auto& t : r.theta) t = e->scale(t, s);
  return r;
}

bool operator==(const PsiZero& a, const PsiZero& b) {
  auto e = engine_of(a.mod->ctx);
  for (std::size_t i = 0; i < a.theta.size(); ++i)
    if (!e->equal(a.theta[i], b.theta[i])) return false;
  return true;
}

int psi_zero_cap(const PsiZero& a) {
  auto e = engine_of(a.mod->ctx);
  int c = INT_MAX;
  for (auto& t : a.theta) c = std::min(c, e->cap(t));
  return c;
}

PsiZero act_on(const Measure& lam, const PsiZero& x) {
  auto e = lam.eng;
  PsiZero r = x;
  for (std::size_t i = 0; i < r.theta.size(); ++i)
    r.theta[i] = e->mul(e->twist(lam.lam, x.mod->eta[i]), x.theta[i]);
  return r;
}

std::vector<i64> balanced_units(u64 p, int n) {
  const u64 m = ipow(p, n);
  std::vector<i64> out;
  for (u64 a = 1; a < m; ++a)
    if (a % p) out.push_back(balanced(a, m));
  return out;
}

i64 unit_inverse(const Ctx& c, i64 a) { return static_cast<i64>(invm(redm(a, c.qbig), c.qbig)); }

i64 unit_product(const Ctx& c, i64 a, i64 b) {
  return static_cast<i64>(mulm(redm(a, c.qbig), redm(b, c.qbig), c.qbig));
}

namespace {

Series psi_n(Series f, int n) {
  for (int i = 0; i < n; ++i) f = psi_scalar(f);
  return f;
}

Series phi_n(Series f, int n) {
  for (int i = 0; i < n; ++i) f = frobenius(f);
  return f;
}

}  // namespace

u64 coset_mass_riemann(const Series& a, i64 unit, int n) {
  const CtxPtr& c = a.ctx();
  Series h = psi_n(Series::one_plus_x_pow(c, -unit) * a, n);
  if (h.cap() < c->N) throw PrecisionTooLow("coset mass not determined at this precision");
  if (!h.is_zero() && h.lo() < 0) throw NegativeTailResidual("negative tail after restriction");
  return h.coeff(0);
}

ModElem act_on_riemann(const Measure& lam, const ModElem& x, int n) {
  ModElem acc = elem_zero(x.mod);
  for (i64 a : balanced_units(x.mod->ctx->p, n)) {
    u64 m = coset_mass(lam, a, n);
    if (m) acc = acc + scale(apply_sigma(a, x), m);
  }
  return acc;
}

Series involute_riemann(const Series& a, int n) {
  const CtxPtr& c = a.ctx();
  Series acc = Series::zero(c);
  for (i64 i : balanced_units(c->p, n)) {
    Series piece = phi_n(psi_n(Series::one_plus_x_pow(c, -i) * a, n), n);
    acc = acc + Series::one_plus_x_pow(c, unit_inverse(*c, i)) * piece;
  }
  return acc;
}

Series convolve_riemann(const Series& a1, const Series& a2, int n) {
  const CtxPtr& c = a1.ctx();
  Series acc = Series::zero(c);
  auto units = balanced_units(c->p, n);
  std::vector<Series> r1, r2;
  for (i64 i : units) {
    r1.push_back(psi_n(Series::one_plus_x_pow(c, -i) * a1, n));
    r2.push_back(psi_n(Series::one_plus_x_pow(c, -i) * a2, n));
  }
  for (std::size_t k1 = 0; k1 < units.size(); ++k1) {
    for (std::size_t k2 = 0; k2 < units.size(); ++k2) {
      const i64 i1 = units[k1], i2 = units[k2];
      Series m = sigma(i2, r1[k1]) * sigma(i1, r2[k2]);
      acc = acc + Series::one_plus_x_pow(c, i1 * i2) * phi_n(m, n);
    }
  }
  return acc;
}

}  // namespace phigamma
