#include "phigamma/pairings.hpp"

#include "phigamma/errors.hpp"

namespace phigamma {

Character delta_D(const ModulePtr& D) {
  return Character::chi(D->ctx->p, D->ctx->N, 1).inverse() * D->det;
}

u64 residue_pair(const ModElem& x, const ModElem& y) {
  if (x.mod->rank != 2 || y.mod != x.mod) throw RankMismatch("residue pairing needs two elements of one rank-two module");
  ModElem u = apply_sigma(-1, embed_in_dual(tate_dual(x.mod), x));
  return res0(u.v[0] * y.v[0] + u.v[1] * y.v[1]);
}

Measure amice_coordinates(const PsiZero& g) {
  if (g.mod->rank != 1) throw RankMismatch("Amice coordinates need a rank-one module");
  auto e = engine_of(g.mod->ctx);
  // lambda . ((1+X)^-1 e_d) has coordinate tw_d(lambda) [sigma_{-1}], and [sigma_{-1}] is its own inverse
  GammaElt lam = e->twist(e->mul(g.theta[0], e->dirac(-1)), g.mod->eta[0].inverse());
  if (e->has_negative_tail(lam)) throw NegativeTailResidual("Amice coordinates have a negative T-tail");
  return Measure{e, lam};
}

Measure iwasawa_pair(const PsiZero& x, const PsiZero& y, u64 u) {
  const CtxPtr& c = x.mod->ctx;
  Measure m = convolve(from_group_element(c, -1), amice_coordinates(wedge_pair(x, y)));
  return scale(m, invm(u % c->q, c->q));
}

DualityResult duality_check(const PsiZero& x, const PsiZero& y) {
  const ModulePtr& D = x.mod;
  ModulePtr Ds = tate_dual(D);
  const Character dD = delta_D(D);
  auto to_dual = [&](const PsiZero& v) { return certify(embed_in_dual(Ds, realize(w_delta(v, dD)))); };
  DualityResult r{iwasawa_pair(x, y), scale(involute(iwasawa_pair(to_dual(x), to_dual(y))), D->det(-1)), false};
  r.pass = r.lhs == r.rhs;
  return r;
}

PsiZero epsilon_rank_one(const ModulePtr& Ed, const Measure& lam) {
  if (Ed->rank != 1) throw RankMismatch("rank-one epsilon needs a rank-one module");
  auto e = lam.eng;
  return PsiZero{Ed, {e->mul(e->twist(lam.lam, Ed->eta[0]), e->dirac(-1))}};
}

Measure epsilon_rank_two(const PsiZero& x, const PsiZero& y) { return amice_coordinates(wedge_pair(x, y)); }

Measure at_zeta_measure(i64 a, const PsiZero& x, const MeasureOp1& op) {
  const i64 ai = unit_inverse(*x.mod->ctx, a);
  return op(transport(x, ai, change_variable(x.mod, ai)));
}

Measure at_zeta_measure(i64 a, const PsiZero& x, const PsiZero& y, const MeasureOp2& op) {
  const i64 ai = unit_inverse(*x.mod->ctx, a);
  ModulePtr D1 = change_variable(x.mod, ai);
  ModulePtr D2 = y.mod == x.mod ? D1 : change_variable(y.mod, ai);
  return op(transport(x, ai, D1), transport(y, ai, D2));
}

TrianguleResult trianguline_factorization_check(const Character& d1, const Character& d2, const Series& U) {
  const CtxPtr& c = U.ctx();
  ModulePtr D = build_triangular(c, d1, d2, U);
  const Series inv = Series::one_plus_x_pow(c, -1);
  PsiZero x = certify(elem(D, {inv, Series::zero(c)}));
  ModElem phi_e2 = apply_phi(elem(D, {Series::zero(c), Series::constant(c, 1)}));
  PsiZero y = certify(scale(mul_scalar(inv, phi_e2), invm(d2.at_p(), c->q)));
  Measure v = convolve(from_group_element(c, -1), iwasawa_pair(x, y));
  return TrianguleResult{v, v == from_group_element(c, 1)};
}

bool dospinescu_check(const ModulePtr& D) {
  const CtxPtr& c = D->ctx;
  PsiZero x = certify(elem(D, {Series::one_plus_x_pow(c, 1), Series::zero(c)}));
  return w_delta(x, delta_D(D)) == scale(x, D->eta[0](-1));
}

}  // namespace phigamma
