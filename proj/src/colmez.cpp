#include "phigamma/colmez.hpp"

#include "phigamma/errors.hpp"

namespace phigamma {

PsiZero m_delta(const PsiZero& x, const Character& d) {
  auto e = engine_of(x.mod->ctx);
  PsiZero r = x;
  for (auto& t : r.theta) t = e->twist(t, d);
  return r;
}

PsiZero w_star(const PsiZero& x) {
  // on (1+X)^a f_i the limit collapses to eta_i(-1) eta_i(a)^-2 (1+X)^{1/a} f_i
  auto e = engine_of(x.mod->ctx);
  PsiZero r = x;
  for (std::size_t i = 0; i < r.theta.size(); ++i) {
    const Character& eta = x.mod->eta[i];
    r.theta[i] = e->scale(e->twist(e->involute(x.theta[i]), eta * eta), eta(-1));
  }
  return r;
}

PsiZero w_delta(const PsiZero& x, const Character& d) { return m_delta(w_star(x), d.inverse()); }

namespace {

// kappa = tw_{eta^-1} theta turns the convolution into the product in E_R(Gamma)
GammaElt kappa(const GammaEngine& e, const GammaElt& t, const Character& eta) {
  return e.twist(t, eta.inverse());
}

}  // namespace

PsiZero convolution(const PsiZero& x1, const PsiZero& x2, const ModulePtr& target) {
  if (x1.mod->rank != 1 || x2.mod->rank != 1 || target->rank != 1)
    throw RankMismatch("convolution with multiplication needs rank-one inputs");
  auto e = engine_of(x1.mod->ctx);
  const Character& a = x1.mod->eta[0];
  const Character& b = x2.mod->eta[0];
  GammaElt k = e->mul(kappa(*e, x1.theta[0], a), kappa(*e, x2.theta[0], b));
  return PsiZero{target, {e->twist(k, a * b)}};
}

PsiZero convolution(const PsiZero& x1, const PsiZero& x2) {
  return convolution(x1, x2, make_rank_one(x1.mod->ctx, x1.mod->eta[0] * x2.mod->eta[0]));
}

ModulePtr det_module(const ModulePtr& D) { return make_rank_one(D->ctx, D->det); }

PsiZero wedge_pair(const PsiZero& x, const PsiZero& y, const ModulePtr& detmod) {
  if (x.mod->rank != 2) throw RankMismatch("wedge pairing needs rank two");
  auto e = engine_of(x.mod->ctx);
  const auto& eta = x.mod->eta;
  GammaElt a = e->mul(kappa(*e, x.theta[0], eta[0]), kappa(*e, y.theta[1], eta[1]));
  GammaElt b = e->mul(kappa(*e, y.theta[0], eta[0]), kappa(*e, x.theta[1], eta[1]));
  return PsiZero{detmod, {e->twist(e->sub(a, b), eta[0] * eta[1])}};
}

PsiZero wedge_pair(const PsiZero& x, const PsiZero& y) { return wedge_pair(x, y, det_module(x.mod)); }

ModElem transport(const ModElem& x, i64 b, const ModulePtr& target) {
  Vec v;
  for (auto& s : x.v) v.push_back(sigma(b, s));
  return elem(target, v);
}

PsiZero transport(const PsiZero& x, i64 b, const ModulePtr& target) {
  return certify(transport(realize(x), b, target));
}

PsiZero at_zeta(i64 a, const PsiZero& x, const UnaryOp& op) {
  const Ctx& c = *x.mod->ctx;
  const i64 ai = unit_inverse(c, a);
  ModulePtr D1 = change_variable(x.mod, ai);
  PsiZero out = op(transport(x, ai, D1));
  // the output module in the original parameter
  ModulePtr back = out.mod == D1 ? x.mod : change_variable(out.mod, a);
  return transport(out, a, back);
}

PsiZero at_zeta(i64 a, const PsiZero& x, const PsiZero& y, const BinaryOp& op) {
  const Ctx& c = *x.mod->ctx;
  const i64 ai = unit_inverse(c, a);
  ModulePtr D1 = change_variable(x.mod, ai);
  ModulePtr D2 = y.mod == x.mod ? D1 : change_variable(y.mod, ai);
  PsiZero out = op(transport(x, ai, D1), transport(y, ai, D2));
  ModulePtr back = out.mod == D1 ? x.mod : change_variable(out.mod, a);
  return transport(out, a, back);
}

namespace {

ModElem psi_n(ModElem x, int n) {
  for (int i = 0; i < n; ++i) x = apply_psi(x);
  return x;
}

ModElem phi_n(ModElem x, int n) {
  for (int i = 0; i < n; ++i) x = apply_phi(x);
  return x;
}

}  // namespace

ModElem m_delta_riemann(const ModElem& x, const Character& d, int n) {
  const CtxPtr& c = x.mod->ctx;
  ModElem acc = elem_zero(x.mod);
  for (i64 i : balanced_units(c->p, n)) {
    ModElem piece = phi_n(psi_n(mul_scalar(Series::one_plus_x_pow(c, -i), x), n), n);
    acc = acc + scale(mul_scalar(Series::one_plus_x_pow(c, i), piece), d(i));
  }
  return acc;
}

ModElem w_star_riemann(const ModElem& x, int n) {
  const CtxPtr& c = x.mod->ctx;
  ModElem acc = elem_zero(x.mod);
  for (i64 i : balanced_units(c->p, n)) {
    const i64 ii = unit_inverse(*c, i);
    const i64 s = static_cast<i64>(negm(mulm(redm(ii, c->qbig), redm(ii, c->qbig), c->qbig), c->qbig));
    ModElem piece = phi_n(psi_n(mul_scalar(Series::one_plus_x_pow(c, -i), x), n), n);
    acc = acc + mul_scalar(Series::one_plus_x_pow(c, ii), apply_sigma(s, piece));
  }
  return acc;
}

namespace {

template <class M>
ModElem two_variable(const ModElem& x1, const ModElem& x2, const ModulePtr& target, int n, M m) {
  const CtxPtr& c = x1.mod->ctx;
  auto units = balanced_units(c->p, n);
  std::vector<ModElem> r1, r2;
  for (i64 i : units) {
    r1.push_back(psi_n(mul_scalar(Series::one_plus_x_pow(c, -i), x1), n));
    r2.push_back(psi_n(mul_scalar(Series::one_plus_x_pow(c, -i), x2), n));
  }
  ModElem acc = elem_zero(target);
  for (std::size_t k1 = 0; k1 < units.size(); ++k1)
    for (std::size_t k2 = 0; k2 < units.size(); ++k2) {
      const i64 i1 = units[k1], i2 = units[k2];
      ModElem v = elem(target, m(apply_sigma(i2, r1[k1]), apply_sigma(i1, r2[k2])));
      acc = acc + mul_scalar(Series::one_plus_x_pow(c, i1 * i2), phi_n(v, n));
    }
  return acc;
}

}  // namespace

ModElem convolution_riemann(const ModElem& x1, const ModElem& x2, const ModulePtr& target, int n) {
  return two_variable(x1, x2, target, n, [](const ModElem& a, const ModElem& b) { return Vec{a.v[0] * b.v[0]}; });
}

ModElem wedge_riemann(const ModElem& x, const ModElem& y, const ModulePtr& detmod, int n) {
  return two_variable(x, y, detmod, n, [](const ModElem& a, const ModElem& b) {
    return Vec{a.v[0] * b.v[1] - a.v[1] * b.v[0]};
  });
}

ModElem stabilize(const std::function<ModElem(int)>& level, int n_max, int min_exact) {
  ModElem prev = level(1);
  for (int n = 2; n <= n_max; ++n) {
    ModElem cur = level(n);
    if (elem_cap(cur) - cur.mod->ctx->N < min_exact) break;
    if (cur == prev) return cur;
    prev = cur;
  }
  throw LimitNotStabilized("successive levels disagree up to n_max");
}

}  // namespace phigamma
