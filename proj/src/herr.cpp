#include "phigamma/herr.hpp"

#include "phigamma/errors.hpp"

namespace phigamma {

namespace {

ModElem theta(Flavor f, const ModElem& x) { return f == Flavor::PhiGamma ? apply_phi(x) : apply_psi(x); }

void expect_size(const Cochain& c) {
  const std::size_t want = c.degree == 1 ? 2 : 1;
  if (c.degree < 0 || c.degree > 2 || c.entries.size() != want) throw ConfigInvalid("malformed cochain");
}

}  // namespace

i64 gamma_generator(const Ctx& c) { return static_cast<i64>(c.p) + 1; }

Cochain cochain(Flavor f, std::vector<ModElem> entries, int degree) {
  if (entries.empty()) throw ConfigInvalid("cochain without entries");
  const i64 g = gamma_generator(*entries.front().mod->ctx);
  Cochain c{degree, f, std::move(entries), g};
  expect_size(c);
  for (auto& e : c.entries)
    if (e.mod != c.entries.front().mod) throw RankMismatch("cochain entries from different modules");
  return c;
}

bool operator==(const Cochain& a, const Cochain& b) {
  if (a.degree != b.degree || a.flavor != b.flavor || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (!(a.entries[i] == b.entries[i])) return false;
  return true;
}

bool is_zero(const Cochain& c) {
  for (auto& e : c.entries)
    if (!(e == elem_zero(e.mod))) return false;
  return true;
}

Cochain differential(const Cochain& c) {
  expect_size(c);
  if (c.degree == 2) throw DegreeOverflow("no differential out of degree 2");
  if (c.degree == 0) {
    const ModElem& x = c.entries[0];
    return Cochain{1, c.flavor, {apply_sigma(c.gamma, x) - x, theta(c.flavor, x) - x}, c.gamma};
  }
  const ModElem& a = c.entries[0];
  const ModElem& b = c.entries[1];
  return Cochain{2, c.flavor, {(theta(c.flavor, a) - a) - (apply_sigma(c.gamma, b) - b)}, c.gamma};
}

Cochain psi_comparison(const Cochain& c) {
  expect_size(c);
  if (c.flavor != Flavor::PhiGamma) throw ConfigInvalid("comparison map starts from the phi complex");
  Cochain r = c;
  r.flavor = Flavor::PsiGamma;
  ModElem& last = r.entries.back();
  if (c.degree > 0) last = scale(apply_psi(last), c.entries.back().mod->ctx->q - 1);
  return r;
}

ModElem tensor_elem(const ModulePtr& AB, const ModElem& x, const ModElem& y) {
  if (AB->rank != x.mod->rank * y.mod->rank) throw RankMismatch("tensor module rank");
  Vec v;
  for (auto& a : x.v)
    for (auto& b : y.v) v.push_back(a * b);
  return elem(AB, v);
}

Cochain cup(const Cochain& c1, const Cochain& c2, const ModulePtr& AB) {
  expect_size(c1);
  expect_size(c2);
  if (c1.flavor != c2.flavor) throw ConfigInvalid("cup of cochains of different flavors");
  const int deg = c1.degree + c2.degree;
  if (deg > 2) throw DegreeOverflow("cup product lands above degree 2");
  if (c1.degree > 0 && c1.flavor != Flavor::PhiGamma) throw ConfigInvalid("cup formulas use phi");
  auto t = [&](const ModElem& x, const ModElem& y) { return tensor_elem(AB, x, y); };
  auto g = [&](const ModElem& y) { return apply_sigma(c1.gamma, y); };
  Cochain r{deg, c1.flavor, {}, c1.gamma};
  if (c1.degree == 0) {
    for (auto& y : c2.entries) r.entries.push_back(t(c1.entries[0], y));
  } else if (c1.degree == 1 && c2.degree == 0) {
    const ModElem& y = c2.entries[0];
    r.entries = {t(c1.entries[0], g(y)), t(c1.entries[1], apply_phi(y))};
  } else if (c1.degree == 2) {
    r.entries = {t(c1.entries[0], g(apply_phi(c2.entries[0])))};
  } else {
    const ModElem &x1 = c1.entries[0], &y1 = c1.entries[1], &x2 = c2.entries[0], &y2 = c2.entries[1];
    r.entries = {t(x1, g(y2)) - t(y1, apply_phi(x2))};
  }
  return r;
}

Cochain cup(const Cochain& c1, const Cochain& c2) {
  return cup(c1, c2, tensor(c1.entries.front().mod, c2.entries.front().mod));
}

u64 iota_scalar(const Ctx& c) {
  // log(1+p)/p = sum_k (-1)^{k+1} p^{k-1}/k; a term is zero mod p^N once k-1-v_p(k) >= N
  const u64 q = c.q;
  u64 s = 0;
  for (u64 k = 1; k <= static_cast<u64>(2 * c.N + 8); ++k) {
    int v = 0;
    u64 m = k;
    while (m % c.p == 0) m /= c.p, ++v;
    const int e = static_cast<int>(k) - 1 - v;
    if (e >= c.N) continue;
    u64 term = mulm(ipow(c.p, e), invm(m % q, q), q);
    s = (k % 2) ? addm(s, term, q) : subm(s, term, q);
  }
  return mulm(s, (c.p - 1) % q, q);
}

Cochain iota_specialize(const ModElem& x, const Character& d) {
  if (!is_psi_fixed(x, 1)) throw NotPsiOne("psi(x) != x within precision");
  ModulePtr Dd = twist(x.mod, d.gamma_only());
  const u64 s = iota_scalar(*x.mod->ctx);
  return cochain(Flavor::PsiGamma, {scale(elem(Dd, x.v), s), elem_zero(Dd)}, 1);
}

}  // namespace phigamma
