#include "phigamma/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <thread>

#include "phigamma/errors.hpp"

namespace phigamma {

namespace {

using Rng = std::mt19937_64;

// an equality only counts when this many degrees are exactly known
constexpr int kMinExact = 10;

json summarize(const Series& f) {
  u64 h = 1469598103934665603ULL;
  std::vector<u64> head;
  for (int b = f.lo(); !f.is_zero() && b <= f.exact_hi(); ++b) {
    const u64 v = f.coeff(b);
    if (head.size() < 6) head.push_back(v);
    h = (h ^ (v + 0x9e3779b97f4a7c15ULL * static_cast<u64>(b - f.lo() + 1))) * 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return json{{"lo", f.is_zero() ? 0 : f.lo()}, {"head", head}, {"exact_hi", f.exact_hi()}, {"digest", buf}};
}

json summarize(const ModElem& x) {
  json a = json::array();
  for (auto& s : x.v) a.push_back(summarize(s));
  return a;
}

json summarize(const PsiZero& x) { return summarize(realize(x)); }
json summarize(const Measure& m) { return summarize(amice(m)); }

// the offending input at reduced window: its first dozen coefficients
json reduced(const Series& f) {
  std::vector<u64> v;
  for (int b = f.lo(); !f.is_zero() && b < f.lo() + 12 && b < f.cap(); ++b) v.push_back(f.coeff(b));
  return json{{"lo", f.is_zero() ? 0 : f.lo()}, {"coeffs", v}};
}

json reduced(const ModElem& x) {
  json a = json::array();
  for (auto& s : x.v) a.push_back(reduced(s));
  return a;
}

json reduced(const PsiZero& x) { return reduced(realize(x)); }
json reduced(const Measure& m) { return reduced(amice(m)); }

struct Outcome {
  bool pass = false;
  json lhs, rhs, precision, full_lhs, full_rhs;
};

Outcome finish(bool equal, int exact, json l, json r, const std::function<json()>& full_l,
               const std::function<json()>& full_r) {
  Outcome o;
  o.pass = equal && exact >= kMinExact;
  o.lhs = std::move(l);
  o.rhs = std::move(r);
  o.precision = json{{"exact_through", exact}, {"required", kMinExact}};
  if (!o.pass) {
    o.full_lhs = full_l();
    o.full_rhs = full_r();
  }
  return o;
}

Outcome same(const Series& a, const Series& b) {
  auto ag = agree(a, b);
  return finish(ag.equal, ag.exact_hi, summarize(a), summarize(b), [&] { return to_json(a); },
                [&] { return to_json(b); });
}

Outcome same(const ModElem& a, const ModElem& b) {
  const int ex = std::min(elem_cap(a), elem_cap(b)) - a.mod->ctx->N;
  return finish(a == b, ex, summarize(a), summarize(b), [&] { return to_json(a); }, [&] { return to_json(b); });
}

Outcome same(const PsiZero& a, const PsiZero& b) {
  const int ex = std::min(psi_zero_cap(a), psi_zero_cap(b)) - a.mod->ctx->N;
  return finish(a == b, ex, summarize(a), summarize(b), [&] { return to_json(realize(a)); },
                [&] { return to_json(realize(b)); });
}

Outcome same(const Measure& a, const Measure& b) {
  const int ex = std::min(measure_cap(a), measure_cap(b)) - a.eng->xctx()->N;
  return finish(a == b, ex, summarize(a), summarize(b), [&] { return to_json(a); }, [&] { return to_json(b); });
}

struct Env {
  SuiteConfig cfg;
  CtxPtr c;
  int n_max = 0;
  std::vector<std::pair<std::string, ModulePtr>> corpus;  // rank one first, then rank two
  std::size_t first_rank_two = 0;
};

struct Sink {
  int trial = 0;
  std::vector<CheckRecord> out;

  void add(const std::string& name, json params, const Outcome& o, json inputs = json::array()) {
    CheckRecord r;
    r.name = name;
    r.trial = trial;
    r.params = std::move(params);
    r.pass = o.pass;
    r.lhs = o.lhs;
    r.rhs = o.rhs;
    r.precision = o.precision;
    if (!o.pass) r.witness = json{{"inputs", std::move(inputs)}, {"lhs", o.full_lhs}, {"rhs", o.full_rhs}};
    out.push_back(std::move(r));
  }

  // run a check, turning a library error into a failed record
  void guard(const std::string& name, json params, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      Outcome o;
      o.lhs = std::string(e.kind());
      o.rhs = e.what();
      o.precision = json::object();
      add(name, std::move(params), o);
    }
  }
};

// ---- random inputs ----

i64 rand_unit(Rng& r, u64 p) {
  for (;;) {
    i64 a = static_cast<i64>(r() % 2000) + 1;
    if (a % static_cast<i64>(p)) return (r() & 1) ? a : -a;
  }
}

Series rand_series(Rng& r, const CtxPtr& c, int lo, int len) {
  std::vector<u64> v(len);
  for (auto& x : v) x = r() % c->q;
  return Series::exact(c, lo, v);
}

// chi^k times a finite-order character of conductor p^cond, k >= 1
Character rand_char(Rng& r, const CtxPtr& c) {
  const u64 p = c->p, q = c->q;
  const int N = c->N;
  const int k = static_cast<int>(r() % 4) + 1;
  const int cond = static_cast<int>(r() % 3);
  u64 zeta = 1;
  if (cond > 0) {
    const u64 t = teichmuller(r() % (p - 1) + 1, p, N);
    const u64 u = powm(1 + p, (r() % p) * ipow(p, N - cond), q);
    zeta = mulm(t, u, q);
  }
  return Character::chi(p, N, k) * Character::finite(p, N, cond, zeta);
}

u64 rand_unit_residue(Rng& r, const CtxPtr& c) { return static_cast<u64>(redm(rand_unit(r, c->p), c->q)); }

ModElem rand_psi0(Rng& r, const ModulePtr& D, int lo) {
  Vec v;
  for (int i = 0; i < D->rank; ++i) v.push_back(rand_series(r, D->ctx, lo, 30));
  auto x = elem(D, v);
  return x - apply_phi(apply_psi(x));
}

Measure rand_group_ring(Rng& r, const CtxPtr& c) {
  std::vector<std::pair<u64, i64>> t;
  const int n = static_cast<int>(r() % 3) + 1;
  for (int i = 0; i < n; ++i) t.push_back({r() % c->q, rand_unit(r, c->p) % 60});
  for (auto& [coef, a] : t)
    if (a % static_cast<i64>(c->p) == 0) a += 1;
  return group_ring(c, t);
}

PsiZero sigma_pz(i64 a, const PsiZero& x) { return certify(apply_sigma(a, realize(x))); }

ModElem split_dirac(const ModulePtr& D, int i, i64 a) {
  Vec v(D->rank, Series::zero(D->ctx));
  v[i] = Series::one_plus_x_pow(D->ctx, a);
  return from_split(D, v);
}

Series one_plus_x(const CtxPtr& c) { return Series::one_plus_x_pow(c, 1); }

// Dirac supports for the literal-sum oracles; level-n sums only fit the
// window for small p^n, so past p = 3 stay with level-one representatives
i64 literal_support(const CtxPtr& c, int trial) {
  const auto us = balanced_units(c->p, 1);
  const i64 u = us[static_cast<std::size_t>(trial) % us.size()];
  return c->p == 3 && trial % 2 == 0 ? u * (1 + static_cast<i64>(c->p)) : u;
}

// ---- suites ----

void suite_psi_phi(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  if (s.trial == 0) {
    auto xi = Series::monomial(c, 1, -1);
    s.add("psi_of_x_inverse", json::object(), same(psi_scalar(xi), xi));
  }
  auto f = rand_series(r, c, -5, 30);
  s.add("psi_of_phi/E_R", json::object(), same(psi_scalar(frobenius(f)), f), reduced(f));
  for (auto& [name, D] : e.corpus) {
    Vec v;
    for (int i = 0; i < D->rank; ++i) v.push_back(rand_series(r, c, -5, 30));
    auto x = elem(D, v);
    auto fx = apply_phi(x);
    s.add("psi_of_phi/" + name, {{"module", name}}, same(apply_psi(fx), x), reduced(x));
    for (u64 j = 1; j < c->p; ++j) {
      auto k = apply_psi(mul_scalar(Series::one_plus_x_pow(c, static_cast<i64>(j)), fx));
      s.add("psi_kills_translate/" + name + "/j=" + std::to_string(j), {{"module", name}, {"j", j}},
            same(k, elem_zero(D)), reduced(x));
    }
  }
}

void suite_m_delta(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  const auto& [name, D] = e.corpus[static_cast<std::size_t>(s.trial) % e.corpus.size()];
  auto x = certify(rand_psi0(r, D, -4));
  auto d1 = rand_char(r, c), d2 = rand_char(r, c);
  const i64 a = rand_unit(r, c->p);
  json prm{{"module", name}, {"d1", d1.describe()}, {"d2", d2.describe()}, {"a", a}};
  const u64 q = c->q;
  s.add("m_one", prm, same(m_delta(x, Character::trivial(c->p, c->N)), x), reduced(x));
  s.add("m_compose", prm, same(m_delta(m_delta(x, d2), d1), m_delta(x, d1 * d2)), reduced(x));
  s.add("m_sigma", prm, same(sigma_pz(a, m_delta(x, d1)), scale(m_delta(sigma_pz(a, x), d1), invm(d1(a), q))),
        reduced(x));
  auto op = [&](const PsiZero& y) { return m_delta(y, d1); };
  s.add("m_zeta_change", prm, same(at_zeta(a, x, op), scale(m_delta(x, d1), invm(d1(a), q))), reduced(x));
  if (s.trial < 4) {
    auto E = make_rank_one(c, d2);
    const i64 u = literal_support(c, s.trial);
    json lp{{"d", d1.describe()}, {"dirac", u}};
    s.guard("m_literal_sum", lp, [&] {
      auto xd = split_dirac(E, 0, u);
      auto lim = stabilize([&](int n) { return m_delta_riemann(xd, d1, n); }, e.n_max, kMinExact);
      s.add("m_literal_sum", lp, same(realize(m_delta(certify(xd), d1)), lim));
    });
  }
}

void suite_w(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  const auto& [name, D] = e.corpus[static_cast<std::size_t>(s.trial) % e.corpus.size()];
  auto x = certify(rand_psi0(r, D, -4));
  auto d = rand_char(r, c);
  const i64 a = rand_unit(r, c->p);
  json prm{{"module", name}, {"d", d.describe()}, {"a", a}};
  s.add("w_involution", prm, same(w_star(w_star(x)), x), reduced(x));
  s.add("w_m_commute", prm, same(m_delta(w_star(x), d.inverse()), w_star(m_delta(x, d))), reduced(x));
  s.add("w_delta_equivariance", prm,
        same(w_delta(sigma_pz(a, x), d), scale(sigma_pz(unit_inverse(*c, a), w_delta(x, d)), d(a))), reduced(x));
  // w_*(x (x) e_d) against d(-1) m_d(w_* x) (x) e_d as displayed, and the m_{d^2} form
  auto E = e.corpus.front().second;
  auto x0 = certify(rand_psi0(r, E, -4));
  auto Dd = twist(E, d);
  auto xd = certify(elem(Dd, realize(x0).v));
  auto lhs = w_star(xd);
  auto wx = w_star(x0);
  json tp{{"d", d.describe()}};
  s.add("w_twist_literal", tp, same(lhs, psi_zero_of(Dd, scale(m_delta(wx, d), d(-1)).theta)), reduced(x0));
  s.add("w_twist_squared", tp, same(lhs, psi_zero_of(Dd, scale(m_delta(wx, d * d), d(-1)).theta)), reduced(x0));
  if (s.trial < 4) {
    auto Ed = make_rank_one(c, d);
    const i64 u = literal_support(c, s.trial);
    json lp{{"d", d.describe()}, {"dirac", u}};
    s.guard("w_literal_sum", lp, [&] {
      auto xe = split_dirac(Ed, 0, u);
      auto lim = stabilize([&](int n) { return w_star_riemann(xe, n); }, e.n_max, kMinExact);
      s.add("w_literal_sum", lp, same(realize(w_star(certify(xe))), lim));
    });
  }
}

void suite_convolution(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  auto d1 = rand_char(r, c).with_at_p(rand_unit_residue(r, c)), d2 = rand_char(r, c);
  auto E1 = make_rank_one(c, d1), E2 = make_rank_one(c, d2);
  auto x1 = certify(rand_psi0(r, E1, -4)), x2 = certify(rand_psi0(r, E2, -4));
  const i64 a = rand_unit(r, c->p);
  const i64 ai = unit_inverse(*c, a);
  json prm{{"d1", d1.describe()}, {"d2", d2.describe()}, {"a", a}};
  auto m = convolution(x1, x2);
  s.add("conv_equivariance_slot1", prm, same(convolution(sigma_pz(a, x1), x2), sigma_pz(a, m)), reduced(x1));
  s.add("conv_equivariance_slot2", prm, same(convolution(x1, sigma_pz(a, x2)), sigma_pz(a, m)), reduced(x2));
  BinaryOp conv = [](const PsiZero& u, const PsiZero& v) { return convolution(u, v); };
  s.add("conv_zeta_change", prm, same(at_zeta(a, x1, x2, conv), act_on(from_group_element(c, ai), m)),
        reduced(x1));
  const auto& [name, D] = e.corpus[e.first_rank_two + static_cast<std::size_t>(s.trial) % (e.corpus.size() - e.first_rank_two)];
  auto x = certify(rand_psi0(r, D, -4)), y = certify(rand_psi0(r, D, -4));
  json wp{{"module", name}, {"a", a}};
  auto w = wedge_pair(x, y);
  auto xx = wedge_pair(x, x);
  s.add("wedge_alternating", wp, same(xx, scale(xx, 0)), reduced(x));
  s.add("wedge_antisymmetric", wp, same(wedge_pair(y, x), scale(w, c->q - 1)), reduced(x));
  s.add("wedge_equivariance", wp, same(wedge_pair(sigma_pz(a, x), y), sigma_pz(a, w)), reduced(x));
  BinaryOp wop = [](const PsiZero& u, const PsiZero& v) { return wedge_pair(u, v); };
  s.add("wedge_zeta_change", wp, same(at_zeta(a, x, y, wop), act_on(from_group_element(c, ai), w)), reduced(x));
  auto l = rand_group_ring(r, c), mu = rand_group_ring(r, c), nu = rand_group_ring(r, c);
  s.add("measure_unit", json::object(), same(convolve(l, from_group_element(c, 1)), l), reduced(l));
  s.add("measure_commutative", json::object(), same(convolve(l, mu), convolve(mu, l)), reduced(l));
  s.add("measure_associative", json::object(), same(convolve(convolve(l, mu), nu), convolve(l, convolve(mu, nu))),
        reduced(l));
  if (s.trial < 4) {
    const i64 u = literal_support(c, s.trial);
    json lp = prm;
    lp["dirac"] = u;
    s.guard("conv_literal_sum", lp, [&] {
      auto y1 = split_dirac(E1, 0, u), y2 = split_dirac(E2, 0, 1);
      auto T = make_rank_one(c, d1 * d2);
      auto lim = stabilize([&](int n) { return convolution_riemann(y1, y2, T, n); }, e.n_max, kMinExact);
      s.add("conv_literal_sum", lp, same(realize(convolution(certify(y1), certify(y2), T)), lim));
    });
  }
}

void suite_d(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  auto E = e.corpus.front().second;
  auto chi = Character::chi(c->p, c->N, 1);
  if (s.trial == 0) {
    auto f = one_plus_x(c);
    s.add("d_on_one_plus_x", json::object(), same(realize(m_delta(certify(elem(E, {f})), chi)).v[0], diff_d(f)));
  }
  auto f0 = rand_series(r, c, -4, 30);
  auto f = f0 - frobenius(psi_scalar(f0));
  s.add("d_on_psi_zero", json::object(), same(realize(m_delta(certify(elem(E, {f})), chi)).v[0], diff_d(f)),
        reduced(f));
}

const ModulePtr& rank_two(const Env& e, int trial) {
  return e.corpus[e.first_rank_two + static_cast<std::size_t>(trial) % (e.corpus.size() - e.first_rank_two)].second;
}

const std::string& rank_two_name(const Env& e, int trial) {
  return e.corpus[e.first_rank_two + static_cast<std::size_t>(trial) % (e.corpus.size() - e.first_rank_two)].first;
}

void suite_iwasawa(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  if (s.trial == 0) {
    auto D = e.corpus[e.first_rank_two].second;
    auto x = certify(split_dirac(D, 0, -1)), y = certify(split_dirac(D, 1, -1));
    json prm{{"module", e.corpus[e.first_rank_two].first}};
    s.add("split_basis_unit", prm, same(iwasawa_pair(x, y), from_group_element(c, 1)));
    s.add("split_basis_epsilon", prm, same(epsilon_rank_two(x, y), from_group_element(c, -1)));
  }
  const ModulePtr& D = rank_two(e, s.trial);
  const std::string& name = rank_two_name(e, s.trial);
  auto l = rand_group_ring(r, c), mu = rand_group_ring(r, c);
  auto x = act_on(l, certify(rand_psi0(r, D, 0))), y = act_on(mu, certify(rand_psi0(r, D, 0)));
  auto w = certify(rand_psi0(r, D, 0));
  const i64 a = rand_unit(r, c->p);
  auto d = rand_char(r, c);
  json prm{{"module", name}, {"a", a}, {"d", d.describe()}};
  auto pr = iwasawa_pair(x, y);
  s.add("antisymmetry", prm, same(iwasawa_pair(y, x), scale(pr, c->q - 1)), reduced(x));
  s.add("additivity", prm, same(iwasawa_pair(x + w, y), pr + iwasawa_pair(w, y)), reduced(x));
  s.add("sesquilinear", prm, same(iwasawa_pair(act_on(from_group_element(c, a), x), y),
                                  convolve(from_group_element(c, a), pr)), reduced(x));
  auto Dd = twist(D, d);
  auto tw = iwasawa_pair(certify(elem(Dd, realize(x).v)), certify(elem(Dd, realize(y).v)));
  s.add("twist_compatibility", prm, same(tw, g_twist(pr, d)), reduced(x));
}

void suite_duality(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  const ModulePtr& D = rank_two(e, s.trial);
  json prm{{"module", rank_two_name(e, s.trial)}};
  auto bx = certify(split_dirac(D, 0, -1)), by = certify(split_dirac(D, 1, -1));
  auto record = [&](const std::string& n, const PsiZero& x, const PsiZero& y) {
    auto res = duality_check(x, y);
    Outcome o = same(res.lhs, res.rhs);
    o.pass = o.pass && res.pass;
    s.add(n, prm, o, reduced(x));
  };
  if (s.trial < 4) record("basis", bx, by);
  if (s.trial == 0) {
    auto res = duality_check(scale(bx, 0), by);
    s.add("zero_input", prm, same(res.lhs, measure_zero(c)));
  }
  record("group_ring_translates", act_on(rand_group_ring(r, c), bx), act_on(rand_group_ring(r, c), by));
  record("random_plus", certify(rand_psi0(r, D, 0)), certify(rand_psi0(r, D, 0)));
}

Series rand_positive_U(Rng& r, const CtxPtr& c) {
  std::vector<u64> v(3);
  for (auto& x : v) x = r() % c->q;
  return Series::exact(c, 1, v);
}

void suite_trianguline(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  auto d1 = rand_char(r, c).with_at_p(rand_unit_residue(r, c));
  auto d2 = rand_char(r, c).with_at_p(rand_unit_residue(r, c));
  std::vector<std::pair<std::string, Series>> Us{{"U=0", Series::zero(c)}, {"U=X", Series::monomial(c, 1, 1)},
                                                 {"U=random", rand_positive_U(r, c)}};
  for (auto& [tag, U] : Us) {
    json prm{{"d1", d1.describe()}, {"d2", d2.describe()}, {"U", to_json(U)}};
    auto res = trianguline_factorization_check(d1, d2, U);
    Outcome o = same(res.value, from_group_element(c, 1));
    s.add("trianguline_factorization/" + tag, prm, o);
    auto D = build_triangular(c, d1, d2, U);
    s.guard("dospinescu/" + tag, prm, [&] {
      auto x = certify(split_dirac(D, 0, 1));
      s.add("dospinescu/" + tag, prm, same(w_delta(x, delta_D(D)), scale(x, d1(-1))));
    });
    auto xi = certify(split_dirac(D, 0, -1));
    const Character dD = delta_D(D);
    s.add("dospinescu_inverse/" + tag, prm, same(w_delta(xi, dD), scale(xi, mulm(dD(-1), d1(-1), c->q))));
  }
  if (s.trial == 0) {
    auto triv = Character::trivial(c->p, c->N);
    auto res = trianguline_factorization_check(triv, triv, Series::monomial(c, 1, 1));
    s.add("trianguline_factorization/trivial", json::object(), same(res.value, from_group_element(c, 1)));
  }
}

void suite_epsilon(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  const i64 a = s.trial % 2 == 0 ? 2 : 1 + static_cast<i64>(c->p);
  const i64 ai = unit_inverse(*c, a);
  auto d = rand_char(r, c);
  auto E = make_rank_one(c, d);
  auto g = certify(rand_psi0(r, E, 0));
  json prm{{"d", d.describe()}, {"a", a}};
  auto coord = at_zeta_measure(a, g, [](const PsiZero& v) { return amice_coordinates(v); });
  s.add("rank_one_coordinates", prm,
        same(coord, scale(convolve(from_group_element(c, ai), amice_coordinates(g)), d(a))), reduced(g));
  auto lam = rand_group_ring(r, c);
  auto eps = transport(epsilon_rank_one(change_variable(E, ai), lam), a, E);
  s.add("rank_one_psi_zero", prm,
        same(eps, act_on(scale(from_group_element(c, a), invm(d(a), c->q)), epsilon_rank_one(E, lam))), reduced(lam));
  const ModulePtr& D = rank_two(e, s.trial);
  auto x = certify(rand_psi0(r, D, 0)), y = certify(rand_psi0(r, D, 0));
  auto z = at_zeta_measure(a, x, y, [](const PsiZero& u, const PsiZero& v) { return epsilon_rank_two(u, v); });
  auto rhs = scale(convolve(from_group_element(c, unit_product(*c, ai, ai)), epsilon_rank_two(x, y)), D->det(a));
  s.add("rank_two", json{{"module", rank_two_name(e, s.trial)}, {"a", a}}, same(z, rhs), reduced(x));
}

Cochain add_cochains(const Cochain& a, const Cochain& b) {
  Cochain r = a;
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = a.entries[i] + b.entries[i];
  return r;
}

Cochain negate(const Cochain& a) {
  Cochain r = a;
  for (auto& x : r.entries) x = scale(x, x.mod->ctx->q - 1);
  return r;
}

Outcome same(const Cochain& a, const Cochain& b) {
  Outcome o;
  o.pass = a.degree == b.degree && a.entries.size() == b.entries.size();
  int ex = INT_MAX;
  json l = json::array(), rr = json::array();
  for (std::size_t i = 0; o.pass && i < a.entries.size(); ++i) {
    Outcome e = same(a.entries[i], b.entries[i]);
    o.pass = o.pass && e.pass;
    ex = std::min(ex, e.precision.value("exact_through", 0));
    l.push_back(e.lhs);
    rr.push_back(e.rhs);
  }
  o.lhs = l;
  o.rhs = rr;
  o.precision = json{{"exact_through", ex == INT_MAX ? 0 : ex}, {"required", kMinExact}};
  if (!o.pass) {
    o.full_lhs = to_json(a);
    o.full_rhs = to_json(b);
  }
  return o;
}

Cochain zero_like(const Cochain& a) {
  Cochain r = a;
  for (auto& x : r.entries) x = elem_zero(x.mod);
  return r;
}

// a + b X^-1 + sum_n phi^n(z) with psi(z) = 0 and z(0) = 0 is fixed by psi
Series rand_psi_one(Rng& r, const CtxPtr& c) {
  auto f = rand_series(r, c, 1, 15);
  auto z0 = f - frobenius(psi_scalar(f));
  auto z = z0 - one_plus_x(c).scale(z0.coeff(0));
  Series acc = Series::constant(c, r() % c->q) + Series::monomial(c, r() % c->q, -1);
  for (int n = 0; n < c->N + 8; ++n) {
    acc = acc + z;
    z = frobenius(z);
  }
  return acc;
}

void suite_herr(const Env& e, Rng& r, Sink& s) {
  const CtxPtr& c = e.c;
  const auto& [name, D] = e.corpus[static_cast<std::size_t>(s.trial) % e.corpus.size()];
  Vec v;
  for (int i = 0; i < D->rank; ++i) v.push_back(rand_series(r, c, -3, 25));
  auto x = elem(D, v);
  json prm{{"module", name}};
  for (auto f : {Flavor::PhiGamma, Flavor::PsiGamma}) {
    auto dd = differential(differential(cochain(f, {x}, 0)));
    s.add(std::string("d_squared/") + (f == Flavor::PhiGamma ? "phi" : "psi"), prm, same(dd, zero_like(dd)),
          reduced(x));
  }
  Vec va, vb;
  for (int i = 0; i < D->rank; ++i) va.push_back(rand_series(r, c, -3, 25)), vb.push_back(rand_series(r, c, -3, 25));
  auto c0 = cochain(Flavor::PhiGamma, {x}, 0);
  auto c1 = cochain(Flavor::PhiGamma, {elem(D, va), elem(D, vb)}, 1);
  s.add("psi_comparison_chain/deg0", prm, same(psi_comparison(differential(c0)), differential(psi_comparison(c0))),
        reduced(x));
  s.add("psi_comparison_chain/deg1", prm, same(psi_comparison(differential(c1)), differential(psi_comparison(c1))),
        reduced(elem(D, va)));
  auto E = e.corpus.front().second;
  auto d = rand_char(r, c);
  auto k = iota_specialize(elem(E, {rand_psi_one(r, c)}), d);
  auto dk = differential(k);
  s.add("iota_cocycle", json{{"d", d.describe()}}, same(dk, zero_like(dk)));
  // cup of degree-one cochains on rank-one modules against the scalar expansion
  auto d1 = rand_char(r, c).with_at_p(rand_unit_residue(r, c)), d2 = rand_char(r, c).with_at_p(rand_unit_residue(r, c));
  auto A = make_rank_one(c, d1), B = make_rank_one(c, d2);
  auto AB = tensor(A, B);
  auto f1 = rand_series(r, c, -2, 20), g1 = rand_series(r, c, -2, 20), f2 = rand_series(r, c, -2, 20),
       g2 = rand_series(r, c, -2, 20);
  auto cp = cup(cochain(Flavor::PhiGamma, {elem(A, {f1}), elem(A, {g1})}, 1),
                cochain(Flavor::PhiGamma, {elem(B, {f2}), elem(B, {g2})}, 1), AB);
  const i64 gam = gamma_generator(*c);
  Series hand = f1 * sigma(gam, g2).scale(d2(gam)) - g1 * frobenius(f2).scale(d2.at_p());
  s.add("cup_hand_expansion", json{{"d1", d1.describe()}, {"d2", d2.describe()}}, same(cp.entries[0].v[0], hand),
        reduced(f1));
  auto y0 = cochain(Flavor::PhiGamma, {elem(A, {f1})}, 0);
  auto b1 = cochain(Flavor::PhiGamma, {elem(B, {f2}), elem(B, {g2})}, 1);
  auto lhs = differential(cup(y0, b1, AB));
  auto rhs = add_cochains(cup(y0, differential(b1), AB), negate(cup(differential(y0), b1, AB)));
  s.add("cup_leibniz", json{{"d1", d1.describe()}, {"d2", d2.describe()}}, same(lhs, rhs), reduced(f1));
}

using SuiteFn = void (*)(const Env&, Rng&, Sink&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> m{
      {"psi_phi", suite_psi_phi},         {"m_delta_laws", suite_m_delta},   {"w_laws", suite_w},
      {"convolution_laws", suite_convolution}, {"d_equals_m_chi", suite_d},  {"iwasawa_pairing", suite_iwasawa},
      {"duality", suite_duality},         {"trianguline", suite_trianguline}, {"epsilon_zeta_change", suite_epsilon},
      {"herr", suite_herr}};
  return m;
}

std::vector<std::pair<std::string, ModulePtr>> make_corpus(const CtxPtr& c, std::size_t& first_rank_two) {
  const u64 p = c->p, q = c->q;
  const int N = c->N;
  auto d1 = Character::chi(p, N, 1).with_at_p(2);
  auto d2 = Character::finite(p, N, 1, q - 1).with_at_p(p + 2);
  auto d3 = (Character::chi(p, N, 3) * Character::finite(p, N, 2, powm(1 + p, ipow(p, N - 2), q))).with_at_p(p + 4);
  auto tri = build_triangular(c, d1, d2, Series::monomial(c, 1, 1));
  std::vector<std::pair<std::string, ModulePtr>> v{{"E", make_rank_one(c, Character::trivial(p, N))},
                                                   {"E(d2)", make_rank_one(c, d2)},
                                                   {"split(d1,d2)", make_split(c, d1, d2)},
                                                   {"tri(d1,d2,X)", tri},
                                                   {"tri(d1,d3,3X+X^2)",
                                                    build_triangular(c, d1, d3,
                                                                     Series::monomial(c, 3, 1) + Series::monomial(c, 1, 2))},
                                                   {"dual(tri(d1,d2,X))", tate_dual(tri)}};
  first_rank_two = 2;
  return v;
}

u64 trial_seed(u64 seed, const std::string& suite, int trial) {
  u64 h = 1469598103934665603ULL ^ seed;
  for (char ch : suite) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
  return h ^ (0x9e3779b97f4a7c15ULL * static_cast<u64>(trial + 1));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

void validate(const SuiteConfig& cfg) {
  if (!registry().count(cfg.suite)) throw UnknownSuite("unknown suite '" + cfg.suite + "'");
  bool prime = cfg.p > 2;
  for (u64 d = 2; prime && d * d <= cfg.p; ++d) prime = cfg.p % d != 0;
  if (!prime) throw ConfigInvalid("p must be an odd prime");
  if (cfg.N < 1) throw ConfigInvalid("precision N must be at least 1");
  if (cfg.lo >= cfg.hi) throw ConfigInvalid("window must satisfy lo < hi");
  if (cfg.trials < 1) throw ConfigInvalid("trials must be at least 1");
  if (cfg.n_max < 0) throw ConfigInvalid("n_max must be non-negative");
  if (cfg.threads < 0) throw ConfigInvalid("threads must be non-negative");
}

Report run_suite(const SuiteConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  Env env;
  env.cfg = cfg;
  env.c = make_ctx(cfg.p, cfg.N, cfg.lo, cfg.hi);
  env.n_max = cfg.n_max > 0 ? cfg.n_max : cfg.N + 2;
  env.corpus = make_corpus(env.c, env.first_rank_two);
  engine_of(env.c);
  SuiteFn fn = registry().at(cfg.suite);

  std::vector<std::vector<CheckRecord>> per_trial(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t; (t = next++) < cfg.trials;) {
      Rng rng(trial_seed(cfg.seed, cfg.suite, t));
      Sink s;
      s.trial = t;
      try {
        fn(env, rng, s);
      } catch (const Error& e) {
        Outcome o;
        o.lhs = std::string(e.kind());
        o.rhs = e.what();
        o.precision = json::object();
        s.add("error", json::object(), o);
      }
      per_trial[static_cast<std::size_t>(t)] = std::move(s.out);
    }
  };
  unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(cfg.trials));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  Report r;
  r.config = cfg;
  for (auto& v : per_trial)
    for (auto& rec : v) r.checks.push_back(std::move(rec));
  std::stable_sort(r.checks.begin(), r.checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
    return a.name != b.name ? a.name < b.name : a.trial < b.trial;
  });
  for (auto& rec : r.checks) (rec.pass ? r.passed : r.failed)++;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json to_json(const Report& r) {
  const SuiteConfig& c = r.config;
  json checks = json::array();
  for (auto& rec : r.checks) {
    json j{{"check", rec.name}, {"trial", rec.trial}, {"params", rec.params}, {"pass", rec.pass},
           {"lhs", rec.lhs},    {"rhs", rec.rhs},     {"precision", rec.precision}};
    if (!rec.pass) j["witness"] = rec.witness;
    checks.push_back(j);
  }
  return json{{"schema_version", kReportSchema},
              {"config",
               {{"suite", c.suite}, {"p", c.p}, {"N", c.N}, {"window", {c.lo, c.hi}}, {"seed", c.seed},
                {"trials", c.trials}, {"n_max", c.n_max > 0 ? c.n_max : c.N + 2}}},
              {"summary", {{"total", r.passed + r.failed}, {"passed", r.passed}, {"failed", r.failed}}},
              {"checks", checks}};
}

}  // namespace phigamma
