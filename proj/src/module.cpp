#include "phigamma/module.hpp"

#include "phigamma/errors.hpp"

namespace phigamma {

namespace mat {

Mat zero(const CtxPtr& c, int r) { return Mat(r, Vec(r, Series::zero(c))); }

Mat identity(const CtxPtr& c, int r) {
  Mat m = zero(c, r);
  for (int i = 0; i < r; ++i) m[i][i] = Series::constant(c, 1);
  return m;
}

Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat r(n, Vec(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Series s = a[i][0] * b[0][j];
      for (std::size_t t = 1; t < k; ++t) s = s + a[i][t] * b[t][j];
      r[i][j] = s;
    }
  return r;
}

Vec apply(const Mat& a, const Vec& v) {
  Vec r;
  for (const auto& row : a) {
    Series s = row[0] * v[0];
    for (std::size_t t = 1; t < v.size(); ++t) s = s + row[t] * v[t];
    r.push_back(s);
  }
  return r;
}

Mat transpose(const Mat& a) {
  Mat r(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

Mat scale(const Mat& a, u64 s) {
  Mat r = a;
  for (auto& row : r)
    for (auto& x : row) x = x.scale(s);
  return r;
}

Mat inverse(const Mat& a) {
  try {
    if (a.size() == 1) return Mat{{invert_unit(a[0][0])}};
    if (a.size() != 2) throw RankMismatch("inverse implemented for rank <= 2");
    Series det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Series di = invert_unit(det);
    return Mat{{a[1][1] * di, -(a[0][1] * di)}, {-(a[1][0] * di), a[0][0] * di}};
  } catch (const NotAUnit&) {
    throw NotEtale("phi matrix is not invertible over E_R");
  }
}

Mat frobenius(const Mat& a) {
  Mat r = a;
  for (auto& row : r)
    for (auto& x : row) x = phigamma::frobenius(x);
  return r;
}

Mat sigma(i64 s, const Mat& m) {
  Mat r = m;
  for (auto& row : r)
    for (auto& x : row) x = phigamma::sigma(s, x);
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), m = b.size();
  Mat r(n * m, Vec(n * m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) r[i * m + k][j * m + l] = a[i][j] * b[k][l];
  return r;
}

bool equal(const Mat& a, const Mat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!(a[i][j] == b[i][j])) return false;
  return true;
}

}  // namespace mat

const Mat& Module::G(i64 a) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = cache_.find(a);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(a, gamma_fn(a)).first->second;
}

Mat Module::G_split(i64 a) const {
  Mat d = mat::zero(ctx, rank);
  for (int i = 0; i < rank; ++i) d[i][i] = Series::constant(ctx, eta[i](a));
  return mat::mul(mat::mul(B, d), mat::sigma(a, Binv));
}

Series solve_phi_fixed(const Series& A, u64 lhs, u64 rhs) {
  const CtxPtr& c = A.ctx();
  if (!A.is_zero() && A.lo() < 0) throw ConfigInvalid("fixed-point data has negative exponents");
  const u64 q = c->q;
  // constant term: (lhs - rhs) z0 = a0
  u64 a0 = A.coeff(0);
  u64 diff = subm(lhs % q, rhs % q, q);
  u64 z0 = 0;
  if (a0) {
    if (diff % c->p == 0) throw CocycleDivergence("constant term of the fixed point is not solvable");
    z0 = mulm(a0, invm(diff, q), q);
  }
  Series rest = A - Series::constant(c, a0);
  const u64 li = invm(lhs, q);
  Series Z = Series::zero(c, A.cap());
  for (int it = 0; it < 64; ++it) {
    Series nz = (rest + frobenius(Z).scale(rhs)).scale(li);
    if (nz.cap() == Z.cap() && nz.poly().lo == Z.poly().lo && nz.poly().c == Z.poly().c)
      return Z + Series::constant(c, z0);
    Z = nz;
  }
  throw CocycleDivergence("fixed-point iteration did not stabilize");
}

namespace {

std::shared_ptr<Module> base(const CtxPtr& c, int r) {
  auto m = std::make_shared<Module>();
  m->ctx = c;
  m->rank = r;
  m->B = mat::identity(c, r);
  m->Binv = mat::identity(c, r);
  return m;
}

void check_char(const CtxPtr& c, const Character& d) {
  if (d.p() != c->p || d.N() != c->N) throw ConfigInvalid("character precision differs from context");
}

// gamma provider from the splitting data
void use_split_gamma(const std::shared_ptr<Module>& m) {
  Module* raw = m.get();
  m->gamma_fn = [raw](i64 a) { return raw->G_split(a); };
}

}  // namespace

ModulePtr make_rank_one(const CtxPtr& c, const Character& d) {
  check_char(c, d);
  auto m = base(c, 1);
  m->kind = Module::Kind::RankOne;
  m->P = Mat{{Series::constant(c, d.at_p())}};
  m->Pinv = Mat{{Series::constant(c, invm(d.at_p(), c->q))}};
  m->eta = {d};
  m->det = d;
  m->basis_tag = "e_" + d.describe();
  use_split_gamma(m);
  return m;
}

ModulePtr make_split(const CtxPtr& c, const Character& d1, const Character& d2) {
  return build_triangular(c, d1, d2, Series::zero(c));
}

ModulePtr build_triangular(const CtxPtr& c, const Character& d1, const Character& d2, const Series& U) {
  check_char(c, d1);
  check_char(c, d2);
  if (!U.is_zero() && U.lo() < 0) throw ConfigInvalid("U must have no negative exponents");
  auto m = base(c, 2);
  m->kind = U.is_zero() ? Module::Kind::Split : Module::Kind::Triangular;
  const u64 q = c->q;
  const u64 p1 = d1.at_p(), p2 = d2.at_p();
  m->U = U;
  m->P = Mat{{Series::constant(c, p1), U}, {Series::zero(c), Series::constant(c, p2)}};
  const u64 i1 = invm(p1, q), i2 = invm(p2, q);
  m->Pinv = Mat{{Series::constant(c, i1), U.scale(negm(mulm(i1, i2, q), q))},
                {Series::zero(c), Series::constant(c, i2)}};
  m->eta = {d1, d2};
  m->det = d1 * d2;
  m->basis_tag = "e_" + d1.describe() + "^e_" + d2.describe();
  if (U.is_zero()) {
    m->Y = Series::zero(c);
    use_split_gamma(m);
    return m;
  }
  // e2' = e2 + Y e1 is an eigenvector: d2(p) Y = U + d1(p) phi(Y)
  m->Y = solve_phi_fixed(U, p2, p1);
  m->B = Mat{{Series::constant(c, 1), m->Y}, {Series::zero(c), Series::constant(c, 1)}};
  m->Binv = Mat{{Series::constant(c, 1), -m->Y}, {Series::zero(c), Series::constant(c, 1)}};
  // C_a from the commutation equation
  //   d2(p) C + d1(a) sigma_a(U) = d2(a) U + d1(p) phi(C)
  m->gamma_fn = [c, d1, d2, U, p1, p2](i64 a) {
    Series A = U.scale(d2(a)) - sigma(a, U).scale(d1(a));
    Series C = solve_phi_fixed(A, p2, p1);
    return Mat{{Series::constant(c, d1(a)), C}, {Series::zero(c), Series::constant(c, d2(a))}};
  };
  return m;
}

ModulePtr twist(const ModulePtr& D, const Character& d) {
  const CtxPtr& c = D->ctx;
  check_char(c, d);
  if (D->kind == Module::Kind::RankOne) return make_rank_one(c, D->eta[0] * d);
  if (D->kind == Module::Kind::Split || D->kind == Module::Kind::Triangular)
    return build_triangular(c, D->eta[0] * d, D->eta[1] * d, D->U.scale(d.at_p()));
  auto m = std::make_shared<Module>();
  m->ctx = c;
  m->kind = D->kind;
  m->rank = D->rank;
  m->P = mat::scale(D->P, d.at_p());
  m->Pinv = mat::scale(D->Pinv, invm(d.at_p(), c->q));
  m->B = D->B;
  m->Binv = D->Binv;
  for (auto& e : D->eta) m->eta.push_back(e * d);
  m->det = D->det * d.pow(D->rank);
  m->basis_tag = D->basis_tag + "(x)e_" + d.describe();
  m->U = D->U;
  m->Y = D->Y;
  m->parents = {D};
  m->gamma_fn = [D, d](i64 a) { return mat::scale(D->G(a), d(a)); };
  return m;
}

ModulePtr tate_dual(const ModulePtr& D) {
  const CtxPtr& c = D->ctx;
  auto m = std::make_shared<Module>();
  m->ctx = c;
  m->kind = Module::Kind::Dual;
  m->rank = D->rank;
  Character chi = Character::chi(c->p, c->N, 1);
  // phi(e^vee (x) e_1) = (e^vee (x) e_1) P^{-T} chi(p), chi(p) = 1
  m->P = mat::transpose(D->Pinv);
  m->Pinv = mat::transpose(D->P);
  m->B = mat::transpose(D->Binv);
  m->Binv = mat::transpose(D->B);
  for (auto& e : D->eta) m->eta.push_back(e.inverse() * chi);
  m->det = D->det.inverse() * chi.pow(D->rank);
  m->basis_tag = "(" + D->basis_tag + ")^vee(1)";
  m->U = D->U;
  m->Y = D->Y;
  m->parents = {D};
  m->gamma_fn = [D](i64 a) {
    Mat g = mat::transpose(mat::inverse(D->G(a)));
    return mat::scale(g, redm(a, D->ctx->q));
  };
  return m;
}

ModulePtr tensor(const ModulePtr& A, const ModulePtr& Bm) {
  const CtxPtr& c = A->ctx;
  auto m = std::make_shared<Module>();
  m->ctx = c;
  m->kind = Module::Kind::Tensor;
  m->rank = A->rank * Bm->rank;
  m->P = mat::kron(A->P, Bm->P);
  m->Pinv = mat::kron(A->Pinv, Bm->Pinv);
  m->B = mat::kron(A->B, Bm->B);
  m->Binv = mat::kron(A->Binv, Bm->Binv);
  for (auto& x : A->eta)
    for (auto& y : Bm->eta) m->eta.push_back(x * y);
  m->det = A->det.pow(Bm->rank) * Bm->det.pow(A->rank);
  m->basis_tag = A->basis_tag + "(x)" + Bm->basis_tag;
  m->parents = {A, Bm};
  m->gamma_fn = [A, Bm](i64 a) { return mat::kron(A->G(a), Bm->G(a)); };
  return m;
}

ModulePtr change_variable(const ModulePtr& D, i64 a) {
  if (a == 1) return D;
  if (D->kind == Module::Kind::RankOne) return D;
  if (D->kind == Module::Kind::Split || D->kind == Module::Kind::Triangular)
    return build_triangular(D->ctx, D->eta[0], D->eta[1], sigma(a, D->U));
  auto m = std::make_shared<Module>();
  m->ctx = D->ctx;
  m->kind = D->kind;
  m->rank = D->rank;
  m->P = mat::sigma(a, D->P);
  m->Pinv = mat::sigma(a, D->Pinv);
  m->B = mat::sigma(a, D->B);
  m->Binv = mat::sigma(a, D->Binv);
  m->eta = D->eta;
  m->det = D->det;
  m->basis_tag = D->basis_tag;
  m->U = sigma(a, D->U);
  m->Y = sigma(a, D->Y);
  m->parents = {D};
  m->gamma_fn = [D, a](i64 b) { return mat::sigma(a, D->G(b)); };
  return m;
}

bool check_etale(const Module& D) {
  try {
    return mat::equal(mat::mul(D.P, D.Pinv), mat::identity(D.ctx, D.rank));
  } catch (const Error&) {
    return false;
  }
}

bool check_commutation(const Module& D, i64 a) {
  // G(a) sigma_a(P) = P phi(G(a))
  const Mat& g = D.G(a);
  return mat::equal(mat::mul(g, mat::sigma(a, D.P)), mat::mul(D.P, mat::frobenius(g)));
}

bool check_cocycle(const Module& D, i64 a, i64 b) {
  const u64 qb = D.ctx->qbig;
  i64 ab = static_cast<i64>(mulm(redm(a, qb), redm(b, qb), qb));
  if (std::abs(static_cast<long double>(a) * b) < 1e15) ab = a * b;
  return mat::equal(mat::mul(D.G(a), mat::sigma(a, D.G(b))), D.G(ab));
}

ModElem elem(const ModulePtr& D, Vec v) {
  if (static_cast<int>(v.size()) != D->rank) throw RankMismatch("coordinate count differs from rank");
  return ModElem{D, std::move(v)};
}

ModElem elem_zero(const ModulePtr& D) { return ModElem{D, Vec(D->rank, Series::zero(D->ctx))}; }

ModElem operator+(const ModElem& a, const ModElem& b) {
  ModElem r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

ModElem operator-(const ModElem& a, const ModElem& b) {
  ModElem r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] - b.v[i];
  return r;
}

ModElem scale(const ModElem& a, u64 s) {
  ModElem r = a;
  for (auto& x : r.v) x = x.scale(s);
  return r;
}

ModElem mul_scalar(const Series& f, const ModElem& a) {
  ModElem r = a;
  for (auto& x : r.v) x = f * x;
  return r;
}

bool operator==(const ModElem& a, const ModElem& b) {
  for (std::size_t i = 0; i < a.v.size(); ++i)
    if (!(a.v[i] == b.v[i])) return false;
  return true;
}

int elem_cap(const ModElem& a) {
  int c = INT_MAX;
  for (auto& x : a.v) c = std::min(c, x.cap());
  return c;
}

ModElem apply_phi(const ModElem& x) {
  Vec fv;
  for (auto& s : x.v) fv.push_back(frobenius(s));
  return ModElem{x.mod, mat::apply(x.mod->P, fv)};
}

ModElem apply_psi(const ModElem& x) {
  // x = sum g_j phi(e_j) with g = P^{-1} x
  Vec g = mat::apply(x.mod->Pinv, x.v);
  for (auto& s : g) s = psi_scalar(s);
  return ModElem{x.mod, g};
}

ModElem apply_sigma(i64 a, const ModElem& x) {
  Vec sv;
  for (auto& s : x.v) sv.push_back(sigma(a, s));
  return ModElem{x.mod, mat::apply(x.mod->G(a), sv)};
}

bool is_psi_fixed(const ModElem& x, u64 lambda) { return apply_psi(x) == scale(x, lambda); }

Vec to_split(const ModElem& x) { return mat::apply(x.mod->Binv, x.v); }

ModElem from_split(const ModulePtr& D, const Vec& w) { return ModElem{D, mat::apply(D->B, w)}; }

Vec rank2_dual_embed(const ModElem& x) {
  if (x.mod->rank != 2) throw RankMismatch("dual embedding needs rank two");
  return Vec{x.v[1], -x.v[0]};
}

ModElem embed_in_dual(const ModulePtr& Dstar, const ModElem& x) {
  if (Dstar->rank != 2) throw RankMismatch("dual embedding needs rank two");
  return ModElem{Dstar, rank2_dual_embed(x)};
}

}  // namespace phigamma
