#include "phigamma/gamma.hpp"

#include <algorithm>
#include <functional>

#include "phigamma/errors.hpp"

namespace phigamma {

std::shared_ptr<const GammaEngine> Ctx::engine(const std::shared_ptr<const Ctx>& self) const {
  std::call_once(engine_once_, [&] { engine_ = std::make_shared<const GammaEngine>(self); });
  return engine_;
}

namespace {

int floordiv(int a, int b) {
  int d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

// Solve r = sum_m c_m B_m mod p^N, where B_m has weighted valuation exactly
// m+s with a unit coefficient at X^{m+s}. r is known to weighted cap H.
// Lowest degrees first, then p-adic lifting, so each step only disturbs
// coefficients that are already divisible by the next power of p.
Poly tri_solve(const Poly& r0, int H, const Ctx& c, const std::function<const Poly&(int)>& basis,
               int s, int mlo, int mhi) {
  const u64 p = c.p, q = c.q;
  int base = mlo + s - c.N - 2;
  if (!r0.empty()) base = std::min(base, r0.lo);
  if (H <= base) return {};
  std::vector<u64> R(H - base, 0);
  for (std::size_t i = 0; i < r0.c.size(); ++i) {
    int d = r0.lo + static_cast<int>(i);
    if (d < H) R[d - base] = r0.c[i];
  }
  Poly out{mlo, std::vector<u64>(mhi - mlo + 1, 0)};
  u64 pt = 1;
  for (int t = 0; t < c.N; ++t, pt *= p) {
    for (int d = base; d < H - t; ++d) {
      u64 v = R[d - base];
      if (!v) continue;
      if (v % pt) throw PrecisionTooLow("triangular solve lost divisibility");
      u64 rho = (v / pt) % p;
      if (!rho) continue;
      int m = d - s;
      if (m < mlo || m > mhi)
        throw WindowUnderflow("Gamma-coordinate basis index " + std::to_string(m) + " out of range");
      const Poly& B = basis(m);
      u64 l = B.at(d) % p;
      if (!l) throw PrecisionTooLow("coordinate basis is not triangular");
      u64 e = rho * invm(l, p) % p;
      u64 coef = e * pt % q;
      out.c[m - mlo] = addm(out.c[m - mlo], coef, q);
      for (std::size_t k = 0; k < B.c.size(); ++k) {
        int dd = B.lo + static_cast<int>(k);
        if (dd >= H) break;
        if (dd < base) throw WindowUnderflow("coordinate basis below residual range");
        R[dd - base] = subm(R[dd - base], mulm(coef, B.c[k], q), q);
      }
    }
  }
  return poly::trim(std::move(out));
}

Poly binomial_poly(i64 a, int len, const Ctx& c) { return Poly{0, binomials(a, len, c.p, c.N)}; }

}  // namespace

GammaEngine::GammaEngine(CtxPtr x) : x_(std::move(x)) {
  const Ctx& c = *x_;
  const int p = static_cast<int>(c.p);
  const int N = c.N;
  const int loT = floordiv(c.lo, p) - 2 * N;
  const int hiT = floordiv(c.hi + N + p - 1, p);
  t_ = make_ctx(c.p, N, loT, hiT);

  omega_.assign(p, 0);
  shift_exp_.assign(p, 0);
  shift_unit_.resize(p);
  omega_pow_.resize(p);
  for (int j = 1; j < p; ++j) {
    omega_[j] = teichmuller(j, c.p, c.Nbig);
    u64 diff = (static_cast<u64>(j) + c.qbig - omega_[j]) % c.qbig;
    shift_exp_[j] = static_cast<i64>(diff / c.p);
    shift_unit_[j] = Series::one_plus_x_pow(x_, shift_exp_[j]);
    omega_pow_[j] = Series::one_plus_x_pow(x_, static_cast<i64>(omega_[j]));
  }

  kb_ = t_->max_cap();
  blo_ = t_->floor();
  bhi_ = kb_ + 1;
  kbig_ = kb_ - blo_ + 2;
  const int E = kbig_ + 1;
  const int mlo = blo_ - N - 2;
  const int mhi = kbig_;

  // sigma_gamma(X) = (1+X)^(1+p) - 1 and its inverse, long enough for the table
  const int D = E - mlo + 4;
  const i64 g = 1 + p;
  Poly u = binomial_poly(g, D + 2, c);
  Poly sx{1, std::vector<u64>(u.c.begin() + 1, u.c.end())};
  Poly ux{0, sx.c};
  Poly v{0, std::vector<u64>(ux.c.size(), 0)};
  const u64 inv0 = invm(ux.c[0], c.q);
  v.c[0] = inv0;
  for (std::size_t n = 1; n < v.c.size(); ++n) {
    u64 acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc = addm(acc, mulm(ux.c[k], v.c[n - k], c.q), c.q);
    v.c[n] = mulm(negm(acc, c.q), inv0, c.q);
  }
  Poly sinv = poly::shift(v, -1);

  // sigma_gamma(X^m) for m in [mlo, mhi]
  std::vector<Poly> S(mhi - mlo + 1);
  S[0 - mlo] = Poly{0, {1}};
  for (int m = 1; m <= mhi; ++m) S[m - mlo] = poly::mul(S[m - 1 - mlo], sx, c.q, E);
  for (int m = -1; m >= mlo; --m) S[m - mlo] = poly::mul(S[m + 1 - mlo], sinv, c.q, E + (m - mlo));

  b_.resize(p);
  bcap_.resize(p);
  for (int j = 1; j < p; ++j) {
    // tau_j(X^m) = (1+X)^omega_j sigma_gamma(X^m) - X^m
    std::vector<Poly> TX(mhi - mlo + 1);
    Poly wp = poly::truncate(omega_pow_[j].poly(), E - mlo + 2);
    for (int m = mlo; m <= mhi; ++m) {
      Poly t = poly::mul(wp, S[m - mlo], c.q, E);
      TX[m - mlo] = poly::sub(t, Poly{m, {1}}, c.q);
    }
    auto tau = [&](const Poly& y) {
      std::vector<u64> acc(E - mlo + 1, 0);
      Poly r{mlo, {}};
      for (std::size_t i = 0; i < y.c.size(); ++i) {
        if (!y.c[i]) continue;
        int m = y.lo + static_cast<int>(i);
        if (m < mlo || m > mhi) throw WindowUnderflow("tau table range");
        r = poly::add(r, poly::scale(TX[m - mlo], y.c[i], c.q), c.q);
      }
      return poly::truncate(r, E);
    };
    auto& B = b_[j];
    auto& Bc = bcap_[j];
    B.assign(bhi_ - blo_ + 1, Poly{});
    Bc.assign(bhi_ - blo_ + 1, 0);
    B[0 - blo_] = Poly{0, {1}};
    Bc[0 - blo_] = kbig_;
    for (int k = 1; k <= bhi_; ++k) {
      B[k - blo_] = tau(B[k - 1 - blo_]);
      Bc[k - blo_] = kbig_;
    }
    auto tbasis = [&](int m) -> const Poly& { return TX[m - mlo]; };
    for (int k = -1; k >= blo_; --k) {
      int H = Bc[k + 1 - blo_];
      B[k - blo_] = tri_solve(B[k + 1 - blo_], H, c, tbasis, 1, mlo, mhi - 1);
      Bc[k - blo_] = H - 1;
    }
  }

  // involution T -> -T/(1+T)
  const int DT = t_->max_cap() - t_->floor() + 4;
  iota_s_ = Poly{1, std::vector<u64>(DT, 0)};
  for (int k = 0; k < DT; ++k) iota_s_.c[k] = (k % 2 == 0) ? c.q - 1 : 1;
  iota_sinv_ = Poly{-1, {c.q - 1, c.q - 1}};
}

GammaElt GammaEngine::zero() const {
  GammaElt z;
  for (u64 j = 1; j < p(); ++j) z.comp.push_back(Series::zero(t_));
  return z;
}

i64 GammaEngine::gamma_exponent(i64 a) const {
  const Ctx& c = *x_;
  u64 ar = redm(a, c.qbig);
  if (ar % c.p == 0) throw NotAUnit("Dirac mass needs a unit");
  u64 w = omega_[ar % c.p];
  u64 u = mulm(ar, invm(w, c.qbig), c.qbig);
  return static_cast<i64>(gamma_log(u, c.p, c.Nbig));
}

GammaElt GammaEngine::dirac(i64 a) const {
  GammaElt z = zero();
  const int j = static_cast<int>(redm(a, p()));
  z.comp[j - 1] = Series::one_plus_x_pow(t_, gamma_exponent(a));
  return z;
}

GammaElt GammaEngine::add(const GammaElt& a, const GammaElt& b) const {
  GammaElt r;
  for (std::size_t i = 0; i < a.comp.size(); ++i) r.comp.push_back(a.comp[i] + b.comp[i]);
  return r;
}

GammaElt GammaEngine::sub(const GammaElt& a, const GammaElt& b) const {
  GammaElt r;
  for (std::size_t i = 0; i < a.comp.size(); ++i) r.comp.push_back(a.comp[i] - b.comp[i]);
  return r;
}

GammaElt GammaEngine::neg(const GammaElt& a) const {
  GammaElt r;
  for (auto& s : a.comp) r.comp.push_back(-s);
  return r;
}

GammaElt GammaEngine::scale(const GammaElt& a, u64 s) const {
  GammaElt r;
  for (auto& x : a.comp) r.comp.push_back(x.scale(s));
  return r;
}

GammaElt GammaEngine::mul(const GammaElt& a, const GammaElt& b) const {
  const u64 P = p();
  GammaElt r = zero();
  for (u64 i = 1; i < P; ++i)
    for (u64 j = 1; j < P; ++j) {
      u64 k = i * j % P;
      r.comp[k - 1] = r.comp[k - 1] + a.comp[i - 1] * b.comp[j - 1];
    }
  return r;
}

GammaElt GammaEngine::twist(const GammaElt& a, const Character& d) const {
  const Ctx& c = *t_;
  const u64 beta = d(static_cast<i64>(1 + p()));
  const u64 alpha = subm(beta, 1, c.q);
  GammaElt r;
  Poly s{0, {alpha, beta}};
  const u64 bi = invm(beta, c.q);
  const u64 ratio = mulm(negm(alpha, c.q), bi, c.q);
  Poly sinv{-c.N, std::vector<u64>(c.N, 0)};
  u64 term = bi;
  for (int k = 0; k < c.N; ++k) {
    sinv.c[c.N - 1 - k] = term;  // degree -1-k
    term = mulm(term, ratio, c.q);
  }
  sinv = poly::trim(sinv);
  for (u64 j = 1; j < p(); ++j) {
    const Series& f = a.comp[j - 1];
    u64 w = d.on_residue(omega_[j] % x_->q);
    Poly g = alpha == 0 && beta == 1 ? f.poly() : poly::substitute(f.poly(), s, sinv, c.q, f.cap());
    r.comp.push_back(Series::raw(t_, g, f.cap()).scale(w));
  }
  return r;
}

GammaElt GammaEngine::involute(const GammaElt& a) const {
  const u64 P = p();
  GammaElt r = zero();
  for (u64 j = 1; j < P; ++j) {
    const Series& f = a.comp[j - 1];
    u64 ji = invm(j, P);
    Poly g = poly::substitute(f.poly(), iota_s_, iota_sinv_, t_->q, f.cap());
    r.comp[ji - 1] = Series::raw(t_, g, f.cap());
  }
  return r;
}

bool GammaEngine::equal(const GammaElt& a, const GammaElt& b) const {
  for (std::size_t i = 0; i < a.comp.size(); ++i)
    if (!(a.comp[i] == b.comp[i])) return false;
  return true;
}

int GammaEngine::cap(const GammaElt& a) const {
  int c = INT_MAX;
  for (auto& s : a.comp) c = std::min(c, s.cap());
  return c;
}

bool GammaEngine::has_negative_tail(const GammaElt& a) const {
  for (auto& s : a.comp)
    if (!s.is_zero() && s.lo() < 0) return true;
  return false;
}

GammaElt GammaEngine::from_x(const Series& x) const {
  auto g = decompose(x);
  if (!g[0].is_zero()) throw NotPsiZero("psi(x) != 0 within precision");
  GammaElt r;
  for (u64 j = 1; j < p(); ++j) {
    Series y = shift_unit_[j] * g[j];
    int H = std::min(y.cap(), kb_);
    const auto& B = b_[j];
    auto basis = [&](int m) -> const Poly& { return B[m - blo_]; };
    Poly cj = tri_solve(poly::truncate(y.poly(), H), H, *x_, basis, 0, blo_, bhi_);
    r.comp.push_back(Series::raw(t_, cj, H));
  }
  return r;
}

Poly GammaEngine::apply_basis_sum(int j, const Poly& cpoly, int cap) const {
  const Ctx& c = *x_;
  const auto& B = b_[j];
  int lo = cap;
  for (std::size_t i = 0; i < cpoly.c.size(); ++i)
    if (cpoly.c[i]) {
      int k = cpoly.lo + static_cast<int>(i);
      if (k < blo_ || k > bhi_) throw WindowUnderflow("coordinate degree out of range");
      lo = std::min(lo, B[k - blo_].lo);
    }
  if (lo >= cap) return {};
  std::vector<u64> acc(cap - lo, 0);
  for (std::size_t i = 0; i < cpoly.c.size(); ++i) {
    u64 ck = cpoly.c[i];
    if (!ck) continue;
    int k = cpoly.lo + static_cast<int>(i);
    const Poly& b = B[k - blo_];
    for (std::size_t t = 0; t < b.c.size(); ++t) {
      int d = b.lo + static_cast<int>(t);
      if (d >= cap) break;
      acc[d - lo] = addm(acc[d - lo], mulm(ck, b.c[t], c.q), c.q);
    }
  }
  return poly::trim(Poly{lo, std::move(acc)});
}

Series GammaEngine::to_x(const GammaElt& a) const {
  Series sum = Series::zero(x_);
  for (u64 j = 1; j < p(); ++j) {
    const Series& cj = a.comp[j - 1];
    int H = std::min(cj.cap(), kb_);
    Series y = Series::raw(x_, apply_basis_sum(static_cast<int>(j), cj.poly(), H), H);
    sum = sum + omega_pow_[j] * frobenius(y);
  }
  return sum;
}

u64 GammaEngine::coset_mass(const GammaElt& a, i64 unit, int n) const {
  if (n < 1) throw ConfigInvalid("coset level must be at least 1");
  const Ctx& c = *t_;
  u64 ur = redm(unit, x_->qbig);
  if (ur % c.p == 0) throw NotAUnit("coset of a non-unit");
  const Series& f = a.comp[ur % c.p - 1];
  if (!f.is_zero() && f.lo() < 0) throw NegativeTailResidual("measure has a negative T-tail");
  Series h = f;
  if (n >= 2) {
    u64 m = ipow(c.p, n - 1);
    i64 s = static_cast<i64>(static_cast<u64>(gamma_exponent(unit)) % m);
    h = Series::one_plus_x_pow(t_, -s) * h;
    for (int i = 1; i < n; ++i) h = psi_scalar(h);
  }
  if (h.cap() < c.N) throw PrecisionTooLow("coset mass not determined at this precision");
  if (!h.is_zero() && h.lo() < 0) throw NegativeTailResidual("negative tail after restriction");
  return h.coeff(0);
}

u64 GammaEngine::specialize(const GammaElt& a, const Character& d) const {
  if (has_negative_tail(a)) throw NegativeTailResidual("measure has a negative T-tail");
  GammaElt t = twist(a, d.inverse());
  u64 r = 0;
  for (auto& s : t.comp) {
    if (s.cap() < t_->N) throw PrecisionTooLow("specialization not determined at this precision");
    r = addm(r, s.coeff(0), t_->q);
  }
  return r;
}

}  // namespace phigamma
