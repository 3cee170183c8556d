#include "phigamma/laurent.hpp"

#include <algorithm>

#include "phigamma/errors.hpp"

namespace phigamma {

namespace {

int floordiv(int a, int b) {
  int d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

constexpr u64 kSmallModulus = u64{1} << 24;

}  // namespace

namespace poly {

Poly trim(Poly f) {
  std::size_t a = 0, b = f.c.size();
  while (a < b && f.c[a] == 0) ++a;
  while (b > a && f.c[b - 1] == 0) --b;
  if (a == b) return Poly{f.lo, {}};
  Poly r;
  r.lo = f.lo + static_cast<int>(a);
  r.c.assign(f.c.begin() + a, f.c.begin() + b);
  return r;
}

namespace {
Poly combine(const Poly& a, const Poly& b, u64 q, bool negate) {
  if (a.empty() && b.empty()) return {};
  int lo = a.empty() ? b.lo : (b.empty() ? a.lo : std::min(a.lo, b.lo));
  int end = std::max(a.empty() ? lo : a.end(), b.empty() ? lo : b.end());
  Poly r{lo, std::vector<u64>(end - lo, 0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[a.lo - lo + i] = a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) {
    u64& t = r.c[b.lo - lo + i];
    t = negate ? subm(t, b.c[i], q) : addm(t, b.c[i], q);
  }
  return trim(std::move(r));
}
}  // namespace

Poly add(const Poly& a, const Poly& b, u64 q) { return combine(a, b, q, false); }
Poly sub(const Poly& a, const Poly& b, u64 q) { return combine(a, b, q, true); }

Poly scale(const Poly& a, u64 s, u64 q) {
  Poly r = a;
  s %= q;
  for (auto& x : r.c) x = mulm(x, s, q);
  return trim(std::move(r));
}

Poly shift(Poly a, int k) {
  a.lo += k;
  return a;
}

Poly truncate(Poly a, int end) {
  if (a.end() <= end) return a;
  if (end <= a.lo) return Poly{a.lo, {}};
  a.c.resize(end - a.lo);
  return trim(std::move(a));
}

Poly mul(const Poly& a, const Poly& b, u64 q, int end) {
  if (a.empty() || b.empty()) return {};
  const int lo = a.lo + b.lo;
  const long long full = static_cast<long long>(a.end()) + b.end() - 1;
  const int hi = static_cast<int>(std::min<long long>(full, end));
  if (hi <= lo) return {};
  const std::size_t n = hi - lo;
  Poly r{lo, std::vector<u64>(n, 0)};
  if (q < kSmallModulus) {
    std::vector<u64> acc(n, 0);
    for (std::size_t i = 0; i < a.c.size() && i < n; ++i) {
      const u64 ai = a.c[i];
      if (!ai) continue;
      const std::size_t jm = std::min(b.c.size(), n - i);
      u64* dst = acc.data() + i;
      const u64* src = b.c.data();
      for (std::size_t j = 0; j < jm; ++j) dst[j] += ai * src[j];
    }
    for (std::size_t k = 0; k < n; ++k) r.c[k] = acc[k] % q;
  } else {
    for (std::size_t i = 0; i < a.c.size() && i < n; ++i) {
      const u64 ai = a.c[i];
      if (!ai) continue;
      const std::size_t jm = std::min(b.c.size(), n - i);
      for (std::size_t j = 0; j < jm; ++j) r.c[i + j] = addm(r.c[i + j], mulm(ai, b.c[j], q), q);
    }
  }
  return trim(std::move(r));
}

Poly pow(const Poly& a, int e, u64 q, int end) {
  Poly r{0, {1 % q}};
  Poly b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b, q, end);
    e >>= 1;
    if (e) b = mul(b, b, q, end);
  }
  return r;
}

Poly substitute(const Poly& f, const Poly& s, const Poly& sinv, u64 q, int end) {
  if (f.empty()) return {};
  Poly Q{0, {1 % q}};
  int top = f.end() - 1;
  int base = 0;
  if (f.lo < 0) {
    const int m = -f.lo;
    const int drop = std::max(0, -sinv.lo);
    for (int i = 1; i <= m; ++i) Q = mul(Q, sinv, q, end + (m - i) * drop);
    base = f.lo;
  }
  if (Q.empty()) return {};
  const int pend = end - Q.lo;
  Poly R;
  for (int b = top; b >= base; --b) {
    R = mul(R, s, q, pend);
    u64 cb = f.at(b);
    if (cb) R = add(R, Poly{0, {cb}}, q);
  }
  if (f.lo < 0) return mul(R, Q, q, end);
  return truncate(R, end);
}

}  // namespace poly

Ctx::Ctx(u64 p_, int N_, int lo_, int hi_) : p(p_), q(0), N(N_), lo(lo_), hi(hi_) {
  if (p < 3 || p % 2 == 0) throw ConfigInvalid("p must be an odd prime");
  for (u64 d = 3; d * d <= p; d += 2)
    if (p % d == 0) throw ConfigInvalid("p must be prime");
  if (N < 1) throw ConfigInvalid("N must be at least 1");
  if (lo > 0 || hi < 0) throw ConfigInvalid("window must contain 0");
  if (static_cast<u64>(hi - lo) < p) throw ConfigInvalid("window narrower than p");
  long double lim = static_cast<long double>(u64{1} << 61);
  long double pq = 1;
  for (int i = 0; i < N; ++i) pq *= p;
  if (pq >= lim) throw ConfigInvalid("p^N too large");
  q = ipow(p, N);
  // binomials up to degree K need exponents mod p^(N + log_p K + 1)
  long long K = 4LL * (hi - lo + N * static_cast<long long>(p)) + 16;
  int extra = 0;
  for (long long t = 1; t <= K; t *= static_cast<long long>(p)) ++extra;
  Nbig = N + extra + 1;
  long double pb = 1;
  for (int i = 0; i < Nbig; ++i) pb *= p;
  if (pb >= lim) throw ConfigInvalid("p^N too large for exponent tracking");
  qbig = ipow(p, Nbig);

  Poly u{-(static_cast<int>(p) - 1), std::vector<u64>(p - 1, 0)};
  auto cp = binomials(static_cast<i64>(p), static_cast<int>(p) + 1, p, N + 1);
  for (u64 i = 1; i < p; ++i) u.c[i - 1] = (cp[i] / p) % q;
  upow_.push_back(Poly{0, {1 % q}});
  for (int j = 1; j < N; ++j) upow_.push_back(poly::mul(upow_.back(), u, q));
}

CtxPtr make_ctx(u64 p, int N, int lo, int hi) { return std::make_shared<const Ctx>(p, N, lo, hi); }

Poly phi_poly(const Ctx& ctx, const Poly& g, int end) {
  if (g.empty()) return {};
  const int p = static_cast<int>(ctx.p);
  const int lo = p * g.lo - (p - 1) * (ctx.N - 1);
  const int hi = std::min(p * (g.end() - 1) + 1, end);
  if (hi <= lo) return {};
  Poly r{lo, std::vector<u64>(hi - lo, 0)};
  const auto& up = ctx.u_powers();
  for (int b = g.lo; b < g.end(); ++b) {
    u64 gb = g.at(b);
    if (!gb) continue;
    if (p * b - (p - 1) * (ctx.N - 1) >= end) break;
    auto bin = binomials(b, ctx.N, ctx.p, ctx.N);
    u64 pj = 1;
    for (int j = 0; j < ctx.N; ++j, pj *= ctx.p) {
      u64 c = mulm(mulm(gb, bin[j], ctx.q), pj % ctx.q, ctx.q);
      if (!c) continue;
      const Poly& w = up[j];
      for (std::size_t k = 0; k < w.c.size(); ++k) {
        int d = p * b + w.lo + static_cast<int>(k);
        if (d >= hi) break;
        if (d < lo) continue;
        r.c[d - lo] = addm(r.c[d - lo], mulm(c, w.c[k], ctx.q), ctx.q);
      }
    }
  }
  return poly::trim(std::move(r));
}

std::vector<Poly> decompose_poly(const Ctx& ctx, const Poly& f) {
  const int p = static_cast<int>(ctx.p);
  const u64 q = ctx.q;
  std::vector<std::vector<u64>> C(p, std::vector<u64>(p, 0));
  for (int j = 0; j < p; ++j) {
    auto b = binomials(j, p, ctx.p, 1);
    for (int r = 0; r <= j; ++r) C[j][r] = b[r];
  }
  std::vector<Poly> onepx(p);
  for (int j = 0; j < p; ++j) {
    auto b = binomials(j, j + 1, ctx.p, ctx.N);
    onepx[j] = Poly{0, b};
  }
  std::vector<Poly> g(p);
  Poly R = poly::trim(f);
  u64 pt = 1;
  for (int t = 0; t < ctx.N && !R.empty(); ++t) {
    const int qlo = floordiv(R.lo, p);
    const int qhi = floordiv(R.end() - 1, p);
    const int n = qhi - qlo + 1;
    std::vector<Poly> G(p, Poly{qlo, std::vector<u64>(n, 0)});
    for (int k = 0; k < n; ++k) {
      const int qq = qlo + k;
      for (int r = p - 1; r >= 0; --r) {
        u64 val = R.at(p * qq + r) % ctx.p;
        for (int j = r + 1; j < p; ++j)
          val = (val + ctx.p * ctx.p - (C[j][r] * G[j].c[k]) % ctx.p) % ctx.p;
        G[r].c[k] = val;
      }
    }
    Poly S;
    for (int j = 0; j < p; ++j) {
      G[j] = poly::trim(G[j]);
      if (G[j].empty()) continue;
      S = poly::add(S, poly::mul(onepx[j], phi_poly(ctx, G[j]), q), q);
      g[j] = poly::add(g[j], poly::scale(G[j], pt, q), q);
    }
    Poly D = poly::sub(R, S, q);
    for (auto& x : D.c) {
      if (x % ctx.p) throw PrecisionTooLow("decomposition residual not divisible by p");
      x /= ctx.p;
    }
    R = poly::trim(std::move(D));
    pt *= ctx.p;
  }
  for (auto& x : g) x = poly::trim(x);
  return g;
}

int poly_weight(const Poly& f, u64 p, int none) {
  int w = none;
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (f.c[i]) w = std::min(w, f.lo + static_cast<int>(i) + vp(f.c[i], p));
  return w;
}

void Ctx::build_psi_table() const {
  const int pi = static_cast<int>(p);
  psi_lo_ = floor() - pi * N - 2;
  const int bhi = max_cap() + 2 * pi + 2;
  const int big = INT_MAX / 4;
  std::vector<int> m(bhi - psi_lo_ + 1);
  for (int b = psi_lo_; b <= bhi; ++b) {
    auto g = decompose_poly(*this, Poly{b, {1}});
    m[b - psi_lo_] = poly_weight(g[0], p, big);
  }
  psi_suffix_min_.assign(m.size(), big);
  int run = big;
  for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) {
    run = std::min(run, m[i]);
    psi_suffix_min_[i] = run;
  }
}

int Ctx::psi_cap(int H) const {
  std::call_once(psi_once_, [this] { build_psi_table(); });
  int r = INT_MAX;
  for (int a = 0; a < N; ++a) {
    int c = H - a;
    if (c < psi_lo_) throw PrecisionTooLow("cap below psi weight table");
    int idx = std::min<int>(c - psi_lo_, static_cast<int>(psi_suffix_min_.size()) - 1);
    r = std::min(r, a + psi_suffix_min_[idx]);
  }
  return r;
}

std::pair<const Poly*, const Poly*> Ctx::sigma_pair(i64 a) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = sigma_cache_.find(a);
  if (it != sigma_cache_.end()) return {&it->second.first, &it->second.second};
  if (vp_signed(a, p) > 0) throw NotAUnit("sigma_a needs a unit");
  const int D = max_cap() - floor() + 4;
  auto bin = binomials(a, D + 2, p, N);
  Poly u{0, std::vector<u64>(bin.begin() + 1, bin.end())};  // s/X
  Poly v{0, std::vector<u64>(u.c.size(), 0)};
  const u64 inv0 = invm(u.c[0], q);
  v.c[0] = inv0;
  for (std::size_t n = 1; n < v.c.size(); ++n) {
    u64 acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc = addm(acc, mulm(u.c[k], v.c[n - k], q), q);
    v.c[n] = mulm(negm(acc, q), inv0, q);
  }
  Poly s = poly::trim(poly::shift(u, 1));
  Poly sinv = poly::trim(poly::shift(v, -1));
  auto res = sigma_cache_.emplace(a, std::make_pair(std::move(s), std::move(sinv)));
  return {&res.first->second.first, &res.first->second.second};
}

// ---- Series ----

Series Series::zero(const CtxPtr& ctx, int cap) {
  Series s;
  s.ctx_ = ctx;
  s.cap_ = std::min(cap, ctx->max_cap());
  s.f_ = Poly{s.cap_, {}};
  return s;
}

Series Series::raw(const CtxPtr& ctx, Poly f, int cap) {
  Series s;
  s.ctx_ = ctx;
  s.cap_ = std::min(cap, ctx->max_cap());
  f = poly::truncate(std::move(f), s.cap_);
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    int b = f.lo + static_cast<int>(i);
    int k = s.cap_ - b;
    if (k < ctx->N) f.c[i] %= ipow(ctx->p, k);
  }
  f = poly::trim(std::move(f));
  if (f.empty()) f.lo = s.cap_;
  if (!f.empty() && f.lo < ctx->floor())
    throw WindowUnderflow("nonzero coefficient at X^" + std::to_string(f.lo) +
                          " below the window floor " + std::to_string(ctx->floor()));
  s.f_ = std::move(f);
  return s;
}

Series Series::exact(const CtxPtr& ctx, int lo, std::vector<u64> coeffs) {
  for (auto& c : coeffs) c %= ctx->q;
  return raw(ctx, Poly{lo, std::move(coeffs)}, ctx->max_cap());
}

Series Series::from_window(const CtxPtr& ctx, int lo, std::vector<u64> coeffs) {
  int cap = lo + static_cast<int>(coeffs.size()) - 1 + ctx->N;
  for (auto& c : coeffs) c %= ctx->q;
  return raw(ctx, Poly{lo, std::move(coeffs)}, cap);
}

Series Series::monomial(const CtxPtr& ctx, u64 c, int b) { return exact(ctx, b, {c}); }

Series Series::one_plus_x_pow(const CtxPtr& ctx, i64 a) {
  int K = ctx->max_cap();
  return raw(ctx, Poly{0, binomials(a, K, ctx->p, ctx->N)}, K);
}

int Series::exact_hi() const { return cap_ - ctx_->N; }

int Series::weight() const { return poly_weight(f_, ctx_->p, cap_); }

Series Series::with_cap(int cap) const { return raw(ctx_, f_, std::min(cap, cap_)); }

std::vector<u64> Series::exact_coeffs() const {
  std::vector<u64> out;
  for (int b = f_.lo; b <= exact_hi(); ++b) out.push_back(f_.at(b));
  return out;
}

Series Series::operator+(const Series& o) const {
  return raw(ctx_, poly::add(f_, o.f_, ctx_->q), std::min(cap_, o.cap_));
}

Series Series::operator-(const Series& o) const {
  return raw(ctx_, poly::sub(f_, o.f_, ctx_->q), std::min(cap_, o.cap_));
}

Series Series::operator-() const { return raw(ctx_, poly::scale(f_, ctx_->q - 1, ctx_->q), cap_); }

Series Series::operator*(const Series& o) const {
  long long c1 = static_cast<long long>(cap_) + o.weight();
  long long c2 = static_cast<long long>(o.cap_) + weight();
  int cap = static_cast<int>(std::min<long long>({c1, c2, ctx_->max_cap()}));
  return raw(ctx_, poly::mul(f_, o.f_, ctx_->q, cap), cap);
}

Series Series::scale(u64 s) const {
  s %= ctx_->q;
  if (!s) return zero(ctx_);
  long long cap = static_cast<long long>(cap_) + vp(s, ctx_->p);
  int c = static_cast<int>(std::min<long long>(cap, ctx_->max_cap()));
  return raw(ctx_, poly::scale(f_, s, ctx_->q), c);
}

Series Series::shift(int k) const { return raw(ctx_, poly::shift(f_, k), cap_ + k); }

Agreement agree(const Series& f, const Series& g) {
  const Ctx& c = *f.ctx();
  Agreement a;
  a.cap = std::min(f.cap(), g.cap());
  a.lo = std::min(f.lo(), g.lo());
  a.exact_hi = a.cap - c.N;
  a.equal = true;
  for (int b = a.lo; b < a.cap; ++b) {
    u64 d = subm(f.coeff(b) % c.q, g.coeff(b) % c.q, c.q);
    int k = std::min(c.N, a.cap - b);
    if (d % ipow(c.p, k)) {
      a.equal = false;
      a.first_mismatch = b;
      break;
    }
  }
  return a;
}

bool operator==(const Series& f, const Series& g) { return agree(f, g).equal; }

Series invert_unit(const Series& f) {
  const Ctx& c = *f.ctx();
  int m = INT_MAX;
  for (int b = f.lo(); b < f.cap(); ++b)
    if (f.coeff(b) % c.p) { m = b; break; }
  if (m == INT_MAX) throw NotAUnit("no unit coefficient within precision");
  const u64 q = c.q;
  const u64 cinv = invm(f.coeff(m), q);
  Poly g = poly::scale(poly::shift(f.poly(), -m), cinv, q);  // 1 + h
  const int d = std::max(0, -g.lo);
  const int Et = c.max_cap() + m + 1;
  const int B = Et + (c.N - 1) * d;
  // mod p inverse of the nonnegative part
  Poly gp = poly::truncate(g, B);
  std::vector<u64> gpc(B, 0);
  for (int b = 0; b < B; ++b) gpc[b] = gp.at(b) % c.p;
  std::vector<u64> y(B, 0);
  y[0] = invm(gpc[0], c.p);
  for (int n = 1; n < B; ++n) {
    u64 acc = 0;
    for (int k = 1; k <= n; ++k) acc = (acc + gpc[k] * y[n - k]) % c.p;
    y[n] = (c.p - acc) % c.p * y[0] % c.p;
  }
  Poly Y = poly::trim(Poly{0, y});
  for (int prec = 1; prec < c.N; prec *= 2) {
    Poly e = poly::sub(Poly{0, {1}}, poly::mul(g, Y, q, B), q);
    Y = poly::add(Y, poly::mul(Y, e, q, B), q);
  }
  Poly res = poly::scale(poly::shift(poly::truncate(Y, Et), -m), cinv, q);
  int w = poly_weight(res, c.p, c.max_cap());
  long long cap = std::min<long long>(static_cast<long long>(f.cap()) + 2LL * w, Et - m);
  return Series::raw(f.ctx(), res, static_cast<int>(std::min<long long>(cap, c.max_cap())));
}

Series frobenius(const Series& f) {
  const Ctx& c = *f.ctx();
  long long cap = static_cast<long long>(c.p) * f.cap() - static_cast<long long>(c.p - 1) * (c.N - 1);
  int capi = static_cast<int>(std::min<long long>(cap, c.max_cap()));
  return Series::raw(f.ctx(), phi_poly(c, f.poly(), capi), capi);
}

Series sigma(i64 a, const Series& f) {
  if (a == 1) return f;
  const Ctx& c = *f.ctx();
  auto [s, sinv] = c.sigma_pair(a);
  return Series::raw(f.ctx(), poly::substitute(f.poly(), *s, *sinv, c.q, f.cap()), f.cap());
}

std::vector<Series> decompose(const Series& f) {
  const Ctx& c = *f.ctx();
  auto g = decompose_poly(c, f.poly());
  int cap = c.psi_cap(f.cap());
  std::vector<Series> out;
  for (auto& gj : g) out.push_back(Series::raw(f.ctx(), gj, cap));
  return out;
}

Series psi_scalar(const Series& f) { return decompose(f)[0]; }

u64 res0(const Series& f) {
  const Ctx& c = *f.ctx();
  if (f.cap() + 1 < c.N) throw WindowUnderflow("residue not determined at this precision");
  u64 r = 0;
  for (int b = f.lo(); b <= -1; ++b) {
    u64 x = f.coeff(b);
    r = ((-1 - b) % 2) ? subm(r, x, c.q) : addm(r, x, c.q);
  }
  return r;
}

Series diff_d(const Series& f) {
  const Ctx& c = *f.ctx();
  const Poly& g = f.poly();
  Poly d;
  if (!g.empty()) {
    d.lo = g.lo - 1;
    d.c.resize(g.c.size());
    for (std::size_t i = 0; i < g.c.size(); ++i) {
      int b = g.lo + static_cast<int>(i);
      d.c[i] = mulm(g.c[i], redm(b, c.q), c.q);
    }
  }
  Poly r = poly::add(d, poly::shift(d, 1), c.q);
  return Series::raw(f.ctx(), r, f.cap() - 1);
}

}  // namespace phigamma
