#include "phigamma/modarith.hpp"

#include "phigamma/errors.hpp"

namespace phigamma {

u64 ipow(u64 b, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int vp(u64 x, u64 p) {
  int v = 0;
  while (x % p == 0) { x /= p; ++v; }
  return v;
}

int vp_signed(i64 x, u64 p) { return vp(static_cast<u64>(x < 0 ? -x : x), p); }

u64 redm(i64 a, u64 q) {
  i64 r = a % static_cast<i64>(q);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

u64 powm(u64 a, u64 e, u64 q) {
  u64 r = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) r = mulm(r, a, q);
    a = mulm(a, a, q);
    e >>= 1;
  }
  return r;
}

u64 invm(u64 a, u64 q) {
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(q), nr = static_cast<i64>(a % q);
  while (nr) {
    i64 k = r / nr;
    i64 tmp = t - k * nt; t = nt; nt = tmp;
    tmp = r - k * nr; r = nr; nr = tmp;
  }
  if (r != 1) throw NotAUnit("residue not invertible");
  return redm(t, q);
}

u64 powm_signed(u64 a, i64 e, u64 q) {
  if (e >= 0) return powm(a, static_cast<u64>(e), q);
  return powm(invm(a, q), static_cast<u64>(-e), q);
}

std::vector<u64> binomials(i64 A, int K, u64 p, int N) {
  const u64 q = ipow(p, N);
  std::vector<u64> out(K > 0 ? K : 0, 0);
  if (K <= 0) return out;
  // C(-m,k) = (-1)^k C(m+k-1,k)
  bool neg = A < 0;
  i64 m = neg ? -A : A;
  int v = 0;
  u64 unit = 1;
  out[0] = 1 % q;
  for (int k = 1; k < K; ++k) {
    i64 num = neg ? m + k - 1 : m - k + 1;
    if (num == 0) break;
    int a = vp(static_cast<u64>(num), p);
    u64 nu = static_cast<u64>(num);
    for (int i = 0; i < a; ++i) nu /= p;
    u64 den = static_cast<u64>(k);
    int b = vp(den, p);
    for (int i = 0; i < b; ++i) den /= p;
    v += a - b;
    unit = mulm(mulm(unit, nu % q, q), invm(den % q, q), q);
    u64 c = v >= N ? 0 : mulm(unit, ipow(p, v), q);
    out[k] = (neg && (k & 1)) ? negm(c, q) : c;
  }
  return out;
}

u64 teichmuller(u64 j, u64 p, int K) {
  const u64 q = ipow(p, K);
  u64 x = j % q;
  for (int i = 0; i < K; ++i) x = powm(x, p, q);
  return x;
}

u64 gamma_log(u64 u, u64 p, int K) {
  const u64 q = ipow(p, K);
  u %= q;
  if (u % p != 1 % p) throw NotAUnit("gamma_log argument not 1 mod p");
  u64 s = 0, ps = 1;
  const u64 g = 1 + p;
  // digit by digit: fix s mod p^t so that g^s == u mod p^(t+1)
  for (int t = 0; t + 1 < K; ++t) {
    for (u64 d = 0; d < p; ++d) {
      u64 cand = s + d * ps;
      u64 qt = ipow(p, t + 2);
      if (powm(g, cand, qt) == u % qt) { s = cand; break; }
    }
    ps *= p;
  }
  return s;
}

i64 balanced(u64 a, u64 m) {
  a %= m;
  i64 r = static_cast<i64>(a);
  if (2 * a > m) r -= static_cast<i64>(m);
  return r;
}

}  // namespace phigamma
