#pragma once

#include <climits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "phigamma/modarith.hpp"

namespace phigamma {

// Exact Laurent polynomial over Z/q, coefficients for degrees lo .. lo+c.size()-1.
struct Poly {
  int lo = 0;
  std::vector<u64> c;

  int end() const { return lo + static_cast<int>(c.size()); }
  u64 at(int b) const { return (b < lo || b >= end()) ? 0 : c[b - lo]; }
  bool empty() const { return c.empty(); }
};

namespace poly {
Poly trim(Poly f);
Poly add(const Poly& a, const Poly& b, u64 q);
Poly sub(const Poly& a, const Poly& b, u64 q);
Poly scale(const Poly& a, u64 s, u64 q);
Poly shift(Poly a, int k);
Poly truncate(Poly a, int end);
// product restricted to degrees < end
Poly mul(const Poly& a, const Poly& b, u64 q, int end = INT_MAX);
Poly pow(const Poly& a, int e, u64 q, int end);
// f(s) for s with no negative degrees and sinv = 1/s; result degrees < end
Poly substitute(const Poly& f, const Poly& s, const Poly& sinv, u64 q, int end);
}  // namespace poly

class GammaEngine;

// Working precision: coefficients in Z/p^N, ambient X-window [lo, hi].
class Ctx {
 public:
  Ctx(u64 p, int N, int lo, int hi);

  u64 p, q;
  int N, lo, hi;
  int Nbig;   // exponent precision for p-adic exponents
  u64 qbig;

  int max_cap() const { return hi + N; }
  int floor() const { return lo - N * (static_cast<int>(p) - 1); }

  // phi(X^b) = X^(pb) * V_b with V_b finite; u^j for the expansion
  const std::vector<Poly>& u_powers() const { return upow_; }

  // weighted cap of psi applied to an element of cap H
  int psi_cap(int H) const;

  // sigma_a(X) and its inverse, cached
  std::pair<const Poly*, const Poly*> sigma_pair(i64 a) const;

  std::shared_ptr<const GammaEngine> engine(const std::shared_ptr<const Ctx>& self) const;

 private:
  std::vector<Poly> upow_;
  mutable std::once_flag psi_once_;
  mutable int psi_lo_ = 0;
  mutable std::vector<int> psi_suffix_min_;
  mutable std::mutex mu_;
  mutable std::map<i64, std::pair<Poly, Poly>> sigma_cache_;
  mutable std::once_flag engine_once_;
  mutable std::shared_ptr<const GammaEngine> engine_;
  void build_psi_table() const;
};

using CtxPtr = std::shared_ptr<const Ctx>;

CtxPtr make_ctx(u64 p, int N, int lo, int hi);

// phi and decomposition on exact Laurent polynomials
Poly phi_poly(const Ctx& ctx, const Poly& g, int end = INT_MAX);
std::vector<Poly> decompose_poly(const Ctx& ctx, const Poly& f);
int poly_weight(const Poly& f, u64 p, int none);

// Element of E_R with weighted precision cap H: the coefficient of X^b is
// known mod p^min(N, H-b); degrees below lo are exactly zero.
class Series {
 public:
  Series() = default;

  static Series zero(const CtxPtr& ctx, int cap = INT_MAX);
  static Series raw(const CtxPtr& ctx, Poly f, int cap);
  static Series exact(const CtxPtr& ctx, int lo, std::vector<u64> coeffs);
  static Series from_window(const CtxPtr& ctx, int lo, std::vector<u64> coeffs);
  static Series monomial(const CtxPtr& ctx, u64 c, int b);
  static Series constant(const CtxPtr& ctx, u64 c) { return monomial(ctx, c, 0); }
  // (1+X)^a, a an exact integer (or a representative mod qbig)
  static Series one_plus_x_pow(const CtxPtr& ctx, i64 a);

  const CtxPtr& ctx() const { return ctx_; }
  int lo() const { return f_.lo; }
  int cap() const { return cap_; }
  int exact_hi() const;
  const Poly& poly() const { return f_; }
  u64 coeff(int b) const { return f_.at(b); }
  int weight() const;
  bool is_zero() const { return f_.empty(); }
  Series with_cap(int cap) const;
  std::vector<u64> exact_coeffs() const;  // [lo, exact_hi]

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series scale(u64 s) const;
  Series shift(int k) const;

 private:
  CtxPtr ctx_;
  Poly f_;
  int cap_ = 0;
};

struct Agreement {
  bool equal = false;
  int lo = 0;
  int cap = 0;
  int exact_hi = 0;
  int first_mismatch = 0;
};

Agreement agree(const Series& f, const Series& g);
bool operator==(const Series& f, const Series& g);

Series invert_unit(const Series& f);
Series frobenius(const Series& f);
Series sigma(i64 a, const Series& f);
std::vector<Series> decompose(const Series& f);
Series psi_scalar(const Series& f);
u64 res0(const Series& f);
Series diff_d(const Series& f);

}  // namespace phigamma
