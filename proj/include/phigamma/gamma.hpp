#pragma once

#include <vector>

#include "phigamma/character.hpp"
#include "phigamma/laurent.hpp"

namespace phigamma {

// Element of E_R(Gamma) = sum_j [omega_j] c_j(T), Gamma = mu_{p-1} x (1+pZ_p),
// T = [gamma]-1 with gamma = 1+p. comp[j-1] holds c_j for j = 1..p-1.
struct GammaElt {
  std::vector<Series> comp;
};

// Exact coordinates on E_R^{psi=0}: x = lambda . (1+X) for a unique lambda.
class GammaEngine {
 public:
  explicit GammaEngine(CtxPtr x);

  const CtxPtr& xctx() const { return x_; }
  const CtxPtr& tctx() const { return t_; }
  u64 p() const { return x_->p; }
  u64 omega(int j) const { return omega_[j]; }  // Teichmuller lift mod qbig
  int index_of(u64 residue) const { return static_cast<int>(residue % x_->p); }

  GammaElt zero() const;
  GammaElt dirac(i64 a) const;  // [sigma_a]
  GammaElt add(const GammaElt& a, const GammaElt& b) const;
  GammaElt sub(const GammaElt& a, const GammaElt& b) const;
  GammaElt neg(const GammaElt& a) const;
  GammaElt scale(const GammaElt& a, u64 s) const;
  GammaElt mul(const GammaElt& a, const GammaElt& b) const;
  // [g] -> delta(g)[g]
  GammaElt twist(const GammaElt& a, const Character& d) const;
  // [g] -> [g^-1]
  GammaElt involute(const GammaElt& a) const;
  bool equal(const GammaElt& a, const GammaElt& b) const;
  int cap(const GammaElt& a) const;
  int exact_hi(const GammaElt& a) const { return cap(a) - x_->N; }
  bool has_negative_tail(const GammaElt& a) const;

  // x in E^{psi=0} -> lambda with x = lambda.(1+X); throws NotPsiZero
  GammaElt from_x(const Series& x) const;
  // lambda -> lambda.(1+X)
  Series to_x(const GammaElt& a) const;

  // mass of the coset a + p^n Z_p, n >= 1; needs vanishing negative tail
  u64 coset_mass(const GammaElt& a, i64 unit, int n) const;
  // f_delta: [g] -> delta(g)^-1
  u64 specialize(const GammaElt& a, const Character& d) const;

  // unit exponent data: a = omega(a mod p) * gamma^s
  i64 gamma_exponent(i64 a) const;

 private:
  CtxPtr x_, t_;
  std::vector<u64> omega_;            // index j = 0..p-1 (omega_0 unused)
  std::vector<i64> shift_exp_;        // (j - omega_j)/p
  std::vector<Series> shift_unit_;    // (1+X)^{(j-omega_j)/p}
  std::vector<Series> omega_pow_;     // (1+X)^{omega_j}
  int kb_ = 0, kbig_ = 0, blo_ = 0, bhi_ = 0;
  std::vector<std::vector<Poly>> b_;  // b_[j][k - blo_] = tau_j^k(1)
  std::vector<std::vector<int>> bcap_;
  Poly iota_s_, iota_sinv_;

  Poly apply_basis_sum(int j, const Poly& c, int cap) const;
};

}  // namespace phigamma
