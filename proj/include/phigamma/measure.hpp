#pragma once

#include <memory>
#include <vector>

#include "phigamma/gamma.hpp"
#include "phigamma/module.hpp"

namespace phigamma {

using EnginePtr = std::shared_ptr<const GammaEngine>;

// Element of E_R(Gamma); its Amice transform is lambda.(1+X), so [sigma_a] <-> (1+X)^a.
struct Measure {
  EnginePtr eng;
  GammaElt lam;
};

EnginePtr engine_of(const CtxPtr& c);

Measure measure_zero(const CtxPtr& c);
Measure from_group_element(const CtxPtr& c, i64 a);
// finite group-ring element sum c_k [sigma_{a_k}]
Measure group_ring(const CtxPtr& c, const std::vector<std::pair<u64, i64>>& terms);
Measure from_amice(const CtxPtr& c, const Series& amice);  // throws NotPsiZero
Series amice(const Measure& m);

Measure operator+(const Measure& a, const Measure& b);
Measure operator-(const Measure& a, const Measure& b);
Measure scale(const Measure& a, u64 s);
Measure convolve(const Measure& a, const Measure& b);
Measure involute(const Measure& a);
// g_delta: [g] -> delta(g)^-1 [g]
Measure g_twist(const Measure& a, const Character& d);
// [g] -> d(g)[g]
Measure char_twist(const Measure& a, const Character& d);
u64 coset_mass(const Measure& a, i64 unit, int n);
// f_delta: [g] -> delta(g)^-1
u64 specialize(const Measure& a, const Character& d);
bool operator==(const Measure& a, const Measure& b);
int measure_cap(const Measure& a);

// psi = 0 element of a module, stored by Gamma-coordinates of its splitting-basis
// components: x = sum_i (theta_i . (1+X)) f_i.
struct PsiZero {
  ModulePtr mod;
  std::vector<GammaElt> theta;
};

PsiZero certify(const ModElem& x);  // throws NotPsiZero
ModElem realize(const PsiZero& x);
PsiZero psi_zero_of(const ModulePtr& D, std::vector<GammaElt> theta);
PsiZero operator+(const PsiZero& a, const PsiZero& b);
PsiZero operator-(const PsiZero& a, const PsiZero& b);
PsiZero scale(const PsiZero& a, u64 s);
bool operator==(const PsiZero& a, const PsiZero& b);
int psi_zero_cap(const PsiZero& a);

// E_R(Gamma)-action on D^{psi=0}
PsiZero act_on(const Measure& lam, const PsiZero& x);

// Literal level-n formulas, used as cross-checks.
// mass of the coset a + p^n Z_p from the Amice series: ψ^n((1+X)^{-a} amice) at X = 0
u64 coset_mass_riemann(const Series& amice, i64 a, int n);
// sum over balanced a mod p^n of mass(lambda, a, n) sigma_a(x)
ModElem act_on_riemann(const Measure& lam, const ModElem& x, int n);
// sum_i (1+X)^{1/i} phi^n psi^n((1+X)^{-i} amice)
Series involute_riemann(const Series& amice, int n);
// two-variable limit for M = multiplication on E_R
Series convolve_riemann(const Series& a1, const Series& a2, int n);

// balanced units mod p^n
std::vector<i64> balanced_units(u64 p, int n);
// p-adic inverse of an integer unit as a representative mod qbig
i64 unit_inverse(const Ctx& c, i64 a);
i64 unit_product(const Ctx& c, i64 a, i64 b);

}  // namespace phigamma
