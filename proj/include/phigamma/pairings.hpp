#pragma once

#include "phigamma/colmez.hpp"

namespace phigamma {

// delta_D = chi^-1 det D
Character delta_D(const ModulePtr& D);

// res0 of <sigma_{-1}(x (x) e_D^vee (x) e_1), y>, the pairing valued in E(1)
u64 residue_pair(const ModElem& x, const ModElem& y);

// the measure lambda with lambda.((1+X)^-1 e_d) = g, g in a rank-one module E(d)
Measure amice_coordinates(const PsiZero& g);

// [x (x) z^vee, y]_Iw for z = u e_D, defined by
// [sigma_{-1}] [x (x) z^vee, y] . ((1+X)^-1 z) = x ^ y
Measure iwasawa_pair(const PsiZero& x, const PsiZero& y, u64 u = 1);

struct DualityResult {
  Measure lhs, rhs;
  bool pass;
};
// [x (x) z^vee, y]_{Iw,D} against det D(-1) iota([x' (x) (z (x) e_-2), y']_{Iw,D*}),
// x' = w_{delta_D}(x) (x) z^vee (x) e_1 and likewise y'
DualityResult duality_check(const PsiZero& x, const PsiZero& y);

// lambda -> lambda.((1+X)^-1 e_d) in E(d)^{psi=0}
PsiZero epsilon_rank_one(const ModulePtr& Ed, const Measure& lam);
// [sigma_{-1}] iwasawa_pair(x, y), the coordinate of (x ^ y) (x) e_D^vee
Measure epsilon_rank_two(const PsiZero& x, const PsiZero& y);

// Measure-valued operators evaluated with parameter X_{zeta^a}.
using MeasureOp1 = std::function<Measure(const PsiZero&)>;
using MeasureOp2 = std::function<Measure(const PsiZero&, const PsiZero&)>;
Measure at_zeta_measure(i64 a, const PsiZero& x, const MeasureOp1& op);
Measure at_zeta_measure(i64 a, const PsiZero& x, const PsiZero& y, const MeasureOp2& op);

struct TrianguleResult {
  Measure value;  // [sigma_{-1}] [ (1+X)^-1 e1 (x) z^vee, d2(p)^-1 (1+X)^-1 phi(e2) ]
  bool pass;      // value == [1]
};
TrianguleResult trianguline_factorization_check(const Character& d1, const Character& d2, const Series& U);

// w_{delta_D}((1+X) e1) against d1(-1)(1+X) e1 on a triangular module
bool dospinescu_check(const ModulePtr& D);

}  // namespace phigamma
