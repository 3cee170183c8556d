#pragma once

#include <functional>

#include "phigamma/measure.hpp"

namespace phigamma {

// Exact operators on D^{psi=0}, acting on splitting-basis Gamma-coordinates.
PsiZero m_delta(const PsiZero& x, const Character& d);
PsiZero w_star(const PsiZero& x);
PsiZero w_delta(const PsiZero& x, const Character& d);
// M = multiplication E(eta1) x E(eta2) -> E(eta1 eta2), both inputs rank one
PsiZero convolution(const PsiZero& x1, const PsiZero& x2, const ModulePtr& target);
PsiZero convolution(const PsiZero& x1, const PsiZero& x2);
// highest wedge D x D -> det D, z = e1 ^ e2
ModulePtr det_module(const ModulePtr& D);
PsiZero wedge_pair(const PsiZero& x, const PsiZero& y, const ModulePtr& detmod);
PsiZero wedge_pair(const PsiZero& x, const PsiZero& y);

// Parameter change X -> X_{zeta^b} = (1+X)^b - 1 applied to every stored series.
ModElem transport(const ModElem& x, i64 b, const ModulePtr& target);
PsiZero transport(const PsiZero& x, i64 b, const ModulePtr& target);
// operator evaluated with parameter X_{zeta^a}: rewrite inputs in the new
// parameter, run the operator verbatim, rewrite the output back
using UnaryOp = std::function<PsiZero(const PsiZero&)>;
using BinaryOp = std::function<PsiZero(const PsiZero&, const PsiZero&)>;
PsiZero at_zeta(i64 a, const PsiZero& x, const UnaryOp& op);
PsiZero at_zeta(i64 a, const PsiZero& x, const PsiZero& y, const BinaryOp& op);

// Literal level-n limit formulas on module elements.
ModElem m_delta_riemann(const ModElem& x, const Character& d, int n);
ModElem w_star_riemann(const ModElem& x, int n);
ModElem convolution_riemann(const ModElem& x1, const ModElem& x2, const ModulePtr& target, int n);
ModElem wedge_riemann(const ModElem& x, const ModElem& y, const ModulePtr& detmod, int n);
// iterate n = 1, 2, ... until two successive levels agree with at least
// min_exact exactly known degrees; LimitNotStabilized past n_max
ModElem stabilize(const std::function<ModElem(int)>& level, int n_max, int min_exact);

}  // namespace phigamma
