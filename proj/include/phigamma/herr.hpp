#pragma once

#include <vector>

#include "phigamma/module.hpp"

namespace phigamma {

enum class Flavor { PhiGamma, PsiGamma };

// degree 1 entries are (gamma part, theta part) with theta = phi or psi
struct Cochain {
  int degree = 0;
  Flavor flavor = Flavor::PhiGamma;
  std::vector<ModElem> entries;
  i64 gamma = 0;  // chi(gamma) = 1 + p
};

i64 gamma_generator(const Ctx& c);
Cochain cochain(Flavor f, std::vector<ModElem> entries, int degree);
bool operator==(const Cochain& a, const Cochain& b);
bool is_zero(const Cochain& c);

// d0 x = ((gamma-1)x, (theta-1)x), d1(a, b) = (theta-1)a - (gamma-1)b
Cochain differential(const Cochain& c);
// degreewise id, id (+) -psi, -psi
Cochain psi_comparison(const Cochain& c);

// x (x) y in tensor(A, B), coordinates in the Kronecker basis
ModElem tensor_elem(const ModulePtr& AB, const ModElem& x, const ModElem& y);
// x u [y] = [x (x) y] and [x1, y1] u [x2, y2] = [x1 (x) gamma(y2) - y1 (x) phi(x2)],
// with the Leibniz-compatible extensions (a, b) u y = (a (x) gamma y, b (x) phi y)
// and z u y = z (x) gamma phi y
Cochain cup(const Cochain& c1, const Cochain& c2, const ModulePtr& AB);
Cochain cup(const Cochain& c1, const Cochain& c2);

// (p-1)/p log_p(1+p) in Z/p^N
u64 iota_scalar(const Ctx& c);
// x with psi(x) = x -> ((p-1)/p log(chi(gamma)) x (x) e_d, 0) in twist(D, d)
Cochain iota_specialize(const ModElem& x, const Character& d);

}  // namespace phigamma
