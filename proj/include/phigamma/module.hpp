#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "phigamma/character.hpp"
#include "phigamma/laurent.hpp"

namespace phigamma {

using Mat = std::vector<std::vector<Series>>;
using Vec = std::vector<Series>;

namespace mat {
Mat identity(const CtxPtr& c, int r);
Mat zero(const CtxPtr& c, int r);
Mat mul(const Mat& a, const Mat& b);
Vec apply(const Mat& a, const Vec& v);
Mat transpose(const Mat& a);
Mat scale(const Mat& a, u64 s);
Mat inverse(const Mat& a);  // rank <= 2, throws NotEtale
Mat frobenius(const Mat& a);
Mat sigma(i64 a, const Mat& m);
Mat kron(const Mat& a, const Mat& b);
bool equal(const Mat& a, const Mat& b);
}  // namespace mat

// Free etale (phi,Gamma)-module with basis e. Every constructed module also
// carries a splitting basis f = e.B (B unipotent) of (phi,Gamma)-eigenvectors
// with characters eta_i; the exact operators on the psi = 0 part use it.
class Module {
 public:
  enum class Kind { RankOne, Split, Triangular, Dual, Tensor };

  CtxPtr ctx;
  Kind kind = Kind::RankOne;
  int rank = 1;
  Mat P, Pinv;
  Mat B, Binv;
  std::vector<Character> eta;
  Character det;
  std::string basis_tag;  // e.g. "e_d1^e_d2"
  // descriptor data for triangular modules
  Series U;
  Series Y;

  // G(a), cached
  const Mat& G(i64 a) const;
  // the same matrix from the splitting basis: B diag(eta(a)) sigma_a(B)^-1
  Mat G_split(i64 a) const;

  std::function<Mat(i64)> gamma_fn;

  // modules this one was derived from (dual, tensor, twist, change of variable)
  std::vector<std::shared_ptr<const Module>> parents;

 private:
  mutable std::mutex mu_;
  mutable std::map<i64, Mat> cache_;
};

using ModulePtr = std::shared_ptr<const Module>;

struct ModElem {
  ModulePtr mod;
  Vec v;  // coordinates in the basis e
};

ModulePtr make_rank_one(const CtxPtr& c, const Character& d);
ModulePtr make_split(const CtxPtr& c, const Character& d1, const Character& d2);
// phi = [[d1(p), U], [0, d2(p)]]; U must have no negative exponents
ModulePtr build_triangular(const CtxPtr& c, const Character& d1, const Character& d2, const Series& U);
ModulePtr twist(const ModulePtr& D, const Character& d);
// D* = D^vee(1) in the basis e_i^vee (x) e_1
ModulePtr tate_dual(const ModulePtr& D);
ModulePtr tensor(const ModulePtr& A, const ModulePtr& B);
// transport by X -> (1+X)^a - 1: every structure series is replaced by sigma_a of it
ModulePtr change_variable(const ModulePtr& D, i64 a);

// solve lhs*Z = A + rhs*phi(Z) for A without negative exponents
Series solve_phi_fixed(const Series& A, u64 lhs, u64 rhs);

// etale and commutation checks at working precision
bool check_etale(const Module& D);
bool check_commutation(const Module& D, i64 a);
bool check_cocycle(const Module& D, i64 a, i64 b);

ModElem elem(const ModulePtr& D, Vec v);
ModElem elem_zero(const ModulePtr& D);
ModElem operator+(const ModElem& a, const ModElem& b);
ModElem operator-(const ModElem& a, const ModElem& b);
ModElem scale(const ModElem& a, u64 s);
ModElem mul_scalar(const Series& f, const ModElem& a);
bool operator==(const ModElem& a, const ModElem& b);
int elem_cap(const ModElem& a);

ModElem apply_phi(const ModElem& x);
ModElem apply_psi(const ModElem& x);
ModElem apply_sigma(i64 a, const ModElem& x);
bool is_psi_fixed(const ModElem& x, u64 lambda);

// coordinates in the splitting basis and back
Vec to_split(const ModElem& x);
ModElem from_split(const ModulePtr& D, const Vec& w);

// D (x) L(D)^vee -> D^vee: x (x) z^vee -> [y -> (y ^ x)/z], as a covector on e
Vec rank2_dual_embed(const ModElem& x);
// x2 e1^vee - x1 e2^vee read in tate_dual(D), coordinate-wise
ModElem embed_in_dual(const ModulePtr& Dstar, const ModElem& x);

}  // namespace phigamma
