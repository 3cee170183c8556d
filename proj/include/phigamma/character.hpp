#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phigamma/modarith.hpp"

namespace phigamma {

// Continuous character of Q_p^x (or of Gamma only) with values in (Z/p^N)^x:
//   delta(a) = a^k * zeta^dlog_g(a mod p^cond) on units, delta(p) = at_p.
// g is the least primitive root mod p^2, hence a generator mod every p^n.
class Character {
 public:
  Character() = default;

  static Character trivial(u64 p, int N);
  static Character chi(u64 p, int N, int k = 1);
  static Character finite(u64 p, int N, int cond, u64 zeta);
  static Character unramified(u64 p, int N, u64 at_p);
  // Gamma-only: forget the value at p (phi acts trivially on e_delta)
  Character gamma_only() const;
  Character with_at_p(u64 v) const;

  u64 p() const { return p_; }
  int N() const { return N_; }
  int k() const { return k_; }
  int cond() const { return cond_; }
  u64 zeta() const { return zeta_; }
  bool has_at_p() const { return at_p_.has_value(); }
  u64 at_p() const { return at_p_.value_or(1 % q_); }

  // value on a unit given by any integer representative
  u64 operator()(i64 a) const;
  u64 on_residue(u64 a) const;  // a taken mod p^N

  Character operator*(const Character& o) const;
  Character inverse() const;
  Character pow(int e) const;
  bool operator==(const Character& o) const;

  std::string describe() const;
  static u64 generator(u64 p);

 private:
  u64 p_ = 3, q_ = 1;
  int N_ = 1;
  std::optional<u64> at_p_;
  int k_ = 0;
  int cond_ = 0;
  u64 zeta_ = 1;
  std::shared_ptr<const std::vector<u64>> dlog_;  // index a mod p^cond
  void build_table();
};

}  // namespace phigamma
