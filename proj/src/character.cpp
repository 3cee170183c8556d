#include "phigamma/character.hpp"

#include <sstream>

#include "phigamma/errors.hpp"

namespace phigamma {

u64 Character::generator(u64 p) {
  const u64 m = p * p;
  const u64 order = p * (p - 1);
  for (u64 g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (u64 f = 2; f <= order && ok; ++f) {
      if (order % f) continue;
      bool prime = true;
      for (u64 d = 2; d * d <= f; ++d)
        if (f % d == 0) { prime = false; break; }
      if (prime && powm(g, order / f, m) == 1) ok = false;
    }
    if (ok) return g;
  }
  throw ConfigInvalid("no primitive root");
}

void Character::build_table() {
  dlog_.reset();
  if (cond_ == 0) return;
  const u64 m = ipow(p_, cond_);
  auto t = std::make_shared<std::vector<u64>>(m, 0);
  const u64 g = generator(p_) % m;
  u64 x = 1 % m;
  const u64 order = m / p_ * (p_ - 1);
  for (u64 e = 0; e < order; ++e) {
    (*t)[x] = e;
    x = mulm(x, g, m);
  }
  dlog_ = t;
}

Character Character::trivial(u64 p, int N) {
  Character c;
  c.p_ = p;
  c.N_ = N;
  c.q_ = ipow(p, N);
  c.at_p_ = 1 % c.q_;
  return c;
}

Character Character::chi(u64 p, int N, int k) {
  Character c = trivial(p, N);
  c.k_ = k;
  return c;
}

Character Character::finite(u64 p, int N, int cond, u64 zeta) {
  if (cond < 0 || cond > N) throw ConfigInvalid("conductor exponent out of range");
  Character c = trivial(p, N);
  c.cond_ = cond;
  c.zeta_ = zeta % c.q_;
  if (cond == 0) {
    if (c.zeta_ != 1 % c.q_) throw ConfigInvalid("conductor 1 needs zeta = 1");
    return c;
  }
  const u64 order = ipow(p, cond - 1) * (p - 1);
  if (powm(c.zeta_, order, c.q_) != 1 % c.q_) throw ConfigInvalid("zeta has the wrong order");
  c.build_table();
  return c;
}

Character Character::unramified(u64 p, int N, u64 at_p) {
  Character c = trivial(p, N);
  if (at_p % p == 0) throw ConfigInvalid("delta(p) must be a unit");
  c.at_p_ = at_p % c.q_;
  return c;
}

Character Character::gamma_only() const {
  Character c = *this;
  c.at_p_.reset();
  return c;
}

Character Character::with_at_p(u64 v) const {
  if (v % p_ == 0) throw ConfigInvalid("delta(p) must be a unit");
  Character c = *this;
  c.at_p_ = v % q_;
  return c;
}

u64 Character::on_residue(u64 a) const {
  a %= q_;
  if (a % p_ == 0) throw NotAUnit("character evaluated at a non-unit");
  u64 v = powm_signed(a, k_, q_);
  if (cond_ > 0) {
    const u64 m = ipow(p_, cond_);
    v = mulm(v, powm(zeta_, (*dlog_)[a % m], q_), q_);
  }
  return v;
}

u64 Character::operator()(i64 a) const { return on_residue(redm(a, q_)); }

Character Character::operator*(const Character& o) const {
  if (o.p_ != p_ || o.N_ != N_) throw ConfigInvalid("character precision mismatch");
  Character c = *this;
  c.k_ = k_ + o.k_;
  if (at_p_ || o.at_p_) c.at_p_ = mulm(at_p(), o.at_p(), q_);
  c.cond_ = std::max(cond_, o.cond_);
  c.zeta_ = mulm(zeta_, o.zeta_, q_);
  if (c.zeta_ == 1 % q_) c.cond_ = 0;
  c.build_table();
  return c;
}

Character Character::inverse() const {
  Character c = *this;
  c.k_ = -k_;
  if (at_p_) c.at_p_ = invm(*at_p_, q_);
  c.zeta_ = invm(zeta_, q_);
  return c;
}

Character Character::pow(int e) const {
  Character r = trivial(p_, N_);
  if (!at_p_) r.at_p_.reset();
  Character b = e >= 0 ? *this : inverse();
  for (int i = 0; i < (e >= 0 ? e : -e); ++i) r = r * b;
  return r;
}

bool Character::operator==(const Character& o) const {
  if (p_ != o.p_ || N_ != o.N_ || at_p() != o.at_p()) return false;
  // compare on a generator of Z_p^x modulo p^N: g and 1+p
  const u64 g = generator(p_);
  return on_residue(g) == o.on_residue(g) && on_residue(1 + p_) == o.on_residue(1 + p_) &&
         on_residue(q_ - 1) == o.on_residue(q_ - 1);
}

std::string Character::describe() const {
  std::ostringstream s;
  s << "chi^" << k_;
  if (cond_) s << "*fin(p^" << cond_ << "," << zeta_ << ")";
  if (at_p_) s << ",p->" << *at_p_;
  return s.str();
}

}  // namespace phigamma
