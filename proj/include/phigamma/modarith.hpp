#pragma once

#include <cstdint>
#include <vector>

namespace phigamma {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

u64 ipow(u64 b, int e);
int vp(u64 x, u64 p);  // x != 0
int vp_signed(i64 x, u64 p);

// arithmetic in Z/q
inline u64 addm(u64 a, u64 b, u64 q) { u64 s = a + b; return s >= q ? s - q : s; }
inline u64 subm(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }
inline u64 mulm(u64 a, u64 b, u64 q) { return static_cast<u64>((u128)a * b % q); }
inline u64 negm(u64 a, u64 q) { return a ? q - a : 0; }
u64 redm(i64 a, u64 q);
u64 powm(u64 a, u64 e, u64 q);
u64 invm(u64 a, u64 q);  // throws NotAUnit
u64 powm_signed(u64 a, i64 e, u64 q);

// C(A,k) mod q = p^N for k = 0..K-1, A an exact integer (may be negative)
std::vector<u64> binomials(i64 A, int K, u64 p, int N);

// Teichmuller lift of j mod p^K
u64 teichmuller(u64 j, u64 p, int K);

// s mod p^(K-1) with (1+p)^s == u mod p^K, u == 1 mod p
u64 gamma_log(u64 u, u64 p, int K);

// balanced representative of a mod m in (-m/2, m/2]
i64 balanced(u64 a, u64 m);

}  // namespace phigamma
