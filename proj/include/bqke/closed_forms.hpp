#pragma once

#include "bqke/cyclotomic.hpp"
#include "bqke/groups.hpp"
#include "bqke/rational.hpp"

namespace bqke {

// F(N, r) = sum over nontrivial N-th roots xi of xi^r / (1 - xi)^4, an
// explicit rational.  Closed form:
//
//   N^4/720 - (r^2 - 4r + 11/3) N^2/24 + C(r-1,3) N/2
//          - r^4/24 + r^3/3 - 11 r^2/12 + r - 251/720
//
// valid for 1 <= r <= N; any integer r is first reduced into that range
// (the sum only depends on r mod N).  C(r-1,3) is the cubic polynomial
// (r-1)(r-2)(r-3)/6, so the formula is polynomial in (N, r).
RationalQ F_closed(long N, long r);

// The same sum evaluated literally in Q(zeta_N); asserts the result is
// rational (it is Galois-stable).  Default cap 500.
RationalQ F_bruteforce(long N, long r, long cap = 500);

// Coefficient of z^k in 1 + N z (1-z)^(r-1) / ((1-z)^N - 1), which equals
// sum over xi != 1 of xi^r / (1 - xi)^k.  Pure rational power series; fully
// independent of root-of-unity arithmetic.  Requires 1 <= r <= N, k >= 1.
RationalQ series_oracle(long N, long r, long k);

// f(r) = -30 r^4 + 240 r^3 - 660 r^2 + 720 r - 251; always odd, and
// 720 F(N, r) is congruent to f(r) mod N.
BigInt parity_poly(long r);

// A residue determined by two coprime congruences.
struct ResidueSpec {
    long n1, t1;  // r = t1 (mod n1)
    long n2, t2;  // r = t2 (mod n2)
    long r;       // resolved residue in [0, n1*n2)
};

ResidueSpec crt_solve(long n1, long t1, long n2, long t2);

// The residue r entering the diagonal-part sums for each family:
//   Q:      r = 0 mod 4n,        r = 2 mod p        (N = 4np)
//   D:      r = 0 mod 2n+1,      r = 2 mod 2^(m-1)p (N = 2^(m-1)(2n+1)p)
//   P48:    r = 0 mod 8,         r = 2 mod p        (N = 8p)
//   P120:   r = 0 mod 10,        r = 2 mod p        (N = 10p)
//   Pprime: r = 0 mod 4,         r = 2 mod p~       (N = 4p~, p~ = p 3^(m-1))
ResidueSpec crt_residue(const GroupSpec& spec);

// The diagonal-part value C2 for the exceptional families, computed two
// ways that must agree exactly: the per-family closed quartic
//   P48:    -28/9 p^4 -+ 12 p^3 + 5/9 p^2 - 1/144      (sign by p mod 4)
//   P120:   four branches by p mod 5
//   Pprime: 20/9 p~^4 - 7/9 p~^2 - 1/144
// and the combination -3F(N,r) - 3F(N,r+1) + F(N,2r-1).
RationalQ c2_closed(const GroupSpec& spec);

// The closed-form route to C(Gamma) for the Q/D families with p >= 3 odd
// coprime (where the anti-diagonal contributions cancel):
//   C = -3F(N,r) - 3F(N,r+1) + F(N,2r-1).
// For the scalar cyclic group (family Trivial, p >= 2) the specialization
// is C = -3F(p,2) - 2F(p,3).
RationalQ c_closed_qd(const GroupSpec& spec);

}  // namespace bqke
