#pragma once

#include <gmpxx.h>

#include <string>

#include "bqke/errors.hpp"

namespace bqke {

// Exact rationals and integers are GMP's canonical types.  mpq_class keeps
// exactly the invariants we need: gcd(|num|, den) == 1 and den > 0 after
// canonicalize(), which every arithmetic operator maintains.
using BigInt = mpz_class;
using RationalQ = mpq_class;

inline RationalQ make_rational(long num, long den = 1) {
    if (den == 0) throw DivisionByZeroError("rational with zero denominator");
    RationalQ q(num, den);
    q.canonicalize();
    return q;
}

inline RationalQ make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DivisionByZeroError("rational with zero denominator");
    RationalQ q(num, den);
    q.canonicalize();
    return q;
}

// "p/q" with the "/q" suppressed for integers; matches mpq's own format.
inline std::string to_string(const RationalQ& q) { return q.get_str(); }

inline bool is_integer(const RationalQ& q) { return q.get_den() == 1; }

inline BigInt pow_int(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline RationalQ pow_rat(const RationalQ& base, unsigned long e) {
    RationalQ r(pow_int(base.get_num(), e), pow_int(base.get_den(), e));
    return r;
}

inline BigInt pow10(unsigned long e) { return pow_int(BigInt(10), e); }

// Floor-mod into [0, m).
inline long mod_floor(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd_long(a, b) * b;
}

// Parses a plain decimal literal ("-5968.348737366") into an exact rational.
RationalQ rational_from_decimal(const std::string& text);

// Euler's totient, by trial-division factorization (conductors are small).
long euler_phi(long n);

}  // namespace bqke
