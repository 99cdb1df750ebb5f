#pragma once

#include <vector>

#include "bqke/bigfloat.hpp"
#include "bqke/rational.hpp"

namespace bqke {

// Exact element of the cyclotomic field Q(zeta_N), stored as coordinates in
// the power basis 1, zeta, ..., zeta^(phi(N)-1), always fully reduced modulo
// the N-th cyclotomic polynomial.  Canonical form: two values of the same
// conductor are equal iff their coordinate vectors are equal.  Values of
// different conductors are combined by lifting both into Q(zeta_lcm).
//
// Values are immutable after construction; all operations are pure.
class Cyclo {
public:
    Cyclo();  // zero, conductor 1

    static Cyclo rational(const RationalQ& q);
    static Cyclo rational(long v) { return rational(make_rational(v)); }
    static Cyclo zero() { return rational(0); }
    static Cyclo one() { return rational(1); }
    // zeta_N^k (k arbitrary, reduced mod N).
    static Cyclo root(long conductor, long k = 1);
    static Cyclo from_coords(long conductor, std::vector<RationalQ> coords);

    long conductor() const { return cond_; }
    long degree() const { return static_cast<long>(coords_.size()); }
    const std::vector<RationalQ>& coords() const { return coords_; }

    bool is_zero() const;
    // True iff only the constant coordinate is nonzero.
    bool is_rational() const;
    RationalQ rational_value() const;  // throws unless is_rational()

    bool operator==(const Cyclo& o) const;
    bool operator!=(const Cyclo& o) const { return !(*this == o); }

    Cyclo operator-() const;
    Cyclo operator+(const Cyclo& o) const;
    Cyclo operator-(const Cyclo& o) const;
    Cyclo operator*(const Cyclo& o) const;
    Cyclo scaled(const RationalQ& q) const;

    Cyclo pow(long e) const;  // e may be negative (inverts)

    // Exact multiplicative inverse; extended Euclid against Phi_N (with a
    // shortcut for monomials c * zeta^k).  Throws DivisionByZeroError on 0.
    Cyclo inverse() const;

    // Galois map zeta -> zeta^t, gcd(t, N) = 1.
    Cyclo galois(long t) const;
    // Complex conjugation, the Galois map zeta -> zeta^-1.
    Cyclo conj() const;

    // Value lifted into Q(zeta_m); m must be a multiple of the conductor.
    Cyclo lifted(long m) const;

    // (this lifted into Q(zeta_m)) * zeta_m^k, assembled directly from the
    // reduction table; much cheaper than lift-then-multiply.
    Cyclo lifted_times_root(long m, long k) const;

    // Numeric image under zeta_N -> exp(2*pi*i/N), at `digits` significant
    // decimal digits (12 guard digits are carried internally).  A different
    // Galois embedding is obtained by composing with galois(t) first.
    BigComplex embed(long digits = 30) const;

    // Embed together with a rigorous bound on the absolute error of both
    // components (used for certified sign determination).
    struct Embedded {
        BigComplex value;
        BigFloat error;
    };
    Embedded embed_with_error(long digits = 30) const;

    // "p/q" for rationals, "[N; c0, c1, ...]" otherwise.
    std::string to_exact_string() const;

private:
    Cyclo(long cond, std::vector<RationalQ> coords) : cond_(cond), coords_(std::move(coords)) {}

    long cond_;
    std::vector<RationalQ> coords_;
};

inline Cyclo operator*(const RationalQ& q, const Cyclo& z) { return z.scaled(q); }

// Phi_N as integer coefficients, constant term first (size phi(N) + 1, monic).
std::vector<BigInt> cyclotomic_polynomial(long n);

// x^k mod Phi_N as integer coordinates of length phi(N); k reduced mod N.
// The reference stays valid for the lifetime of the process.
const std::vector<BigInt>& power_row(long conductor, long k);

// Zero tests of sums  sum_t zeta_p^{e_t} * w_t  with w_t in Q(zeta_M) and
// gcd(M, p) = 1, performed in the tensor basis u^0..u^{phi(p)-1} over
// Q(zeta_M) without ever lifting into the composite field.
class TensorAccumulator {
public:
    TensorAccumulator(long p, long coeff_conductor);
    void add(long u_exponent, const Cyclo& coeff);
    bool is_zero() const;

private:
    long p_;
    long cond_;
    std::vector<Cyclo> slots_;
};

// zeta_N^index for gcd(index, N) = 1; the canonical generator is index = 1.
// Throws InvalidSpecError when the index is not coprime to N.
Cyclo primitive_root(long n, long index = 1);

// Lifts both values into their least common conductor.
std::pair<Cyclo, Cyclo> unify(const Cyclo& a, const Cyclo& b);

// Certified sign of a self-conjugate (real) value: exact zero test first,
// then embeddings at escalating precision with rigorous error bounds.
// Throws CheckFailError if the input is not self-conjugate or the sign
// cannot be certified at the maximum precision.
int certified_sign(const Cyclo& x);

// certified_sign(a - b) packaged as a three-way comparison of real values.
int cmp_real(const Cyclo& a, const Cyclo& b);

}  // namespace bqke
