#pragma once

#include <string>

#include "bqke/rational.hpp"

namespace bqke {

// Fixed-point decimal arithmetic: value = mantissa * 10^-prec.  Used for the
// numeric embedding of exact values.  Chosen over binary floats so that any
// requested decimal precision is available and output formatting is exact.
//
// Each operation rounds to nearest at the last kept digit, so a single op
// contributes at most one ulp (= 10^-prec) of error.  Callers that need
// certified signs account for error explicitly (see cyclotomic.hpp).
class BigFloat {
public:
    BigFloat() : mant_(0), prec_(0) {}
    BigFloat(const BigInt& mantissa, long prec) : mant_(mantissa), prec_(prec) {}

    static BigFloat from_long(long v, long prec) { return BigFloat(BigInt(v) * pow10(prec), prec); }
    static BigFloat from_rational(const RationalQ& q, long prec);

    long prec() const { return prec_; }
    const BigInt& mantissa() const { return mant_; }
    bool is_zero() const { return mant_ == 0; }
    int sign() const { return mant_ > 0 ? 1 : (mant_ < 0 ? -1 : 0); }

    BigFloat operator-() const { return BigFloat(-mant_, prec_); }
    BigFloat abs() const { return BigFloat(::abs(mant_), prec_); }

    BigFloat operator+(const BigFloat& o) const;
    BigFloat operator-(const BigFloat& o) const;
    BigFloat operator*(const BigFloat& o) const;
    BigFloat operator/(const BigFloat& o) const;

    bool operator<(const BigFloat& o) const;
    bool operator<=(const BigFloat& o) const { return !(o < *this); }

    // Exact rational equal to the stored fixed-point value.
    RationalQ to_rational() const { return make_rational(mant_, pow10(prec_)); }

    double to_double() const { return mpq_class(to_rational()).get_d(); }

    // Fixed-notation decimal string rounded to `sig` significant digits,
    // trailing fractional zeros stripped.  Values below one ulp of the
    // requested significance print as "0".
    std::string to_string(long sig) const;

    // 10^-(prec - slack), for error-threshold comparisons.
    static BigFloat ulp(long prec, long slack = 0) { return BigFloat(pow10(slack), prec); }

private:
    BigInt mant_;
    long prec_;
};

struct BigComplex {
    BigFloat re, im;

    BigComplex() = default;
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    BigComplex operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }
    BigComplex operator-(const BigComplex& o) const { return {re - o.re, im - o.im}; }
    BigComplex operator*(const BigComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    BigFloat abs2() const { return re * re + im * im; }
};

// pi to `prec` decimal digits (cached); Machin's formula on integers.
BigFloat pi_value(long prec);

// cos(2*pi*k/n) and sin(2*pi*k/n) at fixed-point precision `prec`.
BigComplex unit_root_float(long n, long k, long prec);

}  // namespace bqke
