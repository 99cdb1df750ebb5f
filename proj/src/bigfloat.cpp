#include "bqke/bigfloat.hpp"

#include <map>
#include <mutex>

namespace bqke {

namespace {

// Rounded division a / 10^k (round half away from zero).
BigInt div_pow10_rounded(const BigInt& a, long k) {
    if (k <= 0) return a * pow10(-k);
    BigInt d = pow10(k);
    BigInt half = d / 2;
    BigInt shifted = a;
    if (a >= 0)
        shifted += half;
    else
        shifted -= half;
    BigInt q;
    mpz_tdiv_q(q.get_mpz_t(), shifted.get_mpz_t(), d.get_mpz_t());
    return q;
}

}  // namespace

BigFloat BigFloat::from_rational(const RationalQ& q, long prec) {
    BigInt num = q.get_num() * pow10(prec);
    BigInt den = q.get_den();
    BigInt half = den / 2;
    BigInt shifted = num;
    if (num >= 0)
        shifted += half;
    else
        shifted -= half;
    BigInt m;
    mpz_tdiv_q(m.get_mpz_t(), shifted.get_mpz_t(), den.get_mpz_t());
    return BigFloat(m, prec);
}

BigFloat BigFloat::operator+(const BigFloat& o) const {
    if (prec_ == o.prec_) return BigFloat(mant_ + o.mant_, prec_);
    long p = std::max(prec_, o.prec_);
    BigInt a = mant_ * pow10(p - prec_);
    BigInt b = o.mant_ * pow10(p - o.prec_);
    return BigFloat(a + b, p);
}

BigFloat BigFloat::operator-(const BigFloat& o) const { return *this + (-o); }

BigFloat BigFloat::operator*(const BigFloat& o) const {
    long p = std::max(prec_, o.prec_);
    BigInt prod = mant_ * o.mant_;
    return BigFloat(div_pow10_rounded(prod, prec_ + o.prec_ - p), p);
}

BigFloat BigFloat::operator/(const BigFloat& o) const {
    if (o.mant_ == 0) throw DivisionByZeroError("BigFloat division by zero");
    long p = std::max(prec_, o.prec_);
    // (m1 10^-p1) / (m2 10^-p2) = (m1 10^(p + p2 - p1)) / m2 * 10^-p
    BigInt num = mant_ * pow10(p + o.prec_ - prec_);
    BigInt half = ::abs(o.mant_) / 2;
    BigInt shifted = num;
    if (num >= 0)
        shifted += half;
    else
        shifted -= half;
    BigInt q;
    mpz_tdiv_q(q.get_mpz_t(), shifted.get_mpz_t(), o.mant_.get_mpz_t());
    return BigFloat(q, p);
}

bool BigFloat::operator<(const BigFloat& o) const {
    long p = std::max(prec_, o.prec_);
    BigInt a = mant_ * pow10(p - prec_);
    BigInt b = o.mant_ * pow10(p - o.prec_);
    return a < b;
}

std::string BigFloat::to_string(long sig) const {
    if (mant_ == 0) return "0";
    std::string digits = BigInt(::abs(mant_)).get_str();
    long ndig = static_cast<long>(digits.size());
    // Value below one significant ulp prints as zero.
    if (ndig <= prec_ - sig - 2) return "0";
    if (sig < 1) sig = 1;
    long drop = ndig - sig;
    long point_exp = prec_;  // digits * 10^-point_exp
    if (drop > 0) {
        BigInt rounded = div_pow10_rounded(::abs(mant_), drop);
        digits = rounded.get_str();
        point_exp = prec_ - drop;
    }
    // Assemble fixed notation.
    std::string out;
    long n = static_cast<long>(digits.size());
    if (point_exp <= 0) {
        out = digits + std::string(-point_exp, '0');
    } else if (n > point_exp) {
        out = digits.substr(0, n - point_exp) + "." + digits.substr(n - point_exp);
    } else {
        out = "0." + std::string(point_exp - n, '0') + digits;
    }
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    if (out == "0") return "0";
    return (mant_ < 0 ? "-" : "") + out;
}

namespace {

// floor(atan(1/x) * 10^prec) by the alternating series.
BigInt atan_inv_scaled(long x, long prec) {
    BigInt scale = pow10(prec);
    BigInt term = scale / x;
    BigInt xsq(x);
    xsq *= x;
    BigInt sum = term;
    long k = 1;
    while (term != 0) {
        term /= xsq;
        if (term == 0) break;
        BigInt contrib = term / (2 * k + 1);
        if (k % 2 == 1)
            sum -= contrib;
        else
            sum += contrib;
        ++k;
    }
    return sum;
}

std::map<long, BigFloat>& pi_cache() {
    static std::map<long, BigFloat> cache;
    return cache;
}
std::mutex pi_mutex;

}  // namespace

BigFloat pi_value(long prec) {
    std::lock_guard<std::mutex> lock(pi_mutex);
    auto& cache = pi_cache();
    auto it = cache.find(prec);
    if (it != cache.end()) return it->second;
    long guard = prec + 10;
    BigInt val = 16 * atan_inv_scaled(5, guard) - 4 * atan_inv_scaled(239, guard);
    BigFloat pi(div_pow10_rounded(val, guard - prec), prec);
    cache.emplace(prec, pi);
    return pi;
}

BigComplex unit_root_float(long n, long k, long prec) {
    k = mod_floor(k, n);
    // theta = 2*pi*k/n in [0, 2*pi)
    BigFloat two_pi = pi_value(prec) + pi_value(prec);
    BigFloat theta = two_pi * BigFloat::from_rational(make_rational(k, n), prec);
    BigFloat theta2 = theta * theta;
    // cos: sum (-1)^i theta^(2i) / (2i)!,  sin: sum (-1)^i theta^(2i+1) / (2i+1)!
    BigFloat c = BigFloat::from_long(1, prec);
    BigFloat s = theta;
    BigFloat cterm = c;
    BigFloat sterm = s;
    for (long i = 1; i < 400; ++i) {
        cterm = cterm * theta2 / BigFloat::from_long((2 * i - 1) * (2 * i), prec);
        cterm = -cterm;
        c = c + cterm;
        sterm = sterm * theta2 / BigFloat::from_long((2 * i) * (2 * i + 1), prec);
        sterm = -sterm;
        s = s + sterm;
        if (cterm.is_zero() && sterm.is_zero()) break;
    }
    return {c, s};
}

}  // namespace bqke
