#include "bqke/rational.hpp"

#include <cctype>

namespace bqke {

RationalQ rational_from_decimal(const std::string& text) {
    std::string s = text;
    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    long frac_len = -1;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (frac_len >= 0) throw InvalidSpecError("malformed decimal: " + text);
            frac_len = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (frac_len >= 0) ++frac_len;
        } else {
            throw InvalidSpecError("malformed decimal: " + text);
        }
    }
    if (digits.empty()) throw InvalidSpecError("malformed decimal: " + text);
    BigInt num(digits, 10);
    if (neg) num = -num;
    BigInt den = frac_len > 0 ? pow10(static_cast<unsigned long>(frac_len)) : BigInt(1);
    return make_rational(num, den);
}

long euler_phi(long n) {
    if (n <= 0) throw InvalidSpecError("euler_phi requires n >= 1");
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

}  // namespace bqke
