#pragma once

#include <map>

#include "bqke/cyclotomic.hpp"
#include "bqke/groups.hpp"

namespace bqke {

// Dense polynomial over the cyclotomic coefficients, constant term first.
struct PolyC {
    std::vector<Cyclo> c;

    PolyC() : c(1, Cyclo::zero()) {}
    explicit PolyC(std::vector<Cyclo> coeffs) : c(std::move(coeffs)) {
        if (c.empty()) c.push_back(Cyclo::zero());
    }
    static PolyC constant(const Cyclo& v) { return PolyC{{v}}; }
    // 1 - a x
    static PolyC one_minus_ax(const Cyclo& a);

    long degree() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const;
    void trim();

    PolyC operator+(const PolyC& o) const;
    PolyC operator-(const PolyC& o) const;
    PolyC operator*(const PolyC& o) const;
    PolyC scaled(const Cyclo& v) const;
    PolyC pow(long e) const;
    Cyclo eval(const Cyclo& x) const;
    bool operator==(const PolyC& o) const;
};

// One-variable rational function with cyclotomic coefficients.  The
// denominator is kept in factored form prod (1 - a_i x)^(e_i) (constant
// term normalized to 1), which is the shape every construction here
// produces; gcd reduction happens on demand via cancel().
struct RationalFunctionQx {
    PolyC num;
    std::vector<std::pair<Cyclo, long>> den;  // factors (1 - a x)^e, a != 0

    static RationalFunctionQx from_poly(PolyC p) { return {std::move(p), {}}; }
    static RationalFunctionQx term(Cyclo coeff, const Cyclo& alpha, long pole_order);

    PolyC den_poly() const;
    RationalFunctionQx operator+(const RationalFunctionQx& o) const;
    RationalFunctionQx operator-(const RationalFunctionQx& o) const;
    RationalFunctionQx operator*(const RationalFunctionQx& o) const;
    RationalFunctionQx scaled(const Cyclo& v) const;
    RationalFunctionQx pow(long e) const;

    Cyclo eval(const Cyclo& x) const;  // denominator must not vanish there
    // Cross-multiplied equality.
    bool equals(const RationalFunctionQx& o) const;
    // Removes factors (1 - a x) that divide the numerator exactly.
    void cancel();
};

// Laurent coefficients at the fixed base point x = 1 for an order window;
// orders below the computed minimum are exactly zero.
struct LaurentCoefficients {
    long lo = 0, hi = 0;
    std::map<long, Cyclo> coef;

    Cyclo at(long order) const {
        auto it = coef.find(order);
        return it == coef.end() ? Cyclo::zero() : it->second;
    }
};

// phi(x) = sum over the group of conj(det g) / (1 - conj(g11) x)^3.
// phi(0) equals phi_at_zero(spec).
RationalFunctionQx phi_rational(const GroupSpec& spec);

// det A(conj g0, conj g1, conj g2) as an exact rational function of x
// (the 3x3 determinant with the column denominators kept factored).
RationalFunctionQx det_A(const UnitaryMatrix& g0, const UnitaryMatrix& g1,
                         const UnitaryMatrix& g2);

struct SeriesOptions {
    long series_cap = 60;  // maximum group order for the triple-sum side
};

// f(x) = sum over triples of det A(conj g^0, conj g^1, conj g^2) *
// prod_i conj(det g^i) / (1 - conj(g^i_11) x)^4.  The determinant is
// multilinear in its columns, so the triple sum factors into one summed
// column per slot; the result is exact and the cost is linear in |Gamma|.
RationalFunctionQx f_rational(const GroupSpec& spec, const SeriesOptions& opts = {});

// Laurent expansion of r at x = 1 (substitute x = 1 + t and invert the
// denominator as a formal series); coefficients for orders in [lo, hi].
LaurentCoefficients laurent_at_one(const RationalFunctionQx& r, long lo, long hi);

// Laurent window [-12, 0] of f - phi^4 at x = 1.  Asserts that the orders
// -12..-9 vanish exactly and that order -8 equals compute_c's value; throws
// CheckFailError naming the offending order otherwise.
LaurentCoefficients ke_residual(const GroupSpec& spec, const SeriesOptions& opts = {});

// True iff f == phi^4 as rational functions (cross-multiplied identity);
// holds only for the trivial group.
bool ke_identity_check(const GroupSpec& spec, const SeriesOptions& opts = {});

}  // namespace bqke
