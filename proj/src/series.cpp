#include "bqke/series.hpp"

#include <algorithm>
#include <array>

#include "bqke/errors.hpp"
#include "bqke/obstruction.hpp"

namespace bqke {

PolyC PolyC::one_minus_ax(const Cyclo& a) { return PolyC{{Cyclo::one(), -a}}; }

bool PolyC::is_zero() const {
    for (const auto& v : c)
        if (!v.is_zero()) return false;
    return true;
}

void PolyC::trim() {
    while (c.size() > 1 && c.back().is_zero()) c.pop_back();
}

PolyC PolyC::operator+(const PolyC& o) const {
    std::vector<Cyclo> r(std::max(c.size(), o.c.size()), Cyclo::zero());
    for (std::size_t i = 0; i < c.size(); ++i) r[i] = r[i] + c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i) r[i] = r[i] + o.c[i];
    PolyC p{std::move(r)};
    p.trim();
    return p;
}

PolyC PolyC::operator-(const PolyC& o) const { return *this + o.scaled(-Cyclo::one()); }

PolyC PolyC::operator*(const PolyC& o) const {
    std::vector<Cyclo> r(c.size() + o.c.size() - 1, Cyclo::zero());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c.size(); ++j) {
            if (o.c[j].is_zero()) continue;
            r[i + j] = r[i + j] + c[i] * o.c[j];
        }
    }
    PolyC p{std::move(r)};
    p.trim();
    return p;
}

PolyC PolyC::scaled(const Cyclo& v) const {
    std::vector<Cyclo> r(c);
    for (auto& x : r) x = x * v;
    return PolyC{std::move(r)};
}

PolyC PolyC::pow(long e) const {
    PolyC r = PolyC::constant(Cyclo::one());
    PolyC b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        if (e > 1) b = b * b;
        e >>= 1;
    }
    return r;
}

Cyclo PolyC::eval(const Cyclo& x) const {
    Cyclo acc = Cyclo::zero();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

bool PolyC::operator==(const PolyC& o) const { return (*this - o).is_zero(); }

RationalFunctionQx RationalFunctionQx::term(Cyclo coeff, const Cyclo& alpha, long pole_order) {
    RationalFunctionQx rf;
    rf.num = PolyC::constant(std::move(coeff));
    if (!alpha.is_zero() && pole_order > 0) rf.den.push_back({alpha, pole_order});
    return rf;
}

PolyC RationalFunctionQx::den_poly() const {
    PolyC d = PolyC::constant(Cyclo::one());
    for (const auto& [a, e] : den) d = d * PolyC::one_minus_ax(a).pow(e);
    return d;
}

namespace {

long find_factor(const std::vector<std::pair<Cyclo, long>>& den, const Cyclo& a) {
    for (std::size_t i = 0; i < den.size(); ++i)
        if (den[i].first == a) return static_cast<long>(i);
    return -1;
}

}  // namespace

RationalFunctionQx RationalFunctionQx::operator+(const RationalFunctionQx& o) const {
    // Common denominator: per factor, the max exponent on either side.
    std::vector<std::pair<Cyclo, long>> merged = den;
    for (const auto& [a, e] : o.den) {
        long i = find_factor(merged, a);
        if (i < 0)
            merged.push_back({a, e});
        else
            merged[i].second = std::max(merged[i].second, e);
    }
    PolyC lhs = num, rhs = o.num;
    for (const auto& [a, e] : merged) {
        long ea = find_factor(den, a) < 0 ? 0 : den[find_factor(den, a)].second;
        long eb = find_factor(o.den, a) < 0 ? 0 : o.den[find_factor(o.den, a)].second;
        if (e > ea) lhs = lhs * PolyC::one_minus_ax(a).pow(e - ea);
        if (e > eb) rhs = rhs * PolyC::one_minus_ax(a).pow(e - eb);
    }
    return {lhs + rhs, std::move(merged)};
}

RationalFunctionQx RationalFunctionQx::operator-(const RationalFunctionQx& o) const {
    return *this + o.scaled(-Cyclo::one());
}

RationalFunctionQx RationalFunctionQx::operator*(const RationalFunctionQx& o) const {
    std::vector<std::pair<Cyclo, long>> merged = den;
    for (const auto& [a, e] : o.den) {
        long i = find_factor(merged, a);
        if (i < 0)
            merged.push_back({a, e});
        else
            merged[i].second += e;
    }
    return {num * o.num, std::move(merged)};
}

RationalFunctionQx RationalFunctionQx::scaled(const Cyclo& v) const { return {num.scaled(v), den}; }

RationalFunctionQx RationalFunctionQx::pow(long e) const {
    RationalFunctionQx r = from_poly(PolyC::constant(Cyclo::one()));
    RationalFunctionQx b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        if (e > 1) b = b * b;
        e >>= 1;
    }
    return r;
}

Cyclo RationalFunctionQx::eval(const Cyclo& x) const {
    Cyclo d = den_poly().eval(x);
    if (d.is_zero()) throw DivisionByZeroError("rational function evaluated at a pole");
    return num.eval(x) * d.inverse();
}

bool RationalFunctionQx::equals(const RationalFunctionQx& o) const {
    return num * o.den_poly() == o.num * den_poly();
}

void RationalFunctionQx::cancel() {
    for (auto& [a, e] : den) {
        while (e > 0) {
            // P = (1 - a x) Q + R with R constant; divisible iff R == 0.
            // From the top: q_{d-1} = -p_d / a, q_{i-1} = (q_i - p_i) / a.
            num.trim();
            if (num.is_zero()) {
                den.clear();
                num = PolyC::constant(Cyclo::zero());
                return;
            }
            long d = num.degree();
            if (d < 1) break;
            Cyclo ainv = a.inverse();
            std::vector<Cyclo> q(d, Cyclo::zero());
            q[d - 1] = -(num.c[d] * ainv);
            for (long i = d - 1; i >= 1; --i) q[i - 1] = (q[i] - num.c[i]) * ainv;
            Cyclo rem = num.c[0] - q[0];
            if (!rem.is_zero()) break;
            num = PolyC{std::move(q)};
            --e;
        }
    }
    std::vector<std::pair<Cyclo, long>> kept;
    for (auto& [a, e] : den)
        if (e > 0) kept.push_back({a, e});
    den = std::move(kept);
}

namespace {

// Truncated Laurent series at t = x - 1: coefficients for orders
// [lo, kKeepTop].  valid_top tracks through multiplication how far the
// truncated convolution is still exact.  The chain (entry*entry)*entry with
// poles of order 5 plus the pole-4 column factor consumes 14 orders above
// the target window, hence the margin.
constexpr long kKeepTop = 16;

struct TL {
    long lo = 0;
    long valid_top = kKeepTop;
    std::vector<Cyclo> a;  // a[i] = coefficient of t^(lo + i), up to kKeepTop

    static TL zero() { return {0, kKeepTop, std::vector<Cyclo>(kKeepTop + 1, Cyclo::zero())}; }

    Cyclo at(long order) const {
        if (order < lo || order > kKeepTop) return Cyclo::zero();
        return a[order - lo];
    }
};

TL tl_add(const TL& x, const TL& y) {
    TL r;
    r.lo = std::min(x.lo, y.lo);
    r.valid_top = std::min(x.valid_top, y.valid_top);
    r.a.assign(kKeepTop - r.lo + 1, Cyclo::zero());
    for (long o = r.lo; o <= kKeepTop; ++o) r.a[o - r.lo] = x.at(o) + y.at(o);
    return r;
}

TL tl_mul(const TL& x, const TL& y) {
    TL r;
    r.lo = x.lo + y.lo;
    r.valid_top = std::min(x.valid_top + y.lo, y.valid_top + x.lo);
    r.a.assign(std::max<long>(kKeepTop - r.lo + 1, 1), Cyclo::zero());
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        if (x.a[i].is_zero()) continue;
        long ox = x.lo + static_cast<long>(i);
        for (std::size_t j = 0; j < y.a.size(); ++j) {
            if (y.a[j].is_zero()) continue;
            long o = ox + y.lo + static_cast<long>(j);
            if (o > kKeepTop) break;
            r.a[o - r.lo] = r.a[o - r.lo] + x.a[i] * y.a[j];
        }
    }
    return r;
}

TL tl_scale(const TL& x, const Cyclo& v) {
    TL r = x;
    for (auto& c : r.a) c = c * v;
    return r;
}

// coeff / (1 - alpha (1 + t))^k as a truncated Laurent series:
//   alpha == 1: coeff (-1)^k t^-k
//   else:       coeff u0^-k sum_i C(k-1+i, i) (alpha/u0)^i t^i, u0 = 1 - alpha.
TL expand_pole_term(const Cyclo& coeff, const Cyclo& alpha, long k) {
    if (alpha == Cyclo::one()) {
        TL r;
        r.lo = -k;
        r.a.assign(kKeepTop + k + 1, Cyclo::zero());
        r.a[0] = k % 2 == 0 ? coeff : -coeff;
        return r;
    }
    Cyclo u0inv = (Cyclo::one() - alpha).inverse();
    Cyclo ratio = alpha * u0inv;
    TL r;
    r.lo = 0;
    r.a.assign(kKeepTop + 1, Cyclo::zero());
    Cyclo scale = coeff * u0inv.pow(k);
    Cyclo rp = Cyclo::one();
    RationalQ binom(1);
    for (long i = 0; i <= kKeepTop; ++i) {
        r.a[i] = scale.scaled(binom) * rp;
        rp = rp * ratio;
        binom *= make_rational(k + i, i + 1);  // C(k-1+i, i) recurrence
    }
    return r;
}

// p(1 + t) for a short polynomial p (degree <= 2 here).
TL expand_poly(const PolyC& p) {
    TL r;
    r.lo = 0;
    r.a.assign(kKeepTop + 1, Cyclo::zero());
    for (std::size_t i = 0; i < p.c.size(); ++i) {
        if (p.c[i].is_zero()) continue;
        // x^i = (1 + t)^i
        BigInt binom(1);
        for (std::size_t j = 0; j <= i && j <= static_cast<std::size_t>(kKeepTop); ++j) {
            r.a[j] = r.a[j] + p.c[i].scaled(RationalQ(binom));
            binom = binom * (static_cast<long>(i - j)) / (static_cast<long>(j) + 1);
        }
    }
    return r;
}

// The three cleared columns of A(g0, g1, g2) (entries already conjugated):
// column 0 is polynomial; columns 1 and 2 are polynomials over an extra
// (1 - g11 x) denominator which the caller folds into the weight.
std::array<PolyC, 3> column0_polys(const UnitaryMatrix& g) {
    Cyclo three(Cyclo::rational(3));
    return {PolyC{{Cyclo::one(), -g.e11}}, PolyC{{Cyclo::zero(), three * g.e11}},
            PolyC{{Cyclo::zero(), three * g.e21}}};
}

std::array<PolyC, 3> column1_polys(const UnitaryMatrix& g) {
    Cyclo four(Cyclo::rational(4));
    PolyC lin{{Cyclo::one(), -g.e11}};  // 1 - g11 x
    PolyC top = lin.scaled(g.e11);
    PolyC mid = lin.scaled(g.e11) + PolyC{{Cyclo::zero(), four * g.e11 * g.e11}};
    PolyC bot = lin.scaled(g.e21) + PolyC{{Cyclo::zero(), four * g.e11 * g.e21}};
    return {top, mid, bot};
}

std::array<PolyC, 3> column2_polys(const UnitaryMatrix& g) {
    Cyclo four(Cyclo::rational(4));
    PolyC lin{{Cyclo::one(), -g.e11}};
    PolyC top = lin.scaled(g.e12);
    PolyC mid = lin.scaled(g.e12) + PolyC{{Cyclo::zero(), four * g.e11 * g.e12}};
    PolyC bot = lin.scaled(g.e22) + PolyC{{Cyclo::zero(), four * g.e21 * g.e12}};
    return {top, mid, bot};
}

std::vector<GroupElement> conjugated_elements(const GroupSpec& spec, long cap) {
    if (spec.order() > cap)
        throw CapExceededError("group order " + std::to_string(spec.order()) +
                               " exceeds the series cap " + std::to_string(cap));
    std::vector<GroupElement> elems = enumerate_elements(spec);
    for (auto& e : elems) e.mat = e.mat.conj_entries();
    return elems;
}

}  // namespace

RationalFunctionQx phi_rational(const GroupSpec& spec) {
    spec.validate();
    std::vector<GroupElement> elems = enumerate_elements(spec);
    // Group by conj(g11); the weight of each pole is the summed conj(det).
    std::vector<std::pair<Cyclo, Cyclo>> buckets;  // (alpha, weight)
    for (const auto& e : elems) {
        Cyclo alpha = e.mat.e11.conj();
        Cyclo w = e.mat.det().conj();
        long i = -1;
        for (std::size_t k = 0; k < buckets.size(); ++k)
            if (buckets[k].first == alpha) {
                i = static_cast<long>(k);
                break;
            }
        if (i < 0)
            buckets.push_back({alpha, w});
        else
            buckets[i].second = buckets[i].second + w;
    }
    RationalFunctionQx rf = RationalFunctionQx::from_poly(PolyC::constant(Cyclo::zero()));
    for (const auto& [alpha, w] : buckets) {
        rf = rf + RationalFunctionQx::term(w, alpha, 3);
    }
    return rf;
}

RationalFunctionQx det_A(const UnitaryMatrix& g0, const UnitaryMatrix& g1,
                         const UnitaryMatrix& g2) {
    UnitaryMatrix c0 = g0.conj_entries();
    UnitaryMatrix c1 = g1.conj_entries();
    UnitaryMatrix c2 = g2.conj_entries();
    auto col0 = column0_polys(c0);
    auto col1 = column1_polys(c1);
    auto col2 = column2_polys(c2);
    PolyC det = col0[0] * (col1[1] * col2[2] - col1[2] * col2[1]) -
                col1[0] * (col0[1] * col2[2] - col0[2] * col2[1]) +
                col2[0] * (col0[1] * col1[2] - col0[2] * col1[1]);
    RationalFunctionQx rf = RationalFunctionQx::from_poly(det);
    if (!c1.e11.is_zero()) rf.den.push_back({c1.e11, 1});
    if (!c2.e11.is_zero()) rf.den.push_back({c2.e11, 1});
    rf.cancel();
    return rf;
}

RationalFunctionQx f_rational(const GroupSpec& spec, const SeriesOptions& opts) {
    spec.validate();
    std::vector<GroupElement> elems = conjugated_elements(spec, opts.series_cap);
    // det A is multilinear in its columns, so the triple sum over the group
    // is the determinant of the per-slot summed columns.
    RationalFunctionQx B[3][3];
    for (int r = 0; r < 3; ++r)
        for (int j = 0; j < 3; ++j)
            B[r][j] = RationalFunctionQx::from_poly(PolyC::constant(Cyclo::zero()));
    for (int slot = 0; slot < 3; ++slot) {
        // Bucket by the pole alpha = g11; numerators add within a bucket.
        std::vector<std::pair<Cyclo, std::array<PolyC, 3>>> buckets;
        for (const auto& e : elems) {
            auto cols = slot == 0   ? column0_polys(e.mat)
                        : slot == 1 ? column1_polys(e.mat)
                                    : column2_polys(e.mat);
            Cyclo w = e.mat.det();
            for (auto& p : cols) p = p.scaled(w);
            long idx = -1;
            for (std::size_t k = 0; k < buckets.size(); ++k)
                if (buckets[k].first == e.mat.e11) {
                    idx = static_cast<long>(k);
                    break;
                }
            if (idx < 0)
                buckets.push_back({e.mat.e11, std::move(cols)});
            else
                for (int r = 0; r < 3; ++r)
                    buckets[idx].second[r] = buckets[idx].second[r] + cols[r];
        }
        long pole = slot == 0 ? 4 : 5;
        for (auto& [alpha, polys] : buckets) {
            for (int r = 0; r < 3; ++r) {
                RationalFunctionQx t;
                t.num = std::move(polys[r]);
                if (!alpha.is_zero()) t.den.push_back({alpha, pole});
                B[r][slot] = B[r][slot] + t;
            }
        }
    }
    RationalFunctionQx f = B[0][0] * (B[1][1] * B[2][2] - B[2][1] * B[1][2]) -
                           B[0][1] * (B[1][0] * B[2][2] - B[2][0] * B[1][2]) +
                           B[0][2] * (B[1][0] * B[2][1] - B[2][0] * B[1][1]);
    f.cancel();
    return f;
}

LaurentCoefficients laurent_at_one(const RationalFunctionQx& r, long lo, long hi) {
    if (lo > hi) throw InvalidSpecError("laurent window requires lo <= hi");
    if (r.den_poly().is_zero()) throw DivisionByZeroError("denominator is identically zero");
    long poles = 0;
    for (const auto& [a, e] : r.den)
        if (a == Cyclo::one()) poles += e;
    // Series S(t) = num(1+t) * prod over unit factors of their inverses,
    // computed to enough terms that orders up to hi survive the t^-poles shift.
    long need = hi + poles;  // highest t-power needed in S
    std::vector<Cyclo> S(std::max<long>(need + 1, 1), Cyclo::zero());
    // num(1+t)
    for (std::size_t i = 0; i < r.num.c.size(); ++i) {
        if (r.num.c[i].is_zero()) continue;
        BigInt binom(1);
        for (long j = 0; j <= static_cast<long>(i) && j <= need; ++j) {
            S[j] = S[j] + r.num.c[i].scaled(RationalQ(binom));
            binom = binom * (static_cast<long>(i) - j) / (j + 1);
        }
    }
    long sign_flips = 0;
    for (const auto& [a, e] : r.den) {
        if (a == Cyclo::one()) {
            sign_flips += e;  // (1 - (1+t)) = -t per power
            continue;
        }
        // multiply S by [ (1-a) - a t ]^-e
        Cyclo u0inv = (Cyclo::one() - a).inverse();
        Cyclo ratio = a * u0inv;
        std::vector<Cyclo> inv(need + 1, Cyclo::zero());
        Cyclo rp = u0inv.pow(e);
        RationalQ binom(1);
        for (long i = 0; i <= need; ++i) {
            inv[i] = rp.scaled(binom);
            rp = rp * ratio;
            binom *= make_rational(e + i, i + 1);
        }
        std::vector<Cyclo> T(need + 1, Cyclo::zero());
        for (long i = 0; i <= need; ++i) {
            if (S[i].is_zero()) continue;
            for (long j = 0; i + j <= need; ++j) {
                if (inv[j].is_zero()) continue;
                T[i + j] = T[i + j] + S[i] * inv[j];
            }
        }
        S = std::move(T);
    }
    LaurentCoefficients out;
    out.lo = lo;
    out.hi = hi;
    bool negate = sign_flips % 2 == 1;
    for (long o = lo; o <= hi; ++o) {
        long idx = o + poles;
        Cyclo v = (idx >= 0 && idx < static_cast<long>(S.size())) ? S[idx] : Cyclo::zero();
        out.coef[o] = negate ? -v : v;
    }
    return out;
}

namespace {

TL phi_series(const std::vector<GroupElement>& conj_elems) {
    TL phi = TL::zero();
    for (const auto& e : conj_elems) {
        phi = tl_add(phi, expand_pole_term(e.mat.det(), e.mat.e11, 3));
    }
    return phi;
}

}  // namespace

LaurentCoefficients ke_residual(const GroupSpec& spec, const SeriesOptions& opts) {
    spec.validate();
    std::vector<GroupElement> elems = conjugated_elements(spec, opts.series_cap);

    TL phi = phi_series(elems);
    TL phi2 = tl_mul(phi, phi);
    TL phi4 = tl_mul(phi2, phi2);

    TL B[3][3];
    for (int r = 0; r < 3; ++r)
        for (int j = 0; j < 3; ++j) B[r][j] = TL::zero();
    for (const auto& e : elems) {
        Cyclo w = e.mat.det();
        for (int slot = 0; slot < 3; ++slot) {
            auto cols = slot == 0   ? column0_polys(e.mat)
                        : slot == 1 ? column1_polys(e.mat)
                                    : column2_polys(e.mat);
            long pole = slot == 0 ? 4 : 5;
            TL weight = expand_pole_term(w, e.mat.e11, pole);
            for (int r = 0; r < 3; ++r) {
                if (cols[r].is_zero()) continue;
                B[r][slot] = tl_add(B[r][slot], tl_mul(expand_poly(cols[r]), weight));
            }
        }
    }
    TL f = tl_add(
        tl_add(tl_mul(B[0][0], tl_add(tl_mul(B[1][1], B[2][2]),
                                      tl_scale(tl_mul(B[2][1], B[1][2]), -Cyclo::one()))),
               tl_scale(tl_mul(B[0][1], tl_add(tl_mul(B[1][0], B[2][2]),
                                               tl_scale(tl_mul(B[2][0], B[1][2]), -Cyclo::one()))),
                        -Cyclo::one())),
        tl_mul(B[0][2], tl_add(tl_mul(B[1][0], B[2][1]),
                               tl_scale(tl_mul(B[2][0], B[1][1]), -Cyclo::one()))));
    TL resid = tl_add(f, tl_scale(phi4, -Cyclo::one()));
    if (resid.valid_top < 0)
        throw CheckFailError("laurent truncation window was insufficient");

    LaurentCoefficients out;
    out.lo = -12;
    out.hi = 0;
    for (long o = -12; o <= 0; ++o) out.coef[o] = resid.at(o);
    for (long o = -12; o <= -9; ++o) {
        if (!out.coef[o].is_zero())
            throw CheckFailError("residual order " + std::to_string(o) +
                                 " is nonzero for " + spec.describe());
    }
    Cyclo c = compute_c(spec).c_exact;
    if (out.coef[-8] != c)
        throw CheckFailError("residual order -8 does not equal the psi-sum for " +
                             spec.describe());
    return out;
}

bool ke_identity_check(const GroupSpec& spec, const SeriesOptions& opts) {
    spec.validate();
    if (spec.order() > opts.series_cap)
        throw CapExceededError("group order exceeds the series cap");
    RationalFunctionQx f = f_rational(spec, opts);
    RationalFunctionQx phi4 = phi_rational(spec).pow(4);
    return f.equals(phi4);
}

}  // namespace bqke
