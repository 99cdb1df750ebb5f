#include "bqke/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "bqke/errors.hpp"

namespace bqke {

namespace {

constexpr long kMaxConductor = 200000;

// Per-conductor data: Phi_N and the reduction table x^k mod Phi_N for
// k in [0, N).  Rows have integer entries since Phi_N is monic over Z.
struct ConductorTable {
    long n = 1;
    long degree = 1;
    std::vector<BigInt> phi;                  // size degree + 1
    std::vector<std::vector<BigInt>> powers;  // x^k mod Phi_N, k in [0, n)

    // Root tables for the numeric embedding, keyed by fixed-point precision.
    std::map<long, std::vector<BigComplex>> roots;
    std::mutex roots_mutex;
};

std::map<long, std::unique_ptr<ConductorTable>> g_tables;
std::mutex g_tables_mutex;

// Exact division of integer polynomials (constant-first), remainder must
// vanish.  Used only to build Phi_N = (x^n - 1) / prod Phi_d.
std::vector<BigInt> poly_divide_exact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
    long dn = static_cast<long>(num.size()) - 1;
    long dd = static_cast<long>(den.size()) - 1;
    std::vector<BigInt> q(dn - dd + 1, BigInt(0));
    for (long k = dn - dd; k >= 0; --k) {
        BigInt c = num[k + dd] / den[dd];
        q[k] = c;
        if (c != 0) {
            for (long i = 0; i <= dd; ++i) num[k + i] -= c * den[i];
        }
    }
    for (const auto& c : num) {
        if (c != 0) throw CheckFailError("cyclotomic polynomial division left a remainder");
    }
    return q;
}

std::vector<BigInt> build_phi(long n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, recursively.
    std::vector<BigInt> num(n + 1, BigInt(0));
    num[0] = -1;
    num[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d == 0) num = poly_divide_exact(std::move(num), cyclotomic_polynomial(d));
    }
    return num;
}

const ConductorTable& table_for(long n) {
    if (n < 1 || n > kMaxConductor) throw InvalidSpecError("conductor out of range");
    {
        std::lock_guard<std::mutex> lock(g_tables_mutex);
        auto it = g_tables.find(n);
        if (it != g_tables.end()) return *it->second;
    }
    auto t = std::make_unique<ConductorTable>();
    t->n = n;
    t->phi = build_phi(n);
    t->degree = static_cast<long>(t->phi.size()) - 1;
    long deg = t->degree;
    t->powers.resize(n);
    for (long k = 0; k < std::min<long>(deg, n); ++k) {
        t->powers[k].assign(deg, BigInt(0));
        t->powers[k][k] = 1;
    }
    for (long k = deg; k < n; ++k) {
        // x^k = x * x^(k-1), reduced: shift then fold the overflow through
        // x^deg = -(phi_0 + phi_1 x + ... + phi_{deg-1} x^{deg-1}).
        const auto& prev = t->powers[k - 1];
        std::vector<BigInt> cur(deg, BigInt(0));
        for (long i = 0; i + 1 < deg; ++i) cur[i + 1] = prev[i];
        const BigInt& top = prev[deg - 1];
        if (top != 0) {
            for (long i = 0; i < deg; ++i) cur[i] -= top * t->phi[i];
        }
        t->powers[k] = std::move(cur);
    }
    std::lock_guard<std::mutex> lock(g_tables_mutex);
    auto [it, inserted] = g_tables.try_emplace(n, std::move(t));
    return *it->second;
}

const std::vector<BigComplex>& root_table(const ConductorTable& t, long prec) {
    std::lock_guard<std::mutex> lock(const_cast<ConductorTable&>(t).roots_mutex);
    auto& roots = const_cast<ConductorTable&>(t).roots;
    auto it = roots.find(prec);
    if (it != roots.end()) return it->second;
    std::vector<BigComplex> v;
    v.reserve(t.n);
    for (long k = 0; k < t.n; ++k) v.push_back(unit_root_float(t.n, k, prec));
    return roots.emplace(prec, std::move(v)).first->second;
}

}  // namespace

std::vector<BigInt> cyclotomic_polynomial(long n) {
    if (n < 1) throw InvalidSpecError("cyclotomic_polynomial requires N >= 1");
    return table_for(n).phi;
}

const std::vector<BigInt>& power_row(long conductor, long k) {
    const auto& t = table_for(conductor);
    return t.powers[mod_floor(k, conductor)];
}

TensorAccumulator::TensorAccumulator(long p, long coeff_conductor)
    : p_(p), cond_(coeff_conductor) {
    if (gcd_long(p, coeff_conductor) != 1)
        throw InvalidSpecError("tensor accumulator requires coprime conductors");
    slots_.assign(euler_phi(p), Cyclo::zero());
}

void TensorAccumulator::add(long u_exponent, const Cyclo& coeff) {
    const auto& row = power_row(p_, u_exponent);
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (row[i] == 0) continue;
        slots_[i] = slots_[i] + coeff.scaled(RationalQ(row[i]));
    }
}

bool TensorAccumulator::is_zero() const {
    for (const auto& s : slots_)
        if (!s.is_zero()) return false;
    return true;
}

Cyclo::Cyclo() : cond_(1), coords_(1, RationalQ(0)) {}

Cyclo Cyclo::rational(const RationalQ& q) { return Cyclo(1, {q}); }

Cyclo Cyclo::root(long conductor, long k) {
    const auto& t = table_for(conductor);
    k = mod_floor(k, conductor);
    const auto& row = t.powers[k];
    std::vector<RationalQ> c(t.degree);
    for (long i = 0; i < t.degree; ++i) c[i] = RationalQ(row[i]);
    return Cyclo(conductor, std::move(c));
}

Cyclo Cyclo::from_coords(long conductor, std::vector<RationalQ> coords) {
    const auto& t = table_for(conductor);
    if (static_cast<long>(coords.size()) != t.degree)
        throw InvalidSpecError("coordinate vector length must equal deg Phi_N");
    for (auto& q : coords) q.canonicalize();
    return Cyclo(conductor, std::move(coords));
}

bool Cyclo::is_zero() const {
    for (const auto& q : coords_)
        if (q != 0) return false;
    return true;
}

bool Cyclo::is_rational() const {
    for (std::size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

RationalQ Cyclo::rational_value() const {
    if (!is_rational()) throw CheckFailError("value is not rational: " + to_exact_string());
    return coords_[0];
}

bool Cyclo::operator==(const Cyclo& o) const {
    if (cond_ == o.cond_) return coords_ == o.coords_;
    auto [a, b] = unify(*this, o);
    return a.coords_ == b.coords_;
}

Cyclo Cyclo::operator-() const {
    std::vector<RationalQ> c(coords_);
    for (auto& q : c) q = -q;
    return Cyclo(cond_, std::move(c));
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
    if (cond_ != o.cond_) {
        auto [a, b] = unify(*this, o);
        return a + b;
    }
    std::vector<RationalQ> c(coords_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coords_[i];
    return Cyclo(cond_, std::move(c));
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
    if (cond_ != o.cond_) {
        auto [a, b] = unify(*this, o);
        return a * b;
    }
    const auto& t = table_for(cond_);
    long deg = t.degree;
    // Scale both operands to integer vectors; one rational division at the end.
    BigInt da(1), db(1);
    for (const auto& q : coords_) mpz_lcm(da.get_mpz_t(), da.get_mpz_t(), q.get_den().get_mpz_t());
    for (const auto& q : o.coords_) mpz_lcm(db.get_mpz_t(), db.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<BigInt> A(deg), B(deg);
    long nza = 0, nzb = 0;
    for (long i = 0; i < deg; ++i) {
        A[i] = coords_[i].get_num() * (da / coords_[i].get_den());
        B[i] = o.coords_[i].get_num() * (db / o.coords_[i].get_den());
        if (A[i] != 0) ++nza;
        if (B[i] != 0) ++nzb;
    }
    if (nzb < nza) std::swap(A, B);  // sparser operand drives the outer loop
    std::vector<BigInt> conv(2 * deg - 1, BigInt(0));
    for (long i = 0; i < deg; ++i) {
        if (A[i] == 0) continue;
        for (long j = 0; j < deg; ++j) {
            if (B[j] == 0) continue;
            conv[i + j] += A[i] * B[j];
        }
    }
    std::vector<BigInt> red(deg, BigInt(0));
    for (long i = 0; i < deg; ++i) red[i] = conv[i];
    for (long k = deg; k < 2 * deg - 1; ++k) {
        if (conv[k] == 0) continue;
        const auto& row = t.powers[k % t.n];  // x^n = 1 mod Phi_n
        for (long i = 0; i < deg; ++i) {
            if (row[i] != 0) red[i] += conv[k] * row[i];
        }
    }
    BigInt dd = da * db;
    std::vector<RationalQ> c(deg);
    for (long i = 0; i < deg; ++i) c[i] = make_rational(red[i], dd);
    return Cyclo(cond_, std::move(c));
}

Cyclo Cyclo::scaled(const RationalQ& q) const {
    std::vector<RationalQ> c(coords_);
    for (auto& x : c) x *= q;
    return Cyclo(cond_, std::move(c));
}

Cyclo Cyclo::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclo result = Cyclo::one();
    Cyclo base = *this;
    unsigned long n = static_cast<unsigned long>(e);
    while (n > 0) {
        if (n & 1) result = result * base;
        base = n > 1 ? base * base : base;
        n >>= 1;
    }
    return result;
}

Cyclo Cyclo::inverse() const {
    if (is_zero()) throw DivisionByZeroError("inverse of zero");
    if (is_rational()) {
        RationalQ q = coords_[0];
        return Cyclo::rational(make_rational(q.get_den(), q.get_num())).lifted(cond_);
    }
    // Monomial shortcut: (c zeta^k)^-1 = c^-1 zeta^(N-k).
    long nz = -1;
    bool monomial = true;
    for (long i = 0; i < degree(); ++i) {
        if (coords_[i] != 0) {
            if (nz >= 0) {
                monomial = false;
                break;
            }
            nz = i;
        }
    }
    if (monomial) {
        RationalQ c = coords_[nz];
        return Cyclo::root(cond_, cond_ - nz).scaled(make_rational(c.get_den(), c.get_num()));
    }
    // Extended Euclid in Q[x] against Phi_N (irreducible over Q, so the gcd
    // is a nonzero constant).  Remainders are kept monic to tame growth.
    const auto& t = table_for(cond_);
    auto trim = [](std::vector<RationalQ>& p) {
        while (p.size() > 1 && p.back() == 0) p.pop_back();
    };
    std::vector<RationalQ> r0(t.phi.size());
    for (std::size_t i = 0; i < t.phi.size(); ++i) r0[i] = RationalQ(t.phi[i]);
    std::vector<RationalQ> r1(coords_);
    trim(r1);
    // s tracks the cofactor of *this: r_k = s_k * this (mod Phi_N).
    std::vector<RationalQ> s0(1, RationalQ(0)), s1(1, RationalQ(1));
    while (r1.size() > 1 || r1[0] != 0) {
        // r0 = q * r1 + rem
        std::vector<RationalQ> rem(r0);
        std::vector<RationalQ> q(std::max<std::size_t>(1, rem.size() - r1.size() + 1), RationalQ(0));
        long dr = static_cast<long>(rem.size()) - 1;
        long d1 = static_cast<long>(r1.size()) - 1;
        const RationalQ lead = r1[d1];
        for (long k = dr - d1; k >= 0; --k) {
            RationalQ c = rem[k + d1] / lead;
            if (c != 0) {
                q[k] = c;
                for (long i = 0; i <= d1; ++i) rem[k + i] -= c * r1[i];
            }
        }
        trim(rem);
        // s_next = s0 - q * s1
        std::vector<RationalQ> snext(std::max(s0.size(), q.size() + s1.size()), RationalQ(0));
        for (std::size_t i = 0; i < s0.size(); ++i) snext[i] = s0[i];
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (std::size_t j = 0; j < s1.size(); ++j) snext[i + j] -= q[i] * s1[j];
        }
        trim(snext);
        r0 = std::move(r1);
        s0 = std::move(s1);
        r1 = std::move(rem);
        s1 = std::move(snext);
        if (r1.size() > 1 || r1[0] != 0) {
            // normalize leading coefficient of r1 to 1 (scale s1 the same way)
            RationalQ l = r1.back();
            if (l != 1) {
                for (auto& c : r1) c /= l;
                for (auto& c : s1) c /= l;
            }
        }
    }
    // gcd constant is r0 (deg 0 guaranteed monic-normalized earlier loop end);
    // after the loop r1 == 0 and r0 holds the constant gcd with cofactor s0.
    if (r0.size() != 1 || r0[0] == 0)
        throw CheckFailError("extended gcd against Phi_N did not terminate at a constant");
    RationalQ g = r0[0];
    std::vector<RationalQ> inv(t.degree, RationalQ(0));
    // s0 may have degree >= deg Phi (it stays < deg Phi by Euclid's bounds,
    // but reduce defensively through the power table).
    for (std::size_t k = 0; k < s0.size(); ++k) {
        if (s0[k] == 0) continue;
        RationalQ c = s0[k] / g;
        if (static_cast<long>(k) < t.degree) {
            inv[k] += c;
        } else {
            const auto& row = t.powers[k % t.n];
            for (long i = 0; i < t.degree; ++i)
                if (row[i] != 0) inv[i] += c * RationalQ(row[i]);
        }
    }
    for (auto& q : inv) q.canonicalize();
    return Cyclo(cond_, std::move(inv));
}

Cyclo Cyclo::galois(long t) const {
    t = mod_floor(t, cond_);
    if (gcd_long(t, cond_) != 1) throw InvalidSpecError("Galois index not coprime to conductor");
    const auto& tab = table_for(cond_);
    std::vector<RationalQ> c(tab.degree, RationalQ(0));
    for (long i = 0; i < tab.degree; ++i) {
        if (coords_[i] == 0) continue;
        const auto& row = tab.powers[(i * t) % cond_];
        for (long j = 0; j < tab.degree; ++j)
            if (row[j] != 0) c[j] += coords_[i] * RationalQ(row[j]);
    }
    for (auto& q : c) q.canonicalize();
    return Cyclo(cond_, std::move(c));
}

Cyclo Cyclo::conj() const {
    if (cond_ <= 2) return *this;
    return galois(cond_ - 1);
}

Cyclo Cyclo::lifted(long m) const {
    if (m == cond_) return *this;
    if (m % cond_ != 0) throw InvalidSpecError("lift target must be a multiple of the conductor");
    const auto& tab = table_for(m);
    long step = m / cond_;
    std::vector<RationalQ> c(tab.degree, RationalQ(0));
    for (long i = 0; i < degree(); ++i) {
        if (coords_[i] == 0) continue;
        const auto& row = tab.powers[(i * step) % m];
        for (long j = 0; j < tab.degree; ++j)
            if (row[j] != 0) c[j] += coords_[i] * RationalQ(row[j]);
    }
    for (auto& q : c) q.canonicalize();
    return Cyclo(m, std::move(c));
}

Cyclo Cyclo::lifted_times_root(long m, long k) const {
    if (m % cond_ != 0) throw InvalidSpecError("lift target must be a multiple of the conductor");
    const auto& tab = table_for(m);
    long step = m / cond_;
    k = mod_floor(k, m);
    std::vector<RationalQ> c(tab.degree, RationalQ(0));
    for (long i = 0; i < degree(); ++i) {
        if (coords_[i] == 0) continue;
        const auto& row = tab.powers[(i * step + k) % m];
        for (long j = 0; j < tab.degree; ++j)
            if (row[j] != 0) c[j] += coords_[i] * RationalQ(row[j]);
    }
    for (auto& q : c) q.canonicalize();
    return Cyclo(m, std::move(c));
}

BigComplex Cyclo::embed(long digits) const { return embed_with_error(digits).value; }

Cyclo::Embedded Cyclo::embed_with_error(long digits) const {
    if (digits < 15) throw InvalidSpecError("embed requires digits >= 15");
    long prec = digits + 12;
    const auto& t = table_for(cond_);
    const auto& roots = root_table(t, prec);
    BigFloat re = BigFloat::from_long(0, prec);
    BigFloat im = BigFloat::from_long(0, prec);
    // Error accounting: each root component carries a few ulps from the
    // Taylor evaluation; each multiply/add adds one more.  A generous
    // per-term constant times sum |c_i| covers all of it.
    RationalQ mag_sum(0);
    for (long i = 0; i < degree(); ++i) {
        if (coords_[i] == 0) continue;
        BigFloat c = BigFloat::from_rational(coords_[i], prec);
        re = re + c * roots[i].re;
        im = im + c * roots[i].im;
        mag_sum += abs(coords_[i]);
    }
    BigFloat err = (BigFloat::from_rational(mag_sum, prec) + BigFloat::from_long(2, prec)) *
                   BigFloat(pow10(8), prec);  // (sum|c| + 2) * 10^(8 - prec)
    return {{re, im}, err};
}

std::string Cyclo::to_exact_string() const {
    if (is_rational()) return coords_[0].get_str();
    std::ostringstream os;
    os << "[" << cond_ << ";";
    for (long i = 0; i < degree(); ++i) os << (i ? "," : "") << " " << coords_[i].get_str();
    os << "]";
    return os.str();
}

Cyclo primitive_root(long n, long index) {
    if (n < 1) throw InvalidSpecError("conductor must be positive");
    long idx = mod_floor(index, n == 1 ? 1 : n);
    if (n == 1) return Cyclo::one();
    if (gcd_long(idx, n) != 1)
        throw InvalidSpecError("root index " + std::to_string(index) + " not coprime to " +
                               std::to_string(n));
    return Cyclo::root(n, idx);
}

std::pair<Cyclo, Cyclo> unify(const Cyclo& a, const Cyclo& b) {
    long m = lcm_long(a.conductor(), b.conductor());
    return {a.lifted(m), b.lifted(m)};
}

int certified_sign(const Cyclo& x) {
    if (x.is_zero()) return 0;
    if (x.is_rational()) return sgn(x.rational_value());
    if (x.conj() != x) throw CheckFailError("certified_sign requires a self-conjugate value");
    for (long digits : {30, 60, 120, 240}) {
        auto e = x.embed_with_error(digits);
        if (e.error < e.value.re.abs()) return e.value.re.sign();
    }
    throw CheckFailError("sign could not be certified at maximum precision: " +
                         x.to_exact_string());
}

int cmp_real(const Cyclo& a, const Cyclo& b) { return certified_sign(a - b); }

}  // namespace bqke
