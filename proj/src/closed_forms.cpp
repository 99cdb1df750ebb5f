#include "bqke/closed_forms.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "bqke/errors.hpp"

namespace bqke {

RationalQ F_closed(long N, long r) {
    if (N < 1) throw InvalidSpecError("F_closed requires N >= 1");
    // Reduce r into [1, N]; the roots-of-unity sum is periodic in r.
    long rr = mod_floor(r - 1, N) + 1;
    RationalQ Nq(N), rq(rr);
    RationalQ binom = rq - 1;
    binom *= rq - 2;
    binom *= rq - 3;
    binom /= 6;
    RationalQ v = pow_rat(Nq, 4) / 720;
    v -= (rq * rq - 4 * rq + RationalQ(11, 3)) * Nq * Nq / 24;
    v += binom * Nq / 2;
    v -= pow_rat(rq, 4) / 24;
    v += pow_rat(rq, 3) / 3;
    v -= RationalQ(11, 12) * rq * rq;
    v += rq;
    v -= RationalQ(251, 720);
    v.canonicalize();
    return v;
}

namespace {

// Per-N cache of (1 - zeta_N^j)^-4 for j = 1..N-1, flattened into length-N
// coordinate vectors modulo x^N - 1 so that multiplying by xi^(r j) is a
// cyclic shift.  One inversion per divisor of N; Galois maps fill the rest.
struct BruteTable {
    long N;
    std::vector<std::vector<RationalQ>> inv4;  // index j in [1, N-1]
};

std::map<long, std::unique_ptr<BruteTable>> g_brute;
std::mutex g_brute_mutex;

std::vector<RationalQ> flatten(const Cyclo& z, long N) {
    std::vector<RationalQ> v(N, RationalQ(0));
    for (long i = 0; i < z.degree(); ++i) v[i] = z.coords()[i];
    return v;
}

const BruteTable& brute_table(long N) {
    {
        std::lock_guard<std::mutex> lock(g_brute_mutex);
        auto it = g_brute.find(N);
        if (it != g_brute.end()) return *it->second;
    }
    auto t = std::make_unique<BruteTable>();
    t->N = N;
    t->inv4.resize(N);
    for (long d = 2; d <= N; ++d) {
        if (N % d != 0) continue;
        // Elements of exact order d: j = (N/d) * s with gcd(s, d) = 1.
        Cyclo base = (Cyclo::one() - Cyclo::root(d, 1)).inverse();
        Cyclo base4 = (base * base);
        base4 = base4 * base4;
        for (long s = 1; s < d; ++s) {
            if (gcd_long(s, d) != 1) continue;
            Cyclo v = (s == 1 ? base4 : base4.galois(s)).lifted(N);
            t->inv4[(N / d) * s] = flatten(v, N);
        }
    }
    std::lock_guard<std::mutex> lock(g_brute_mutex);
    auto [it, inserted] = g_brute.try_emplace(N, std::move(t));
    return *it->second;
}

}  // namespace

RationalQ F_bruteforce(long N, long r, long cap) {
    if (N < 1) throw InvalidSpecError("F_bruteforce requires N >= 1");
    if (N > cap) throw CapExceededError("F_bruteforce cap exceeded");
    if (N == 1) return RationalQ(0);
    const BruteTable& t = brute_table(N);
    // Accumulate sum_j xi^(r j) (1 - xi^j)^-4 in Z[x]/(x^N - 1), then reduce
    // modulo Phi_N and assert rationality.
    std::vector<RationalQ> acc(N, RationalQ(0));
    for (long j = 1; j < N; ++j) {
        long shift = mod_floor(r * j, N);
        const auto& v = t.inv4[j];
        for (long i = 0; i < N; ++i) {
            if (v[i] == 0) continue;
            acc[(i + shift) % N] += v[i];
        }
    }
    long deg = euler_phi(N);
    std::vector<RationalQ> red(deg, RationalQ(0));
    for (long k = 0; k < N; ++k) {
        if (acc[k] == 0) continue;
        if (k < deg) {
            red[k] += acc[k];
        } else {
            const auto& row = power_row(N, k);
            for (long i = 0; i < deg; ++i)
                if (row[i] != 0) red[i] += acc[k] * RationalQ(row[i]);
        }
    }
    Cyclo result = Cyclo::from_coords(N, std::move(red));
    if (!result.is_rational())
        throw CheckFailError("F_bruteforce produced a non-rational value");
    return result.rational_value();
}

RationalQ series_oracle(long N, long r, long k) {
    if (N < 1 || r < 1 || r > N) throw InvalidSpecError("series_oracle requires 1 <= r <= N");
    if (k < 1) throw InvalidSpecError("series_oracle requires order k >= 1");
    long len = k + 3;  // truncation guard
    // numerator A(z) = N (1-z)^(r-1), denominator B(z) = ((1-z)^N - 1)/z.
    std::vector<RationalQ> A(len, RationalQ(0)), B(len, RationalQ(0));
    BigInt binom(1);
    for (long i = 0; i < len && i <= r - 1; ++i) {
        A[i] = RationalQ(binom * N);
        if (i % 2 == 1) A[i] = -A[i];
        binom = binom * (r - 1 - i) / (i + 1);
    }
    binom = N;
    for (long i = 0; i + 1 <= N && i < len; ++i) {
        // coefficient of z^(i+1) in (1-z)^N is (-1)^(i+1) C(N, i+1)
        B[i] = RationalQ(binom);
        if (i % 2 == 0) B[i] = -B[i];
        binom = binom * (N - i - 1) / (i + 2);
    }
    // G = A / B as a power series; the full generating function is 1 + G,
    // which only shifts the z^0 term.
    std::vector<RationalQ> G(len, RationalQ(0));
    for (long i = 0; i < len; ++i) {
        RationalQ c = A[i];
        for (long j = 1; j <= i; ++j) c -= B[j] * G[i - j];
        c /= B[0];
        c.canonicalize();
        G[i] = c;
    }
    return G[k];
}

BigInt parity_poly(long r) {
    BigInt rq(r);
    return -30 * rq * rq * rq * rq + 240 * rq * rq * rq - 660 * rq * rq + 720 * rq - 251;
}

ResidueSpec crt_solve(long n1, long t1, long n2, long t2) {
    if (gcd_long(n1, n2) != 1) throw InvalidSpecError("CRT moduli are not coprime");
    // n1 * x = 1 (mod n2) via extended Euclid.
    long a = mod_floor(n1, n2), m = n2;
    long x0 = 0, x1 = 1, r0 = m, r1 = a;
    while (r1 != 0) {
        long q = r0 / r1;
        long tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = x0 - q * x1;
        x0 = x1;
        x1 = tmp;
    }
    long inv = n2 == 1 ? 0 : mod_floor(x0, n2);
    long r = mod_floor(t1 + n1 * mod_floor((t2 - t1) % n2 * inv, n2), n1 * n2);
    ResidueSpec spec{n1, mod_floor(t1, n1), n2, mod_floor(t2, n2), r};
    if (mod_floor(r, n1) != spec.t1 || mod_floor(r, n2) != spec.t2)
        throw CheckFailError("CRT residue verification failed");
    return spec;
}

ResidueSpec crt_residue(const GroupSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case Family::Q: return crt_solve(4 * spec.n, 0, spec.p, 2);
        case Family::D: return crt_solve(2 * spec.n + 1, 0, (1L << (spec.m - 1)) * spec.p, 2);
        case Family::P48: return crt_solve(8, 0, spec.p, 2);
        case Family::P120: return crt_solve(10, 0, spec.p, 2);
        case Family::Pprime: {
            long ptilde = spec.p;
            for (long i = 1; i < spec.m; ++i) ptilde *= 3;
            return crt_solve(4, 0, ptilde, 2);
        }
        default: throw InvalidSpecError("no CRT residue for the trivial family");
    }
}

namespace {

RationalQ f_combination(long N, long r) {
    return -3 * F_closed(N, r) - 3 * F_closed(N, r + 1) + F_closed(N, 2 * r - 1);
}

}  // namespace

RationalQ c2_closed(const GroupSpec& spec) {
    spec.validate();
    RationalQ lemma;
    long N = 0, r = 0;
    switch (spec.family) {
        case Family::P48: {
            RationalQ p(spec.p);
            long sign = spec.p % 4 == 1 ? -1 : 1;  // i^(p+1) for odd p
            lemma = RationalQ(-28, 9) * pow_rat(p, 4) + sign * 12 * pow_rat(p, 3) +
                    RationalQ(5, 9) * p * p - RationalQ(1, 144);
            N = 8 * spec.p;
            r = crt_residue(spec).r;
            break;
        }
        case Family::P120: {
            // Quartic branches by p mod 5.  The r = kp + 2 residues give
            //   p = +-1:  -265/9 p^4 -+ 20 p^3 + 25/18 p^2 - 1/144
            //   p = +-2:   575/9 p^4 +- 20 p^3 - 35/18 p^2 - 1/144
            // (each checked below against the F-combination; substituting
            // the unreduced exponent 2r - 1 > N into the quartic formula
            // yields a different and incorrect polynomial).
            RationalQ p(spec.p);
            switch (spec.p % 5) {
                case 1:
                    lemma = RationalQ(-265, 9) * pow_rat(p, 4) - 20 * pow_rat(p, 3) +
                            RationalQ(25, 18) * p * p - RationalQ(1, 144);
                    break;
                case 2:
                    lemma = RationalQ(575, 9) * pow_rat(p, 4) + 20 * pow_rat(p, 3) -
                            RationalQ(35, 18) * p * p - RationalQ(1, 144);
                    break;
                case 3:
                    lemma = RationalQ(575, 9) * pow_rat(p, 4) - 20 * pow_rat(p, 3) -
                            RationalQ(35, 18) * p * p - RationalQ(1, 144);
                    break;
                case 4:
                    lemma = RationalQ(-265, 9) * pow_rat(p, 4) + 20 * pow_rat(p, 3) +
                            RationalQ(25, 18) * p * p - RationalQ(1, 144);
                    break;
                default: throw InvalidSpecError("P120 requires gcd(p, 5) = 1");
            }
            N = 10 * spec.p;
            r = crt_residue(spec).r;
            break;
        }
        case Family::Pprime: {
            long pt = spec.p;
            for (long i = 1; i < spec.m; ++i) pt *= 3;
            RationalQ ptq(pt);
            lemma = RationalQ(20, 9) * pow_rat(ptq, 4) - RationalQ(7, 9) * ptq * ptq -
                    RationalQ(1, 144);
            N = 4 * pt;
            r = 2 * pt + 2;
            break;
        }
        default: throw InvalidSpecError("c2_closed supports the P48/P120/Pprime families only");
    }
    lemma.canonicalize();
    RationalQ comb = f_combination(N, r);
    if (lemma != comb)
        throw CheckFailError("C2 routes disagree for " + spec.describe() + ": lemma " +
                             lemma.get_str() + " vs F-combination " + comb.get_str());
    return lemma;
}

RationalQ c_closed_qd(const GroupSpec& spec) {
    spec.validate();
    if (spec.family == Family::Trivial) {
        if (spec.p < 2)
            throw InvalidSpecError("scalar cyclic closed form requires p >= 2");
        return -3 * F_closed(spec.p, 2) - 2 * F_closed(spec.p, 3);
    }
    if (spec.family != Family::Q && spec.family != Family::D)
        throw InvalidSpecError("c_closed_qd supports the Q, D and scalar cyclic families only");
    if (spec.p < 3 || spec.p % 2 == 0)
        throw InvalidSpecError(
            "closed form for " + spec.describe() +
            " requires odd p >= 3 (anti-diagonal terms only cancel under that hypothesis)");
    long N = spec.family == Family::Q ? 4 * spec.n * spec.p
                                      : (1L << (spec.m - 1)) * (2 * spec.n + 1) * spec.p;
    long r = crt_residue(spec).r;
    return f_combination(N, r);
}

}  // namespace bqke
