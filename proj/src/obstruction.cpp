#include "bqke/obstruction.hpp"

#include <map>

#include "bqke/closed_forms.hpp"
#include "bqke/errors.hpp"

namespace bqke {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::KE_possible: return "KE_possible";
        case Verdict::Obstructed_by_C: return "Obstructed_by_C";
        case Verdict::Obstructed_by_phi0: return "Obstructed_by_phi0";
        case Verdict::Obstructed_by_both: return "Obstructed_by_both";
    }
    return "?";
}

Cyclo psi(const UnitaryMatrix& g) {
    Cyclo one = Cyclo::one();
    if (g.e11 == one) throw PoleError("psi has a pole at gamma_11 = 1 (identity excluded)");
    Cyclo W = (one - g.e11).inverse();
    Cyclo D = g.det();
    Cyclo T = g.tr();
    Cyclo W2 = W * W;
    Cyclo W4 = W2 * W2;
    return D * W4 * (one - T.scaled(make_rational(3))) +
           D.scaled(make_rational(4)) * W4 * W * (T - D - one);
}

namespace {

bool base_in_c2_bucket(const GroupSpec& spec, const UnitaryMatrix& g) {
    switch (spec.family) {
        case Family::P48:
        case Family::P120:
        case Family::Pprime:
            // |g11|^2 = 1, exact.
            return g.e11 * g.e11.conj() == Cyclo::one();
        case Family::Q:
        case Family::D:
            // diagonal words (even X exponent); anti-diagonal goes to C1.
            return !(g.e11.is_zero() && g.e22.is_zero());
        case Family::Trivial: return true;
    }
    return true;
}

// Coefficients of (1 + z + ... + z^(p-1))^k: the number of ways to write m
// as an ordered sum of k exponents in [0, p-1].
std::vector<BigInt> composition_counts(long k, long p) {
    std::vector<BigInt> cur(1, BigInt(1));
    for (long it = 0; it < k; ++it) {
        std::vector<BigInt> nxt(cur.size() + p - 1, BigInt(0));
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] == 0) continue;
            for (long t = 0; t < p; ++t) nxt[i + t] += cur[i];
        }
        cur = std::move(nxt);
    }
    return cur;
}

Cyclo residue_class_sum(const std::vector<BigInt>& counts, const std::vector<Cyclo>& apow,
                        long residue, long p) {
    Cyclo s = Cyclo::zero();
    for (std::size_t m = mod_floor(residue, p); m < counts.size(); m += p) {
        if (counts[m] == 0 || apow[m].is_zero()) continue;
        s = s + apow[m].scaled(RationalQ(counts[m]));
    }
    return s;
}

struct FiberSums {
    Cyclo c1, c2;       // base-field part, conductor M
    Cyclo id_fiber;     // identity fiber, conductor p (diagonal bucket)
    Cyclo antidiag;     // subtotal over base elements with g11 = 0
};

// Exact sum of psi over {u^j g0 : 0 <= j < p} for every base element,
// without any arithmetic in the composite field.  For g0 != id and
// W_j = (1 - u^j a)^-1 = E sum_t u^(jt) a^t with E = (1 - a^p)^-1:
//
//   sum_j psi(u^j g0) = p [ D E^4 A4(-2) - 3 D T E^4 A4(-3)
//                         + 4 D T E^5 A5(-3) - 4 D^2 E^5 A5(-4)
//                         - 4 D E^5 A5(-2) ]
//
// where Ak(s) = sum_{m = s mod p} ck_m a^m and ck_m counts ordered sums of
// k exponents in [0, p-1]; only the residues of u-exponents survive the
// full scalar orbit.
FiberSums fiber_sums(const GroupSpec& spec, const std::vector<GroupElement>& base) {
    long p = spec.p;
    FiberSums out{Cyclo::zero(), Cyclo::zero(), Cyclo::zero(), Cyclo::zero()};
    std::vector<BigInt> c4 = composition_counts(4, p);
    std::vector<BigInt> c5 = composition_counts(5, p);
    long r2 = mod_floor(-2, p), r3 = mod_floor(-3, p), r4 = mod_floor(-4, p);
    RationalQ pq(p);

    std::map<std::string, std::vector<Cyclo>> power_cache;
    auto powers_of = [&](const Cyclo& a) -> const std::vector<Cyclo>& {
        std::string key = a.to_exact_string();
        auto it = power_cache.find(key);
        if (it != power_cache.end()) return it->second;
        std::vector<Cyclo> pw;
        pw.reserve(5 * (p - 1) + 2);
        pw.push_back(Cyclo::one());
        for (long m = 1; m <= 5 * (p - 1) + 1; ++m) pw.push_back(pw.back() * a);
        return power_cache.emplace(std::move(key), std::move(pw)).first->second;
    };

    for (const auto& e : base) {
        if (e.mat.is_identity()) continue;
        Cyclo a = e.mat.e11;
        Cyclo D = e.mat.det();
        Cyclo T = e.mat.tr();
        const auto& pw = powers_of(a);
        Cyclo one_minus_ap = Cyclo::one() - pw[p];
        if (one_minus_ap.is_zero())
            throw CheckFailError("a^p = 1 for a non-identity base element");
        Cyclo E = one_minus_ap.inverse();
        Cyclo E2 = E * E;
        Cyclo E4 = E2 * E2;
        Cyclo E5 = E4 * E;
        Cyclo A4r2 = residue_class_sum(c4, pw, r2, p);
        Cyclo A4r3 = residue_class_sum(c4, pw, r3, p);
        Cyclo A5r2 = residue_class_sum(c5, pw, r2, p);
        Cyclo A5r3 = residue_class_sum(c5, pw, r3, p);
        Cyclo A5r4 = residue_class_sum(c5, pw, r4, p);
        Cyclo DE4 = D * E4;
        Cyclo DE5 = D * E5;
        Cyclo fib = DE4 * A4r2 - (DE4 * T).scaled(make_rational(3)) * A4r3 +
                    (DE5 * T).scaled(make_rational(4)) * A5r3 -
                    (DE5 * D).scaled(make_rational(4)) * A5r4 - DE5.scaled(make_rational(4)) * A5r2;
        fib = fib.scaled(pq);
        if (base_in_c2_bucket(spec, e.mat))
            out.c2 = out.c2 + fib;
        else
            out.c1 = out.c1 + fib;
        if (e.mat.e11.is_zero()) out.antidiag = out.antidiag + fib;
    }
    // Identity fiber {u^j id : 1 <= j < p}, summed literally in Q(zeta_p).
    if (p >= 2) {
        Cyclo u = primitive_root(p, spec.roots.u);
        for (long j = 1; j < p; ++j) {
            out.id_fiber = out.id_fiber + psi(UnitaryMatrix::scalar(u.pow(j)));
        }
    }
    return out;
}

struct SplitSum {
    Cyclo c1, c2;
};

SplitSum raw_split_sum(const GroupSpec& spec, const ComputeOptions& opts) {
    spec.validate();
    bool literal = true;
    switch (opts.strategy) {
        case SumStrategy::Literal: literal = true; break;
        case SumStrategy::Fiber: literal = false; break;
        case SumStrategy::Auto:
            literal = spec.p == 1 ||
                      (spec.order() <= 600 && euler_phi(spec.full_conductor()) <= 64);
            break;
    }
    long cond = spec.full_conductor();
    if (literal) {
        std::vector<GroupElement> all = enumerate_elements(spec, {opts.element_cap});
        Cyclo c1 = Cyclo::zero(), c2 = Cyclo::zero();
        for (const auto& e : all) {
            if (e.mat.is_identity()) continue;
            Cyclo v = psi(e.mat);
            // |u^j g0|-type classification agrees with the base element's.
            bool diag_bucket;
            switch (spec.family) {
                case Family::P48:
                case Family::P120:
                case Family::Pprime:
                    diag_bucket = e.mat.e11 * e.mat.e11.conj() == Cyclo::one();
                    break;
                case Family::Q:
                case Family::D:
                    diag_bucket = !(e.mat.e11.is_zero() && e.mat.e22.is_zero());
                    break;
                default: diag_bucket = true;
            }
            if (diag_bucket)
                c2 = c2 + v;
            else
                c1 = c1 + v;
        }
        return {c1.lifted(lcm_long(cond, c1.conductor())),
                c2.lifted(lcm_long(cond, c2.conductor()))};
    }
    std::vector<GroupElement> base = enumerate_base_elements(spec, {opts.element_cap});
    FiberSums fs = fiber_sums(spec, base);
    Cyclo c1 = fs.c1.lifted(cond);
    Cyclo c2 = fs.c2.lifted(cond) + fs.id_fiber.lifted(cond);
    return {c1, c2};
}

bool hypothesis_met(const GroupSpec& spec) {
    switch (spec.family) {
        case Family::Trivial: return true;
        case Family::Q:
        case Family::D: return spec.p >= 2;
        default: return true;
    }
}

ParityRecord parity_from_c(const GroupSpec& spec, const Cyclo& c) {
    if (!c.is_rational())
        throw CheckFailError("C(Gamma) is not rational for " + spec.describe());
    RationalQ r720 = c.rational_value() * 720;
    if (!is_integer(r720))
        throw CheckFailError("720 C(Gamma) is not an integer for " + spec.describe() + ": " +
                             r720.get_str());
    long N = spec.family == Family::Q ? 4 * spec.n * spec.p
                                      : (1L << (spec.m - 1)) * spec.p * (2 * spec.n + 1);
    ParityRecord rec;
    rec.c720 = r720.get_num();
    rec.odd = mpz_odd_p(rec.c720.get_mpz_t()) != 0;
    rec.modulus = N;
    rec.residue = mpz_class(mod_floor(rec.c720, BigInt(N))).get_si();
    return rec;
}

}  // namespace

ObstructionReport compute_c(const GroupSpec& spec, const ComputeOptions& opts) {
    spec.validate();
    ObstructionReport rep;
    rep.spec = spec;
    rep.group_order = spec.order();
    SplitSum s = raw_split_sum(spec, opts);
    rep.c1 = s.c1;
    rep.c2 = s.c2;
    rep.c_exact = s.c1 + s.c2;
    rep.phi0 = phi_at_zero(spec);
    rep.paper_hypothesis_met = hypothesis_met(spec);
    bool c_obstructs = !rep.c_exact.is_zero();
    // The kernel-at-origin criterion applies to nontrivial groups; the unit
    // ball itself has phi(0,0) = 1 and is the Kaehler-Einstein case.
    bool phi_obstructs = spec.order() > 1 && !rep.phi0.is_zero();
    if (c_obstructs && phi_obstructs)
        rep.verdict = Verdict::Obstructed_by_both;
    else if (c_obstructs)
        rep.verdict = Verdict::Obstructed_by_C;
    else if (phi_obstructs)
        rep.verdict = Verdict::Obstructed_by_phi0;
    else
        rep.verdict = Verdict::KE_possible;
    if ((spec.family == Family::Q || spec.family == Family::D) && rep.c_exact.is_rational()) {
        rep.parity = parity_from_c(spec, rep.c_exact);
    }
    return rep;
}

std::pair<Cyclo, Cyclo> split_c1_c2(const GroupSpec& spec, const ComputeOptions& opts) {
    spec.validate();
    if (spec.family != Family::P48 && spec.family != Family::P120 &&
        spec.family != Family::Pprime)
        throw InvalidSpecError("split_c1_c2 supports the P48/P120/Pprime families only");
    // Element count of the |g11| = 1 part must match 8p / 10p / 4p 3^(m-1).
    std::vector<GroupElement> base = enumerate_base_elements(spec);
    long diag = 0;
    for (const auto& e : base)
        if (base_in_c2_bucket(spec, e.mat)) ++diag;
    long expected = 0;
    switch (spec.family) {
        case Family::P48: expected = 8; break;
        case Family::P120: expected = 10; break;
        case Family::Pprime: {
            expected = 4;
            for (long i = 1; i < spec.m; ++i) expected *= 3;
            break;
        }
        default: break;
    }
    if (diag != expected)
        throw CheckFailError("unexpected |g11| = 1 element count: " + std::to_string(diag * spec.p) +
                             " vs " + std::to_string(expected * spec.p));
    SplitSum s = raw_split_sum(spec, opts);
    return {s.c1, s.c2};
}

ParityRecord parity_certificate(const GroupSpec& spec, const ComputeOptions& opts) {
    spec.validate();
    if (spec.family != Family::Q && spec.family != Family::D)
        throw InvalidSpecError("parity certificates exist for the Q and D families");
    SplitSum s = raw_split_sum(spec, opts);
    return parity_from_c(spec, s.c1 + s.c2);
}

BoundRecord c1_bound_check(const GroupSpec& spec, const ComputeOptions& opts) {
    spec.validate();
    if (spec.family != Family::P48 && spec.family != Family::P120 &&
        spec.family != Family::Pprime)
        throw InvalidSpecError("c1_bound_check supports the P48/P120/Pprime families only");
    BoundRecord rec;
    std::vector<GroupElement> base = enumerate_base_elements(spec);
    // |c|^2: 1/2 for P48 and Pprime; c conj(c) from the generator for P120.
    if (spec.family == Family::P120) {
        Cyclo c = build_generators(GroupSpec{Family::P120, 1, 2, 1, spec.roots})[0].e11;
        rec.entry_bound_sq = c * c.conj();
    } else {
        rec.entry_bound_sq = Cyclo::rational(make_rational(1, 2));
    }
    rec.entry_bound_ok = true;
    long off = 0;
    for (const auto& e : base) {
        Cyclo mod2 = e.mat.e11 * e.mat.e11.conj();
        if (mod2 == Cyclo::one()) continue;
        ++off;
        if (cmp_real(mod2, rec.entry_bound_sq) > 0) rec.entry_bound_ok = false;
    }
    rec.off_split_count = off * spec.p;

    SplitSum s = raw_split_sum(spec, opts);
    rec.c1 = s.c1;
    if (rec.c1.conj() != rec.c1) throw CheckFailError("C1 is not self-conjugate");
    // Exact bounds: 4.89e4 p, 2.68e6 p, 80 (135 sqrt2 + 191) 3^(m-1) p.
    switch (spec.family) {
        case Family::P48: rec.bound = Cyclo::rational(make_rational(48900 * spec.p)); break;
        case Family::P120: rec.bound = Cyclo::rational(make_rational(2680000 * spec.p)); break;
        case Family::Pprime: {
            long scale = 80 * spec.p;
            for (long i = 1; i < spec.m; ++i) scale *= 3;
            Cyclo sqrt2 = Cyclo::root(8, 1) - Cyclo::root(8, 3);
            rec.bound = (sqrt2.scaled(make_rational(135)) + Cyclo::rational(191))
                            .scaled(make_rational(scale));
            break;
        }
        default: break;
    }
    Cyclo abs_c1 = certified_sign(rec.c1) >= 0 ? rec.c1 : -rec.c1;
    rec.c1_within_bound = cmp_real(abs_c1, rec.bound) <= 0;
    rec.c1_float = abs_c1.embed(30).re.to_double();
    rec.bound_float = rec.bound.embed(30).re.to_double();
    // The g11 = 0 subfamily cancels over the scalar orbit once p >= 3.
    if (spec.p >= 3) {
        std::vector<GroupElement> zero_rows;
        for (const auto& e : base)
            if (e.mat.e11.is_zero()) zero_rows.push_back(e);
        FiberSums fs = fiber_sums(spec, zero_rows);
        rec.antidiagonal_cancellation = fs.antidiag.is_zero();
    }
    return rec;
}

bool c2_exceeds_bound(Family family, long q) {
    auto abs_q = [](RationalQ v) {
        if (v < 0) v = -v;
        return v;
    };
    RationalQ qq(q);
    RationalQ q2 = qq * qq, q3 = qq * qq * qq, q4 = qq * qq * qq * qq;
    switch (family) {
        case Family::P48: {
            RationalQ core = RationalQ(-28, 9) * q4 + RationalQ(5, 9) * q2 - RationalQ(1, 144);
            RationalQ worst =
                std::min(abs_q(core + 12 * q3), abs_q(core - 12 * q3));
            return worst > RationalQ(48900) * qq;
        }
        case Family::P120: {
            RationalQ core1 = RationalQ(-265, 9) * q4 + RationalQ(25, 18) * q2 -
                              RationalQ(1, 144);
            RationalQ core2 = RationalQ(575, 9) * q4 - RationalQ(35, 18) * q2 -
                              RationalQ(1, 144);
            RationalQ worst = std::min({abs_q(core1 - 20 * q3), abs_q(core1 + 20 * q3),
                                        abs_q(core2 - 20 * q3), abs_q(core2 + 20 * q3)});
            return worst > RationalQ(2680000) * qq;
        }
        case Family::Pprime: {
            RationalQ c2 = RationalQ(20, 9) * q4 - RationalQ(7, 9) * q2 - RationalQ(1, 144);
            Cyclo sqrt2 = Cyclo::root(8, 1) - Cyclo::root(8, 3);
            Cyclo bound = (sqrt2.scaled(make_rational(135)) + Cyclo::rational(191))
                              .scaled(make_rational(80 * q));
            return cmp_real(Cyclo::rational(abs_q(c2)), bound) > 0;
        }
        default: throw InvalidSpecError("no threshold for this family");
    }
}

ThresholdInfo threshold(Family family, bool rederive) {
    ThresholdInfo info{};
    switch (family) {
        case Family::P48:
            info.paper_value = 26;
            info.inclusive = false;
            break;
        case Family::P120:
            info.paper_value = 46;
            info.inclusive = false;
            break;
        case Family::Pprime:
            info.paper_value = 24;
            info.inclusive = true;  // threshold on p~ = p 3^(m-1), stated as >=
            break;
        default: throw InvalidSpecError("no threshold for this family");
    }
    info.rederived_strict = -1;
    if (rederive) {
        constexpr long kHorizon = 400;
        long last_fail = 0;
        for (long q = 1; q <= kHorizon; ++q) {
            if (!c2_exceeds_bound(family, q)) last_fail = q;
        }
        info.rederived_strict = last_fail;
    }
    return info;
}

}  // namespace bqke
