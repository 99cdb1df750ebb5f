#pragma once

#include <optional>

#include "bqke/cyclotomic.hpp"
#include "bqke/groups.hpp"

namespace bqke {

// Per-element summand of the obstruction:
//   psi(g) = det g / (1 - g11)^4 * (1 - 3 tr g + 4 (tr g - det g - 1)/(1 - g11)).
// Throws PoleError when g11 == 1 (the identity; callers exclude it).
Cyclo psi(const UnitaryMatrix& g);

enum class Verdict { KE_possible, Obstructed_by_C, Obstructed_by_phi0, Obstructed_by_both };

std::string verdict_name(Verdict v);

// Certificate that 720 C(Gamma) is an odd integer (Q/D families).
struct ParityRecord {
    BigInt c720;    // exact value of 720 C(Gamma)
    bool odd;
    long residue;   // c720 mod N in [0, N)
    long modulus;   // N = 4np resp. 2^(m-1) p (2n+1)
};

struct ObstructionReport {
    GroupSpec spec;
    long group_order = 1;
    Cyclo c_exact;
    Cyclo c1, c2;     // c1 + c2 == c_exact; split by |g11| = 1 (P-families)
                      // or anti-diagonal/diagonal word parity (Q/D)
    Cyclo phi0;       // phi(0,0) = sum conj(det g)
    std::optional<ParityRecord> parity;
    Verdict verdict = Verdict::KE_possible;
    bool paper_hypothesis_met = false;
};

enum class SumStrategy {
    Auto,
    // One psi evaluation per group element in the full field.
    Literal,
    // Exact per-fiber aggregation over the central scalar factor: for each
    // base element g0 != id, sum_j psi(u^j g0) collapses into the base field
    // via the geometric identity (1 - u^j a)^-1 = (sum_t u^jt a^t)/(1 - a^p);
    // the identity fiber {u^j id} is summed literally in Q(zeta_p).
    Fiber,
};

struct ComputeOptions {
    SumStrategy strategy = SumStrategy::Auto;
    long element_cap = 1000000;
};

ObstructionReport compute_c(const GroupSpec& spec, const ComputeOptions& opts = {});

// The |g11| = 1 split for the exceptional families; errors otherwise.
// Returns (C1, C2); the element counts are validated against 8p / 10p /
// 4p 3^(m-1) inside.
std::pair<Cyclo, Cyclo> split_c1_c2(const GroupSpec& spec, const ComputeOptions& opts = {});

// Exact parity certificate for the Q and D families (p = 1 admitted as an
// extension beyond the stated hypotheses; see ObstructionReport).
ParityRecord parity_certificate(const GroupSpec& spec, const ComputeOptions& opts = {});

struct BoundRecord {
    // Exhaustive per-element bound: |g11|^2 <= |c|^2 for every base element
    // with |g11| != 1, checked by certified sign of real cyclotomic values.
    bool entry_bound_ok = false;
    long off_split_count = 0;       // elements with |g11| != 1 (times p)
    Cyclo entry_bound_sq;           // |c|^2 (1/2, 1/(4 sin^2 pi/5), 1/2)
    Cyclo c1;                       // exact C1 (self-conjugate, real)
    Cyclo bound;                    // the linear-in-p bound, exact
    bool c1_within_bound = false;   // |C1| <= bound, exact comparison
    // For p >= 3: the gamma11 = 0 subfamily (8p elements for P48) sums to 0.
    std::optional<bool> antidiagonal_cancellation;
    double c1_float = 0.0, bound_float = 0.0;
};

BoundRecord c1_bound_check(const GroupSpec& spec, const ComputeOptions& opts = {});

struct ThresholdInfo {
    long paper_value;       // 26 / 46 / 24
    bool inclusive;         // Pprime states p~ >= 24; the others p > value
    // Least T such that for every integer q > T the worst-case branch of the
    // closed-form quartic |C2(q)| strictly exceeds the C1 bound.
    long rederived_strict;
};

ThresholdInfo threshold(Family family, bool rederive = false);

// Exact test used by the threshold re-derivation: worst-branch |C2(q)|
// (minimum over residue branches of the closed forms) > bound(q).
bool c2_exceeds_bound(Family family, long q);

}  // namespace bqke
