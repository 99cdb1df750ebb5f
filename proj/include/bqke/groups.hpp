#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bqke/cyclotomic.hpp"

namespace bqke {

// The catalog of finite fixed-point-free unitary groups on the 2-ball:
// trivial, Q_{8n}, D_{2^m(2n+1)}, the two exceptional binary polyhedral
// groups of orders 48 and 120, P'_{8*3^m}, and each of these times a cyclic
// group of coprime order p (realized by the scalar matrix u * id).
enum class Family { Trivial, Q, D, P48, P120, Pprime };

std::string family_name(Family f);
Family family_from_name(const std::string& name);  // throws InvalidSpecError

// Which primitive roots realize the symbols a, b (or beta) and u.  Indices
// must be coprime to the respective root orders; 1 selects the canonical
// generator zeta_N.
struct RootChoices {
    long a = 1;
    long b = 1;
    long u = 1;
};

struct GroupSpec {
    Family family = Family::Trivial;
    long n = 1;  // Q: order 8n; D: odd part 2n+1
    long m = 2;  // D: two-part 2^m; Pprime: order 8*3^m
    long p = 1;  // cyclic cofactor order; 1 means absent
    RootChoices roots;

    long base_order() const;
    long order() const { return p * base_order(); }
    // Conductor of the field containing the base-group entries.
    long base_conductor() const;
    long full_conductor() const { return lcm_long(base_conductor(), p); }

    // Enforces the family parameter ranges, gcd(p, base order) = 1, and
    // coprimality of the root indices.  Throws InvalidSpecError.
    void validate() const;

    std::string describe() const;
};

struct UnitaryMatrix {
    Cyclo e11, e12, e21, e22;

    static UnitaryMatrix identity();
    static UnitaryMatrix diagonal(const Cyclo& a, const Cyclo& d);
    static UnitaryMatrix scalar(const Cyclo& s);

    UnitaryMatrix operator*(const UnitaryMatrix& o) const;
    bool operator==(const UnitaryMatrix& o) const;

    UnitaryMatrix conj_transpose() const;
    // Entrywise complex conjugate (no transpose).
    UnitaryMatrix conj_entries() const;
    Cyclo det() const;
    Cyclo tr() const;
    bool is_identity() const;
    // Exact test of M M* == id.
    bool is_unitary() const;
    // det(M - id) = det - tr + 1; zero iff 1 is an eigenvalue.
    Cyclo det_minus_id() const;

    UnitaryMatrix lifted(long conductor) const;
    UnitaryMatrix pow(long e) const;
};

struct GroupElement {
    // Normal-form exponents (j, k, l) or (j, i1, i2, i3); for the closure
    // families P48/P120 the scalar exponent j followed by the first-found
    // generator word.
    std::vector<long> word;
    UnitaryMatrix mat;
};

// Generator matrices exactly as in the catalog, with u * id appended when
// p > 1.  For P48/P120 the free phase of d is fixed real positive.
std::vector<UnitaryMatrix> build_generators(const GroupSpec& spec);

struct EnumerateOptions {
    long element_cap = 1000000;
};

// The full group, identity first.  Normal forms for Trivial/Q/D/Pprime,
// generator closure with canonical-coordinate deduplication for P48/P120.
// For p > 1 the base group is enumerated at its own conductor and the
// scalar powers u^j are applied afterwards (j-major order).
std::vector<GroupElement> enumerate_elements(const GroupSpec& spec,
                                             const EnumerateOptions& opts = {});

// Base group only (p forced to 1), at the base conductor.
std::vector<GroupElement> enumerate_base_elements(const GroupSpec& spec,
                                                  const EnumerateOptions& opts = {});

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;  // offending element word on failure
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    // "direct" = every check on the full element list; "structured" = full
    // checks on the base group plus exact per-element checks that use the
    // central scalar factorization (large groups).
    std::string mode;
    bool all_pass() const;
    std::string summary() const;
};

struct ValidateOptions {
    EnumerateOptions enumerate;
    // Above these sizes the product-group checks switch to structured mode.
    long direct_order_limit = 160;
    long direct_degree_limit = 64;
};

// Unitarity, closure, order, presentation relations, fixed-point-freeness
// (det(g - id) != 0 for g != id), and the gamma_11 = 1 => identity
// consequence, all exact.
ValidationReport validate_group(const GroupSpec& spec, const ValidateOptions& opts = {});

// Relations defining each family, as (name, lhs, rhs) matrix pairs built
// from the generators; validate_group checks lhs == rhs exactly.
std::vector<std::tuple<std::string, UnitaryMatrix, UnitaryMatrix>> presentation_relations(
    const GroupSpec& spec);

// sum over the group of conj(det gamma): the Bergman kernel value at the
// origin up to a fixed positive factor.  Nonzero certifies the SU(2)-type
// obstruction.
Cyclo phi_at_zero(const GroupSpec& spec);

}  // namespace bqke
