#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bqke/errors.hpp"
#include "bqke/groups.hpp"

using namespace bqke;

namespace {

GroupSpec make(Family f, long n = 1, long m = 2, long p = 1) {
    GroupSpec s;
    s.family = f;
    s.n = n;
    s.m = m;
    s.p = p;
    return s;
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_NOTHROW(make(Family::Q, 1, 2, 1).validate());
    CHECK_THROWS_AS(make(Family::Q, 0).validate(), InvalidSpecError);
    CHECK_THROWS_AS(make(Family::D, 1, 1).validate(), InvalidSpecError);
    // gcd(p, base order) must be 1: Q(1) has order 8
    CHECK_THROWS_AS(make(Family::Q, 1, 2, 2).validate(), InvalidSpecError);
    CHECK_THROWS_AS(make(Family::D, 1, 2, 3).validate(), InvalidSpecError);  // |D(2,1)| = 12
    CHECK_NOTHROW(make(Family::D, 2, 2, 3).validate());                      // |D(2,2)| = 20
    GroupSpec bad = make(Family::Q, 1, 2, 3);
    bad.roots.a = 2;  // not coprime to 4
    CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
}

TEST_CASE("Q(1) generators match the catalog matrices") {
    auto gens = build_generators(make(Family::Q));
    REQUIRE(gens.size() == 2);
    const auto& X = gens[0];
    CHECK(X.e11.is_zero());
    CHECK(X.e12 == Cyclo::one());
    CHECK(X.e21 == Cyclo::rational(-1));
    CHECK(gens[1].e11 == Cyclo::root(4, 1));
    CHECK(gens[1].e22 == Cyclo::root(4, 3));
}

TEST_CASE("P48 generators: c = 1/(a - conj a), d real positive") {
    auto gens = build_generators(make(Family::P48));
    const auto& X = gens[0];
    Cyclo a = Cyclo::root(8, 1);
    CHECK(X.e11 == (a - a.conj()).inverse());
    CHECK(X.e12.conj() == X.e12);       // d real
    CHECK(certified_sign(X.e12) == 1);  // positive branch
    CHECK(X.e12 * X.e12 == Cyclo::one() + X.e11 * X.e11);
    // embeds near c = -0.7071i, d = 0.7071
    auto ce = X.e11.embed(30);
    CHECK(ce.re.abs() < BigFloat::ulp(30, 4));
    CHECK(ce.im.to_double() == doctest::Approx(-0.70710678).epsilon(1e-7));
    CHECK(X.e12.embed(30).re.to_double() == doctest::Approx(0.70710678).epsilon(1e-7));
}

TEST_CASE("Pprime generators") {
    auto gens = build_generators(make(Family::Pprime, 1, 1));
    REQUIRE(gens.size() == 3);
    const auto& Z = gens[2];
    // Z = beta/(i-1) [[1, -i], [-1, -i]]
    Cyclo beta = Cyclo::root(3, 1);
    Cyclo i = Cyclo::root(4, 1);
    Cyclo s = beta * (i - Cyclo::one()).inverse();
    CHECK(Z.e11 == s);
    CHECK(Z.e12 == s * (-i));
    CHECK(Z.det() == beta * beta);
}

TEST_CASE("scalar cofactor appended when p > 1") {
    auto gens = build_generators(make(Family::Q, 1, 2, 3));
    REQUIRE(gens.size() == 3);
    CHECK(gens[2].e11 == Cyclo::root(3, 1));
    CHECK(gens[2].e12.is_zero());
    CHECK(gens[2].e11 == gens[2].e22);
}

TEST_CASE("enumeration sizes and identity first") {
    CHECK(enumerate_elements(make(Family::Trivial)).size() == 1);
    CHECK(enumerate_elements(make(Family::Q)).size() == 8);
    CHECK(enumerate_elements(make(Family::Q, 2)).size() == 16);
    CHECK(enumerate_elements(make(Family::D, 1, 2)).size() == 12);
    CHECK(enumerate_elements(make(Family::D, 3, 3)).size() == 56);
    CHECK(enumerate_elements(make(Family::P48)).size() == 48);
    CHECK(enumerate_elements(make(Family::P120)).size() == 120);
    CHECK(enumerate_elements(make(Family::Pprime, 1, 2)).size() == 72);
    CHECK(enumerate_elements(make(Family::Q, 1, 2, 3)).size() == 24);
    auto elems = enumerate_elements(make(Family::P48));
    CHECK(elems.front().mat.is_identity());
}

TEST_CASE("element cap") {
    EnumerateOptions opts;
    opts.element_cap = 10;
    CHECK_THROWS_AS(enumerate_elements(make(Family::P48), opts), CapExceededError);
}

TEST_CASE("presentation relations hold for every family") {
    for (const auto& spec :
         {make(Family::Q, 1), make(Family::Q, 3), make(Family::D, 1, 2), make(Family::D, 2, 3),
          make(Family::P48), make(Family::P120), make(Family::Pprime, 1, 1),
          make(Family::Pprime, 1, 2), make(Family::Q, 1, 2, 5), make(Family::D, 2, 2, 3)}) {
        for (const auto& [name, lhs, rhs] : presentation_relations(spec)) {
            INFO(spec.describe(), " relation ", name);
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("validation report, small groups direct") {
    for (const auto& spec : {make(Family::Trivial), make(Family::Trivial, 1, 2, 2),
                             make(Family::Q, 1), make(Family::Q, 1, 2, 3), make(Family::P48),
                             make(Family::Pprime, 1, 2), make(Family::D, 1, 2, 5)}) {
        ValidationReport rep = validate_group(spec);
        INFO(spec.describe(), "\n", rep.summary());
        REQUIRE(rep.all_pass());
    }
}

TEST_CASE("the m = 1 Pprime representation is reported as not fixed point free") {
    // With beta a primitive cube root, Z has eigenvalues {beta zeta_3,
    // beta zeta_3^2}, one of which is 1; eight of the 24 elements fix a
    // boundary point.  The validator reports exactly that check and the
    // offending word; every algebraic check still passes.
    ValidationReport rep = validate_group(make(Family::Pprime, 1, 1));
    CHECK_FALSE(rep.all_pass());
    long failed = 0;
    for (const auto& c : rep.checks) {
        if (!c.pass) {
            ++failed;
            CHECK(c.name.find("fixed point free") != std::string::npos);
            CHECK_FALSE(c.detail.empty());
        }
    }
    CHECK(failed == 1);
    auto elems = enumerate_base_elements(make(Family::Pprime, 1, 1));
    long bad = 0;
    for (const auto& e : elems)
        if (!e.mat.is_identity() && e.mat.det_minus_id().is_zero()) ++bad;
    CHECK(bad == 8);
}

TEST_CASE("validation of a large product uses the structured mode and passes") {
    GroupSpec spec = make(Family::Q, 5, 2, 13);  // order 520
    ValidationReport rep = validate_group(spec);
    CHECK(rep.mode == "structured");
    INFO(rep.summary());
    CHECK(rep.all_pass());
}

TEST_CASE("fixed point freeness is detected exactly") {
    // det(g - id) = 0 exactly when 1 is an eigenvalue.
    UnitaryMatrix diag = UnitaryMatrix::diagonal(Cyclo::one(), Cyclo::root(4, 1));
    CHECK(diag.det_minus_id().is_zero());
    UnitaryMatrix ok = UnitaryMatrix::diagonal(Cyclo::root(4, 1), Cyclo::root(4, 3));
    CHECK(!ok.det_minus_id().is_zero());
}

TEST_CASE("unitarity is exact") {
    auto elems = enumerate_elements(make(Family::P120));
    for (const auto& e : elems) REQUIRE(e.mat.is_unitary());
}

TEST_CASE("phi at zero") {
    CHECK(phi_at_zero(make(Family::Q)) == Cyclo::rational(8));
    CHECK(phi_at_zero(make(Family::P48)) == Cyclo::rational(48));
    CHECK(phi_at_zero(make(Family::P120)) == Cyclo::rational(120));
    CHECK(phi_at_zero(make(Family::Q, 1, 2, 3)).is_zero());
    CHECK(phi_at_zero(make(Family::Trivial)) == Cyclo::one());
    CHECK(phi_at_zero(make(Family::Trivial, 1, 2, 2)) == Cyclo::rational(2));
    // det X = -b is not 1 for m >= 3, so the kernel value vanishes
    CHECK(phi_at_zero(make(Family::D, 1, 3)).is_zero());
    CHECK(phi_at_zero(make(Family::D, 1, 2)) == Cyclo::rational(12));
    // Pprime has det Z = beta^2, never inside SU(2)
    CHECK(phi_at_zero(make(Family::Pprime, 1, 1)).is_zero());
}

TEST_CASE("alternate Galois root choices still give valid groups") {
    GroupSpec spec = make(Family::P48);
    spec.roots.a = 3;
    ValidationReport rep = validate_group(spec);
    INFO(rep.summary());
    CHECK(rep.all_pass());
    GroupSpec q = make(Family::Q, 2, 2, 3);
    q.roots.a = 3;
    q.roots.u = 2;
    CHECK(validate_group(q).all_pass());
}
