#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bqke/cyclotomic.hpp"
#include "bqke/errors.hpp"

using namespace bqke;

namespace {

std::string poly_str(const std::vector<BigInt>& p) {
    std::string s;
    for (const auto& c : p) s += c.get_str() + " ";
    return s;
}

Cyclo random_value(std::mt19937& rng, long conductor) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    std::vector<RationalQ> coords(euler_phi(conductor));
    for (auto& c : coords) c = make_rational(num(rng), den(rng));
    return Cyclo::from_coords(conductor, std::move(coords));
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == std::vector<BigInt>{-1, 1});          // x - 1
    CHECK(cyclotomic_polynomial(8) == std::vector<BigInt>{1, 0, 0, 0, 1});  // x^4 + 1
    CHECK(cyclotomic_polynomial(12) == std::vector<BigInt>{1, 0, -1, 0, 1});
    INFO(poly_str(cyclotomic_polynomial(12)));
    // degree equals the totient
    for (long n : {2, 3, 6, 30, 105}) {
        CHECK(static_cast<long>(cyclotomic_polynomial(n).size()) == euler_phi(n) + 1);
    }
}

TEST_CASE("primitive roots and coprimality") {
    Cyclo i = primitive_root(4, 1);
    CHECK(i * i == Cyclo::rational(-1));
    CHECK(primitive_root(8, 3) == Cyclo::root(8, 3));
    CHECK_THROWS_AS(primitive_root(6, 2), InvalidSpecError);
}

TEST_CASE("root identities for every conductor up to 200") {
    for (long n = 1; n <= 200; ++n) {
        // zeta_n^n = 1 through the reduction table
        const auto& row = power_row(n, 0);
        CHECK(row[0] == 1);
        Cyclo z = Cyclo::root(n, 1);
        CHECK(z.pow(n) == Cyclo::one());
        // Phi_n(zeta_n) = 0
        auto phi = cyclotomic_polynomial(n);
        Cyclo acc = Cyclo::zero();
        for (std::size_t k = 0; k < phi.size(); ++k) {
            if (phi[k] == 0) continue;
            acc = acc + Cyclo::root(n, static_cast<long>(k)).scaled(RationalQ(phi[k]));
        }
        CHECK(acc.is_zero());
    }
}

TEST_CASE("inverse: monomials, binomials, zero") {
    CHECK(Cyclo::root(8, 1).inverse() == Cyclo::root(8, 7));
    Cyclo z = Cyclo::one() - Cyclo::root(4, 1);  // 1 - i
    Cyclo expect = (Cyclo::one() + Cyclo::root(4, 1)).scaled(make_rational(1, 2));
    CHECK(z.inverse() == expect);
    CHECK(z * z.inverse() == Cyclo::one());
    CHECK_THROWS_AS(Cyclo::zero().inverse(), DivisionByZeroError);
}

TEST_CASE("conjugation") {
    CHECK(Cyclo::root(4, 1).conj() == Cyclo::root(4, 3));
    CHECK(Cyclo::rational(make_rational(3, 4)).conj() == Cyclo::rational(make_rational(3, 4)));
    Cyclo real_comb = Cyclo::root(8, 1) + Cyclo::root(8, 1).inverse();
    CHECK(real_comb.conj() == real_comb);
}

TEST_CASE("field axioms on random samples") {
    std::mt19937 rng(20240811);
    for (long conductor : {5, 8, 12, 20}) {
        for (int rep = 0; rep < 20; ++rep) {
            Cyclo a = random_value(rng, conductor);
            Cyclo b = random_value(rng, conductor);
            Cyclo c = random_value(rng, conductor);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) CHECK(a * a.inverse() == Cyclo::one());
            CHECK(a.conj().conj() == a);
            // conj(a) * a embeds to a non-negative real
            Cyclo norm = a * a.conj();
            CHECK(norm.conj() == norm);
            CHECK(certified_sign(norm) >= 0);
        }
    }
}

TEST_CASE("cross conductor arithmetic lifts into Q(zeta_lcm)") {
    Cyclo a = Cyclo::root(4, 1);   // i
    Cyclo b = Cyclo::root(3, 1);
    Cyclo prod = a * b;
    CHECK(prod.conductor() == 12);
    CHECK(prod == Cyclo::root(12, 3 + 4));
    // zeta_6^2 lives in Q(zeta_3)
    CHECK(Cyclo::root(6, 2) == Cyclo::root(3, 1));
}

TEST_CASE("embedding") {
    auto i = Cyclo::root(4, 1).embed(30);
    CHECK(i.re.abs() < BigFloat::ulp(30, 4));
    CHECK((i.im - BigFloat::from_long(1, i.im.prec())).abs() < BigFloat::ulp(30, 4));
    // zeta_8 + zeta_8^-1 = sqrt(2)
    auto s = (Cyclo::root(8, 1) + Cyclo::root(8, 7)).embed(30);
    RationalQ approx = s.re.to_rational();
    RationalQ err = approx * approx - 2;
    if (err < 0) err = -err;
    CHECK(err < RationalQ(1, BigInt("1000000000000000000000000")));
    auto q = Cyclo::rational(make_rational(3, 4)).embed(30);
    CHECK(q.re.to_rational() == RationalQ(3, 4));
    CHECK_THROWS_AS(Cyclo::one().embed(8), InvalidSpecError);
}

TEST_CASE("embedding is a homomorphism numerically") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        Cyclo a = random_value(rng, 12);
        Cyclo b = random_value(rng, 12);
        auto pa = a.embed(30), pb = b.embed(30), pab = (a * b).embed(30);
        BigComplex prod = pa * pb;
        BigFloat diff = (prod - pab).abs2();
        // values are O(10^2); allow 10^(digits-2) relative slack squared
        CHECK(diff < BigFloat::from_rational(make_rational(1, pow10(40)), diff.prec()));
    }
}

TEST_CASE("galois embeddings select conjugate roots") {
    Cyclo z = Cyclo::root(5, 1);
    auto direct = z.galois(2).embed(30);
    auto expected = Cyclo::root(5, 2).embed(30);
    CHECK((direct.re - expected.re).abs() < BigFloat::ulp(30, 4));
    CHECK_THROWS_AS(z.galois(5), InvalidSpecError);
}

TEST_CASE("certified sign") {
    CHECK(certified_sign(Cyclo::zero()) == 0);
    CHECK(certified_sign(Cyclo::rational(make_rational(-7, 3))) == -1);
    Cyclo sqrt2 = Cyclo::root(8, 1) - Cyclo::root(8, 3);
    CHECK(certified_sign(sqrt2) == 1);
    CHECK(certified_sign(sqrt2 - Cyclo::rational(2)) == -1);  // sqrt2 < 2
    CHECK(cmp_real(sqrt2 * sqrt2, Cyclo::rational(2)) == 0);
    CHECK_THROWS_AS(certified_sign(Cyclo::root(4, 1)), CheckFailError);  // not real
}

TEST_CASE("exact string forms") {
    CHECK(Cyclo::rational(make_rational(-5, 3)).to_exact_string() == "-5/3");
    CHECK(Cyclo::root(4, 1).to_exact_string() == "[4; 0, 1]");
}
