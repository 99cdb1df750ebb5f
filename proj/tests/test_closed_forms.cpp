#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bqke/closed_forms.hpp"
#include "bqke/errors.hpp"

using namespace bqke;

TEST_CASE("F pinned values") {
    CHECK(F_closed(1, 1) == RationalQ(0));
    CHECK(F_closed(2, 1) == RationalQ(-1, 16));
    CHECK(F_closed(4, 4) == RationalQ(-7, 16));
    CHECK(RationalQ(F_closed(12, 3) * 720) == RationalQ(17875));
    CHECK(F_bruteforce(2, 1) == RationalQ(-1, 16));
    CHECK(F_bruteforce(4, 1) == RationalQ(-1, 16));
    CHECK(F_bruteforce(1, 1) == RationalQ(0));
    CHECK(series_oracle(2, 1, 4) == RationalQ(-1, 16));
    CHECK(series_oracle(4, 4, 4) == RationalQ(-7, 16));
    // classic first-order identity: sum 1/(1-xi) over nontrivial cube roots
    CHECK(series_oracle(3, 3, 1) == RationalQ(1));
}

TEST_CASE("F routes agree exactly for all 1 <= r <= N <= 60") {
    for (long N = 1; N <= 60; ++N) {
        for (long r = 1; r <= N; ++r) {
            RationalQ closed = F_closed(N, r);
            REQUIRE(closed == F_bruteforce(N, r));
            REQUIRE(closed == series_oracle(N, r, 4));
        }
    }
}

TEST_CASE("720 F is an integer congruent to the parity polynomial mod N") {
    for (long N = 1; N <= 60; ++N) {
        for (long r = 1; r <= N; ++r) {
            RationalQ scaled = F_closed(N, r) * 720;
            REQUIRE(is_integer(scaled));
            BigInt diff = scaled.get_num() - parity_poly(r);
            REQUIRE(mod_floor(diff, BigInt(N)) == 0);
        }
    }
}

TEST_CASE("parity polynomial") {
    CHECK(parity_poly(0) == -251);
    CHECK(parity_poly(1) == 19);
    CHECK(parity_poly(8) == -36731);
    for (long r = -20; r <= 20; ++r) {
        REQUIRE(mpz_odd_p(parity_poly(r).get_mpz_t()));
    }
}

TEST_CASE("F shift law and arbitrary r reduction") {
    for (long N : {2, 7, 12, 24}) {
        for (long r = -5; r <= 2 * N; ++r) {
            REQUIRE(F_closed(N, r) == F_closed(N, r + N));
        }
    }
    // 2r - 1 frequently exceeds N in the lemma combinations
    CHECK(F_closed(12, 15) == F_closed(12, 3));
}

TEST_CASE("brute force cap") {
    CHECK_THROWS_AS(F_bruteforce(600, 1), CapExceededError);
}

TEST_CASE("series oracle rejects out-of-range r") {
    CHECK_THROWS_AS(series_oracle(4, 0, 4), InvalidSpecError);
    CHECK_THROWS_AS(series_oracle(4, 5, 4), InvalidSpecError);
    CHECK_THROWS_AS(series_oracle(4, 1, 0), InvalidSpecError);
}

TEST_CASE("CRT residues") {
    GroupSpec p48;
    p48.family = Family::P48;
    p48.p = 5;
    ResidueSpec r = crt_residue(p48);
    CHECK(r.r == 32);  // 6p + 2 when p = 1 mod 4
    GroupSpec p120;
    p120.family = Family::P120;
    p120.p = 7;
    CHECK(crt_residue(p120).r == 30);  // 4p + 2 when p = 2 mod 5
    GroupSpec q13;
    q13.family = Family::Q;
    q13.n = 1;
    q13.p = 3;
    CHECK(crt_residue(q13).r == 8);  // r = 0 mod 4, r = 2 mod 3
    CHECK_THROWS_AS(crt_solve(4, 0, 6, 1), InvalidSpecError);
}

TEST_CASE("C2 closed forms at p = 1") {
    GroupSpec p48;
    p48.family = Family::P48;
    CHECK(c2_closed(p48) == make_rational(-2097, 144));
    GroupSpec p120;
    p120.family = Family::P120;
    // -265/9 - 20 + 25/18 - 1/144 (p = 1 branch)
    RationalQ expect = RationalQ(-265, 9) - 20 + RationalQ(25, 18) - RationalQ(1, 144);
    CHECK(c2_closed(p120) == expect);
    GroupSpec pp;
    pp.family = Family::Pprime;
    pp.m = 1;
    CHECK(c2_closed(pp) == make_rational(207, 144));
}

TEST_CASE("C2 lemma polynomial equals the F combination for coprime p <= 50") {
    // c2_closed cross-checks the two routes internally and throws on
    // disagreement; this drives it across the range.
    for (long p = 1; p <= 50; ++p) {
        if (gcd_long(p, 48) == 1) {
            GroupSpec s;
            s.family = Family::P48;
            s.p = p;
            CHECK_NOTHROW(c2_closed(s));
        }
        if (gcd_long(p, 120) == 1) {
            GroupSpec s;
            s.family = Family::P120;
            s.p = p;
            CHECK_NOTHROW(c2_closed(s));
        }
        for (long m = 1; m <= 2; ++m) {
            GroupSpec s;
            s.family = Family::Pprime;
            s.m = m;
            s.p = p;
            if (gcd_long(p, s.base_order()) != 1) continue;
            CHECK_NOTHROW(c2_closed(s));
        }
    }
}

TEST_CASE("closed form for Q/D and the scalar cyclic specialization") {
    GroupSpec q13;
    q13.family = Family::Q;
    q13.n = 1;
    q13.p = 3;
    CHECK(c_closed_qd(q13) == make_rational(124555, 720));
    GroupSpec z2;
    z2.family = Family::Trivial;
    z2.p = 2;
    CHECK(c_closed_qd(z2) == RationalQ(-1, 16));
    // hypothesis gate: p = 1 has surviving anti-diagonal terms
    GroupSpec q1;
    q1.family = Family::Q;
    q1.n = 1;
    CHECK_THROWS_AS(c_closed_qd(q1), InvalidSpecError);
}
