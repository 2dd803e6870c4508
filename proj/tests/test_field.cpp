#include <algorithm>
#include <set>

#include "doctest.h"
#include "mw128/field.hpp"
#include "test_util.hpp"

using namespace mw128;
using mw128::test::Rng;
using mw128::test::default_field;

TEST_CASE("log/antilog tables agree with the carry-less multiplication oracle") {
    const Field& f = default_field();
    Rng rng(0x5eed0001);
    for (int i = 0; i < 10000; ++i) {
        fe x = rng.nonzero(), y = rng.nonzero();
        fe via_log = f.exp_of(f.log_of(x) + f.log_of(y));
        CHECK(via_log == f.ref_mul(x, y));
        CHECK(f.mul(x, y) == f.ref_mul(x, y));
    }
    CHECK(f.mul(0, 7) == 0);
    CHECK(f.mul(7, 0) == 0);
}

TEST_CASE("generator has multiplicative order exactly 4095") {
    const Field& f = default_field();
    CHECK(f.pw(f.generator(), 4095) == 1);
    for (int p : {3, 5, 7, 13}) CHECK(f.pw(f.generator(), 4095 / p) != 1);
}

TEST_CASE("every nonzero element times its inverse is 1") {
    const Field& f = default_field();
    for (int x = 1; x < kFieldSize; ++x) CHECK(f.mul(fe(x), f.inv(fe(x))) == 1);
    CHECK_THROWS_AS(f.inv(0), FieldError);
    CHECK_THROWS_AS(f.pw(0, -1), FieldError);
}

TEST_CASE("squaring and square root are mutually inverse bijections") {
    const Field& f = default_field();
    for (int x = 0; x < kFieldSize; ++x) {
        CHECK(f.sqrt(f.sq(fe(x))) == fe(x));
        CHECK(f.sq(f.sqrt(fe(x))) == fe(x));
        CHECK(f.frob_pow(fe(x), -1) == f.sqrt(fe(x)));
    }
}

TEST_CASE("frobenius is additive over the whole field") {
    const Field& f = default_field();
    for (int x = 0; x < kFieldSize; ++x)
        for (int y = x; y < kFieldSize; y += 37)  // deterministic lattice sample
            CHECK(f.sq(fe(x ^ y)) == (f.sq(fe(x)) ^ f.sq(fe(y))));
}

TEST_CASE("trace basics: zero, one, and the 2048/2048 split") {
    const Field& f = default_field();
    CHECK(f.trace(0) == 0);
    CHECK(f.trace(1) == 0);
    int ones = 0;
    for (int x = 0; x < kFieldSize; ++x) ones += f.trace(fe(x));
    CHECK(ones == 2048);
}

TEST_CASE("trace of x^2+x vanishes and every trace-0 element has 2 preimages") {
    const Field& f = default_field();
    std::array<int, kFieldSize> count{};
    for (int x = 0; x < kFieldSize; ++x) {
        fe c = f.sq(fe(x)) ^ fe(x);
        CHECK(f.trace(c) == 0);
        ++count[c];
    }
    for (int c = 0; c < kFieldSize; ++c)
        CHECK(count[c] == (f.trace(fe(c)) ? 0 : 2));
}

TEST_CASE("frob_pow has order 12 and fixes exactly GF(16) at m = 4") {
    const Field& f = default_field();
    int fixed4 = 0;
    for (int x = 0; x < kFieldSize; ++x) {
        CHECK(f.frob_pow(fe(x), 12) == fe(x));
        CHECK(f.sq(f.frob_pow(fe(x), -1)) == fe(x));
        CHECK(f.frob_pow(fe(x), 1) == f.sq(fe(x)));
        if (f.frob_pow(fe(x), 4) == fe(x)) ++fixed4;
    }
    CHECK(fixed4 == 16);
}

TEST_CASE("a6 is the smallest trace-1 element and deterministic across runs") {
    const Field& f = default_field();
    fe a6 = pick_a6(f);
    CHECK(f.trace(a6) == 1);
    for (fe x = 0; x < a6; ++x) CHECK(f.trace(x) == 0);
    Field again{FieldConfig{}};
    CHECK(pick_a6(again) == a6);
}

TEST_CASE("roots of unity") {
    const Field& f = default_field();
    auto r65 = f.roots_of_unity(65);
    CHECK(r65.size() == 65);
    std::set<fe> distinct(r65.begin(), r65.end());
    CHECK(distinct.size() == 65);
    for (fe a : r65) CHECK(f.pw(a, 65) == 1);

    auto r3 = f.roots_of_unity(3);
    CHECK(r3.size() == 3);
    CHECK(r3[0] == 1);
    for (fe w : {r3[1], r3[2]})
        CHECK((f.sq(w) ^ w ^ 1) == 0);  // primitive cube roots solve w^2+w+1=0

    CHECK(f.roots_of_unity(1) == std::vector<fe>{1});
    CHECK_THROWS_AS(f.roots_of_unity(2), FieldError);
}

TEST_CASE("artin-schreier solve") {
    const Field& f = default_field();
    auto z = f.artin_schreier_solve(0);
    REQUIRE(z.has_value());
    CHECK(z->first == 0);
    CHECK(z->second == 1);
    CHECK_FALSE(f.artin_schreier_solve(f.a6()).has_value());
    Rng rng(0x5eed0002);
    for (int i = 0; i < 2000; ++i) {
        fe c = rng.element();
        auto s = f.artin_schreier_solve(c);
        CHECK(s.has_value() == (f.trace(c) == 0));
        if (s) {
            CHECK((f.sq(s->first) ^ s->first) == c);
            CHECK((f.sq(s->second) ^ s->second) == c);
            CHECK(s->second == (s->first ^ 1));
        }
    }
}

TEST_CASE("linearized maps: artin-schreier kernel and obstruction") {
    const Field& f = default_field();
    LinearizedMap L = LinearizedMap::from_additive(f, {1, 1});  // X + X^2
    CHECK(linearized_solve(L, 0) == std::vector<fe>({0, 1}));
    fe v1 = f.a6();  // trace 1
    CHECK(linearized_solve(L, v1).empty());

    LinearizedMap L4 = LinearizedMap::from_additive(f, {1, 0, 1});  // X + X^4
    fe img = L4.apply(0x123);
    auto sols = linearized_solve(L4, img);
    CHECK(sols.size() == 4);
    for (fe s : sols) CHECK(L4.apply(s) == img);
}

TEST_CASE("linearized solve agrees with brute force over the field") {
    
    Rng rng(0x5eed0003);
    for (int trial = 0; trial < 100; ++trial) {
        LinearizedMap L;
        for (auto& c : L.col) c = rng.element();
        fe v = rng.element();
        std::vector<fe> brute;
        for (int x = 0; x < kFieldSize; ++x)
            if (L.apply(fe(x)) == v) brute.push_back(fe(x));
        CHECK(linearized_solve(L, v) == brute);
    }
}

TEST_CASE("reducible moduli are rejected with a factor witness") {
    auto w = reducibility_witness(0x1001);  // x^12 + 1
    REQUIRE(w.has_value());
    CHECK(gf2x_deg(*w) > 0);
    CHECK(gf2x_deg(*w) < 12);
    CHECK(gf2x_mod(0x1001, *w) == 0);

    FieldConfig bad;
    bad.modulus = 0x1001;
    CHECK_THROWS_AS(Field{bad}, FieldError);

    CHECK_FALSE(reducibility_witness(0x1053).has_value());
}

TEST_CASE("alternate irreducible modulus builds a working field") {
    const Field& g = mw128::test::alt_field();
    CHECK(g.modulus() != default_field().modulus());
    CHECK(g.trace(g.a6()) == 1);
    Rng rng(0x5eed0004);
    for (int i = 0; i < 2000; ++i) {
        fe x = rng.element(), y = rng.element();
        CHECK(g.mul(x, y) == g.ref_mul(x, y));
    }
    CHECK(g.pw(g.generator(), 4095) == 1);
}
