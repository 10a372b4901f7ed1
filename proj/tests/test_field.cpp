#include "doctest.h"
#include "dforms/field.hpp"

#include <random>

using namespace dforms;

TEST_SUITE("field") {

TEST_CASE("prime field construction") {
  const FieldDesc* F2 = field_make(2, 1);
  CHECK(F2->q == 2);
  CHECK(F2->size == 2);
  CHECK(F2->prime_field());
  CHECK(F2->add(1, 1) == 0);
  CHECK(F2->mul(1, 1) == 1);
}

TEST_CASE("descriptors are interned") {
  CHECK(field_make(3, 1) == field_make(3, 1));
  CHECK(field_make(2, 2) == field_q(4));
  CHECK(field_make(2, 1) != field_make(3, 1));
}

TEST_CASE("F_4 with explicit modulus w^2+w+1") {
  const FieldDesc* F4 = field_make(2, 2, {1, 1, 1});
  CHECK(F4->q == 4);
  // encodings: 0, 1, w=2, w+1=3
  CHECK(F4->mul(2, 2) == 3);        // w*w = w+1
  CHECK(F4->el_frobq(2, 1) == 2);   // q-power fixes F_q pointwise
  CHECK(F4->add(3, 3) == 0);        // char 2
  CHECK(F4->inv(2) == 3);           // w*(w+1) = w^2+w = 1
}

TEST_CASE("F_4 as a quadratic tower over F_2") {
  // same field, but structured as F_2[w]/(w^2+w+1); here frobenius is the
  // 2-power map, the twist used by skew polynomials over base F_2
  const FieldDesc* F4 = field_make(2, 1, {}, 2);
  CHECK(F4->q == 2);
  CHECK(F4->size == 4);
  CHECK(F4->fqmod == std::vector<uint8_t>{1, 1, 1});
  CHECK(F4->el_mul(2, 2) == 3);    // w*w = w+1
  CHECK(F4->el_frobq(2, 1) == 3);  // w^2 = w+1
}

TEST_CASE("reducible or invalid moduli are rejected") {
  CHECK_THROWS_AS(field_make(2, 2, {1, 0, 1}), invalid_input);  // w^2+1=(w+1)^2
  CHECK_THROWS_AS(field_make(4, 1), invalid_input);             // 4 not prime
  CHECK_THROWS_AS(field_make(2, 2, {1, 1}), invalid_input);     // wrong degree
  CHECK_THROWS_AS(field_q(12), invalid_input);                  // not a prime power
}

TEST_CASE("default moduli are the lexicographically smallest irreducibles") {
  CHECK(field_make(2, 2)->fpmod == std::vector<uint8_t>{1, 1, 1});     // w^2+w+1
  CHECK(field_make(2, 3)->fpmod == std::vector<uint8_t>{1, 1, 0, 1});  // w^3+w+1
  CHECK(field_make(3, 2)->fpmod == std::vector<uint8_t>{1, 0, 1});     // w^2+1
  // tower F_{4^2}: smallest irreducible is z^2+z+w over F_4
  const FieldDesc* T = field_tower(field_q(4), 2);
  CHECK(T->fqmod == std::vector<uint8_t>{2, 1, 1});
  CHECK(T->size == 16);
}

TEST_CASE("F_9 arithmetic") {
  const FieldDesc* F9 = field_q(9);
  CHECK(F9->fpmod == std::vector<uint8_t>{1, 0, 1});  // w^2+1
  CHECK(F9->mul(3, 3) == 2);                          // w*w = -1 = 2
  CHECK(F9->add(1, 2) == 0);                          // char 3
  for (int a = 1; a < 9; ++a) CHECK(F9->mul(a, F9->inv(uint8_t(a))) == 1);
}

TEST_CASE("element wrapper and error paths") {
  const FieldDesc* F4 = field_q(4);
  FieldElement w(F4, 2), one(F4, 1);
  CHECK(w.mul(w) == FieldElement(F4, 3));
  CHECK(w.add(w).is_zero());
  CHECK(w.pow(3).is_one());
  CHECK_THROWS_AS(FieldElement(F4, 0).inv(), invalid_input);
  FieldElement x3(field_q(3), 1);
  CHECK_THROWS_AS(one.add(x3), invalid_input);  // mismatched fields
  CHECK_THROWS_AS(FieldElement(F4, 7), invalid_input);
}

TEST_CASE("tower arithmetic against direct digit model") {
  // F_{4^2} = F_4[z]/(z^2+z+w): check distributivity / associativity samples
  const FieldDesc* T = field_tower(field_q(4), 2);
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    uint32_t a = rng() % T->size, b = rng() % T->size, c = rng() % T->size;
    CHECK(T->el_mul(a, T->el_add(b, c)) ==
          T->el_add(T->el_mul(a, b), T->el_mul(a, c)));
    CHECK(T->el_mul(T->el_mul(a, b), c) == T->el_mul(a, T->el_mul(b, c)));
  }
  for (uint32_t a = 1; a < T->size; ++a)
    CHECK(T->el_mul(a, T->el_inv(a)) == 1);
}

TEST_CASE("frobenius iterates to the identity on the whole field") {
  // all towers with q^n <= 2^12 in the supported sample set
  struct { int p, m, n; } cases[] = {
      {2, 1, 1}, {2, 2, 1}, {3, 1, 1}, {2, 2, 3}, {3, 1, 6}, {2, 2, 6},
      {5, 1, 4}, {2, 4, 3}, {13, 1, 2},
  };
  for (auto cs : cases) {
    const FieldDesc* F = field_make(cs.p, cs.m, {}, cs.n);
    REQUIRE(F->size <= (1u << 12));
    for (uint32_t a = 0; a < F->size; ++a) {
      CHECK(F->el_frobq(a, F->n) == a);          // q^n-power fixes F_{q^n}
      CHECK(F->el_frobq(a, F->m * F->n) == a);   // a fortiori m*n-fold
    }
    // frobenius is a field homomorphism (additivity spot check)
    std::mt19937 rng(11);
    for (int it = 0; it < 50; ++it) {
      uint32_t a = rng() % F->size, b = rng() % F->size;
      CHECK(F->el_frobq(F->el_add(a, b)) ==
            F->el_add(F->el_frobq(a), F->el_frobq(b)));
    }
  }
}

TEST_CASE("subfield embedding is encoding-stable") {
  const FieldDesc* T = field_make(3, 1, {}, 4);  // F_81 over F_3
  // encodings < q behave as F_q scalars inside the tower
  for (uint32_t a = 0; a < 3; ++a)
    for (uint32_t b = 0; b < 3; ++b) {
      CHECK(T->el_add(a, b) == field_q(3)->add(uint8_t(a), uint8_t(b)));
      CHECK(T->el_mul(a, b) == field_q(3)->mul(uint8_t(a), uint8_t(b)));
    }
}

TEST_CASE("element text round trip") {
  const FieldDesc* F7 = field_q(7);
  CHECK(FieldElement(F7, 5).text() == "5");
  CHECK(F7->el_parse("5") == 5);
  const FieldDesc* F4 = field_q(4);
  CHECK(FieldElement(F4, 3).text() == "1:1");
  CHECK(F4->el_parse("1:1") == 3);
  CHECK(F4->el_parse("0:1") == 2);
  const FieldDesc* T = field_tower(field_q(4), 2);
  for (uint32_t a = 0; a < T->size; ++a) CHECK(T->el_parse(T->el_text(a)) == a);
  CHECK_THROWS_AS(F4->el_parse("1"), invalid_input);
  CHECK_THROWS_AS(F7->el_parse("9"), invalid_input);
  CHECK_THROWS_AS(F7->el_parse("x"), invalid_input);
}

}  // TEST_SUITE
