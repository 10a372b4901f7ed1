#include <random>
#include <vector>

#include "dforms/error.hpp"
#include "dforms/satake.hpp"
#include "doctest.h"

using namespace dforms;

namespace {

int li(const LineTable* T, const std::vector<uint8_t>& v) {
  auto [i, a] = T->locate(v);
  REQUIRE(a == 1);
  return i;
}

RElement gen1(const LineTable* T, const std::vector<uint8_t>& v) {
  return RElement::monomial(T, {li(T, v)}, 1);
}

}  // namespace

TEST_SUITE("satake") {

TEST_CASE("line tables enumerate normalized representatives") {
  const LineTable* T = line_table(2, 2);
  CHECK(T->count() == 3);
  CHECK(line_table(2, 2) == T);
  for (int i = 0; i < T->count(); ++i) {
    const auto& v = T->rep(i);
    size_t f = 0;
    while (v[f] == 0) ++f;
    CHECK(v[f] == 1);
  }
  int ix = li(T, {1, 0}), iy = li(T, {0, 1}), is = li(T, {1, 1});
  CHECK(ix != iy);
  CHECK(iy != is);
  CHECK(ix != is);

  const LineTable* T3 = line_table(3, 2);
  CHECK(T3->count() == 4);
  auto [i01, a] = T3->locate({0, 1});
  auto [i02, b] = T3->locate({0, 2});
  CHECK(i01 == i02);
  CHECK(a == 1);
  CHECK(b == 2);

  CHECK(line_table(3, 3)->count() == 13);
  CHECK(line_table(4, 2)->count() == 5);
  CHECK_THROWS_AS(T->locate({0, 0}), invalid_input);
  CHECK_THROWS_AS(T->locate({1}), invalid_input);
  CHECK_THROWS_AS(T->locate({2, 0}), invalid_input);
}

TEST_CASE("clearing denominators matches hand expansion") {
  const LineTable* T = line_table(2, 2);
  const FieldDesc* F = T->field();
  MPoly x = MPoly::variable(F, 2, 0), y = MPoly::variable(F, 2, 1);

  RElement ux = gen1(T, {1, 0});
  CHECK(clear_denominators(ux) == y.mul(x.add(y)));

  CHECK(clear_denominators(RElement(T, 5)).is_zero());
  CHECK(clear_denominators(RElement::one(T)) == MPoly::constant(F, 2, 1));

  int ix = li(T, {1, 0}), iy = li(T, {0, 1}), is = li(T, {1, 1});
  RElement rel = RElement::monomial(T, {ix, iy}, 1)
                     .add(RElement::monomial(T, {ix, is}, 1))
                     .add(RElement::monomial(T, {iy, is}, 1));
  CHECK(!rel.is_zero());
  CHECK(r_is_zero(rel));

  RElement uy = gen1(T, {0, 1});
  CHECK(clear_denominators(ux.mul(uy)) ==
        clear_denominators(ux).mul(clear_denominators(uy)));
}

TEST_CASE("graded dimensions at small sizes") {
  CHECK(graded_dim(2, 2, 2) == 5);
  CHECK(graded_dim(2, 2, 0) == 1);
  CHECK(graded_dim(3, 2, 0) == 1);
  CHECK(graded_dim(3, 2, 1) == 7);
  struct Cell {
    int r, q;
  } cells[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}};
  for (auto c : cells) {
    long long lines = 1, p = 1;
    for (int i = 1; i < c.r; ++i) {
      p *= c.q;
      lines += p;
    }
    CHECK(graded_dim(c.r, c.q, 1) == lines);
  }
}

TEST_CASE("closed dimension formula") {
  for (int q : {2, 3, 4})
    for (int k = 0; k <= 5; ++k) CHECK(dim_formula(2, q, k) == 1 + q * k);
  CHECK(dim_formula(2, 2, 3) == 7);
  for (int q : {2, 3, 5})
    for (int k = 0; k <= 4; ++k) CHECK(dim_formula(1, q, k) == 1);
  CHECK(dim_formula(3, 2, 4) == 73);
  CHECK(dim_formula(3, 2, 4) == 1 + 2 * 4 + 4 * 4 + 8 * 6);
  CHECK_THROWS_AS(dim_formula(0, 2, 1), invalid_input);
  CHECK_THROWS_AS(dim_formula(2, 1, 1), invalid_input);
  CHECK_THROWS_AS(dim_formula(2, 2, -1), invalid_input);
}

TEST_CASE("span oracle equals closed formula on a small grid") {
  struct Cell {
    int r, q, kmax;
  } cells[] = {{2, 2, 5}, {2, 3, 3}, {3, 2, 3}, {2, 4, 2}, {3, 3, 2}};
  for (auto c : cells)
    for (int k = 0; k <= c.kmax; ++k)
      CHECK(graded_dim(c.r, c.q, k) == dim_formula(c.r, c.q, k));
}

TEST_CASE("universal coefficients") {
  for (int q : {2, 3, 5}) {
    UniversalFamily U = universal_coeffs(1, q);
    REQUIRE(U.c.size() == 1);
    const LineTable* T = line_table(q, 1);
    RElement expected = RElement::monomial(
        T, std::vector<int>(size_t(q) - 1, 0), T->field()->neg(1));
    CHECK(U.c[0] == expected);
  }

  UniversalFamily U2 = universal_coeffs(2, 2);
  const LineTable* T = line_table(2, 2);
  int ix = li(T, {1, 0}), iy = li(T, {0, 1}), is = li(T, {1, 1});
  RElement c1 = gen1(T, {1, 0}).add(gen1(T, {0, 1})).add(gen1(T, {1, 1}));
  CHECK(U2.c[0] == c1);
  CHECK(U2.c[1] == RElement::monomial(T, {ix, iy, is}, 1));
  CHECK(U2.c[0].degree() == 1);
  CHECK(U2.c[1].degree() == 3);

  UniversalFamily U23 = universal_coeffs(2, 3);
  CHECK(U23.c[0].degree() == 2);
  CHECK(U23.c[1].degree() == 8);
  CHECK(!U23.c[1].is_zero());

  UniversalFamily U32 = universal_coeffs(3, 2);
  CHECK(U32.c[0].degree() == 1);
  CHECK(U32.c[1].degree() == 3);
  CHECK(U32.c[2].degree() == 7);
  CHECK(!U32.c[2].is_zero());
}

TEST_CASE("universal coefficients are general-linear invariants") {
  struct Cell {
    int r, q;
  } cells[] = {{2, 2}, {2, 3}, {3, 2}};
  for (auto cell : cells) {
    UniversalFamily U = universal_coeffs(cell.r, cell.q);
    SubgroupGens G = gl_gens(field_q(cell.q), cell.r);
    for (const auto& g : G.gens)
      for (const auto& c : U.c) CHECK(group_act(c, g) == c);
  }
}

TEST_CASE("group action on generators") {
  const LineTable* T = line_table(2, 2);
  const FieldDesc* F2 = T->field();
  MatFq g(F2, 2, 2);
  g.set(0, 0, 1);
  g.set(0, 1, 1);
  g.set(1, 1, 1);
  CHECK(group_act(gen1(T, {1, 0}), g) == gen1(T, {1, 1}));
  CHECK(group_act(gen1(T, {0, 1}), g) == gen1(T, {0, 1}));

  const FieldDesc* F3 = field_q(3);
  const LineTable* T3 = line_table(3, 2);
  auto elems = group_elements(gl_gens(F3, 2));
  std::mt19937 rng(4207);
  std::uniform_int_distribution<size_t> pick(0, elems.size() - 1);
  std::uniform_int_distribution<int> coeff(0, 2);
  for (int rep = 0; rep < 30; ++rep) {
    RElement f(T3, 2);
    for (int a = 0; a < T3->count(); ++a)
      for (int b = a; b < T3->count(); ++b)
        f = f.add(RElement::monomial(T3, {a, b}, uint8_t(coeff(rng))));
    MatFq ga = elems[pick(rng)], gb = elems[pick(rng)];
    CHECK(group_act(group_act(f, ga), gb) == group_act(f, ga.mul(gb)));
  }

  MatFq sing(F2, 2, 2);
  CHECK_THROWS_AS(group_act(gen1(T, {1, 0}), sing), invalid_input);
  MatFq wrong = MatFq::identity(F3, 2);
  CHECK_THROWS_AS(group_act(gen1(T, {1, 0}), wrong), invalid_input);
}

TEST_CASE("invariant dimensions for standard subgroups") {
  const FieldDesc* F2 = field_q(2);
  for (int k = 0; k <= 3; ++k)
    CHECK(invariant_dim(trivial_gens(F2, 2), k) == graded_dim(2, 2, k));
  CHECK(invariant_dim(unipotent_gens(F2, 2), 2) == 3);
  CHECK(invariant_dim(unipotent_gens(F2, 2), 1) == 2);
  CHECK(invariant_dim(gl_gens(F2, 2), 3) == 2);

  const FieldDesc* F3 = field_q(3);
  for (int k = 0; k <= 3; ++k)
    CHECK(invariant_dim(unipotent_gens(F3, 2), k) == k + 1);
  CHECK(invariant_dim(sl_gens(F3, 2), 2) == 1);
  CHECK(invariant_dim(sl_gens(F3, 2), 4) == 2);
  CHECK(invariant_dim(gl_gens(F3, 2), 2) == 1);
  CHECK(invariant_dim(gl_gens(F3, 2), 3) == 0);
}

TEST_CASE("weighted Hilbert counts") {
  for (int r : {1, 2, 3}) {
    std::vector<int> ones(size_t(r), 1);
    long long expect = 1;
    for (int k = 0; k <= 6; ++k) {
      // binomial(k+r-1, r-1)
      long long b = 1;
      for (int i = 1; i <= r - 1; ++i) b = b * (k + i) / i;
      expect = b;
      CHECK(weighted_hilbert(ones, k) == expect);
    }
  }
  CHECK(weighted_hilbert({1, 3}, 3) == 2);
  CHECK(weighted_hilbert({2, 8}, 10) == 2);
  CHECK(weighted_hilbert({2, 8}, 0) == 1);
  CHECK_THROWS_AS(weighted_hilbert({}, 1), invalid_input);
  CHECK_THROWS_AS(weighted_hilbert({1, 0}, 1), invalid_input);

  CHECK(weights_unipotent(3) == std::vector<int>({1, 1, 1}));
  CHECK(weights_sl(2, 3) == std::vector<int>({2, 4}));
  CHECK(weights_gl(2, 3) == std::vector<int>({2, 8}));
  CHECK(weights_sl(1, 5) == std::vector<int>({1}));
  CHECK(weights_gl(3, 2) == std::vector<int>({1, 3, 7}));
}

TEST_CASE("weighted monomials in the universal coefficients are independent") {
  UniversalFamily U = universal_coeffs(2, 2);
  for (int k = 0; k <= 4; ++k) {
    std::vector<MPoly> cleared;
    for (int a = 0; a <= k; ++a) {
      for (int b = 0; 3 * b <= k - a; ++b) {
        if (a + 3 * b != k) continue;
        RElement m = RElement::one(U.table);
        for (int i = 0; i < a; ++i) m = m.mul(U.c[0]);
        for (int i = 0; i < b; ++i) m = m.mul(U.c[1]);
        cleared.push_back(clear_denominators(m));
      }
    }
    CHECK(span_dim(cleared) == weighted_hilbert({1, 3}, k));
  }

  UniversalFamily U3 = universal_coeffs(2, 3);
  CHECK(span_dim({clear_denominators(U3.c[0])}) == weighted_hilbert({2, 8}, 2));
}

TEST_CASE("stratum specialization") {
  UniversalFamily U = universal_coeffs(2, 2);
  StratumLabel id2{{{1, 0}, {0, 1}}};
  UniversalFamily V = specialize_stratum(U, id2);
  CHECK(V.r == 2);
  CHECK(V.table == U.table);
  REQUIRE(V.c.size() == 2);
  CHECK(V.c[0] == U.c[0]);
  CHECK(V.c[1] == U.c[1]);

  StratumLabel lineX{{{1, 0}}};
  UniversalFamily W = specialize_stratum(U, lineX);
  CHECK(W.r == 1);
  REQUIRE(W.c.size() == 1);
  CHECK(W.c[0] == universal_coeffs(1, 2).c[0]);
  CHECK(W.c[0] == RElement::monomial(line_table(2, 1), {0}, 1));
  CHECK(specialize_relement(U.c[1], lineX).is_zero());

  StratumLabel dup{{{1, 0}, {1, 0}}};
  CHECK(specialize_stratum(U, dup).r == 1);

  UniversalFamily U3 = universal_coeffs(3, 2);
  UniversalFamily U2 = universal_coeffs(2, 2);
  int hyper = 0;
  for (const auto& S : all_subspaces(2, 3)) {
    UniversalFamily VS = specialize_stratum(U3, S);
    CHECK(VS.r == int(S.basis.size()));
    if (VS.r == 2) {
      ++hyper;
      CHECK(VS.c[0] == U2.c[0]);
      CHECK(VS.c[1] == U2.c[1]);
    }
    if (VS.r == 1) CHECK(VS.c[0] == universal_coeffs(1, 2).c[0]);
  }
  CHECK(hyper == 7);

  CHECK_THROWS_AS(specialize_stratum(U, StratumLabel{{}}), invalid_input);
  CHECK_THROWS_AS(specialize_stratum(U, StratumLabel{{{0, 0}}}), invalid_input);
  CHECK_THROWS_AS(specialize_stratum(U, StratumLabel{{{2, 0}}}), invalid_input);
  CHECK_THROWS_AS(specialize_stratum(U, StratumLabel{{{1}}}), invalid_input);
}

TEST_CASE("subspace enumeration") {
  CHECK(all_subspaces(2, 2).size() == 4);
  CHECK(all_subspaces(3, 2).size() == 5);
  auto subs = all_subspaces(2, 3);
  CHECK(subs.size() == 15);
  int by_rank[4] = {0, 0, 0, 0};
  for (const auto& s : subs) ++by_rank[s.basis.size()];
  CHECK(by_rank[1] == 7);
  CHECK(by_rank[2] == 7);
  CHECK(by_rank[3] == 1);
}

TEST_CASE("level dimension formula") {
  const FieldDesc* F2 = field_q(2);
  const FieldDesc* F3 = field_q(3);
  for (int k = 0; k <= 4; ++k) {
    CHECK(level_dim_formula(trivial_gens(F2, 2), 2, 2, k) == 1 + 2 * k);
    CHECK(level_dim_formula(trivial_gens(F3, 2), 2, 3, k) == 1 + 3 * k);
    CHECK(level_dim_formula(unipotent_gens(F2, 2), 2, 2, k) == k + 1);
  }
  CHECK(level_dim_formula(unipotent_gens(F2, 2), 2, 2, 3) == 4);
  for (int k = 0; k <= 3; ++k)
    CHECK(level_dim_formula(unipotent_gens(F3, 2), 2, 3, k) ==
          invariant_dim(unipotent_gens(F3, 2), k));
  CHECK_THROWS_AS(level_dim_formula(gl_gens(F3, 2), 2, 3, 2), invalid_input);
  CHECK_THROWS_AS(level_dim_formula(gl_gens(F2, 2), 2, 2, 2), invalid_input);
  CHECK_THROWS_AS(level_dim_formula(trivial_gens(F2, 2), 2, 3, 1),
                  invalid_input);
}

TEST_CASE("trace across subgroups") {
  const FieldDesc* F2 = field_q(2);
  UniversalFamily U22 = universal_coeffs(2, 2);
  RElement c1 = U22.c[0];
  SubgroupGens Ub = unipotent_gens(F2, 2);

  CHECK(trace_invariants(c1, Ub, Ub) == c1);

  RElement tr = trace_invariants(c1, trivial_gens(F2, 2), Ub);
  CHECK(tr.is_zero());
  CHECK(r_is_zero(tr));

  const FieldDesc* F3 = field_q(3);
  RElement c1q3 = universal_coeffs(2, 3).c[0];
  RElement tr2 = trace_invariants(c1q3, sl_gens(F3, 2), gl_gens(F3, 2));
  CHECK(r_equal(tr2, c1q3.scale(2)));
  CHECK(!r_is_zero(tr2));

  const LineTable* T = line_table(2, 2);
  RElement uy = gen1(T, {0, 1});
  RElement tr3 = trace_invariants(uy, Ub, gl_gens(F2, 2));
  for (const auto& g : gl_gens(F2, 2).gens)
    CHECK(r_equal(group_act(tr3, g), tr3));
  CHECK(tr3 == U22.c[0]);

  CHECK_THROWS_AS(trace_invariants(c1q3, gl_gens(F3, 2), sl_gens(F3, 2)),
                  invalid_input);
  CHECK_THROWS_AS(trace_invariants(gen1(T, {1, 0}), Ub, Ub), invalid_input);
}

TEST_CASE("resource caps and malformed input") {
  size_t saved = caps().monomials;
  caps().monomials = 5;
  CHECK_THROWS_AS(graded_dim(2, 2, 5), cap_exceeded);
  caps().monomials = saved;

  CHECK_THROWS_AS(universal_coeffs(6, 2), cap_exceeded);
  CHECK_THROWS_AS(line_table(6, 2), invalid_input);
  CHECK_THROWS_AS(RElement::monomial(line_table(2, 2), {9}, 1), invalid_input);

  const LineTable* T = line_table(2, 2);
  const LineTable* T3 = line_table(3, 2);
  CHECK_THROWS_AS(gen1(T, {1, 0}).add(gen1(T3, {1, 0})), invalid_input);
  CHECK_THROWS_AS(
      gen1(T, {1, 0}).add(RElement::monomial(T, {0, 1}, 1)), invalid_input);
}

}  // TEST_SUITE
