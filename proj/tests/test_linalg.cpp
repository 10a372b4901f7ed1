#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "dforms/group.hpp"
#include "doctest.h"

using namespace dforms;

namespace {

MatFq random_matrix(const FieldDesc* F, int r, int c, std::mt19937& rng) {
  MatFq m(F, r, c);
  std::uniform_int_distribution<uint32_t> d(0, uint32_t(F->size - 1));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.set(i, j, uint8_t(d(rng)));
  return m;
}

// cofactor-expansion determinant, independent of row reduction
uint8_t det3(const MatFq& g) {
  const FieldDesc* F = g.field();
  auto minor2 = [&](int r0, int r1, int c0, int c1) {
    return F->el_sub(F->el_mul(g.at(r0, c0), g.at(r1, c1)),
                     F->el_mul(g.at(r0, c1), g.at(r1, c0)));
  };
  uint32_t d = F->el_mul(g.at(0, 0), minor2(1, 2, 1, 2));
  d = F->el_sub(d, F->el_mul(g.at(0, 1), minor2(1, 2, 0, 2)));
  d = F->el_add(d, F->el_mul(g.at(0, 2), minor2(1, 2, 0, 1)));
  return uint8_t(d);
}

// all r x r invertible matrices by exhausting every entry assignment
std::vector<MatFq> brute_gl(const FieldDesc* F, int r) {
  std::vector<MatFq> out;
  size_t cells = size_t(r) * r;
  std::vector<uint8_t> e(cells, 0);
  while (true) {
    MatFq m(F, r, r);
    for (size_t i = 0; i < cells; ++i) m.set(int(i / r), int(i % r), e[i]);
    if (m.invertible()) out.push_back(m);
    size_t i = 0;
    while (i < cells && ++e[i] == F->size) e[i++] = 0;
    if (i == cells) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("row reduction of the identity has full rank") {
  const FieldDesc* F = field_q(5);
  for (int r = 1; r <= 4; ++r) {
    RrefResult rr = mat_rref(MatFq::identity(F, r));
    CHECK(rr.rank == r);
    CHECK(rr.mat == MatFq::identity(F, r));
    CHECK(int(rr.pivots.size()) == r);
  }
}

TEST_CASE("equal rows collapse to rank one") {
  const FieldDesc* F = field_q(2);
  MatFq m(F, 2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 1);
  m.set(1, 0, 1);
  m.set(1, 1, 1);
  RrefResult rr = mat_rref(m);
  CHECK(rr.rank == 1);
  CHECK(rr.pivots == std::vector<int>{0});
}

TEST_CASE("rank 3 iff nonzero determinant on random 3x3 samples") {
  const FieldDesc* F = field_q(3);
  std::mt19937 rng(20260823);
  for (int t = 0; t < 100; ++t) {
    MatFq m = random_matrix(F, 3, 3, rng);
    CHECK((mat_rref(m).rank == 3) == (det3(m) != 0));
  }
}

TEST_CASE("row reduction is idempotent and rank ignores row order") {
  const FieldDesc* F = field_q(4);
  std::mt19937 rng(7);
  for (int t = 0; t < 120; ++t) {
    MatFq m = random_matrix(F, 3, 4, rng);
    RrefResult rr = mat_rref(m);
    RrefResult rr2 = mat_rref(rr.mat);
    CHECK(rr2.mat == rr.mat);
    CHECK(rr2.rank == rr.rank);
    std::vector<int> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    MatFq s(F, 3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) s.set(i, j, m.at(perm[i], j));
    CHECK(mat_rref(s).rank == rr.rank);
  }
}

TEST_CASE("matrix inverse and power") {
  const FieldDesc* F = field_q(4);
  std::mt19937 rng(11);
  MatFq id = MatFq::identity(F, 3);
  int found = 0;
  while (found < 25) {
    MatFq m = random_matrix(F, 3, 3, rng);
    if (!m.invertible()) continue;
    ++found;
    CHECK(m.mul(m.inverse()) == id);
    CHECK(m.inverse().mul(m) == id);
  }
  MatFq z(F, 2, 2);
  CHECK_THROWS_AS(z.inverse(), invalid_input);
  CHECK(z.pow(0) == MatFq::identity(F, 2));
}

TEST_CASE("element orders divide the group order") {
  const FieldDesc* F = field_q(3);
  for (const MatFq& g : group_elements(gl_gens(F, 2)))
    CHECK(g.pow(48) == MatFq::identity(F, 2));
}

TEST_CASE("closure sizes of standard groups") {
  CHECK(group_elements(gl_gens(field_q(2), 2)).size() == 6);
  CHECK(group_elements(trivial_gens(field_q(3), 2)) ==
        std::vector<MatFq>{MatFq::identity(field_q(3), 2)});
  CHECK(group_elements(unipotent_gens(field_q(4), 2)).size() == 4);
  CHECK(group_elements(gl_gens(field_q(3), 2)).size() == 48);
  CHECK(group_elements(sl_gens(field_q(3), 2)).size() == 24);
  CHECK(group_elements(unipotent_gens(field_q(2), 3)).size() == 8);
  CHECK(group_elements(gl_gens(field_q(2), 3)).size() == 168);
}

TEST_CASE("closures match exhaustive enumeration") {
  const FieldDesc* F = field_q(3);
  std::vector<MatFq> all = brute_gl(F, 2);
  CHECK(all.size() == 48);
  CHECK(group_elements(gl_gens(F, 2)) == all);

  std::vector<MatFq> sl;
  for (const MatFq& g : all) {
    uint32_t det = F->el_sub(F->el_mul(g.at(0, 0), g.at(1, 1)),
                             F->el_mul(g.at(0, 1), g.at(1, 0)));
    if (det == 1) sl.push_back(g);
  }
  CHECK(group_elements(sl_gens(F, 2)) == sl);

  std::vector<MatFq> j1;
  for (const MatFq& g : all)
    if (g.at(0, 0) == 1 && g.at(1, 0) == 0) j1.push_back(g);
  CHECK(j1.size() == 6);
  CHECK(group_elements(js_gens(F, 2, 1)) == j1);
}

TEST_CASE("first-columns-fixed subgroups in rank 3") {
  const FieldDesc* F = field_q(2);
  std::vector<MatFq> j1 = group_elements(js_gens(F, 3, 1));
  CHECK(j1.size() == 24);  // 2^2 choices of top row block times |GL_2(F_2)|
  for (const MatFq& g : j1) {
    CHECK(g.at(0, 0) == 1);
    CHECK(g.at(1, 0) == 0);
    CHECK(g.at(2, 0) == 0);
  }
  std::vector<MatFq> j2 = group_elements(js_gens(F, 3, 2));
  CHECK(j2.size() == 4);
  for (const MatFq& g : j2)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) CHECK(g.at(i, j) == (i == j ? 1 : 0));
  CHECK(group_elements(js_gens(F, 3, 3)) ==
        std::vector<MatFq>{MatFq::identity(F, 3)});
}

TEST_CASE("closures satisfy the group axioms") {
  for (const SubgroupGens& G :
       {gl_gens(field_q(2), 2), unipotent_gens(field_q(4), 2),
        js_gens(field_q(3), 2, 1), sl_gens(field_q(2), 2)}) {
    std::vector<MatFq> els = group_elements(G);
    CHECK(std::is_sorted(els.begin(), els.end()));
    std::set<MatFq> s(els.begin(), els.end());
    CHECK(s.count(MatFq::identity(G.F, G.r)) == 1);
    for (const MatFq& a : els) {
      CHECK(s.count(a.inverse()) == 1);
      for (const MatFq& b : els) CHECK(s.count(a.mul(b)) == 1);
    }
  }
}

TEST_CASE("enumeration stops at the configured cap") {
  size_t saved = caps().group;
  caps().group = 5;
  CHECK_THROWS_AS(group_elements(gl_gens(field_q(3), 2)), cap_exceeded);
  caps().group = saved;
  CHECK(group_elements(gl_gens(field_q(3), 2)).size() == 48);
}

TEST_CASE("invalid generators are rejected") {
  const FieldDesc* F = field_q(3);
  MatFq sing(F, 2, 2);
  sing.set(0, 0, 1);  // rank 1
  SubgroupGens bad{F, 2, {sing}};
  CHECK_THROWS_AS(group_elements(bad), invalid_input);
  SubgroupGens shape{F, 2, {MatFq::identity(F, 3)}};
  CHECK_THROWS_AS(group_elements(shape), invalid_input);
}

TEST_CASE("double cosets: extreme subgroup choices") {
  const FieldDesc* F = field_q(3);
  SubgroupGens G = gl_gens(F, 2);
  DoubleCosets whole = double_cosets(G, G, G);
  CHECK(whole.count == 1);
  CHECK(whole.sizes == std::vector<size_t>{48});
  CHECK(whole.reps[0] == group_elements(G).front());

  SubgroupGens one = trivial_gens(F, 2);
  DoubleCosets single = double_cosets(one, G, one);
  CHECK(single.count == 48);
  CHECK(single.reps == group_elements(G));
}

TEST_CASE("double cosets of the unipotent group against column-fixing groups") {
  const FieldDesc* F = field_q(3);
  DoubleCosets dc =
      double_cosets(unipotent_gens(F, 2), gl_gens(F, 2), js_gens(F, 2, 1));
  CHECK(dc.count == 4);
  size_t total = 0;
  for (size_t s : dc.sizes) total += s;
  CHECK(total == 48);
}

TEST_CASE("double cosets partition the group") {
  const FieldDesc* F = field_q(2);
  SubgroupGens G = gl_gens(F, 3);
  DoubleCosets dc =
      double_cosets(unipotent_gens(F, 3), G, js_gens(F, 3, 2));
  std::vector<MatFq> els = group_elements(G);
  size_t total = 0;
  for (size_t s : dc.sizes) total += s;
  CHECK(total == els.size());
  std::set<MatFq> seen;
  std::vector<MatFq> hels = group_elements(unipotent_gens(F, 3));
  std::vector<MatFq> jels = group_elements(js_gens(F, 3, 2));
  for (const MatFq& rep : dc.reps)
    for (const MatFq& h : hels)
      for (const MatFq& j : jels) seen.insert(h.mul(rep).mul(j));
  CHECK(seen.size() == els.size());
}

TEST_CASE("double cosets reject subgroups outside the ambient group") {
  const FieldDesc* F = field_q(3);
  CHECK_THROWS_AS(
      double_cosets(gl_gens(F, 2), unipotent_gens(F, 2), trivial_gens(F, 2)),
      invalid_input);
  CHECK_THROWS_AS(double_cosets(trivial_gens(field_q(2), 2), gl_gens(F, 2),
                                trivial_gens(F, 2)),
                  invalid_input);
}

TEST_CASE("unipotence of a whole image group") {
  CHECK(is_fine_image(trivial_gens(field_q(2), 2)));
  CHECK(is_fine_image(unipotent_gens(field_q(2), 2)));
  CHECK_FALSE(is_fine_image(gl_gens(field_q(2), 2)));
  CHECK(is_fine_image(unipotent_gens(field_q(4), 3)));
  CHECK_FALSE(is_fine_image(js_gens(field_q(3), 2, 1)));
}

TEST_CASE("unipotence test on single matrices") {
  const FieldDesc* F = field_q(4);
  for (const MatFq& g : group_elements(unipotent_gens(F, 2)))
    CHECK(is_unipotent(g));
  MatFq d = MatFq::identity(F, 2);
  d.set(0, 0, F->omega);
  CHECK_FALSE(is_unipotent(d));
}

TEST_CASE("subgroup files parse into generator sets") {
  std::istringstream in("3 2\n1 1 0 1\n");
  SubgroupGens G = subgroup_parse(in);
  CHECK(G.F == field_q(3));
  CHECK(G.r == 2);
  CHECK(group_elements(G).size() == 3);

  std::istringstream ext("4 2\n1:0 0:1 0:0 1:0\n1:0 1:0 0:0 1:0\n");
  SubgroupGens E = subgroup_parse(ext);
  CHECK(E.gens.size() == 2);
  CHECK(group_elements(E) == group_elements(unipotent_gens(field_q(4), 2)));
}

TEST_CASE("malformed subgroup files are rejected") {
  std::istringstream bad1("x 2\n");
  CHECK_THROWS_AS(subgroup_parse(bad1), invalid_input);
  std::istringstream bad2("4 2\n1:0\n");
  CHECK_THROWS_AS(subgroup_parse(bad2), invalid_input);
  std::istringstream bad3("2 2\n1 1 1 1\n");
  CHECK_THROWS_AS(subgroup_parse(bad3), invalid_input);
  CHECK_THROWS_AS(subgroup_load("/nonexistent/subgroup.txt"), invalid_input);
}

}  // TEST_SUITE
