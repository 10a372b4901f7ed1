#include "dforms/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <utility>

#include "dforms/drinfeld.hpp"
#include "dforms/error.hpp"
#include "dforms/field.hpp"
#include "dforms/group.hpp"
#include "dforms/hecke.hpp"
#include "dforms/matrix.hpp"
#include "dforms/mpoly.hpp"
#include "dforms/satake.hpp"

namespace dforms {

namespace {

// First-failure collector: later failures in the same block are dropped so
// the detail string stays a single readable message.
struct Ctx {
  bool ok = true;
  std::string detail;
  void fail(const std::string& m) {
    if (ok) {
      ok = false;
      detail = m;
    }
  }
};

std::string cell(int q, int r) {
  return "q=" + std::to_string(q) + " r=" + std::to_string(r);
}

std::string cell(int q, int r, int k) {
  return cell(q, r) + " k=" + std::to_string(k);
}

std::string type_text(const DivisorType& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[size_t(i)]);
  }
  return s + ")";
}

long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (long long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Rank of the span of homogeneous ring elements of one common degree,
// computed through the injective cleared-denominator coordinates.
long long span_dim(const std::vector<RElement>& fs) {
  if (fs.empty()) return 0;
  const LineTable* T = fs[0].table();
  const FieldDesc* F = T->field();
  std::vector<MPoly> ps;
  ps.reserve(fs.size());
  for (const RElement& f : fs) ps.push_back(clear_denominators(f));
  std::map<Expt, int, GradedLex> col;
  for (const MPoly& p : ps)
    for (const auto& tc : p.terms()) col.emplace(tc.first, 0);
  int nc = 0;
  for (auto& kv : col) kv.second = nc++;
  MatFq A(F, int(ps.size()), std::max(nc, 1));
  for (size_t i = 0; i < ps.size(); ++i)
    for (const auto& tc : ps[i].terms())
      A.set(int(i), col[tc.first], uint8_t(tc.second));
  return mat_rref(A).rank;
}

// The grid shared by the dimension and universal-family blocks.
struct GridCell {
  int q, r, kmax;
};
constexpr GridCell kGrid[] = {
    {2, 2, 8}, {3, 2, 6}, {4, 2, 4}, {2, 3, 4}, {3, 3, 3}};

CheckResult block_dimension_grid() {
  CheckResult res{"dimension-grid", true, ""};
  Ctx c;
  for (const GridCell& g : kGrid)
    for (int k = 0; k <= g.kmax; ++k) {
      long long oracle = graded_dim(g.r, g.q, k);
      long long formula = dim_formula(g.r, g.q, k);
      if (oracle != formula)
        c.fail(cell(g.q, g.r, k) + ": rank oracle " + std::to_string(oracle) +
               " vs formula " + std::to_string(formula));
    }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

CheckResult block_universal_family() {
  CheckResult res{"universal-family", true, ""};
  Ctx c;
  for (const GridCell& g : kGrid) {
    UniversalFamily U;
    try {
      U = universal_coeffs(g.r, g.q);
    } catch (const internal_error& e) {
      c.fail(cell(g.q, g.r) + ": " + e.what());
      continue;
    }
    long long qe = 1;
    for (int i = 1; i <= g.r; ++i) {
      qe *= g.q;
      if (U.c[size_t(i) - 1].degree() != qe - 1)
        c.fail(cell(g.q, g.r) + ": deg c_" + std::to_string(i) + " is " +
               std::to_string(U.c[size_t(i) - 1].degree()));
    }
    if (U.c[size_t(g.r) - 1].is_zero() || r_is_zero(U.c[size_t(g.r) - 1]))
      c.fail(cell(g.q, g.r) + ": top coefficient vanishes");
    SubgroupGens G = gl_gens(field_q(g.q), g.r);
    for (const MatFq& m : G.gens)
      for (size_t i = 0; i < U.c.size(); ++i)
        if (!r_is_zero(group_act(U.c[i], m).sub(U.c[i])))
          c.fail(cell(g.q, g.r) + ": c_" + std::to_string(i + 1) +
                 " moves under a general-linear generator");
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

// All monomials c_1^{a_1} * ... * c_r^{a_r} of weighted degree k, where c_i
// carries weight q^i - 1.
std::vector<RElement> weighted_monomials(const UniversalFamily& U, int q,
                                         int k) {
  std::vector<long long> w;
  long long qe = 1;
  for (int i = 1; i <= U.r; ++i) {
    qe *= q;
    w.push_back(qe - 1);
  }
  std::vector<RElement> out;
  std::vector<int> a(size_t(U.r), 0);
  std::function<void(int, long long)> rec = [&](int i, long long left) {
    if (i == U.r) {
      if (left != 0) return;
      RElement p = RElement::one(U.table);
      for (int j = 0; j < U.r; ++j)
        for (int e = 0; e < a[size_t(j)]; ++e) p = p.mul(U.c[size_t(j)]);
      out.push_back(std::move(p));
      return;
    }
    for (long long e = 0; e * w[size_t(i)] <= left; ++e) {
      a[size_t(i)] = int(e);
      rec(i + 1, left - e * w[size_t(i)]);
    }
    a[size_t(i)] = 0;
  };
  rec(0, k);
  return out;
}

CheckResult block_independence() {
  CheckResult res{"independence", true, ""};
  Ctx c;
  struct Cell {
    int q, r, kmax;
  } cells[] = {{2, 2, 8}, {2, 3, 4}};
  for (const Cell& g : cells) {
    UniversalFamily U = universal_coeffs(g.r, g.q);
    std::vector<int> w;
    long long qe = 1;
    for (int i = 1; i <= g.r; ++i) {
      qe *= g.q;
      w.push_back(int(qe - 1));
    }
    for (int k = 0; k <= g.kmax; ++k) {
      std::vector<RElement> mons = weighted_monomials(U, g.q, k);
      long long want = weighted_hilbert(w, k);
      if (static_cast<long long>(mons.size()) != want) {
        c.fail(cell(g.q, g.r, k) + ": monomial count " +
               std::to_string(mons.size()) + " vs hilbert " +
               std::to_string(want));
        continue;
      }
      long long got = span_dim(mons);
      if (got != want)
        c.fail(cell(g.q, g.r, k) + ": span " + std::to_string(got) +
               " vs hilbert " + std::to_string(want));
    }
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

CheckResult block_invariant_weights() {
  CheckResult res{"invariant-weights", true, ""};
  Ctx c;
  for (int q : {2, 3}) {
    const FieldDesc* F = field_q(q);
    struct Named {
      const char* name;
      SubgroupGens K;
      std::vector<int> w;
    };
    std::vector<Named> groups;
    groups.push_back({"gl", gl_gens(F, 2), weights_gl(2, q)});
    groups.push_back({"sl", sl_gens(F, 2), weights_sl(2, q)});
    groups.push_back({"unipotent", unipotent_gens(F, 2), weights_unipotent(2)});
    for (const Named& g : groups)
      for (int k = 0; k <= 6; ++k) {
        long long inv = invariant_dim(g.K, k);
        long long hil = weighted_hilbert(g.w, k);
        if (inv != hil)
          c.fail(cell(q, 2, k) + " " + g.name + ": invariants " +
                 std::to_string(inv) + " vs hilbert " + std::to_string(hil));
        if (std::string(g.name) == "unipotent" && inv != binom(k + 1, 1))
          c.fail(cell(q, 2, k) + " unipotent: invariants " +
                 std::to_string(inv) + " vs binomial " +
                 std::to_string(binom(k + 1, 1)));
      }
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

CheckResult block_level_dimensions() {
  CheckResult res{"level-dimensions", true, ""};
  Ctx c;
  struct Cell {
    int q, r;
  } cells[] = {{2, 2}, {3, 2}, {2, 3}};
  for (const Cell& g : cells) {
    const FieldDesc* F = field_q(g.q);
    struct Named {
      const char* name;
      SubgroupGens K;
    };
    std::vector<Named> groups;
    groups.push_back({"trivial", trivial_gens(F, g.r)});
    groups.push_back({"unipotent", unipotent_gens(F, g.r)});
    for (const Named& nk : groups)
      for (int k = 0; k <= 5; ++k) {
        long long inv = invariant_dim(nk.K, k);
        long long lvl = level_dim_formula(nk.K, g.r, g.q, k);
        if (inv != lvl)
          c.fail(cell(g.q, g.r, k) + " " + nk.name + ": invariants " +
                 std::to_string(inv) + " vs level formula " +
                 std::to_string(lvl));
      }
  }
  // an intermediate group: the index-2 subgroup of the unipotent group at
  // q = 4 generated by the single shear with entry 1
  {
    const FieldDesc* F4 = field_q(4);
    MatFq shear(F4, 2, 2);
    shear.set(0, 0, 1);
    shear.set(1, 1, 1);
    shear.set(0, 1, 1);
    SubgroupGens half{F4, 2, {shear}};
    if (group_elements(half).size() != 2)
      c.fail("q=4 shear subgroup has unexpected order");
    for (int k = 0; k <= 4; ++k) {
      long long inv = invariant_dim(half, k);
      long long lvl = level_dim_formula(half, 2, 4, k);
      if (inv != lvl)
        c.fail(cell(4, 2, k) + " half-unipotent: invariants " +
               std::to_string(inv) + " vs level formula " +
               std::to_string(lvl));
    }
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

CheckResult block_hecke_composition() {
  CheckResult res{"hecke-composition", true, ""};
  Ctx c;
  const std::vector<DivisorType> types = {{0, 0}, {0, 1}, {1, 1},
                                          {0, 2}, {1, 2}, {0, 3}};
  auto tsum = [](const DivisorType& t) { return t[0] + t[1]; };
  for (int q : {2, 3}) {
    const FieldDesc* F = field_q(q);
    std::map<DivisorType, long long> csize;
    auto cosets = [&](const DivisorType& t) {
      auto it = csize.find(t);
      if (it != csize.end()) return it->second;
      int N = tsum(t) + t[1] + 1;
      long long n = static_cast<long long>(left_cosets(F, N, t).size());
      csize.emplace(t, n);
      return n;
    };
    HeckeElement frozen = convolve(q, {0, 1}, {0, 1});
    HeckeElement want{{{1, 1}, q + 1}, {{0, 2}, 1}};
    if (frozen != want) c.fail("q=" + std::to_string(q) + ": (0,1)*(0,1)");
    for (const DivisorType& a : types)
      for (const DivisorType& b : types) {
        if (tsum(a) + tsum(b) > 3) continue;
        HeckeElement byCoset = convolve(q, a, b);
        HeckeElement byClass = hco_expand(q, a, b);
        if (byCoset != byClass)
          c.fail("q=" + std::to_string(q) + ": " + type_text(a) + "*" +
                 type_text(b) + " disagrees with the coset oracle");
        long long mass = 0;
        for (const auto& kv : byCoset) mass += kv.second * cosets(kv.first);
        if (mass != cosets(a) * cosets(b))
          c.fail("q=" + std::to_string(q) + ": " + type_text(a) + "*" +
                 type_text(b) + " loses mass");
      }
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

std::vector<uint64_t> sorted_enc(const std::vector<FieldElement>& xs) {
  std::vector<uint64_t> out;
  out.reserve(xs.size());
  for (const FieldElement& x : xs) out.push_back(x.enc());
  std::sort(out.begin(), out.end());
  return out;
}

// Product in F_q[t] on digit vectors (low degree first).
std::vector<uint8_t> poly_product(const FieldDesc* F,
                                  const std::vector<uint8_t>& a,
                                  const std::vector<uint8_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint8_t> out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = F->add(out[i + j], F->mul(a[i], b[j]));
  return out;
}

CheckResult block_module_roundtrip(uint64_t seed) {
  CheckResult res{"module-roundtrip", true, ""};
  Ctx c;
  std::mt19937_64 rng(seed);
  struct FieldPick {
    int q, n;
  } picks[] = {{2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 2}, {3, 3},
               {3, 4}, {4, 2}, {4, 3}, {5, 2}, {7, 2}, {9, 2}};
  const int kRounds = 50;
  for (int round = 0; round < kRounds && c.ok; ++round) {
    const FieldPick pick = picks[round % (sizeof(picks) / sizeof(picks[0]))];
    const FieldDesc* L = field_tower(field_q(pick.q), pick.n);
    int r = 1 + int(rng() % uint64_t(std::min(pick.n, 3)));
    std::vector<FieldElement> basis;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      basis.clear();
      for (int i = 0; i < r; ++i)
        basis.push_back(FieldElement(L, 1 + uint32_t(rng() % (L->size - 1))));
      try {
        LevelStructure<FieldElement> probe(basis);
        break;
      } catch (const invalid_input&) {
        basis.clear();
      }
    }
    if (basis.empty()) {
      c.fail("could not sample an independent basis");
      break;
    }
    LevelStructure<FieldElement> lam(basis);
    FieldElement t(L, 1 + uint32_t(rng() % (L->size - 1)));
    DrinfeldModule<FieldElement> M = from_level(lam, t);

    if (sorted_enc(kernel_roots(M.phi_t(), L)) != sorted_enc(lam.values()))
      c.fail("round " + std::to_string(round) +
             ": kernel of phi_t differs from the level image");

    if (!is_isomorphic(M, quotient_by(M, lam.values()).first))
      c.fail("round " + std::to_string(round) +
             ": quotient by the full torsion is not isomorphic to the source");

    std::vector<uint8_t> a(1 + rng() % 3), b(1 + rng() % 3);
    for (auto& d : a) d = uint8_t(rng() % uint64_t(pick.q));
    for (auto& d : b) d = uint8_t(rng() % uint64_t(pick.q));
    SkewPoly<FieldElement> lhs = M.phi(poly_product(field_q(pick.q), a, b));
    SkewPoly<FieldElement> rhs = skew_mul(M.phi(a), M.phi(b));
    if (!(lhs == rhs))
      c.fail("round " + std::to_string(round) +
             ": phi(ab) differs from phi(a)*phi(b)");
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

CheckResult block_strata() {
  CheckResult res{"strata", true, ""};
  Ctx c;
  for (int r : {2, 3}) {
    UniversalFamily U = universal_coeffs(r, 2);
    for (const StratumLabel& V : all_subspaces(2, r)) {
      UniversalFamily S;
      try {
        S = specialize_stratum(U, V);
      } catch (const internal_error& e) {
        c.fail(cell(2, r) + ": " + e.what());
        continue;
      }
      UniversalFamily small = universal_coeffs(S.r, 2);
      for (int i = 0; i < S.r; ++i)
        if (!r_is_zero(S.c[size_t(i)].sub(small.c[size_t(i)])))
          c.fail(cell(2, r) + ": specialized c_" + std::to_string(i + 1) +
                 " differs from the rank-" + std::to_string(S.r) + " family");
      if (S.r == r - 1 &&
          (S.c.back().is_zero() || r_is_zero(S.c.back())))
        c.fail(cell(2, r) + ": hyperplane stratum rank fell below " +
               std::to_string(r - 1));
    }
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

CheckResult block_trace_index() {
  CheckResult res{"trace-index", true, ""};
  Ctx c;
  for (int q : {2, 3}) {
    const FieldDesc* F = field_q(q);
    UniversalFamily U = universal_coeffs(2, q);
    SubgroupGens triv = trivial_gens(F, 2);
    SubgroupGens uni = unipotent_gens(F, 2);
    SubgroupGens big = q == 2 ? gl_gens(F, 2) : sl_gens(F, 2);
    long long nu = static_cast<long long>(group_elements(uni).size());
    long long nb = static_cast<long long>(group_elements(big).size());
    // index divisible by the characteristic: the trace collapses to zero
    if (nu % q != 0) c.fail("q=" + std::to_string(q) + ": unipotent order");
    for (const RElement& f : U.c)
      if (!r_is_zero(trace_invariants(f, triv, uni)))
        c.fail("q=" + std::to_string(q) +
               ": trace over a p-divisible index did not vanish");
    // index prime to the characteristic: multiplication by an invertible
    // scalar, undone by the inverse scalar
    long long index = nb / nu;
    uint8_t s = uint8_t(index % q);
    if (s == 0) c.fail("q=" + std::to_string(q) + ": index not prime to p");
    for (const RElement& f : U.c) {
      RElement tr = trace_invariants(f, uni, big);
      if (!r_is_zero(tr.sub(f.scale(s))))
        c.fail("q=" + std::to_string(q) +
               ": trace is not the index times the identity");
      if (!r_is_zero(tr.scale(F->inv(s)).sub(f)))
        c.fail("q=" + std::to_string(q) +
               ": prime-to-p trace is not invertible");
    }
  }
  res.pass = c.ok;
  res.detail = c.detail;
  return res;
}

}  // namespace

std::vector<CheckResult> verification_suite(uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(block_dimension_grid());
  out.push_back(block_universal_family());
  out.push_back(block_independence());
  out.push_back(block_invariant_weights());
  out.push_back(block_level_dimensions());
  out.push_back(block_hecke_composition());
  out.push_back(block_module_roundtrip(seed));
  out.push_back(block_strata());
  out.push_back(block_trace_index());
  return out;
}

}  // namespace dforms
