#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dforms/group.hpp"
#include "dforms/matrix.hpp"
#include "dforms/mpoly.hpp"

namespace dforms {

// Table of the L = (q^r-1)/(q-1) lines of the column space F_q^r.  Each line
// is stored by its unique representative whose first non-zero coordinate is 1;
// representatives are enumerated in a fixed deterministic order.  Tables are
// interned: requesting the same (field, r) twice returns the same pointer.
class LineTable {
 public:
  const FieldDesc* field() const { return F_; }
  int rank() const { return r_; }
  int count() const { return L_; }
  const std::vector<uint8_t>& rep(int i) const { return reps_[size_t(i)]; }
  // v must be a non-zero vector with entries < q; v = alpha * rep(i) for a
  // unique line i and scalar alpha; returns {i, alpha}.
  std::pair<int, uint8_t> locate(const std::vector<uint8_t>& v) const;
  std::string gen_name(int i) const;  // "u(a1,..,ar)"

 private:
  friend const LineTable* line_table(const FieldDesc* F, int r);
  LineTable() = default;
  const FieldDesc* F_ = nullptr;
  int r_ = 0;
  int L_ = 0;
  std::vector<std::vector<uint8_t>> reps_;
  std::vector<int> line_of_vec_;        // indexed by vector encoding
  std::vector<uint8_t> scalar_of_vec_;  // first non-zero coordinate
};

const LineTable* line_table(const FieldDesc* F, int r);  // F stage-1, q <= 256
const LineTable* line_table(int q, int r);

// Sorted multiset of line indices: a monomial in the degree-1 reciprocal
// generators.  The inline array bounds monomial degree by kMaxDegree.
struct TermKey {
  static constexpr int kMaxDegree = 31;
  uint8_t len = 0;
  std::array<uint8_t, kMaxDegree> idx{};

  void insert(uint8_t line);  // keeps the entries sorted
  bool operator==(const TermKey& o) const {
    if (len != o.len) return false;
    for (int i = 0; i < len; ++i)
      if (idx[size_t(i)] != o.idx[size_t(i)]) return false;
    return true;
  }
  bool operator<(const TermKey& o) const {
    if (len != o.len) return len < o.len;
    for (int i = 0; i < len; ++i)
      if (idx[size_t(i)] != o.idx[size_t(i)])
        return idx[size_t(i)] < o.idx[size_t(i)];
    return false;
  }
};

// Homogeneous element of the graded ring generated by the reciprocals 1/v of
// the lines of F_q^r (one degree-1 generator per line; 1/(alpha*v) rewrites
// as alpha^-1 * (1/v)).  Stored as an F_q-linear combination of monomials.
// The stored term list is a formal representative: the generators satisfy
// partial-fraction relations, so use r_is_zero / r_equal for canonical
// comparisons and operator== only for identical formal term lists.
class RElement {
 public:
  RElement() = default;
  RElement(const LineTable* T, int degree);  // zero of the given degree
  static RElement monomial(const LineTable* T, const std::vector<int>& lines,
                           uint8_t c);
  static RElement one(const LineTable* T) { return monomial(T, {}, 1); }

  const LineTable* table() const { return T_; }
  int degree() const { return deg_; }
  bool is_zero() const { return t_.empty(); }  // formal zero
  size_t term_count() const { return t_.size(); }
  const std::vector<std::pair<TermKey, uint8_t>>& terms() const { return t_; }

  RElement add(const RElement& o) const;
  RElement sub(const RElement& o) const;
  RElement neg() const;
  RElement scale(uint8_t c) const;
  RElement mul(const RElement& o) const;
  RElement mul_monomial(uint8_t line, uint8_t c) const;  // times c * u_line

  bool operator==(const RElement& o) const {
    return T_ == o.T_ && deg_ == o.deg_ && t_ == o.t_;
  }
  bool operator!=(const RElement& o) const { return !(*this == o); }

  std::string text() const;

 private:
  friend RElement relement_from_sorted(
      const LineTable* T, int degree,
      std::vector<std::pair<TermKey, uint8_t>> terms);
  void check(const RElement& o) const;
  const LineTable* T_ = nullptr;
  int deg_ = 0;
  std::vector<std::pair<TermKey, uint8_t>> t_;  // sorted by key, no zeros
};

// f * D^k where k = deg f and D is the product of all L normalized line
// forms.  Injective on each graded piece, so it doubles as the canonical
// comparison map.
MPoly clear_denominators(const RElement& f);
bool r_is_zero(const RElement& f);
bool r_equal(const RElement& a, const RElement& b);

// Dimension of the span of the cleared-denominator images of all degree-k
// monomials in the generators.
long long graded_dim(int r, int q, int k);

// Closed form: sum over binary vectors (i_1..i_{r-1}) of
// q^(sum nu*i_nu) * binomial(k, sum i_nu).
long long dim_formula(int r, int q, int k);

// Coefficients of the expansion t*X*prod_{v != 0}(1 - (1/v)*X): only q-power
// exponents survive, giving c_i of degree q^i - 1 (the unit factor t is
// carried externally and never stored).
struct UniversalFamily {
  int r = 0;
  const LineTable* table = nullptr;
  std::vector<RElement> c;  // c[i-1] homogeneous of degree q^i - 1
};

UniversalFamily universal_coeffs(int r, int q);

// A subspace of F_q^r given by spanning row vectors (entries < q); the
// dimension is derived by row reduction.
struct StratumLabel {
  std::vector<std::vector<uint8_t>> basis;
};

// Sets every generator over a line outside the subspace to zero and renames
// the survivors through coordinates in the subspace; the result equals
// universal_coeffs(r', q) for r' the subspace dimension.
UniversalFamily specialize_stratum(const UniversalFamily& U,
                                   const StratumLabel& Vp);
RElement specialize_relement(const RElement& f, const StratumLabel& Vp);

// All non-zero subspaces of F_q^r, deterministically ordered.
std::vector<StratumLabel> all_subspaces(int q, int r);

// Right action: the linear form of each generator line is precomposed with g
// (coefficient rows map to row*g) and renormalized, so that
// group_act(group_act(f,g),h) = group_act(f, g*h).
RElement group_act(const RElement& f, const MatFq& g);

// Dimension of the degree-k elements fixed by every generator of K, computed
// as a kernel intersection in cleared-denominator coordinates (characteristic
// p rules out averaging).
long long invariant_dim(const SubgroupGens& K, int k);

// Number of multisets from the given weights summing to k.
long long weighted_hilbert(const std::vector<int>& weights, int k);

// Generator weights of the three standard invariant rings.
std::vector<int> weights_unipotent(int r);       // 1, ..., 1
std::vector<int> weights_sl(int r, int q);       // q-1,..,q^{r-1}-1,(q^r-1)/(q-1)
std::vector<int> weights_gl(int r, int q);       // q-1, q^2-1, ..., q^r-1

// Sum over s = 1..r of |K \ GL_r(F_q) / J_s| / prod_{i<=s}(q^i-1) *
// binomial(k-1, s-1); every division must be exact.  At k = 0 the binomial
// is read as binomial(-1, s-1) = (-1)^(s-1), which yields 1 in degree zero.
long long level_dim_formula(const SubgroupGens& K, int r, int q, int k);

// Sum of group_act(f, h) over right-coset representatives h of Kp in K;
// requires Kp contained in K and f fixed by Kp (canonically).  Composed with
// inclusion this multiplies K-fixed elements by the index [K:Kp] mod p.
RElement trace_invariants(const RElement& f, const SubgroupGens& Kp,
                          const SubgroupGens& K);

}  // namespace dforms
