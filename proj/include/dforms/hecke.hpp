#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dforms/field.hpp"

namespace dforms {

// Sorted tuple of elementary-divisor exponents labelling a double coset
// K diag(t^a) K of GL_r over the local ring at t.
using DivisorType = std::vector<int>;

// Finite linear combination of double cosets with positive multiplicities.
using HeckeElement = std::map<DivisorType, long long>;

// Square matrix over the truncation O_N = F_q[t]/(t^N); each entry is stored
// as N digits, lowest power first.
class MatON {
 public:
  MatON() = default;
  MatON(const FieldDesc* F, int N, int r);  // zero matrix

  static MatON identity(const FieldDesc* F, int N, int r);
  static MatON diag_tpow(const FieldDesc* F, int N, const std::vector<int>& e);

  const FieldDesc* field() const { return F_; }
  int level() const { return N_; }
  int dim() const { return r_; }

  uint8_t digit(int i, int j, int d) const {
    return a_[(size_t(i) * r_ + j) * N_ + d];
  }
  void set_digit(int i, int j, int d, uint8_t c);
  int val(int i, int j) const;  // lowest non-zero digit index, or N

  MatON mul(const MatON& o) const;
  MatON extend(int N2) const;    // same polynomial entries, higher truncation
  MatON truncate(int N2) const;
  std::vector<uint8_t> det() const;  // digits of the determinant
  MatON adjugate() const;
  MatON inverse() const;  // throws invalid_input unless det is a unit

  bool operator==(const MatON& o) const {
    return F_ == o.F_ && N_ == o.N_ && r_ == o.r_ && a_ == o.a_;
  }
  bool operator!=(const MatON& o) const { return !(*this == o); }
  const std::vector<uint8_t>& bytes() const { return a_; }
  std::string text() const;

 private:
  const FieldDesc* F_ = nullptr;
  int N_ = 0, r_ = 0;
  std::vector<uint8_t> a_;
};

// Elementary divisor exponents, sorted ascending; requires the determinant to
// be a unit times t^d with d < N (otherwise the precision is insufficient).
DivisorType smith_type(const MatON& M);

struct SmithDecomposition {
  DivisorType type;
  MatON U, V;  // invertible over O_N with U*M*V = diag(t^type)
};
SmithDecomposition smith_decompose(const MatON& M);

// Canonical representative of the left coset M*K: upper triangular, diagonal
// exactly t^(d_i), and each entry above the diagonal reduced modulo the t
// power on its own row.
MatON hnf_of(const MatON& M);

// Hermite representatives of the left cosets inside K diag(t^a) K, in a fixed
// deterministic order.  Requires sum(a) + max(a) < N.
std::vector<MatON> left_cosets(const FieldDesc* F, int N, const DivisorType& a);

// Product of the double cosets of types a and b by brute-force pair
// classification: every product of left-coset representatives is assigned to
// its left coset, and the multiplicity of each output type is the (uniform)
// number of pairs landing in any single coset of that type.  N = 0 picks the
// smallest precision with all intermediate types well-defined.
HeckeElement convolve(int q, const DivisorType& a, const DivisorType& b,
                      int N = 0);

// The same product computed from the composition formula: orbits of the
// stabilizer subgroups acting on the coset space label the terms, and each
// coefficient is a subgroup index obtained by exact solution counting over
// O_N.  Always equals convolve(q, a, b).
HeckeElement hco_expand(int q, const DivisorType& a, const DivisorType& b,
                        int N = 0);

// [K : K ∩ g K g^-1] for g = diag(t^a), computed by counting the image of
// the stabilizer in GL_r(O_N); equals the number of left cosets of type a.
long long index_count(int q, const DivisorType& a, int N = 0);

}  // namespace dforms
