#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dforms/matrix.hpp"

namespace dforms {

using Expt = std::vector<uint16_t>;  // exponent vector, one entry per variable

// graded-lex term order: total degree first, then lexicographic
struct GradedLex {
  bool operator()(const Expt& a, const Expt& b) const {
    long da = 0, db = 0;
    for (uint16_t e : a) da += e;
    for (uint16_t e : b) db += e;
    if (da != db) return da < db;
    return a < b;
  }
};

// Sparse multivariate polynomial over a finite field; no zero terms stored.
class MPoly {
 public:
  MPoly() : F_(nullptr), nvars_(0) {}
  MPoly(const FieldDesc* F, int nvars);

  static MPoly constant(const FieldDesc* F, int nvars, uint32_t c);
  static MPoly variable(const FieldDesc* F, int nvars, int i);
  // linear form sum_i coeffs[i] * x_i
  static MPoly linear(const FieldDesc* F, const std::vector<uint8_t>& coeffs);

  const FieldDesc* field() const { return F_; }
  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  long degree() const;  // -1 for the zero polynomial
  bool homogeneous() const;
  size_t term_count() const { return terms_.size(); }

  void add_term(const Expt& e, uint32_t c);  // accumulates; drops zeros

  MPoly add(const MPoly& o) const;
  MPoly sub(const MPoly& o) const;
  MPoly neg() const;
  MPoly mul(const MPoly& o) const;
  MPoly scale(uint32_t c) const;
  MPoly pow(uint64_t e) const;

  uint32_t coeff(const Expt& e) const;
  const std::map<Expt, uint32_t, GradedLex>& terms() const { return terms_; }

  bool operator==(const MPoly& o) const {
    return F_ == o.F_ && nvars_ == o.nvars_ && terms_ == o.terms_;
  }
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  // highest-degree terms first; default variable names x1..xn
  std::string text(const std::vector<std::string>& names = {}) const;

 private:
  void check(const MPoly& o) const;
  const FieldDesc* F_;
  int nvars_;
  std::map<Expt, uint32_t, GradedLex> terms_;
};

// Substitute x_i -> sum_j g(i,j) * x_j, i.e. precompose f with the linear map
// g, so that substitute(substitute(f,g),h) = substitute(f, g*h).
MPoly substitute_linear(const MPoly& f, const MatFq& g);

// Dimension of the F_q-span of the given polynomials (0 for empty input).
int span_dim(const std::vector<MPoly>& polys);

}  // namespace dforms
