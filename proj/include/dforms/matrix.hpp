#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "dforms/field.hpp"

namespace dforms {

// Dense matrix over a finite field of size <= 256; entries are stored as
// element encodings so row reduction runs on table lookups.
class MatFq {
 public:
  MatFq() : F_(nullptr), rows_(0), cols_(0) {}
  MatFq(const FieldDesc* F, int rows, int cols);

  static MatFq identity(const FieldDesc* F, int r);

  const FieldDesc* field() const { return F_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  uint8_t at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
  void set(int i, int j, uint8_t v);
  FieldElement el(int i, int j) const { return FieldElement(F_, at(i, j)); }

  MatFq mul(const MatFq& o) const;
  MatFq add(const MatFq& o) const;
  MatFq sub(const MatFq& o) const;
  MatFq pow(uint64_t e) const;
  MatFq transpose() const;
  bool is_zero() const;
  bool invertible() const;
  MatFq inverse() const;  // throws invalid_input if singular

  bool operator==(const MatFq& o) const {
    return F_ == o.F_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const MatFq& o) const { return !(*this == o); }
  bool operator<(const MatFq& o) const { return a_ < o.a_; }  // same-shape lex order

  const std::vector<uint8_t>& bytes() const { return a_; }
  std::string text() const;  // entries space separated, row major

 private:
  const FieldDesc* F_;
  int rows_, cols_;
  std::vector<uint8_t> a_;
};

struct RrefResult {
  MatFq mat;
  std::vector<int> pivots;
  int rank = 0;
};

// Reduced row-echelon form; deterministic (first non-zero pivot per column).
RrefResult mat_rref(const MatFq& M);

// (g - 1)^r = 0 for an r x r matrix g.
bool is_unipotent(const MatFq& g);

}  // namespace dforms
