#include "dforms/matrix.hpp"

namespace dforms {

MatFq::MatFq(const FieldDesc* F, int rows, int cols)
    : F_(F), rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw invalid_input("matrix: negative dimensions");
  if (F->size > 256) throw invalid_input("matrix: field larger than 256 elements");
}

MatFq MatFq::identity(const FieldDesc* F, int r) {
  MatFq m(F, r, r);
  for (int i = 0; i < r; ++i) m.set(i, i, 1);
  return m;
}

void MatFq::set(int i, int j, uint8_t v) {
  if (v >= F_->size) throw invalid_input("matrix: entry encoding out of range");
  a_[size_t(i) * cols_ + j] = v;
}

MatFq MatFq::mul(const MatFq& o) const {
  if (F_ != o.F_ || cols_ != o.rows_) throw invalid_input("matrix: incompatible product");
  MatFq r(F_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      uint8_t aik = at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        uint8_t t = uint8_t(F_->el_mul(aik, o.at(k, j)));
        r.a_[size_t(i) * o.cols_ + j] =
            uint8_t(F_->el_add(r.a_[size_t(i) * o.cols_ + j], t));
      }
    }
  return r;
}

MatFq MatFq::add(const MatFq& o) const {
  if (F_ != o.F_ || rows_ != o.rows_ || cols_ != o.cols_)
    throw invalid_input("matrix: incompatible sum");
  MatFq r(F_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = uint8_t(F_->el_add(a_[i], o.a_[i]));
  return r;
}

MatFq MatFq::sub(const MatFq& o) const {
  if (F_ != o.F_ || rows_ != o.rows_ || cols_ != o.cols_)
    throw invalid_input("matrix: incompatible difference");
  MatFq r(F_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = uint8_t(F_->el_sub(a_[i], o.a_[i]));
  return r;
}

MatFq MatFq::pow(uint64_t e) const {
  if (rows_ != cols_) throw invalid_input("matrix: power of non-square matrix");
  MatFq r = identity(F_, rows_), x = *this;
  while (e) {
    if (e & 1) r = r.mul(x);
    x = x.mul(x);
    e >>= 1;
  }
  return r;
}

MatFq MatFq::transpose() const {
  MatFq r(F_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

bool MatFq::is_zero() const {
  for (auto v : a_)
    if (v) return false;
  return true;
}

bool MatFq::invertible() const {
  return rows_ == cols_ && mat_rref(*this).rank == rows_;
}

MatFq MatFq::inverse() const {
  if (rows_ != cols_) throw invalid_input("matrix: inverse of non-square matrix");
  if (rows_ == 0) return *this;
  MatFq aug(F_, rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.set(i, j, at(i, j));
    aug.set(i, cols_ + i, 1);
  }
  RrefResult rr = mat_rref(aug);
  if (rr.rank < rows_ || rr.pivots.back() >= cols_ ||
      int(rr.pivots.size()) != rows_)
    throw invalid_input("matrix: singular, no inverse");
  MatFq inv(F_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.set(i, j, rr.mat.at(i, cols_ + j));
  return inv;
}

std::string MatFq::text() const {
  std::string s;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (!s.empty()) s += ' ';
      s += F_->el_text(at(i, j));
    }
  return s;
}

RrefResult mat_rref(const MatFq& M) {
  RrefResult out;
  out.mat = M;
  const FieldDesc* F = M.field();
  int rows = M.rows(), cols = M.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (out.mat.at(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) {
        uint8_t t = out.mat.at(r, j);
        out.mat.set(r, j, out.mat.at(piv, j));
        out.mat.set(piv, j, t);
      }
    uint8_t s = uint8_t(F->el_inv(out.mat.at(r, c)));
    for (int j = c; j < cols; ++j)
      out.mat.set(r, j, uint8_t(F->el_mul(s, out.mat.at(r, j))));
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      uint8_t f = out.mat.at(i, c);
      if (f == 0) continue;
      for (int j = c; j < cols; ++j) {
        uint8_t t = uint8_t(F->el_mul(f, out.mat.at(r, j)));
        out.mat.set(i, j, uint8_t(F->el_sub(out.mat.at(i, j), t)));
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

bool is_unipotent(const MatFq& g) {
  if (g.rows() != g.cols()) throw invalid_input("is_unipotent: non-square matrix");
  MatFq d = g.sub(MatFq::identity(g.field(), g.rows()));
  return d.pow(uint64_t(g.rows())).is_zero();
}

}  // namespace dforms
