#include "dforms/hecke.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "dforms/error.hpp"
#include "dforms/matrix.hpp"

namespace dforms {
namespace {

using Digits = std::vector<uint8_t>;

int pval_of(const Digits& a) {
  for (size_t d = 0; d < a.size(); ++d)
    if (a[d]) return int(d);
  return int(a.size());
}

Digits pmul(const FieldDesc* F, const Digits& a, const Digits& b) {
  int N = int(a.size());
  Digits out(size_t(N), 0);
  for (int d1 = 0; d1 < N; ++d1) {
    if (!a[d1]) continue;
    for (int d2 = 0; d1 + d2 < N; ++d2) {
      if (!b[d2]) continue;
      uint8_t& s = out[size_t(d1 + d2)];
      s = F->add(s, F->mul(a[d1], b[d2]));
    }
  }
  return out;
}

Digits punit_inverse(const FieldDesc* F, const Digits& u) {
  int N = int(u.size());
  if (N == 0 || u[0] == 0)
    throw internal_error("inverse of a non-unit in the local ring");
  Digits x(size_t(N), 0);
  uint8_t c0 = F->inv(u[0]);
  x[0] = c0;
  for (int d = 1; d < N; ++d) {
    uint8_t s = 0;
    for (int e = 1; e <= d; ++e) s = F->add(s, F->mul(u[e], x[size_t(d - e)]));
    x[size_t(d)] = F->mul(c0, F->neg(s));
  }
  return x;
}

// Quotient a/b; requires val(a) >= val(b) > -1 and b nonzero.  The result is
// correct up to terms that re-enter above t^N after multiplying back by b.
Digits pdivide(const FieldDesc* F, const Digits& a, const Digits& b) {
  int N = int(a.size());
  int m = pval_of(b);
  if (m >= N) throw internal_error("local-ring division by zero");
  if (pval_of(a) < m) throw internal_error("inexact local-ring division");
  Digits as(size_t(N), 0), bs(size_t(N), 0);
  for (int d = m; d < N; ++d) {
    as[size_t(d - m)] = a[size_t(d)];
    bs[size_t(d - m)] = b[size_t(d)];
  }
  return pmul(F, as, punit_inverse(F, bs));
}

Digits entry_of(const MatON& A, int i, int j) {
  Digits e(size_t(A.level()), 0);
  for (int d = 0; d < A.level(); ++d) e[size_t(d)] = A.digit(i, j, d);
  return e;
}

void set_entry(MatON& A, int i, int j, const Digits& e) {
  for (int d = 0; d < A.level(); ++d) A.set_digit(i, j, d, e[size_t(d)]);
}

void row_swap(MatON& A, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < A.dim(); ++j) {
    Digits ea = entry_of(A, a, j), eb = entry_of(A, b, j);
    set_entry(A, a, j, eb);
    set_entry(A, b, j, ea);
  }
}

void col_swap(MatON& A, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < A.dim(); ++i) {
    Digits ea = entry_of(A, i, a), eb = entry_of(A, i, b);
    set_entry(A, i, a, eb);
    set_entry(A, i, b, ea);
  }
}

void row_scale(MatON& A, int i, const Digits& u) {
  const FieldDesc* F = A.field();
  for (int j = 0; j < A.dim(); ++j)
    set_entry(A, i, j, pmul(F, entry_of(A, i, j), u));
}

void col_scale(MatON& A, int j, const Digits& u) {
  const FieldDesc* F = A.field();
  for (int i = 0; i < A.dim(); ++i)
    set_entry(A, i, j, pmul(F, entry_of(A, i, j), u));
}

// row_i -= f * row_s
void row_sub(MatON& A, int i, int s, const Digits& f) {
  const FieldDesc* F = A.field();
  for (int j = 0; j < A.dim(); ++j) {
    Digits e = entry_of(A, i, j);
    Digits d = pmul(F, f, entry_of(A, s, j));
    for (size_t t = 0; t < e.size(); ++t) e[t] = F->sub(e[t], d[t]);
    set_entry(A, i, j, e);
  }
}

// col_j -= f * col_s
void col_sub(MatON& A, int j, int s, const Digits& f) {
  const FieldDesc* F = A.field();
  for (int i = 0; i < A.dim(); ++i) {
    Digits e = entry_of(A, i, j);
    Digits d = pmul(F, f, entry_of(A, i, s));
    for (size_t t = 0; t < e.size(); ++t) e[t] = F->sub(e[t], d[t]);
    set_entry(A, i, j, e);
  }
}

Digits det_sub(const MatON& A, const std::vector<int>& rows, unsigned colmask) {
  const FieldDesc* F = A.field();
  int N = A.level();
  Digits acc(size_t(N), 0);
  if (rows.empty()) {
    acc[0] = 1;
    return acc;
  }
  int i = rows[0];
  std::vector<int> rest(rows.begin() + 1, rows.end());
  int skipped = 0;
  for (int j = 0; j < A.dim(); ++j) {
    if (!(colmask & (1u << j))) continue;
    Digits e = entry_of(A, i, j);
    if (pval_of(e) < N) {
      Digits term = pmul(F, e, det_sub(A, rest, colmask & ~(1u << j)));
      if (skipped & 1)
        for (auto& c : term) c = F->neg(c);
      for (size_t t = 0; t < acc.size(); ++t) acc[t] = F->add(acc[t], term[t]);
    }
    ++skipped;
  }
  return acc;
}

void validate_type(const DivisorType& a) {
  if (a.empty()) throw invalid_input("divisor type must be non-empty");
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0)
      throw invalid_input("divisor type entries must be non-negative");
    if (i > 0 && a[i] < a[i - 1])
      throw invalid_input("divisor type entries must be sorted ascending");
  }
}

long long type_sum(const DivisorType& a) {
  return std::accumulate(a.begin(), a.end(), 0LL);
}

unsigned long long mul_guard(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a)
    throw cap_exceeded("counting range exceeded");
  return a * b;
}

unsigned long long pow_ull(unsigned long long base, int e) {
  unsigned long long r = 1;
  for (int t = 0; t < e; ++t) r = mul_guard(r, base);
  return r;
}

int resolve_precision(const DivisorType& a, const DivisorType& b, int N) {
  long long Sa = type_sum(a), Sb = type_sum(b);
  long long need =
      std::max({Sa + Sb, Sa + a.back(), Sb + b.back()}) + 1;
  if (N == 0) N = int(need);
  if (N < need)
    throw invalid_input("insufficient precision for these divisor types");
  if (N > 64) throw cap_exceeded("local-ring precision beyond supported range");
  return N;
}

std::vector<std::vector<uint8_t>> nullspace_basis(const MatFq& M) {
  RrefResult rr = mat_rref(M);
  const FieldDesc* F = M.field();
  int vars = M.cols();
  std::vector<char> ispiv(size_t(vars), 0);
  for (int p : rr.pivots) ispiv[size_t(p)] = 1;
  std::vector<std::vector<uint8_t>> basis;
  for (int f = 0; f < vars; ++f) {
    if (ispiv[size_t(f)]) continue;
    std::vector<uint8_t> v(size_t(vars), 0);
    v[size_t(f)] = 1;
    for (int t = 0; t < rr.rank; ++t)
      v[size_t(rr.pivots[size_t(t)])] = F->neg(rr.mat.at(t, f));
    basis.push_back(std::move(v));
  }
  return basis;
}

// Number of matrices k over O_N with unit determinant such that
//   * v(k_ij) >= max(0, b_j - b_i) for all i, j (if btype is given), and
//   * all digits below D of (P k Q)_uv vanish for all u, v.
// The valuation conditions are F_q-linear in the digits of k, so the count is
// q^(free digits) times the number of invertible reductions mod t.
unsigned long long count_members(const FieldDesc* F, int N, int r,
                                 const DivisorType* btype, const MatON& P,
                                 const MatON& Q, int D) {
  int vars = r * r * N;
  auto var_of = [&](int i, int j, int d) { return (i * r + j) * N + d; };
  std::vector<std::vector<uint8_t>> rows;
  if (btype) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        int e = std::max(0, (*btype)[size_t(j)] - (*btype)[size_t(i)]);
        for (int d = 0; d < std::min(e, N); ++d) {
          std::vector<uint8_t> row(size_t(vars), 0);
          row[size_t(var_of(i, j, d))] = 1;
          rows.push_back(std::move(row));
        }
      }
  }
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < r; ++v)
      for (int dd = 0; dd < D; ++dd) {
        std::vector<uint8_t> row(size_t(vars), 0);
        bool nz = false;
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j)
            for (int d = 0; d <= dd && d < N; ++d) {
              uint8_t cf = 0;
              for (int d1 = 0; d1 <= dd - d; ++d1)
                cf = F->add(cf, F->mul(P.digit(u, i, d1),
                                       Q.digit(j, v, dd - d - d1)));
              if (cf) {
                row[size_t(var_of(i, j, d))] = cf;
                nz = true;
              }
            }
        if (nz) rows.push_back(std::move(row));
      }
  MatFq A(F, rows.empty() ? 1 : int(rows.size()), vars);
  for (size_t t = 0; t < rows.size(); ++t)
    for (int c = 0; c < vars; ++c) A.set(int(t), c, rows[t][size_t(c)]);
  std::vector<std::vector<uint8_t>> basis = nullspace_basis(A);
  int dimV = int(basis.size());

  // Project the solution space onto the digit-zero coordinates.
  MatFq W(F, dimV == 0 ? 1 : dimV, r * r);
  for (int t = 0; t < dimV; ++t)
    for (int ij = 0; ij < r * r; ++ij)
      W.set(t, ij, basis[size_t(t)][size_t(ij) * size_t(N)]);
  RrefResult wr = mat_rref(W);
  int dimW = wr.rank;

  unsigned long long combos = pow_ull(uint64_t(F->q), dimW);
  if (combos > (1ull << 22))
    throw cap_exceeded("unit-group enumeration too large");
  long long invc = 0;
  std::vector<uint8_t> coef(size_t(std::max(dimW, 1)), 0);
  while (true) {
    MatFq w(F, r, r);
    for (int t = 0; t < dimW; ++t) {
      if (!coef[size_t(t)]) continue;
      for (int ij = 0; ij < r * r; ++ij)
        w.set(ij / r, ij % r,
              F->add(w.at(ij / r, ij % r),
                     F->mul(coef[size_t(t)], wr.mat.at(t, ij))));
    }
    if (w.invertible()) ++invc;
    int t = 0;
    while (t < dimW) {
      coef[size_t(t)] = uint8_t(coef[size_t(t)] + 1);
      if (coef[size_t(t)] == F->q) {
        coef[size_t(t)] = 0;
        ++t;
      } else {
        break;
      }
    }
    if (t == dimW) break;
  }
  return mul_guard(pow_ull(uint64_t(F->q), dimV - dimW),
                   (unsigned long long)invc);
}

// Number of left cosets of the given type, computed at a precision where the
// Hermite enumeration is valid regardless of the caller's working precision.
long long coset_tally(const FieldDesc* F, const DivisorType& a) {
  int N2 = int(type_sum(a) + a.back() + 1);
  return (long long)left_cosets(F, N2, a).size();
}

}  // namespace

MatON::MatON(const FieldDesc* F, int N, int r) : F_(F), N_(N), r_(r) {
  if (!F || F->n != 1)
    throw invalid_input("local-ring matrices require a single-stage field");
  if (F->q > 255)
    throw invalid_input("base field too large for local-ring digits");
  if (N < 1 || N > 64) throw invalid_input("local-ring precision out of range");
  if (r < 1 || r > 8) throw invalid_input("matrix dimension out of range");
  a_.assign(size_t(r) * size_t(r) * size_t(N), 0);
}

MatON MatON::identity(const FieldDesc* F, int N, int r) {
  MatON M(F, N, r);
  for (int i = 0; i < r; ++i) M.set_digit(i, i, 0, 1);
  return M;
}

MatON MatON::diag_tpow(const FieldDesc* F, int N, const std::vector<int>& e) {
  MatON M(F, N, int(e.size()));
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] >= N)
      throw invalid_input("diagonal exponent out of range for this precision");
    M.set_digit(int(i), int(i), e[i], 1);
  }
  return M;
}

void MatON::set_digit(int i, int j, int d, uint8_t c) {
  if (i < 0 || i >= r_ || j < 0 || j >= r_ || d < 0 || d >= N_)
    throw invalid_input("matrix digit index out of range");
  if (c >= F_->q) throw invalid_input("digit is not a base-field encoding");
  a_[(size_t(i) * r_ + j) * N_ + d] = c;
}

int MatON::val(int i, int j) const {
  for (int d = 0; d < N_; ++d)
    if (digit(i, j, d)) return d;
  return N_;
}

MatON MatON::mul(const MatON& o) const {
  if (F_ != o.F_ || N_ != o.N_ || r_ != o.r_)
    throw invalid_input("matrix shapes or rings do not match");
  MatON out(F_, N_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) {
      Digits acc(size_t(N_), 0);
      for (int k = 0; k < r_; ++k)
        for (int d1 = 0; d1 < N_; ++d1) {
          uint8_t x = digit(i, k, d1);
          if (!x) continue;
          for (int d2 = 0; d1 + d2 < N_; ++d2) {
            uint8_t y = o.digit(k, j, d2);
            if (!y) continue;
            uint8_t& s = acc[size_t(d1 + d2)];
            s = F_->add(s, F_->mul(x, y));
          }
        }
      set_entry(out, i, j, acc);
    }
  return out;
}

MatON MatON::extend(int N2) const {
  if (N2 < N_) throw invalid_input("extension precision below current level");
  MatON out(F_, N2, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j)
      for (int d = 0; d < N_; ++d) out.set_digit(i, j, d, digit(i, j, d));
  return out;
}

MatON MatON::truncate(int N2) const {
  if (N2 > N_) throw invalid_input("truncation precision above current level");
  MatON out(F_, N2, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j)
      for (int d = 0; d < N2; ++d) out.set_digit(i, j, d, digit(i, j, d));
  return out;
}

std::vector<uint8_t> MatON::det() const {
  std::vector<int> rows(size_t(r_), 0);
  std::iota(rows.begin(), rows.end(), 0);
  return det_sub(*this, rows, (1u << r_) - 1u);
}

MatON MatON::adjugate() const {
  MatON out(F_, N_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) {
      std::vector<int> rows;
      for (int t = 0; t < r_; ++t)
        if (t != i) rows.push_back(t);
      Digits m = det_sub(*this, rows, ((1u << r_) - 1u) & ~(1u << j));
      if ((i + j) & 1)
        for (auto& c : m) c = F_->neg(c);
      set_entry(out, j, i, m);
    }
  return out;
}

MatON MatON::inverse() const {
  MatON A = *this, R = identity(F_, N_, r_);
  for (int s = 0; s < r_; ++s) {
    int pr = -1;
    for (int i = s; i < r_; ++i)
      if (A.val(i, s) == 0) {
        pr = i;
        break;
      }
    if (pr < 0)
      throw invalid_input("matrix is not invertible over the local ring");
    row_swap(A, s, pr);
    row_swap(R, s, pr);
    Digits pinv = punit_inverse(F_, entry_of(A, s, s));
    row_scale(A, s, pinv);
    row_scale(R, s, pinv);
    for (int i = 0; i < r_; ++i) {
      if (i == s) continue;
      Digits f = entry_of(A, i, s);
      if (pval_of(f) == N_) continue;
      row_sub(A, i, s, f);
      row_sub(R, i, s, f);
    }
  }
  return R;
}

std::string MatON::text() const {
  std::ostringstream os;
  for (int i = 0; i < r_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < r_; ++j) {
      if (j) os << ", ";
      bool first = true;
      for (int d = 0; d < N_; ++d) {
        uint8_t c = digit(i, j, d);
        if (!c) continue;
        if (!first) os << "+";
        first = false;
        if (d == 0 || c != 1) os << int(c);
        if (d > 0) os << (d == 1 ? std::string("t") : "t^" + std::to_string(d));
      }
      if (first) os << "0";
    }
  }
  return os.str();
}

SmithDecomposition smith_decompose(const MatON& M) {
  const FieldDesc* F = M.field();
  int N = M.level(), r = M.dim();
  MatON A = M;
  MatON U = MatON::identity(F, N, r), V = MatON::identity(F, N, r);
  std::vector<int> type;
  for (int s = 0; s < r; ++s) {
    int bi = -1, bj = -1, bv = N;
    for (int i = s; i < r; ++i)
      for (int j = s; j < r; ++j) {
        int v = A.val(i, j);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bv >= N)
      throw invalid_input(
          "insufficient precision: determinant is not a unit times a power "
          "of t at this truncation");
    row_swap(A, s, bi);
    row_swap(U, s, bi);
    col_swap(A, s, bj);
    col_swap(V, s, bj);
    Digits piv = entry_of(A, s, s);
    Digits unitpart(size_t(N), 0);
    for (int d = bv; d < N; ++d) unitpart[size_t(d - bv)] = piv[size_t(d)];
    Digits uinv = punit_inverse(F, unitpart);
    row_scale(A, s, uinv);
    row_scale(U, s, uinv);
    for (int i = s + 1; i < r; ++i) {
      if (A.val(i, s) >= N) continue;
      Digits f = pdivide(F, entry_of(A, i, s), entry_of(A, s, s));
      row_sub(A, i, s, f);
      row_sub(U, i, s, f);
    }
    for (int j = s + 1; j < r; ++j) {
      if (A.val(s, j) >= N) continue;
      Digits f = pdivide(F, entry_of(A, s, j), entry_of(A, s, s));
      col_sub(A, j, s, f);
      col_sub(V, j, s, f);
    }
    type.push_back(bv);
  }
  if (!(A == MatON::diag_tpow(F, N, type)))
    throw internal_error("reduction failed to reach diagonal form");
  std::sort(type.begin(), type.end());
  return {type, U, V};
}

DivisorType smith_type(const MatON& M) { return smith_decompose(M).type; }

MatON hnf_of(const MatON& M) {
  const FieldDesc* F = M.field();
  int N = M.level(), r = M.dim();
  MatON A = M;
  for (int i = r - 1; i >= 0; --i) {
    int bj = -1, bv = N;
    for (int j = 0; j <= i; ++j) {
      int v = A.val(i, j);
      if (v < bv) {
        bv = v;
        bj = j;
      }
    }
    if (bv >= N)
      throw invalid_input("insufficient precision for a Hermite form");
    col_swap(A, bj, i);
    Digits piv = entry_of(A, i, i);
    Digits unitpart(size_t(N), 0);
    for (int d = bv; d < N; ++d) unitpart[size_t(d - bv)] = piv[size_t(d)];
    col_scale(A, i, punit_inverse(F, unitpart));
    for (int j = 0; j < i; ++j) {
      if (A.val(i, j) >= N) continue;
      Digits f = pdivide(F, entry_of(A, i, j), entry_of(A, i, i));
      col_sub(A, j, i, f);
    }
  }
  // reduce entries above each diagonal pivot modulo the pivot's t power
  for (int j = 1; j < r; ++j)
    for (int i = j - 1; i >= 0; --i) {
      int di = A.val(i, i);
      Digits e = entry_of(A, i, j);
      Digits f(size_t(N), 0);
      for (int d = di; d < N; ++d) f[size_t(d - di)] = e[size_t(d)];
      if (pval_of(f) == N) continue;
      col_sub(A, j, i, f);
    }
  return A;
}

std::vector<MatON> left_cosets(const FieldDesc* F, int N,
                               const DivisorType& a) {
  if (!F || F->n != 1)
    throw invalid_input("local-ring cosets require a single-stage field");
  validate_type(a);
  int r = int(a.size());
  long long S = type_sum(a);
  if (S + a.back() >= N)
    throw invalid_input("insufficient precision for the requested divisor type");
  int q = F->q;
  std::vector<MatON> out;
  std::vector<int> d(size_t(r), 0);
  unsigned long long visited = 0;

  auto emit = [&]() {
    std::vector<std::array<int, 3>> slots;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        for (int dd = 0; dd < d[size_t(i)]; ++dd) slots.push_back({i, j, dd});
    std::vector<uint8_t> cur(slots.size(), 0);
    while (true) {
      if (++visited > caps().group)
        throw cap_exceeded("coset enumeration exceeded the group cap");
      MatON M(F, N, r);
      for (int i = 0; i < r; ++i) M.set_digit(i, i, d[size_t(i)], 1);
      for (size_t t = 0; t < slots.size(); ++t)
        M.set_digit(slots[t][0], slots[t][1], slots[t][2], cur[t]);
      if (smith_type(M) == a) out.push_back(std::move(M));
      size_t t = 0;
      while (t < slots.size()) {
        cur[t] = uint8_t(cur[t] + 1);
        if (cur[t] == q) {
          cur[t] = 0;
          ++t;
        } else {
          break;
        }
      }
      if (t == slots.size()) break;
    }
  };

  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == r - 1) {
      if (rem >= N) return;
      d[size_t(pos)] = rem;
      emit();
      return;
    }
    for (int v = 0; v <= rem && v < N; ++v) {
      d[size_t(pos)] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, int(S));
  return out;
}

HeckeElement convolve(int q, const DivisorType& a, const DivisorType& b,
                      int N) {
  validate_type(a);
  validate_type(b);
  if (a.size() != b.size())
    throw invalid_input("divisor types must have the same length");
  const FieldDesc* F = field_q(q);
  N = resolve_precision(a, b, N);
  std::vector<MatON> X = left_cosets(F, N, a);
  std::vector<MatON> Y = left_cosets(F, N, b);
  std::map<std::vector<uint8_t>, std::pair<DivisorType, long long>> per;
  for (const MatON& x : X)
    for (const MatON& y : Y) {
      MatON h = hnf_of(x.mul(y));
      auto& slot = per[h.bytes()];
      if (slot.second == 0) slot.first = smith_type(h);
      ++slot.second;
    }
  std::map<DivisorType, std::pair<long long, long long>> agg;
  for (const auto& kv : per) {
    auto& g = agg[kv.second.first];
    if (g.second == 0) {
      g.first = kv.second.second;
    } else if (g.first != kv.second.second) {
      throw internal_error("pair counts are not uniform across the cosets of a type");
    }
    ++g.second;
  }
  HeckeElement out;
  for (const auto& kv : agg) {
    if (kv.second.second != coset_tally(F, kv.first))
      throw internal_error("pair classification missed cosets of an output type");
    out[kv.first] = kv.second.first;
  }
  return out;
}

HeckeElement hco_expand(int q, const DivisorType& a, const DivisorType& b,
                        int N) {
  validate_type(a);
  validate_type(b);
  if (a.size() != b.size())
    throw invalid_input("divisor types must have the same length");
  const FieldDesc* F = field_q(q);
  N = resolve_precision(a, b, N);
  int r = int(a.size());
  int D = int(type_sum(a) + type_sum(b));

  std::vector<MatON> Y = left_cosets(F, N, b);
  std::map<std::vector<uint8_t>, size_t> pos;
  for (size_t j = 0; j < Y.size(); ++j) pos.emplace(Y[j].bytes(), j);

  // Generators of the stabilizer K n g_a^-1 K g_a: elementary matrices with
  // the valuation gaps forced by the type, and single-digit diagonal units.
  std::vector<MatON> gens;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      int e0 = std::max(0, a[size_t(j)] - a[size_t(i)]);
      for (int e = e0; e < N; ++e) {
        MatON E = MatON::identity(F, N, r);
        E.set_digit(i, j, e, 1);
        gens.push_back(std::move(E));
      }
    }
  for (int i = 0; i < r; ++i) {
    if (F->q > 2) {
      MatON Mg = MatON::identity(F, N, r);
      Mg.set_digit(i, i, 0, F->omega);
      gens.push_back(std::move(Mg));
    }
    for (int e = 1; e < N; ++e)
      for (int c = 1; c < F->q; ++c) {
        MatON Mg = MatON::identity(F, N, r);
        Mg.set_digit(i, i, e, uint8_t(c));
        gens.push_back(std::move(Mg));
      }
  }

  MatON gaN = MatON::diag_tpow(F, N, std::vector<int>(a.begin(), a.end()));
  int NG = N + 1;  // one guard digit for the transform bookkeeping
  MatON gaG = MatON::diag_tpow(F, NG, std::vector<int>(a.begin(), a.end()));
  MatON gbG = MatON::diag_tpow(F, NG, std::vector<int>(b.begin(), b.end()));

  std::vector<char> seen(Y.size(), 0);
  HeckeElement out;
  for (size_t j0 = 0; j0 < Y.size(); ++j0) {
    if (seen[j0]) continue;
    std::vector<size_t> orbit{j0};
    seen[j0] = 1;
    for (size_t qi = 0; qi < orbit.size(); ++qi) {
      const MatON& cur = Y[orbit[qi]];
      for (const MatON& g : gens) {
        MatON h = hnf_of(g.mul(cur));
        auto it = pos.find(h.bytes());
        if (it == pos.end())
          throw internal_error("orbit step left the coset space");
        if (!seen[it->second]) {
          seen[it->second] = 1;
          orbit.push_back(it->second);
        }
      }
    }
    // Rewrite the lowest-index representative as k * diag(t^b) * (unit in K)
    // and form the composition term g_a * k * g_b.
    SmithDecomposition sd = smith_decompose(Y[j0].extend(NG));
    if (sd.type != b)
      throw internal_error("coset representative has the wrong divisor type");
    MatON gpp = gaG.mul(sd.U.inverse()).mul(gbG);
    if (pval_of(gpp.det()) != D)
      throw internal_error("unexpected determinant valuation in a composition term");
    MatON adj = gpp.adjugate();
    unsigned long long h1 = count_members(F, N, r, nullptr, gpp, adj, D);
    unsigned long long h2 = count_members(F, N, r, &b, gpp, adj, D);
    if (h2 == 0 || h1 % h2 != 0)
      throw internal_error("composition coefficient is not an integral subgroup index");
    out[smith_type(gaN.mul(Y[j0]))] += (long long)(h1 / h2);
  }
  return out;
}

long long index_count(int q, const DivisorType& a, int N) {
  validate_type(a);
  const FieldDesc* F = field_q(q);
  int r = int(a.size());
  long long S = type_sum(a);
  if (N == 0) N = int(S + a.back() + 1);
  if (S + a.back() >= N)
    throw invalid_input("insufficient precision for the requested divisor type");
  if (N > 64) throw cap_exceeded("local-ring precision beyond supported range");
  MatON ga = MatON::diag_tpow(F, N, std::vector<int>(a.begin(), a.end()));
  MatON adj = ga.adjugate();
  unsigned long long members = count_members(F, N, r, nullptr, adj, ga, int(S));
  unsigned long long order = 1;
  for (int i = 0; i < r; ++i)
    order = mul_guard(order, pow_ull(uint64_t(q), r) - pow_ull(uint64_t(q), i));
  order = mul_guard(order, pow_ull(uint64_t(q), r * r * (N - 1)));
  if (members == 0 || order % members != 0)
    throw internal_error("stabilizer count does not divide the group order");
  return (long long)(order / members);
}

}  // namespace dforms
