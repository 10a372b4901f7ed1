#include "dforms/satake.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "dforms/error.hpp"

namespace dforms {

namespace {

long long powll_checked(long long b, int e) {
  unsigned __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= (unsigned __int128)b;
    if (r > (unsigned __int128)LLONG_MAX) throw cap_exceeded("power overflows");
  }
  return (long long)r;
}

// binomial(n, j) for n >= 0; zero outside the triangle
long long binom(long long n, long long j) {
  if (j < 0 || j > n) return 0;
  if (j > n - j) j = n - j;
  long long r = 1;
  for (long long i = 1; i <= j; ++i) r = r * (n - j + i) / i;
  return r;
}

// multichoose(L, k) = C(L+k-1, k), clamped to limit+1
unsigned long long multichoose_capped(int L, int k, unsigned long long limit) {
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    unsigned __int128 t = (unsigned __int128)r * (unsigned long long)(L - 1 + i);
    t /= (unsigned long long)i;
    if (t > limit) return limit + 1;
    r = (unsigned long long)t;
  }
  return r;
}

std::vector<uint8_t> vec_of_enc(unsigned long long enc, int q, int r) {
  std::vector<uint8_t> v(size_t(r), 0);
  for (int i = 0; i < r; ++i) {
    v[size_t(i)] = uint8_t(enc % (unsigned long long)q);
    enc /= (unsigned long long)q;
  }
  return v;
}

unsigned long long enc_of_vec(const std::vector<uint8_t>& v, int q) {
  unsigned long long enc = 0;
  for (size_t i = v.size(); i-- > 0;)
    enc = enc * (unsigned long long)q + v[i];
  return enc;
}

}  // namespace

const LineTable* line_table(const FieldDesc* F, int r) {
  if (F == nullptr || F->n != 1)
    throw invalid_input("line table needs a plain F_q coefficient field");
  if (r < 1) throw invalid_input("line table rank must be at least 1");
  static std::map<std::pair<const FieldDesc*, int>, std::unique_ptr<LineTable>>
      cache;
  auto key = std::make_pair(F, r);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.get();

  int q = F->q;
  unsigned long long total = 1;
  for (int i = 0; i < r; ++i) {
    total *= (unsigned long long)q;
    if (total > caps().field_enum)
      throw cap_exceeded("vector space too large to enumerate lines");
  }
  unsigned long long L = (total - 1) / (unsigned long long)(q - 1);
  if (L > 255) throw cap_exceeded("too many lines for the table encoding");

  std::unique_ptr<LineTable> T(new LineTable());
  T->F_ = F;
  T->r_ = r;
  T->L_ = int(L);
  T->line_of_vec_.assign(size_t(total), -1);
  T->scalar_of_vec_.assign(size_t(total), 0);
  // normalized representatives first, in increasing encoding order
  for (unsigned long long enc = 1; enc < total; ++enc) {
    std::vector<uint8_t> v = vec_of_enc(enc, q, r);
    size_t f = 0;
    while (v[f] == 0) ++f;
    if (v[f] != 1) continue;
    T->line_of_vec_[size_t(enc)] = int(T->reps_.size());
    T->scalar_of_vec_[size_t(enc)] = 1;
    T->reps_.push_back(v);
  }
  for (unsigned long long enc = 1; enc < total; ++enc) {
    if (T->line_of_vec_[size_t(enc)] >= 0) continue;
    std::vector<uint8_t> v = vec_of_enc(enc, q, r);
    size_t f = 0;
    while (v[f] == 0) ++f;
    uint8_t first = v[f];
    uint8_t s = F->inv(first);
    std::vector<uint8_t> rep(v.size());
    for (size_t i = 0; i < v.size(); ++i) rep[i] = F->mul(s, v[i]);
    T->line_of_vec_[size_t(enc)] =
        T->line_of_vec_[size_t(enc_of_vec(rep, q))];
    T->scalar_of_vec_[size_t(enc)] = first;
  }
  const LineTable* out = T.get();
  cache.emplace(key, std::move(T));
  return out;
}

const LineTable* line_table(int q, int r) { return line_table(field_q(q), r); }

std::pair<int, uint8_t> LineTable::locate(const std::vector<uint8_t>& v) const {
  if (int(v.size()) != r_) throw invalid_input("vector length mismatch");
  bool nz = false;
  for (uint8_t c : v) {
    if (c >= F_->q) throw invalid_input("vector entry outside the field");
    if (c != 0) nz = true;
  }
  if (!nz) throw invalid_input("the zero vector lies on no line");
  size_t enc = size_t(enc_of_vec(v, F_->q));
  return {line_of_vec_[enc], scalar_of_vec_[enc]};
}

std::string LineTable::gen_name(int i) const {
  std::ostringstream os;
  os << "u(";
  const auto& v = reps_[size_t(i)];
  for (size_t j = 0; j < v.size(); ++j) {
    if (j) os << ",";
    os << F_->el_text(v[j]);
  }
  os << ")";
  return os.str();
}

void TermKey::insert(uint8_t line) {
  int pos = len;
  while (pos > 0 && idx[size_t(pos - 1)] > line) {
    idx[size_t(pos)] = idx[size_t(pos - 1)];
    --pos;
  }
  idx[size_t(pos)] = line;
  ++len;
}

RElement::RElement(const LineTable* T, int degree) : T_(T), deg_(degree) {
  if (T == nullptr) throw invalid_input("null line table");
  if (degree < 0) throw invalid_input("negative degree");
  if (degree > TermKey::kMaxDegree)
    throw cap_exceeded("monomial degree exceeds the key width");
}

RElement relement_from_sorted(const LineTable* T, int degree,
                              std::vector<std::pair<TermKey, uint8_t>> terms) {
  RElement f(T, degree);
  f.t_ = std::move(terms);
  return f;
}

RElement RElement::monomial(const LineTable* T, const std::vector<int>& lines,
                            uint8_t c) {
  RElement f(T, int(lines.size()));
  if (c >= T->field()->q) throw invalid_input("coefficient outside the field");
  if (c == 0) return f;
  TermKey k;
  for (int l : lines) {
    if (l < 0 || l >= T->count()) throw invalid_input("line index out of range");
    k.insert(uint8_t(l));
  }
  f.t_.emplace_back(k, c);
  return f;
}

void RElement::check(const RElement& o) const {
  if (T_ == nullptr || o.T_ == nullptr) throw invalid_input("null line table");
  if (T_ != o.T_) throw invalid_input("operands over different line tables");
}

RElement RElement::add(const RElement& o) const {
  check(o);
  if (deg_ != o.deg_)
    throw invalid_input("degree mismatch in a homogeneous sum");
  const FieldDesc* F = T_->field();
  std::vector<std::pair<TermKey, uint8_t>> out;
  out.reserve(t_.size() + o.t_.size());
  size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
      out.push_back(t_[i++]);
    } else if (i == t_.size() || o.t_[j].first < t_[i].first) {
      out.push_back(o.t_[j++]);
    } else {
      uint8_t c = F->add(t_[i].second, o.t_[j].second);
      if (c != 0) out.emplace_back(t_[i].first, c);
      ++i;
      ++j;
    }
  }
  return relement_from_sorted(T_, deg_, std::move(out));
}

RElement RElement::neg() const {
  const FieldDesc* F = T_ ? T_->field() : nullptr;
  if (F == nullptr) throw invalid_input("null line table");
  std::vector<std::pair<TermKey, uint8_t>> out = t_;
  for (auto& tc : out) tc.second = F->neg(tc.second);
  return relement_from_sorted(T_, deg_, std::move(out));
}

RElement RElement::sub(const RElement& o) const { return add(o.neg()); }

RElement RElement::scale(uint8_t c) const {
  if (T_ == nullptr) throw invalid_input("null line table");
  const FieldDesc* F = T_->field();
  if (c >= F->q) throw invalid_input("coefficient outside the field");
  if (c == 0) return RElement(T_, deg_);
  std::vector<std::pair<TermKey, uint8_t>> out = t_;
  for (auto& tc : out) tc.second = F->mul(tc.second, c);
  return relement_from_sorted(T_, deg_, std::move(out));
}

RElement RElement::mul(const RElement& o) const {
  check(o);
  int d = deg_ + o.deg_;
  if (d > TermKey::kMaxDegree)
    throw cap_exceeded("product degree exceeds the key width");
  const FieldDesc* F = T_->field();
  std::map<TermKey, uint8_t> acc;
  for (const auto& a : t_) {
    for (const auto& b : o.t_) {
      TermKey k;
      k.len = uint8_t(a.first.len + b.first.len);
      std::merge(a.first.idx.begin(), a.first.idx.begin() + a.first.len,
                 b.first.idx.begin(), b.first.idx.begin() + b.first.len,
                 k.idx.begin());
      uint8_t c = F->mul(a.second, b.second);
      auto it = acc.find(k);
      if (it == acc.end()) {
        if (c != 0) {
          acc.emplace(k, c);
          if (acc.size() > caps().terms)
            throw cap_exceeded("term count exceeds the configured cap");
        }
      } else {
        it->second = F->add(it->second, c);
        if (it->second == 0) acc.erase(it);
      }
    }
  }
  std::vector<std::pair<TermKey, uint8_t>> out(acc.begin(), acc.end());
  return relement_from_sorted(T_, d, std::move(out));
}

RElement RElement::mul_monomial(uint8_t line, uint8_t c) const {
  if (T_ == nullptr) throw invalid_input("null line table");
  const FieldDesc* F = T_->field();
  if (line >= T_->count()) throw invalid_input("line index out of range");
  if (c >= F->q) throw invalid_input("coefficient outside the field");
  int d = deg_ + 1;
  if (d > TermKey::kMaxDegree)
    throw cap_exceeded("product degree exceeds the key width");
  if (c == 0) return RElement(T_, d);
  // inserting a common entry into equal-length sorted keys preserves their
  // relative order, so the term list stays sorted
  std::vector<std::pair<TermKey, uint8_t>> out = t_;
  for (auto& tc : out) {
    tc.first.insert(line);
    tc.second = F->mul(tc.second, c);
  }
  return relement_from_sorted(T_, d, std::move(out));
}

std::string RElement::text() const {
  if (t_.empty()) return "0";
  const FieldDesc* F = T_->field();
  std::ostringstream os;
  bool first_term = true;
  for (const auto& tc : t_) {
    if (!first_term) os << " + ";
    first_term = false;
    const TermKey& k = tc.first;
    if (k.len == 0 || tc.second != 1) {
      os << F->el_text(tc.second);
      if (k.len > 0) os << "*";
    }
    int i = 0;
    while (i < k.len) {
      int j = i;
      while (j < k.len && k.idx[size_t(j)] == k.idx[size_t(i)]) ++j;
      if (i > 0) os << "*";
      os << T_->gen_name(k.idx[size_t(i)]);
      if (j - i > 1) os << "^" << (j - i);
      i = j;
    }
  }
  return os.str();
}

namespace {

// product of all line forms and the quotients by each single form
struct ClearData {
  MPoly D;
  std::vector<MPoly> Q;  // Q[i] = D / form(i)
};

const ClearData& clear_data(const LineTable* T) {
  static std::map<const LineTable*, std::unique_ptr<ClearData>> cache;
  auto it = cache.find(T);
  if (it != cache.end()) return *it->second;
  const FieldDesc* F = T->field();
  int L = T->count();
  std::vector<MPoly> forms;
  forms.reserve(size_t(L));
  for (int i = 0; i < L; ++i) forms.push_back(MPoly::linear(F, T->rep(i)));
  std::vector<MPoly> pre(size_t(L) + 1), suf(size_t(L) + 1);
  pre[0] = MPoly::constant(F, T->rank(), 1);
  for (int i = 0; i < L; ++i) pre[size_t(i) + 1] = pre[size_t(i)].mul(forms[size_t(i)]);
  suf[size_t(L)] = MPoly::constant(F, T->rank(), 1);
  for (int i = L - 1; i >= 0; --i)
    suf[size_t(i)] = forms[size_t(i)].mul(suf[size_t(i) + 1]);
  auto cd = std::make_unique<ClearData>();
  cd->D = pre[size_t(L)];
  cd->Q.reserve(size_t(L));
  for (int i = 0; i < L; ++i)
    cd->Q.push_back(pre[size_t(i)].mul(suf[size_t(i) + 1]));
  const ClearData& out = *cd;
  cache.emplace(T, std::move(cd));
  return out;
}

// visit every degree-k monomial key together with its cleared polynomial,
// sharing partial products along common prefixes
void monomials_visit(
    const LineTable* T, int k,
    const std::function<void(const TermKey&, const MPoly&)>& fn) {
  const ClearData& cd = clear_data(T);
  TermKey key;
  std::function<void(int, int, const MPoly&)> rec = [&](int start, int left,
                                                        const MPoly& partial) {
    if (left == 0) {
      fn(key, partial);
      return;
    }
    for (int l = start; l < T->count(); ++l) {
      key.idx[size_t(key.len++)] = uint8_t(l);
      rec(l, left - 1, partial.mul(cd.Q[size_t(l)]));
      --key.len;
    }
  };
  rec(0, k, MPoly::constant(T->field(), T->rank(), 1));
}

void check_monomial_caps(const LineTable* T, int k) {
  if (k < 0) throw invalid_input("negative weight");
  if (k > TermKey::kMaxDegree)
    throw cap_exceeded("weight exceeds the key width");
  if (multichoose_capped(T->count(), k, caps().monomials) > caps().monomials)
    throw cap_exceeded("too many monomials at this weight");
}

}  // namespace

MPoly clear_denominators(const RElement& f) {
  if (f.table() == nullptr) throw invalid_input("null line table");
  const LineTable* T = f.table();
  const ClearData& cd = clear_data(T);
  const FieldDesc* F = T->field();
  MPoly out(F, T->rank());
  for (const auto& tc : f.terms()) {
    MPoly p = MPoly::constant(F, T->rank(), tc.second);
    for (int i = 0; i < tc.first.len; ++i)
      p = p.mul(cd.Q[size_t(tc.first.idx[size_t(i)])]);
    out = out.add(p);
  }
  return out;
}

// Zero test in the function field.  Clearing by the least common denominator
// (each line form raised to its largest multiplicity across the terms) is
// equivalent to clear_denominators for this purpose -- both multiply by a
// nonzero polynomial -- but keeps the scratch degree proportional to the
// element instead of the full line product, which matters for wide sums.
bool r_is_zero(const RElement& f) {
  if (f.table() == nullptr) throw invalid_input("null line table");
  if (f.is_zero()) return true;
  const LineTable* T = f.table();
  const FieldDesc* F = T->field();
  const int L = T->count();
  std::vector<int> peak(size_t(L), 0);
  std::vector<int> mult(size_t(L), 0);
  for (const auto& tc : f.terms()) {
    std::fill(mult.begin(), mult.end(), 0);
    for (int i = 0; i < tc.first.len; ++i)
      ++mult[size_t(tc.first.idx[size_t(i)])];
    for (int l = 0; l < L; ++l)
      peak[size_t(l)] = std::max(peak[size_t(l)], mult[size_t(l)]);
  }
  std::vector<MPoly> forms;
  forms.reserve(size_t(L));
  for (int l = 0; l < L; ++l) forms.push_back(MPoly::linear(F, T->rep(l)));
  MPoly acc(F, T->rank());
  for (const auto& tc : f.terms()) {
    std::fill(mult.begin(), mult.end(), 0);
    for (int i = 0; i < tc.first.len; ++i)
      ++mult[size_t(tc.first.idx[size_t(i)])];
    MPoly p = MPoly::constant(F, T->rank(), tc.second);
    for (int l = 0; l < L; ++l)
      for (int e = mult[size_t(l)]; e < peak[size_t(l)]; ++e)
        p = p.mul(forms[size_t(l)]);
    acc = acc.add(p);
  }
  return acc.is_zero();
}

bool r_equal(const RElement& a, const RElement& b) {
  return clear_denominators(a) == clear_denominators(b);
}

long long graded_dim(int r, int q, int k) {
  const LineTable* T = line_table(q, r);
  check_monomial_caps(T, k);
  std::vector<MPoly> polys;
  monomials_visit(T, k,
                  [&](const TermKey&, const MPoly& p) { polys.push_back(p); });
  return span_dim(polys);
}

long long dim_formula(int r, int q, int k) {
  if (r < 1) throw invalid_input("rank must be at least 1");
  if (q < 2) throw invalid_input("q must be at least 2");
  if (k < 0) throw invalid_input("negative weight");
  if (r > 16) throw cap_exceeded("rank too large for the closed formula");
  long long total = 0;
  for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
    int w = 0, cnt = 0;
    for (int nu = 1; nu <= r - 1; ++nu) {
      if ((mask >> (nu - 1)) & 1u) {
        w += nu;
        ++cnt;
      }
    }
    total += powll_checked(q, w) * binom(k, cnt);
  }
  return total;
}

UniversalFamily universal_coeffs(int r, int q) {
  const LineTable* T = line_table(q, r);
  const FieldDesc* F = T->field();
  unsigned long long total = 1;
  for (int i = 0; i < r; ++i) total *= (unsigned long long)q;
  unsigned long long nvec = total - 1;
  if (nvec > (unsigned long long)TermKey::kMaxDegree)
    throw cap_exceeded("universal expansion degree exceeds the key width");
  int n = int(nvec);

  // running coefficients of X^(j+1) in X * prod(1 - (1/v) X)
  std::vector<RElement> e;
  e.reserve(size_t(n) + 1);
  e.push_back(RElement::one(T));
  for (int enc = 1; enc <= n; ++enc) {
    std::vector<uint8_t> v = vec_of_enc((unsigned long long)enc, q, r);
    auto [line, alpha] = T->locate(v);
    uint8_t s = F->neg(F->inv(alpha));
    e.push_back(RElement(T, int(e.size()) - 1 + 1));
    size_t terms = 0;
    for (size_t j = e.size() - 1; j >= 1; --j) {
      e[j] = e[j].add(e[j - 1].mul_monomial(uint8_t(line), s));
      terms += e[j].term_count();
    }
    if (terms > caps().terms)
      throw cap_exceeded("universal expansion exceeds the term cap");
  }

  UniversalFamily U;
  U.r = r;
  U.table = T;
  long long qe = q;
  for (int i = 1; i <= r; ++i, qe *= q) U.c.push_back(e[size_t(qe - 1)]);
  for (int j = 1; j <= n; ++j) {
    long long x = j + 1;
    while (x % q == 0) x /= q;
    if (x == 1) continue;
    if (!e[size_t(j)].is_zero() && !r_is_zero(e[size_t(j)]))
      throw internal_error(
          "non-q-power coefficient survives in the universal expansion");
  }
  return U;
}

namespace {

struct StratumData {
  MatFq rref;              // rp x r reduced basis
  std::vector<int> pivots; // pivot column of each basis row
  int rp = 0;
};

StratumData stratum_data(const LineTable* T, const StratumLabel& Vp) {
  const FieldDesc* F = T->field();
  int r = T->rank();
  if (Vp.basis.empty())
    throw invalid_input("stratum subspace must have positive dimension");
  MatFq B(F, int(Vp.basis.size()), r);
  for (size_t i = 0; i < Vp.basis.size(); ++i) {
    if (int(Vp.basis[i].size()) != r)
      throw invalid_input("stratum basis row has the wrong length");
    for (int j = 0; j < r; ++j) {
      if (Vp.basis[i][size_t(j)] >= F->q)
        throw invalid_input("stratum basis entry outside the field");
      B.set(int(i), j, Vp.basis[i][size_t(j)]);
    }
  }
  RrefResult rr = mat_rref(B);
  if (rr.rank == 0)
    throw invalid_input("stratum subspace must have positive dimension");
  StratumData S;
  S.rp = rr.rank;
  S.pivots.assign(rr.pivots.begin(), rr.pivots.begin() + rr.rank);
  S.rref = MatFq(F, rr.rank, r);
  for (int i = 0; i < rr.rank; ++i)
    for (int j = 0; j < r; ++j) S.rref.set(i, j, rr.mat.at(i, j));
  return S;
}

// coordinates of w in the reduced basis, or nothing if w lies outside
std::optional<std::vector<uint8_t>> coords_in(const StratumData& S,
                                              const FieldDesc* F,
                                              std::vector<uint8_t> w) {
  std::vector<uint8_t> beta(size_t(S.rp), 0);
  int r = S.rref.cols();
  for (int j = 0; j < S.rp; ++j) {
    uint8_t b = w[size_t(S.pivots[size_t(j)])];
    beta[size_t(j)] = b;
    if (b != 0)
      for (int c = 0; c < r; ++c)
        w[size_t(c)] = F->sub(w[size_t(c)], F->mul(b, S.rref.at(j, c)));
  }
  for (uint8_t c : w)
    if (c != 0) return std::nullopt;
  return beta;
}

RElement specialize_core(const RElement& f, const StratumData& S,
                         const LineTable* small) {
  const LineTable* T = f.table();
  const FieldDesc* F = T->field();
  // per-line fate: dead, or a line of the small table with a scalar
  std::vector<int> new_line(size_t(T->count()), -1);
  std::vector<uint8_t> new_scalar(size_t(T->count()), 0);
  for (int l = 0; l < T->count(); ++l) {
    auto beta = coords_in(S, F, T->rep(l));
    if (!beta) continue;
    auto [nl, gamma] = small->locate(*beta);
    new_line[size_t(l)] = nl;
    new_scalar[size_t(l)] = F->inv(gamma);
  }
  std::map<TermKey, uint8_t> acc;
  for (const auto& tc : f.terms()) {
    TermKey k;
    uint8_t c = tc.second;
    bool dead = false;
    for (int i = 0; i < tc.first.len; ++i) {
      int l = tc.first.idx[size_t(i)];
      if (new_line[size_t(l)] < 0) {
        dead = true;
        break;
      }
      k.insert(uint8_t(new_line[size_t(l)]));
      c = F->mul(c, new_scalar[size_t(l)]);
    }
    if (dead || c == 0) continue;
    auto it = acc.find(k);
    if (it == acc.end()) {
      acc.emplace(k, c);
    } else {
      it->second = F->add(it->second, c);
      if (it->second == 0) acc.erase(it);
    }
  }
  std::vector<std::pair<TermKey, uint8_t>> out(acc.begin(), acc.end());
  return relement_from_sorted(small, f.degree(), std::move(out));
}

}  // namespace

RElement specialize_relement(const RElement& f, const StratumLabel& Vp) {
  if (f.table() == nullptr) throw invalid_input("null line table");
  StratumData S = stratum_data(f.table(), Vp);
  return specialize_core(f, S, line_table(f.table()->field(), S.rp));
}

UniversalFamily specialize_stratum(const UniversalFamily& U,
                                   const StratumLabel& Vp) {
  if (U.table == nullptr || int(U.c.size()) != U.r)
    throw invalid_input("malformed universal family");
  StratumData S = stratum_data(U.table, Vp);
  const LineTable* small = line_table(U.table->field(), S.rp);
  UniversalFamily out;
  out.r = S.rp;
  out.table = small;
  for (int i = 1; i <= U.r; ++i) {
    RElement spec = specialize_core(U.c[size_t(i) - 1], S, small);
    if (i <= S.rp) {
      out.c.push_back(spec);
    } else if (!spec.is_zero()) {
      throw internal_error(
          "stratum specialization left a coefficient above the subspace rank");
    }
  }
  return out;
}

std::vector<StratumLabel> all_subspaces(int q, int r) {
  const FieldDesc* F = field_q(q);
  unsigned long long total = 1;
  for (int i = 0; i < r; ++i) {
    total *= (unsigned long long)q;
    if (total > 4096) throw cap_exceeded("too many vectors to enumerate subspaces");
  }
  std::vector<std::vector<uint8_t>> vecs;
  for (unsigned long long enc = 1; enc < total; ++enc)
    vecs.push_back(vec_of_enc(enc, q, r));

  auto reduce = [&](const std::vector<std::vector<uint8_t>>& rows) {
    MatFq B(F, int(rows.size()), r);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < r; ++j) B.set(int(i), j, rows[i][size_t(j)]);
    RrefResult rr = mat_rref(B);
    std::vector<std::vector<uint8_t>> out;
    for (int i = 0; i < rr.rank; ++i) {
      std::vector<uint8_t> row(size_t(r), 0);
      for (int j = 0; j < r; ++j) row[size_t(j)] = rr.mat.at(i, j);
      out.push_back(row);
    }
    return out;
  };
  auto key_of = [&](const std::vector<std::vector<uint8_t>>& rows) {
    std::vector<uint8_t> key;
    key.push_back(uint8_t(rows.size()));
    for (const auto& row : rows) key.insert(key.end(), row.begin(), row.end());
    return key;
  };
  auto contains = [&](const std::vector<std::vector<uint8_t>>& rows,
                      const std::vector<uint8_t>& v) {
    std::vector<uint8_t> w = v;
    for (const auto& row : rows) {
      int p = 0;
      while (row[size_t(p)] == 0) ++p;
      uint8_t b = w[size_t(p)];
      if (b != 0)
        for (int c = 0; c < r; ++c)
          w[size_t(c)] = F->sub(w[size_t(c)], F->mul(b, row[size_t(c)]));
    }
    for (uint8_t c : w)
      if (c != 0) return false;
    return true;
  };

  std::map<std::vector<uint8_t>, std::vector<std::vector<uint8_t>>> found;
  std::deque<std::vector<std::vector<uint8_t>>> work;
  work.push_back({});
  std::set<std::vector<uint8_t>> seen;
  seen.insert(key_of({}));
  while (!work.empty()) {
    auto S = work.front();
    work.pop_front();
    for (const auto& v : vecs) {
      if (!S.empty() && contains(S, v)) continue;
      if (S.empty()) {
        bool in = true;
        for (uint8_t c : v)
          if (c != 0) in = false;
        if (in) continue;
      }
      auto rows = S;
      rows.push_back(v);
      auto red = reduce(rows);
      auto key = key_of(red);
      if (seen.insert(key).second) {
        found.emplace(key, red);
        work.push_back(red);
      }
    }
  }
  std::vector<StratumLabel> out;
  for (auto& kv : found) out.push_back(StratumLabel{kv.second});
  return out;
}

namespace {

// line -> (image line, scalar) for the right action of g
std::vector<std::pair<int, uint8_t>> line_map(const LineTable* T,
                                              const MatFq& g) {
  const FieldDesc* F = T->field();
  int r = T->rank();
  if (g.field() != F || g.rows() != r || g.cols() != r)
    throw invalid_input("matrix does not act on this ring");
  if (!g.invertible())
    throw invalid_input("group action requires an invertible matrix");
  std::vector<std::pair<int, uint8_t>> out;
  out.reserve(size_t(T->count()));
  for (int l = 0; l < T->count(); ++l) {
    const auto& a = T->rep(l);
    std::vector<uint8_t> b(size_t(r), 0);
    for (int j = 0; j < r; ++j) {
      uint8_t s = 0;
      for (int i = 0; i < r; ++i)
        s = F->add(s, F->mul(a[size_t(i)], g.at(i, j)));
      b[size_t(j)] = s;
    }
    auto [nl, alpha] = T->locate(b);
    out.emplace_back(nl, F->inv(alpha));
  }
  return out;
}

RElement act_with_map(const RElement& f,
                      const std::vector<std::pair<int, uint8_t>>& lm) {
  const LineTable* T = f.table();
  const FieldDesc* F = T->field();
  std::map<TermKey, uint8_t> acc;
  for (const auto& tc : f.terms()) {
    TermKey k;
    uint8_t c = tc.second;
    for (int i = 0; i < tc.first.len; ++i) {
      const auto& m = lm[size_t(tc.first.idx[size_t(i)])];
      k.insert(uint8_t(m.first));
      c = F->mul(c, m.second);
    }
    if (c == 0) continue;
    auto it = acc.find(k);
    if (it == acc.end()) {
      acc.emplace(k, c);
    } else {
      it->second = F->add(it->second, c);
      if (it->second == 0) acc.erase(it);
    }
  }
  std::vector<std::pair<TermKey, uint8_t>> out(acc.begin(), acc.end());
  return relement_from_sorted(T, f.degree(), std::move(out));
}

}  // namespace

RElement group_act(const RElement& f, const MatFq& g) {
  if (f.table() == nullptr) throw invalid_input("null line table");
  return act_with_map(f, line_map(f.table(), g));
}

long long invariant_dim(const SubgroupGens& K, int k) {
  if (K.F == nullptr || K.r < 1) throw invalid_input("malformed subgroup");
  const LineTable* T = line_table(K.F, K.r);
  const FieldDesc* F = T->field();
  check_monomial_caps(T, k);

  std::vector<TermKey> keys;
  std::vector<MPoly> polys;
  monomials_visit(T, k, [&](const TermKey& key, const MPoly& p) {
    keys.push_back(key);
    polys.push_back(p);
  });
  size_t M = keys.size();

  std::map<Expt, int, GradedLex> colof;
  for (const auto& p : polys)
    for (const auto& t : p.terms())
      colof.emplace(t.first, int(colof.size()));
  int Tc = int(colof.size());

  MatFq N(F, int(M), Tc);
  for (size_t i = 0; i < M; ++i)
    for (const auto& t : polys[i].terms())
      N.set(int(i), colof.at(t.first), uint8_t(t.second));
  long long rank_n = mat_rref(N).rank;

  std::vector<const MatFq*> gens;
  for (const auto& g : K.gens)
    if (g != MatFq::identity(F, K.r)) gens.push_back(&g);
  MatFq B(F, int(M), Tc * int(gens.size()));
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    auto lm = line_map(T, *gens[gi]);
    int off = Tc * int(gi);
    for (size_t i = 0; i < M; ++i) {
      TermKey img;
      img.len = keys[i].len;
      uint8_t s = 1;
      for (int e = 0; e < keys[i].len; ++e) {
        const auto& m = lm[size_t(keys[i].idx[size_t(e)])];
        img.idx[size_t(e)] = uint8_t(m.first);
        s = F->mul(s, m.second);
      }
      std::sort(img.idx.begin(), img.idx.begin() + img.len);
      auto it = std::lower_bound(keys.begin(), keys.end(), img);
      size_t j = size_t(it - keys.begin());
      for (int t = 0; t < Tc; ++t)
        B.set(int(i), off + t,
              F->sub(F->mul(s, N.at(int(j), t)), N.at(int(i), t)));
    }
  }
  long long rank_b = gens.empty() ? 0 : mat_rref(B).rank;
  return rank_n - rank_b;
}

long long weighted_hilbert(const std::vector<int>& weights, int k) {
  if (weights.empty()) throw invalid_input("weights must be non-empty");
  for (int w : weights)
    if (w <= 0) throw invalid_input("weights must be positive");
  if (k < 0) throw invalid_input("negative degree");
  std::vector<long long> dp(size_t(k) + 1, 0);
  dp[0] = 1;
  for (int w : weights)
    for (int j = w; j <= k; ++j) dp[size_t(j)] += dp[size_t(j - w)];
  return dp[size_t(k)];
}

std::vector<int> weights_unipotent(int r) {
  if (r < 1) throw invalid_input("rank must be at least 1");
  return std::vector<int>(size_t(r), 1);
}

std::vector<int> weights_sl(int r, int q) {
  if (r < 1) throw invalid_input("rank must be at least 1");
  if (q < 2) throw invalid_input("q must be at least 2");
  std::vector<int> w;
  for (int i = 1; i <= r - 1; ++i)
    w.push_back(int(powll_checked(q, i) - 1));
  w.push_back(int((powll_checked(q, r) - 1) / (q - 1)));
  return w;
}

std::vector<int> weights_gl(int r, int q) {
  if (r < 1) throw invalid_input("rank must be at least 1");
  if (q < 2) throw invalid_input("q must be at least 2");
  std::vector<int> w;
  for (int i = 1; i <= r; ++i) w.push_back(int(powll_checked(q, i) - 1));
  return w;
}

long long level_dim_formula(const SubgroupGens& K, int r, int q, int k) {
  if (r < 1) throw invalid_input("rank must be at least 1");
  if (k < 0) throw invalid_input("negative weight");
  if (K.F == nullptr || K.F->n != 1 || K.F->q != q || K.r != r)
    throw invalid_input("subgroup does not match the requested rank and field");
  SubgroupGens G = gl_gens(K.F, r);
  long long total = 0;
  long long denom = 1;
  for (int s = 1; s <= r; ++s) {
    denom *= powll_checked(q, s) - 1;
    DoubleCosets dc = double_cosets(K, G, js_gens(K.F, r, s));
    long long cnt = (long long)dc.count;
    if (cnt % denom != 0)
      throw invalid_input("non-integral term in the level dimension sum");
    long long b = (k == 0) ? (((s - 1) % 2 == 0) ? 1 : -1)
                           : binom((long long)k - 1, (long long)s - 1);
    total += (cnt / denom) * b;
  }
  return total;
}

RElement trace_invariants(const RElement& f, const SubgroupGens& Kp,
                          const SubgroupGens& K) {
  const LineTable* T = f.table();
  if (T == nullptr) throw invalid_input("null line table");
  const FieldDesc* F = T->field();
  if (Kp.F != F || K.F != F || Kp.r != T->rank() || K.r != T->rank())
    throw invalid_input("subgroups do not match the ring");
  std::vector<MatFq> big = group_elements(K);
  std::vector<MatFq> small = group_elements(Kp);
  for (const auto& g : small)
    if (!std::binary_search(big.begin(), big.end(), g))
      throw invalid_input("the first subgroup is not contained in the second");
  for (const auto& g : Kp.gens)
    if (!r_is_zero(group_act(f, g).sub(f)))
      throw invalid_input("element is not invariant under the small subgroup");

  std::vector<char> used(big.size(), 0);
  RElement out(T, f.degree());
  for (size_t i = 0; i < big.size(); ++i) {
    if (used[i]) continue;
    out = out.add(group_act(f, big[i]));
    for (const auto& h : small) {
      MatFq prod = h.mul(big[i]);
      size_t j = size_t(
          std::lower_bound(big.begin(), big.end(), prod) - big.begin());
      used[j] = 1;
    }
  }
  return out;
}

}  // namespace dforms
