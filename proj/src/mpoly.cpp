#include "dforms/mpoly.hpp"

#include <set>

namespace dforms {

MPoly::MPoly(const FieldDesc* F, int nvars) : F_(F), nvars_(nvars) {
  if (!F) throw invalid_input("polynomial: missing field descriptor");
  if (nvars < 0) throw invalid_input("polynomial: negative variable count");
}

MPoly MPoly::constant(const FieldDesc* F, int nvars, uint32_t c) {
  MPoly p(F, nvars);
  p.add_term(Expt(nvars, 0), c);
  return p;
}

MPoly MPoly::variable(const FieldDesc* F, int nvars, int i) {
  if (i < 0 || i >= nvars) throw invalid_input("polynomial: variable index out of range");
  MPoly p(F, nvars);
  Expt e(nvars, 0);
  e[i] = 1;
  p.add_term(e, 1);
  return p;
}

MPoly MPoly::linear(const FieldDesc* F, const std::vector<uint8_t>& coeffs) {
  MPoly p(F, int(coeffs.size()));
  for (size_t i = 0; i < coeffs.size(); ++i) {
    Expt e(coeffs.size(), 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

long MPoly::degree() const {
  if (terms_.empty()) return -1;
  long d = 0;
  for (uint16_t e : terms_.rbegin()->first) d += e;  // graded order: last is maximal
  return d;
}

bool MPoly::homogeneous() const {
  long d = -1;
  for (const auto& [e, c] : terms_) {
    long de = 0;
    for (uint16_t x : e) de += x;
    if (d < 0) d = de;
    if (de != d) return false;
  }
  return true;
}

void MPoly::add_term(const Expt& e, uint32_t c) {
  if (int(e.size()) != nvars_) throw invalid_input("polynomial: exponent length mismatch");
  if (c >= F_->size) throw invalid_input("polynomial: coefficient out of range");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second = F_->el_add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void MPoly::check(const MPoly& o) const {
  if (F_ != o.F_) throw invalid_input("polynomial: mismatched fields");
  if (nvars_ != o.nvars_) throw invalid_input("polynomial: mismatched variable counts");
}

MPoly MPoly::add(const MPoly& o) const {
  check(o);
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MPoly MPoly::sub(const MPoly& o) const { return add(o.neg()); }

MPoly MPoly::neg() const {
  MPoly r(F_, nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, F_->el_neg(c));
  return r;
}

MPoly MPoly::mul(const MPoly& o) const {
  check(o);
  MPoly r(F_, nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Expt e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = uint16_t(ea[i] + eb[i]);
      r.add_term(e, F_->el_mul(ca, cb));
    }
  if (r.terms_.size() > caps().monomials)
    throw cap_exceeded("polynomial product exceeds monomial cap");
  return r;
}

MPoly MPoly::scale(uint32_t c) const {
  if (c >= F_->size) throw invalid_input("polynomial: scalar out of range");
  MPoly r(F_, nvars_);
  if (c == 0) return r;
  for (const auto& [e, a] : terms_) r.add_term(e, F_->el_mul(a, c));
  return r;
}

MPoly MPoly::pow(uint64_t e) const {
  MPoly r = constant(F_, nvars_, 1);
  MPoly x = *this;
  while (e) {
    if (e & 1) r = r.mul(x);
    e >>= 1;
    if (e) x = x.mul(x);
  }
  return r;
}

uint32_t MPoly::coeff(const Expt& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

std::string MPoly::text(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += F_->el_text(it->second);
    for (int i = 0; i < nvars_; ++i) {
      uint16_t e = it->first[i];
      if (e == 0) continue;
      s += '*';
      s += i < int(names.size()) ? names[i] : "x" + std::to_string(i + 1);
      if (e > 1) s += "^" + std::to_string(e);
    }
  }
  return s;
}

MPoly substitute_linear(const MPoly& f, const MatFq& g) {
  const FieldDesc* F = f.field();
  if (g.field() != F) throw invalid_input("substitute: matrix over different field");
  if (g.rows() != f.nvars() || g.cols() != f.nvars())
    throw invalid_input("substitute: matrix size must equal variable count");
  if (!g.invertible()) throw invalid_input("substitute: singular matrix");

  int n = f.nvars();
  std::vector<MPoly> form(n);
  for (int i = 0; i < n; ++i) {
    std::vector<uint8_t> row(n);
    for (int j = 0; j < n; ++j) row[j] = g.at(i, j);
    form[i] = MPoly::linear(F, row);
  }
  std::vector<std::vector<MPoly>> powers(n);  // powers[i][e] = form[i]^e
  for (int i = 0; i < n; ++i) powers[i].push_back(MPoly::constant(F, n, 1));

  MPoly out(F, n);
  for (const auto& [e, c] : f.terms()) {
    MPoly prod = MPoly::constant(F, n, c);
    for (int i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      while (powers[i].size() <= e[i])
        powers[i].push_back(powers[i].back().mul(form[i]));
      prod = prod.mul(powers[i][e[i]]);
    }
    out = out.add(prod);
  }
  return out;
}

int span_dim(const std::vector<MPoly>& polys) {
  if (polys.empty()) return 0;
  const FieldDesc* F = polys.front().field();
  int n = polys.front().nvars();
  if (F->size > 256) throw invalid_input("span_dim: field larger than 256 elements");
  std::set<Expt, GradedLex> expts;
  for (const MPoly& p : polys) {
    if (p.field() != F || p.nvars() != n)
      throw invalid_input("span_dim: mixed fields or variable counts");
    for (const auto& [e, c] : p.terms()) expts.insert(e);
  }
  std::map<Expt, int, GradedLex> col;
  int k = 0;
  for (const Expt& e : expts) col.emplace(e, k++);
  MatFq M(F, int(polys.size()), k ? k : 1);
  for (size_t i = 0; i < polys.size(); ++i)
    for (const auto& [e, c] : polys[i].terms()) M.set(int(i), col[e], uint8_t(c));
  return mat_rref(M).rank;
}

}  // namespace dforms
