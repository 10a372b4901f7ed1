#pragma once
#include <algorithm>
#include <utility>
#include <vector>

#include "dforms/field.hpp"

namespace dforms {

// Twisted polynomial sum_i c_i tau^i with the commutation rule
// tau * b = b^q * tau (tau acts as the q-power map on coefficients).
// The coefficient type El is FieldElement or RatFunc.
template <class El>
class SkewPoly {
 public:
  SkewPoly() = default;  // the zero polynomial
  explicit SkewPoly(std::vector<El> c) : c_(std::move(c)) { normalize(); }
  static SkewPoly constant(El b) { return SkewPoly(std::vector<El>{std::move(b)}); }

  bool is_zero() const { return c_.empty(); }
  int deg() const { return int(c_.size()) - 1; }
  const std::vector<El>& coeffs() const { return c_; }
  const El& lead() const { return c_.back(); }

  bool operator==(const SkewPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }
  bool operator!=(const SkewPoly& o) const { return !(*this == o); }

 private:
  void normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<El> c_;
};

template <class El>
SkewPoly<El> skew_add(const SkewPoly<El>& a, const SkewPoly<El>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  El z = x[0].zero_like();
  std::vector<El> c;
  for (size_t i = 0; i < std::max(x.size(), y.size()); ++i)
    c.push_back((i < x.size() ? x[i] : z).add(i < y.size() ? y[i] : z));
  return SkewPoly<El>(std::move(c));
}

template <class El>
SkewPoly<El> skew_sub(const SkewPoly<El>& a, const SkewPoly<El>& b) {
  if (b.is_zero()) return a;
  std::vector<El> n;
  for (const El& v : b.coeffs()) n.push_back(v.neg());
  return skew_add(a, SkewPoly<El>(std::move(n)));
}

template <class El>
SkewPoly<El> skew_mul(const SkewPoly<El>& a, const SkewPoly<El>& b) {
  if (a.is_zero() || b.is_zero()) return SkewPoly<El>();
  El z = a.coeffs()[0].zero_like();
  std::vector<El> out(a.coeffs().size() + b.coeffs().size() - 1, z);
  std::vector<El> bf = b.coeffs();  // twisted progressively as tau moves left
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    const El& ai = a.coeffs()[i];
    if (!ai.is_zero())
      for (size_t j = 0; j < bf.size(); ++j) out[i + j] = out[i + j].add(ai.mul(bf[j]));
    if (i + 1 < a.coeffs().size())
      for (El& x : bf) x = x.frobq();
  }
  return SkewPoly<El>(std::move(out));
}

// a = quotient * b + remainder with deg(remainder) < deg(b); unique.
template <class El>
std::pair<SkewPoly<El>, SkewPoly<El>> skew_right_divide(const SkewPoly<El>& a,
                                                        const SkewPoly<El>& b) {
  if (b.is_zero()) throw invalid_input("skew polynomial division by zero");
  if (a.is_zero() || a.deg() < b.deg()) return {SkewPoly<El>(), a};
  El z = b.coeffs()[0].zero_like();
  std::vector<El> rem = a.coeffs();
  std::vector<El> quo(size_t(a.deg() - b.deg()) + 1, z);
  int db = b.deg();
  auto degree_of = [](const std::vector<El>& v) {
    int d = int(v.size()) - 1;
    while (d >= 0 && v[size_t(d)].is_zero()) --d;
    return d;
  };
  for (int dr = degree_of(rem); dr >= db; dr = degree_of(rem)) {
    int d = dr - db;
    El bt = b.lead();
    for (int i = 0; i < d; ++i) bt = bt.frobq();
    El qd = rem[size_t(dr)].mul(bt.inv());
    quo[size_t(d)] = qd;
    std::vector<El> bf = b.coeffs();
    for (int i = 0; i < d; ++i)
      for (El& x : bf) x = x.frobq();
    for (int j = 0; j <= db; ++j)
      rem[size_t(d + j)] = rem[size_t(d + j)].sub(qd.mul(bf[size_t(j)]));
  }
  return {SkewPoly<El>(std::move(quo)), SkewPoly<El>(std::move(rem))};
}

// Value of the additive polynomial sum_i c_i X^{q^i} at x.
template <class El>
El additive_eval(const SkewPoly<El>& a, const El& x) {
  El acc = x.zero_like();
  El xq = x;
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    if (i) xq = xq.frobq();
    acc = acc.add(a.coeffs()[i].mul(xq));
  }
  return acc;
}

// Re-tag an element of a one-stage field F_q inside a tower F_{q^n} built on
// the same base (the encoding embedding is the identity).
inline FieldElement lift_element(const FieldElement& a, const FieldDesc* L) {
  const FieldDesc* F = a.field();
  if (F == L) return a;
  if (F->p != L->p || F->m != L->m || F->fpmod != L->fpmod || F->n != 1)
    throw invalid_input("no encoding-compatible embedding between these fields");
  return FieldElement(L, a.enc());
}

inline SkewPoly<FieldElement> lift_skew(const SkewPoly<FieldElement>& a,
                                        const FieldDesc* L) {
  std::vector<FieldElement> c;
  for (const FieldElement& v : a.coeffs()) c.push_back(lift_element(v, L));
  return SkewPoly<FieldElement>(std::move(c));
}

// All roots of the additive polynomial in the finite field L, by exhaustion.
inline std::vector<FieldElement> kernel_roots(const SkewPoly<FieldElement>& a,
                                              const FieldDesc* L) {
  if (a.is_zero())
    throw invalid_input("kernel of the zero polynomial is the whole field");
  if (L->size > caps().field_enum)
    throw cap_exceeded("kernel search field exceeds enumeration cap");
  SkewPoly<FieldElement> al = lift_skew(a, L);
  std::vector<FieldElement> out;
  for (uint64_t e = 0; e < L->size; ++e) {
    FieldElement x(L, uint32_t(e));
    if (additive_eval(al, x).is_zero()) out.push_back(x);
  }
  return out;
}

}  // namespace dforms
