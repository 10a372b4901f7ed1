#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "dforms/error.hpp"

namespace dforms {

// Descriptor of a finite field, built in (at most) two stages:
//
//   F_q     = F_p[w]/(fpmod),  q = p^m,
//   F_{q^n} = F_q[z]/(fqmod)   (n = 1 means no tower stage).
//
// Elements are identified with integer encodings 0..size-1: an element is a
// vector of n digits in F_q, each digit itself encoded as an integer < q by
// its F_p coordinates (digit = sum c_j p^j), and the digits are combined
// base q (low digit first).  With this encoding the inclusion F_q -> F_{q^n}
// is the identity on encodings < q, and 0/1 encode the ring 0/1.
//
// Descriptors are interned: field_make with equal parameters returns the
// same pointer, so "same field" is a pointer comparison.
class FieldDesc {
 public:
  int p = 0;  // prime characteristic
  int m = 1;  // [F_q : F_p]
  int n = 1;  // [F_{q^n} : F_q]
  int q = 0;  // p^m
  uint64_t size = 0;  // q^n

  std::vector<uint8_t> fpmod;  // length m+1, monic, F_p coefficients, low first
  std::vector<uint8_t> fqmod;  // length n+1, monic, F_q encodings, low first (n>1)

  uint8_t omega = 1;  // smallest-encoding generator of F_q^*

  // --- base-field arithmetic on encodings < q (table backed) ---
  uint8_t add(uint8_t a, uint8_t b) const { return add_tab_[a * q + b]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return add_tab_[a * q + neg_tab_[b]]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_tab_[a * q + b]; }
  uint8_t neg(uint8_t a) const { return neg_tab_[a]; }
  uint8_t inv(uint8_t a) const {
    if (a == 0) throw invalid_input("field: inversion of zero");
    return inv_tab_[a];
  }
  uint8_t pow(uint8_t a, uint64_t e) const;

  // --- full-field arithmetic on encodings < size ---
  uint32_t el_add(uint32_t a, uint32_t b) const;
  uint32_t el_sub(uint32_t a, uint32_t b) const;
  uint32_t el_neg(uint32_t a) const;
  uint32_t el_mul(uint32_t a, uint32_t b) const;
  uint32_t el_inv(uint32_t a) const;
  uint32_t el_pow(uint32_t a, uint64_t e) const;
  uint32_t el_frobq(uint32_t a, int k = 1) const;  // a^(q^k)

  bool prime_field() const { return m == 1 && n == 1; }

  std::string el_text(uint32_t a) const;
  uint32_t el_parse(const std::string& s) const;

  std::string key() const;  // interning key

 private:
  friend const FieldDesc* field_make(int, int, std::vector<uint8_t>, int,
                                     std::vector<uint8_t>);
  void build();

  std::vector<uint8_t> add_tab_, mul_tab_, inv_tab_, neg_tab_;
  // whole-field tables when size <= kFullTab (speeds up tower arithmetic)
  static constexpr uint64_t kFullTab = 512;
  std::vector<uint16_t> eadd_tab_, emul_tab_, einv_tab_;
  bool full_tabs_ = false;

  void digits_of(uint32_t a, uint8_t* d) const;   // n digits, low first
  uint32_t of_digits(const uint8_t* d) const;
  uint32_t mul_digits(uint32_t a, uint32_t b) const;
};

// Construct (or fetch) a field descriptor.  Omitted moduli default to the
// monic irreducible polynomial of the right degree whose lower-coefficient
// encoding (sum c_i p^i, resp. sum c_i q^i) is smallest; this makes defaults
// reproducible.  Moduli are verified irreducible by trial division.
const FieldDesc* field_make(int p, int m, std::vector<uint8_t> fpmod = {},
                            int n = 1, std::vector<uint8_t> fqmod = {});

// Convenience: F_q for a prime power q <= 256 with default modulus.
const FieldDesc* field_q(int q);
// Tower F_{q^n} over an existing base descriptor (base must have n == 1).
const FieldDesc* field_tower(const FieldDesc* base, int n);

// Value type for a single field element.
class FieldElement {
 public:
  FieldElement() : F_(nullptr), v_(0) {}
  FieldElement(const FieldDesc* F, uint32_t v) : F_(F), v_(v) {
    if (v >= F->size) throw invalid_input("field element encoding out of range");
  }

  const FieldDesc* field() const { return F_; }
  uint32_t enc() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  FieldElement add(const FieldElement& o) const { return bin(o, &FieldDesc::el_add); }
  FieldElement sub(const FieldElement& o) const { return bin(o, &FieldDesc::el_sub); }
  FieldElement mul(const FieldElement& o) const { return bin(o, &FieldDesc::el_mul); }
  FieldElement div(const FieldElement& o) const {
    check(o);
    return FieldElement(F_, F_->el_mul(v_, F_->el_inv(o.v_)));
  }
  FieldElement neg() const { return FieldElement(F_, F_->el_neg(v_)); }
  FieldElement inv() const { return FieldElement(F_, F_->el_inv(v_)); }
  FieldElement pow(uint64_t e) const { return FieldElement(F_, F_->el_pow(v_, e)); }
  FieldElement frobenius(int k = 1) const { return FieldElement(F_, F_->el_frobq(v_, k)); }
  // multiply by a base-field scalar given by its encoding < q
  FieldElement scale(uint8_t c) const { return FieldElement(F_, F_->el_mul(v_, c)); }

  // uniform carrier interface (shared with RatFunc, see ratfunc.hpp)
  FieldElement frobq() const { return frobenius(1); }
  FieldElement embed_scalar(uint8_t c) const { return FieldElement(F_, c); }
  FieldElement zero_like() const { return FieldElement(F_, 0); }
  FieldElement one_like() const { return FieldElement(F_, 1); }

  bool operator==(const FieldElement& o) const { return F_ == o.F_ && v_ == o.v_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  std::string text() const { return F_->el_text(v_); }

 private:
  void check(const FieldElement& o) const {
    if (F_ != o.F_) throw invalid_input("field elements from different fields");
  }
  FieldElement bin(const FieldElement& o, uint32_t (FieldDesc::*op)(uint32_t, uint32_t) const) const {
    check(o);
    return FieldElement(F_, (F_->*op)(v_, o.v_));
  }
  const FieldDesc* F_;
  uint32_t v_;
};

}  // namespace dforms
