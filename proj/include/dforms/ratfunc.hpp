#pragma once
#include <utility>

#include "dforms/mpoly.hpp"

namespace dforms {

// Fraction of multivariate polynomials, kept unreduced; equality compares by
// cross-multiplication.  Implements the same element interface as
// FieldElement so templates can run over function-field coefficients.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (!num_.field() || num_.field() != den_.field() ||
        num_.nvars() != den_.nvars())
      throw invalid_input("rational function: numerator/denominator mismatch");
    if (den_.is_zero()) throw invalid_input("rational function: zero denominator");
  }
  static RatFunc of_poly(MPoly p) {
    MPoly one = MPoly::constant(p.field(), p.nvars(), 1);
    return RatFunc(std::move(p), std::move(one));
  }

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  const FieldDesc* field() const { return num_.field(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }

  RatFunc add(const RatFunc& o) const {
    return RatFunc(num_.mul(o.den_).add(o.num_.mul(den_)), den_.mul(o.den_));
  }
  RatFunc sub(const RatFunc& o) const { return add(o.neg()); }
  RatFunc neg() const { return RatFunc(num_.neg(), den_); }
  RatFunc mul(const RatFunc& o) const {
    return RatFunc(num_.mul(o.num_), den_.mul(o.den_));
  }
  RatFunc inv() const {
    if (is_zero()) throw invalid_input("rational function: inversion of zero");
    return RatFunc(den_, num_);
  }
  RatFunc div(const RatFunc& o) const { return mul(o.inv()); }

  // q-power map f -> f^q (q from the coefficient field's first stage)
  RatFunc frobq() const {
    uint64_t q = uint64_t(num_.field()->q);
    return RatFunc(num_.pow(q), den_.pow(q));
  }
  RatFunc embed_scalar(uint8_t c) const {
    return of_poly(MPoly::constant(num_.field(), num_.nvars(), c));
  }
  RatFunc zero_like() const {
    return of_poly(MPoly(num_.field(), num_.nvars()));
  }
  RatFunc one_like() const { return embed_scalar(1); }

  bool operator==(const RatFunc& o) const {
    return num_.mul(o.den_) == o.num_.mul(den_);
  }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  std::string text(const std::vector<std::string>& names = {}) const {
    return "(" + num_.text(names) + ")/(" + den_.text(names) + ")";
  }

 private:
  MPoly num_, den_;
};

}  // namespace dforms
