#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "dforms/matrix.hpp"
#include "dforms/skew.hpp"

namespace dforms {

// Enumerate the vectors of F_q^r as digit vectors of 0..q^r-1 (low digit
// first); index 0 is the zero vector.
std::vector<std::vector<uint8_t>> all_vectors(int q, int r);

// Convert an ordinary polynomial (coefficient of X^d at index d) into the
// twisted polynomial with the same additive action; every coefficient away
// from a q-power exponent (or X^0) must vanish.
template <class El>
SkewPoly<El> skew_from_additive(const std::vector<El>& xc, int q) {
  std::vector<El> c;
  if (!xc.empty() && !xc[0].is_zero())
    throw internal_error("additive polynomial with non-zero constant term");
  uint64_t qp = 1;
  size_t need = 1;  // exponent of the next twisted coefficient
  for (size_t d = 1; d < xc.size(); ++d) {
    if (d == need) {
      c.push_back(xc[d]);
      qp *= uint64_t(q);
      need = size_t(qp);
    } else if (!xc[d].is_zero()) {
      throw internal_error("additive polynomial has a non-q-power term");
    }
  }
  return SkewPoly<El>(std::move(c));
}

// Images e_1..e_r of the standard basis under a level map; every non-zero
// F_q-combination of the images must be non-zero.
template <class El>
class LevelStructure {
 public:
  explicit LevelStructure(std::vector<El> e) : e_(std::move(e)) {
    if (e_.empty()) throw invalid_input("level structure: empty basis");
    int q = e_[0].field()->q;
    uint64_t total = 1;
    for (size_t i = 0; i < e_.size(); ++i) total *= uint64_t(q);
    if (total > caps().field_enum)
      throw cap_exceeded("level structure: too many combinations to verify");
    for (const auto& v : all_vectors(q, int(e_.size()))) {
      bool zerovec = true;
      for (uint8_t a : v) zerovec = zerovec && a == 0;
      if (zerovec) continue;
      if (map(v).is_zero())
        throw invalid_input("level structure: images are linearly dependent");
    }
  }

  int rank() const { return int(e_.size()); }
  const FieldDesc* field() const { return e_[0].field(); }
  const std::vector<El>& images() const { return e_; }

  // sum_i v[i] * e_i with v over F_q
  El map(const std::vector<uint8_t>& v) const {
    if (v.size() != e_.size())
      throw invalid_input("level structure: coefficient vector length mismatch");
    El acc = e_[0].zero_like();
    for (size_t i = 0; i < e_.size(); ++i)
      acc = acc.add(e_[i].mul(e_[0].embed_scalar(v[i])));
    return acc;
  }

  // all q^r values of the map, in vector-encoding order (index 0 is zero)
  std::vector<El> values() const {
    std::vector<El> out;
    for (const auto& v : all_vectors(e_[0].field()->q, int(e_.size())))
      out.push_back(map(v));
    return out;
  }

 private:
  std::vector<El> e_;
};

// lambda composed with g: new images e'_j = sum_i g(i,j) e_i
template <class El>
LevelStructure<El> act_level(const LevelStructure<El>& lam, const MatFq& g) {
  const FieldDesc* gF = g.field();
  const FieldDesc* cF = lam.field();
  if (gF->p != cF->p || gF->m != cF->m || gF->fpmod != cF->fpmod || gF->n != 1)
    throw invalid_input("act_level: matrix not over the scalar field F_q");
  if (g.rows() != lam.rank() || g.cols() != lam.rank())
    throw invalid_input("act_level: matrix size must equal the rank");
  if (!g.invertible()) throw invalid_input("act_level: singular matrix");
  std::vector<El> ne;
  for (int j = 0; j < lam.rank(); ++j) {
    El acc = lam.images()[0].zero_like();
    for (int i = 0; i < lam.rank(); ++i)
      acc = acc.add(lam.images()[size_t(i)].mul(
          lam.images()[0].embed_scalar(g.at(i, j))));
    ne.push_back(std::move(acc));
  }
  return LevelStructure<El>(std::move(ne));
}

// A module over F_q[t] given by the twisted polynomial for t; the constant
// coefficient is the structure image of t.
template <class El>
class DrinfeldModule {
 public:
  explicit DrinfeldModule(SkewPoly<El> phi_t) : phi_t_(std::move(phi_t)) {
    if (phi_t_.deg() < 1)
      throw invalid_input("module: the image of t must have positive twist degree");
  }

  const SkewPoly<El>& phi_t() const { return phi_t_; }
  const El& t_image() const { return phi_t_.coeffs()[0]; }
  int rank() const { return phi_t_.deg(); }

  // image of a polynomial a(t) = sum a_i t^i (coefficients over F_q)
  SkewPoly<El> phi(const std::vector<uint8_t>& a) const {
    const El& ex = phi_t_.coeffs().back();
    int q = ex.field()->q;
    SkewPoly<El> acc;  // Horner from the top coefficient down
    for (size_t i = a.size(); i-- > 0;) {
      if (a[i] >= q) throw invalid_input("phi: coefficient not in F_q");
      acc = skew_mul(acc, phi_t_);
      if (a[i] != 0)
        acc = skew_add(acc, SkewPoly<El>::constant(ex.embed_scalar(a[i])));
    }
    return acc;
  }

  bool operator==(const DrinfeldModule& o) const { return phi_t_ == o.phi_t_; }
  bool operator!=(const DrinfeldModule& o) const { return !(*this == o); }

 private:
  SkewPoly<El> phi_t_;
};

// phi_t(X) = t * X * prod over non-zero v of (1 - X / lambda(v)), expanded
// and checked to be additive.
template <class El>
DrinfeldModule<El> from_level(const LevelStructure<El>& lam, const El& t) {
  if (t.is_zero()) throw invalid_input("from_level: the image of t must be non-zero");
  std::vector<El> values = lam.values();
  // poly in X, low degree first, starting from t*X
  std::vector<El> xc{t.zero_like(), t};
  for (size_t i = 1; i < values.size(); ++i) {
    const El s = values[i].inv().neg();  // -1/lambda(v)
    xc.push_back(xc.back().zero_like());
    for (size_t d = xc.size() - 1; d >= 1; --d)
      xc[d] = xc[d].add(xc[d - 1].mul(s));
  }
  return DrinfeldModule<El>(skew_from_additive(xc, lam.field()->q));
}

template <class El>
struct Isogeny {
  DrinfeldModule<El> src, dst;
  SkewPoly<El> psi;

  Isogeny(DrinfeldModule<El> s, DrinfeldModule<El> d, SkewPoly<El> p)
      : src(std::move(s)), dst(std::move(d)), psi(std::move(p)) {
    if (psi.is_zero()) throw invalid_input("isogeny: zero map");
    if (!(skew_mul(psi, src.phi_t()) == skew_mul(dst.phi_t(), psi)))
      throw invalid_input("isogeny: map does not intertwine the module structures");
  }
};

// Quotient by a finite phi_t-stable F_q-subspace H (given as an element list
// containing 0).  Returns the quotient module and the projection isogeny with
// kernel polynomial psi(X) = X * prod over non-zero h of (1 - X/h).
template <class El>
std::pair<DrinfeldModule<El>, Isogeny<El>> quotient_by(
    const DrinfeldModule<El>& M, const std::vector<El>& H) {
  if (H.empty()) throw invalid_input("quotient: kernel list is empty");
  const El zero = H[0].zero_like();
  auto member = [&](const El& x) {
    for (const El& h : H)
      if (h == x) return true;
    return false;
  };
  if (!member(zero)) throw invalid_input("quotient: kernel must contain zero");
  int q = H[0].field()->q;
  for (const El& a : H) {
    for (const El& b : H)
      if (!member(a.add(b)))
        throw invalid_input("quotient: kernel not closed under addition");
    for (int c = 1; c < q; ++c)
      if (!member(a.mul(a.embed_scalar(uint8_t(c)))))
        throw invalid_input("quotient: kernel not closed under scalars");
    if (!member(additive_eval(M.phi_t(), a)))
      throw invalid_input("quotient: kernel not stable under the module action");
  }

  std::vector<El> xc{zero, zero.one_like()};  // psi starts as X
  for (const El& h : H) {
    if (h.is_zero()) continue;
    const El s = h.inv().neg();
    xc.push_back(zero);
    for (size_t d = xc.size() - 1; d >= 1; --d)
      xc[d] = xc[d].add(xc[d - 1].mul(s));
  }
  SkewPoly<El> psi = skew_from_additive(xc, q);

  auto [quo, rem] = skew_right_divide(skew_mul(psi, M.phi_t()), psi);
  if (!rem.is_zero())
    throw internal_error("quotient: kernel polynomial does not divide exactly");
  DrinfeldModule<El> Mq(std::move(quo));
  Isogeny<El> iso(M, Mq, std::move(psi));
  return {std::move(Mq), std::move(iso)};
}

// Torsion submodule phi[a] inside the finite field L.
inline std::vector<FieldElement> torsion(const DrinfeldModule<FieldElement>& M,
                                         const std::vector<uint8_t>& a,
                                         const FieldDesc* L) {
  return kernel_roots(M.phi(a), L);
}

// Scalar u with c'_i = u^(q^i - 1) * c_i for every i, if one exists; modules
// over a finite field are isomorphic exactly under such a rescaling.
inline std::optional<FieldElement> find_isomorphism(
    const DrinfeldModule<FieldElement>& A, const DrinfeldModule<FieldElement>& B) {
  const FieldDesc* L = A.t_image().field();
  if (L != B.t_image().field() || A.rank() != B.rank()) return std::nullopt;
  const auto& ca = A.phi_t().coeffs();
  const auto& cb = B.phi_t().coeffs();
  for (uint64_t e = 1; e < L->size; ++e) {
    bool ok = true;
    uint64_t qi = 1;
    for (size_t i = 0; i < ca.size() && ok; ++i) {
      uint32_t scaled = L->el_mul(L->el_pow(uint32_t(e), qi - 1), ca[i].enc());
      ok = scaled == cb[i].enc();
      qi *= uint64_t(L->q);
    }
    if (ok) return FieldElement(L, uint32_t(e));
  }
  return std::nullopt;
}

inline bool is_isomorphic(const DrinfeldModule<FieldElement>& A,
                          const DrinfeldModule<FieldElement>& B) {
  return find_isomorphism(A, B).has_value();
}

}  // namespace dforms
