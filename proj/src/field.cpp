#include "dforms/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

namespace dforms {
namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// ---- dense polynomial helpers over F_p (coefficient vectors, low first) ----

void fp_trim(std::vector<uint8_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<uint8_t> fp_mul(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b, int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint8_t> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = uint8_t((c[i + j] + a[i] * b[j]) % p);
  fp_trim(c);
  return c;
}

// a mod b, b monic
std::vector<uint8_t> fp_mod(std::vector<uint8_t> a, const std::vector<uint8_t>& b, int p) {
  fp_trim(a);
  while (a.size() >= b.size()) {
    int sh = int(a.size() - b.size());
    int c = a.back();
    for (size_t j = 0; j < b.size(); ++j)
      a[sh + j] = uint8_t(((a[sh + j] + p - (c * b[j]) % p) % p));
    fp_trim(a);
  }
  return a;
}

// irreducibility by trial division over F_p (fields here are tiny)
bool fp_irreducible(const std::vector<uint8_t>& f, int p) {
  int deg = int(f.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  for (int d = 1; 2 * d <= deg; ++d) {
    // all monic divisor candidates of degree d, lower coefficients base-p
    uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= uint64_t(p);
    for (uint64_t e = 0; e < count; ++e) {
      std::vector<uint8_t> g(d + 1, 0);
      uint64_t t = e;
      for (int i = 0; i < d; ++i) { g[i] = uint8_t(t % p); t /= p; }
      g[d] = 1;
      if (fp_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

// ---- the same helpers over F_q, arithmetic through base tables ----

struct FqCtx {
  const FieldDesc* F;  // tables for encodings < q only
};

void fq_trim(std::vector<uint8_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<uint8_t> fq_mod(std::vector<uint8_t> a, const std::vector<uint8_t>& b, const FqCtx& c) {
  fq_trim(a);
  while (a.size() >= b.size()) {
    int sh = int(a.size() - b.size());
    uint8_t lead = a.back();
    for (size_t j = 0; j < b.size(); ++j)
      a[sh + j] = c.F->sub(a[sh + j], c.F->mul(lead, b[j]));
    fq_trim(a);
  }
  return a;
}

bool fq_irreducible(const std::vector<uint8_t>& f, const FqCtx& c) {
  int q = c.F->q;
  int deg = int(f.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  for (int d = 1; 2 * d <= deg; ++d) {
    uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= uint64_t(q);
    for (uint64_t e = 0; e < count; ++e) {
      std::vector<uint8_t> g(d + 1, 0);
      uint64_t t = e;
      for (int i = 0; i < d; ++i) { g[i] = uint8_t(t % q); t /= q; }
      g[d] = 1;
      if (fq_mod(f, g, c).empty()) return false;
    }
  }
  return true;
}

std::map<std::string, std::unique_ptr<FieldDesc>>& registry() {
  static std::map<std::string, std::unique_ptr<FieldDesc>> r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

void FieldDesc::build() {
  q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  size = 1;
  for (int i = 0; i < n; ++i) size *= uint64_t(q);

  // base-field tables: encodings are F_p coordinate vectors packed base p
  add_tab_.assign(size_t(q) * q, 0);
  mul_tab_.assign(size_t(q) * q, 0);
  neg_tab_.assign(q, 0);
  inv_tab_.assign(q, 0);

  auto unpack = [&](int a, uint8_t* c) {
    for (int i = 0; i < m; ++i) { c[i] = uint8_t(a % p); a /= p; }
  };
  auto pack = [&](const uint8_t* c) {
    int a = 0;
    for (int i = m - 1; i >= 0; --i) a = a * p + c[i];
    return uint8_t(a);
  };

  std::vector<uint8_t> ca(m), cb(m), cc(2 * m);
  for (int a = 0; a < q; ++a) {
    unpack(a, ca.data());
    for (int i = 0; i < m; ++i) ca[i] = uint8_t((p - ca[i]) % p);
    neg_tab_[a] = pack(ca.data());
  }
  for (int a = 0; a < q; ++a) {
    unpack(a, ca.data());
    for (int b = 0; b < q; ++b) {
      unpack(b, cb.data());
      uint8_t s[16];
      for (int i = 0; i < m; ++i) s[i] = uint8_t((ca[i] + cb[i]) % p);
      add_tab_[size_t(a) * q + b] = pack(s);
      // multiply & reduce by fpmod
      std::fill(cc.begin(), cc.end(), 0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          cc[i + j] = uint8_t((cc[i + j] + ca[i] * cb[j]) % p);
      for (int d = 2 * m - 2; d >= m; --d) {
        int c = cc[d];
        if (c == 0) continue;
        cc[d] = 0;
        for (int j = 0; j < m; ++j)
          cc[d - m + j] = uint8_t((cc[d - m + j] + p - (c * fpmod[j]) % p) % p);
      }
      mul_tab_[size_t(a) * q + b] = pack(cc.data());
    }
  }
  for (int a = 1; a < q; ++a)
    for (int b = 1; b < q; ++b)
      if (mul_tab_[size_t(a) * q + b] == 1) { inv_tab_[a] = uint8_t(b); break; }

  // smallest-encoding multiplicative generator
  omega = 1;
  for (int a = 2; a < q; ++a) {
    int ord = 1;
    uint8_t x = uint8_t(a);
    while (x != 1) { x = mul(x, uint8_t(a)); ++ord; }
    if (ord == q - 1) { omega = uint8_t(a); break; }
  }
  if (q == 2) omega = 1;

  // whole-field tables for small towers
  if (size <= kFullTab && n > 1) {
    full_tabs_ = true;
    eadd_tab_.assign(size_t(size) * size, 0);
    emul_tab_.assign(size_t(size) * size, 0);
    einv_tab_.assign(size, 0);
    for (uint32_t a = 0; a < size; ++a)
      for (uint32_t b = 0; b < size; ++b) {
        uint32_t s = 0, f = 1;
        uint32_t x = a, y = b;
        for (int i = 0; i < n; ++i) {
          s += uint32_t(add(uint8_t(x % q), uint8_t(y % q))) * f;
          x /= q; y /= q; f *= q;
        }
        eadd_tab_[size_t(a) * size + b] = uint16_t(s);
        emul_tab_[size_t(a) * size + b] = uint16_t(mul_digits(a, b));
      }
    for (uint32_t a = 1; a < size; ++a)
      if (einv_tab_[a] == 0)
        for (uint32_t b = 1; b < size; ++b)
          if (emul_tab_[size_t(a) * size + b] == 1) {
            einv_tab_[a] = uint16_t(b);
            einv_tab_[b] = uint16_t(a);
            break;
          }
  }
}

void FieldDesc::digits_of(uint32_t a, uint8_t* d) const {
  for (int i = 0; i < n; ++i) { d[i] = uint8_t(a % q); a /= uint32_t(q); }
}

uint32_t FieldDesc::of_digits(const uint8_t* d) const {
  uint32_t a = 0;
  for (int i = n - 1; i >= 0; --i) a = a * uint32_t(q) + d[i];
  return a;
}

uint32_t FieldDesc::mul_digits(uint32_t a, uint32_t b) const {
  uint8_t da[32], db[32], dc[64];
  digits_of(a, da);
  digits_of(b, db);
  std::fill(dc, dc + 2 * n, 0);
  for (int i = 0; i < n; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      dc[i + j] = add(dc[i + j], mul(da[i], db[j]));
  }
  for (int d = 2 * n - 2; d >= n; --d) {
    uint8_t c = dc[d];
    if (c == 0) continue;
    dc[d] = 0;
    for (int j = 0; j < n; ++j)
      dc[d - n + j] = sub(dc[d - n + j], mul(c, fqmod[j]));
  }
  return of_digits(dc);
}

uint8_t FieldDesc::pow(uint8_t a, uint64_t e) const {
  uint8_t r = 1, x = a;
  if (a == 0) return e == 0 ? uint8_t(1) : uint8_t(0);
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

uint32_t FieldDesc::el_add(uint32_t a, uint32_t b) const {
  if (n == 1) return add(uint8_t(a), uint8_t(b));
  if (full_tabs_) return eadd_tab_[size_t(a) * size + b];
  uint8_t da[32], db[32];
  digits_of(a, da);
  digits_of(b, db);
  for (int i = 0; i < n; ++i) da[i] = add(da[i], db[i]);
  return of_digits(da);
}

uint32_t FieldDesc::el_neg(uint32_t a) const {
  if (n == 1) return neg(uint8_t(a));
  uint8_t da[32];
  digits_of(a, da);
  for (int i = 0; i < n; ++i) da[i] = neg(da[i]);
  return of_digits(da);
}

uint32_t FieldDesc::el_sub(uint32_t a, uint32_t b) const { return el_add(a, el_neg(b)); }

uint32_t FieldDesc::el_mul(uint32_t a, uint32_t b) const {
  if (n == 1) return mul(uint8_t(a), uint8_t(b));
  if (full_tabs_) return emul_tab_[size_t(a) * size + b];
  return mul_digits(a, b);
}

uint32_t FieldDesc::el_pow(uint32_t a, uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  uint32_t r = 1, x = a;
  while (e) {
    if (e & 1) r = el_mul(r, x);
    x = el_mul(x, x);
    e >>= 1;
  }
  return r;
}

uint32_t FieldDesc::el_inv(uint32_t a) const {
  if (a == 0) throw invalid_input("field: inversion of zero");
  if (n == 1) return inv(uint8_t(a));
  if (full_tabs_) return einv_tab_[a];
  return el_pow(a, size - 2);
}

uint32_t FieldDesc::el_frobq(uint32_t a, int k) const {
  uint32_t r = a;
  for (int i = 0; i < k; ++i) r = el_pow(r, uint64_t(q));
  return r;
}

std::string FieldDesc::el_text(uint32_t a) const {
  if (prime_field()) return std::to_string(a);
  // F_p coordinates, low first, ':' separated (m*n of them)
  std::string s;
  uint8_t dg[32];
  digits_of(a, dg);
  for (int i = 0; i < n; ++i) {
    int d = dg[i];
    for (int j = 0; j < m; ++j) {
      if (!s.empty()) s += ':';
      s += std::to_string(d % p);
      d /= p;
    }
  }
  return s;
}

uint32_t FieldDesc::el_parse(const std::string& s) const {
  std::vector<int> parts;
  std::string cur;
  for (char ch : s + ":") {
    if (ch == ':') {
      if (cur.empty()) throw invalid_input("field element: empty coordinate in '" + s + "'");
      parts.push_back(std::stoi(cur));
      cur.clear();
    } else if (ch >= '0' && ch <= '9') {
      cur += ch;
    } else {
      throw invalid_input("field element: bad character in '" + s + "'");
    }
  }
  if (prime_field()) {
    if (parts.size() != 1) throw invalid_input("field element: expected a single integer");
    if (parts[0] < 0 || parts[0] >= p) throw invalid_input("field element out of range: " + s);
    return uint32_t(parts[0]);
  }
  if (int(parts.size()) != m * n)
    throw invalid_input("field element: expected " + std::to_string(m * n) + " coordinates");
  uint8_t dg[32];
  for (int i = 0; i < n; ++i) {
    int d = 0;
    for (int j = m - 1; j >= 0; --j) {
      int c = parts[i * m + j];
      if (c < 0 || c >= p) throw invalid_input("field element coordinate out of range: " + s);
      d = d * p + c;
    }
    dg[i] = uint8_t(d);
  }
  return of_digits(dg);
}

std::string FieldDesc::key() const {
  std::ostringstream os;
  os << p << '.' << m << '.';
  for (auto c : fpmod) os << int(c) << '_';
  os << '.' << n << '.';
  for (auto c : fqmod) os << int(c) << '_';
  return os.str();
}

// ---------------------------------------------------------------------------

const FieldDesc* field_make(int p, int m, std::vector<uint8_t> fpmod, int n,
                            std::vector<uint8_t> fqmod) {
  if (!is_prime(p)) throw invalid_input("field_make: p = " + std::to_string(p) + " is not prime");
  if (m < 1 || n < 1) throw invalid_input("field_make: degrees must be >= 1");
  uint64_t q = 1;
  for (int i = 0; i < m; ++i) {
    q *= uint64_t(p);
    if (q > 256) throw invalid_input("field_make: base field larger than 256 not supported");
  }
  uint64_t sz = 1;
  for (int i = 0; i < n; ++i) {
    sz *= q;
    if (sz > caps().field_enum)
      throw cap_exceeded("field_make: field size exceeds enumeration cap");
  }

  // base modulus: validate or choose default (smallest lower-coefficient encoding)
  if (!fpmod.empty()) {
    fp_trim(fpmod);
    if (int(fpmod.size()) != m + 1 || fpmod.back() != 1)
      throw invalid_input("field_make: modulus must be monic of degree m");
    for (auto c : fpmod)
      if (c >= p) throw invalid_input("field_make: modulus coefficient out of range");
    if (!fp_irreducible(fpmod, p))
      throw invalid_input("field_make: modulus is reducible over F_p");
  } else {
    uint64_t count = 1;
    for (int i = 0; i < m; ++i) count *= uint64_t(p);
    for (uint64_t e = 0; e < count; ++e) {
      std::vector<uint8_t> f(m + 1, 0);
      uint64_t t = e;
      for (int i = 0; i < m; ++i) { f[i] = uint8_t(t % p); t /= p; }
      f[m] = 1;
      if (m == 1 || fp_irreducible(f, p)) { fpmod = f; break; }
    }
    if (fpmod.empty()) throw internal_error("field_make: no irreducible base modulus found");
  }

  // build a bare base descriptor first so tower validation can use its tables
  FieldDesc base;
  base.p = p; base.m = m; base.n = 1;
  base.fpmod = fpmod;
  base.fqmod = {0, 1};
  base.build();

  if (n == 1) {
    fqmod = {0, 1};
  } else {
    FqCtx ctx{&base};
    if (!fqmod.empty()) {
      fq_trim(fqmod);
      if (int(fqmod.size()) != n + 1 || fqmod.back() != 1)
        throw invalid_input("field_make: tower modulus must be monic of degree n");
      for (auto c : fqmod)
        if (c >= base.q) throw invalid_input("field_make: tower modulus coefficient out of range");
      if (!fq_irreducible(fqmod, ctx))
        throw invalid_input("field_make: tower modulus is reducible over F_q");
    } else {
      uint64_t count = 1;
      for (int i = 0; i < n; ++i) count *= uint64_t(base.q);
      for (uint64_t e = 0; e < count; ++e) {
        std::vector<uint8_t> f(n + 1, 0);
        uint64_t t = e;
        for (int i = 0; i < n; ++i) { f[i] = uint8_t(t % base.q); t /= base.q; }
        f[n] = 1;
        if (fq_irreducible(f, ctx)) { fqmod = f; break; }
      }
      if (fqmod.empty()) throw internal_error("field_make: no irreducible tower modulus found");
    }
  }

  FieldDesc probe;
  probe.p = p; probe.m = m; probe.n = n;
  probe.fpmod = fpmod; probe.fqmod = fqmod;
  std::string k = probe.key();
  auto& reg = registry();
  auto it = reg.find(k);
  if (it != reg.end()) return it->second.get();
  auto d = std::make_unique<FieldDesc>();
  d->p = p; d->m = m; d->n = n;
  d->fpmod = std::move(fpmod);
  d->fqmod = std::move(fqmod);
  d->build();
  const FieldDesc* out = d.get();
  reg.emplace(std::move(k), std::move(d));
  return out;
}

const FieldDesc* field_q(int q) {
  if (q < 2) throw invalid_input("field_q: q must be at least 2");
  int p = 2;
  while (q % p != 0) {
    ++p;
    if (p > q) throw invalid_input("field_q: q is not a prime power");
  }
  int m = 0, t = q;
  while (t > 1) {
    if (t % p != 0) throw invalid_input("field_q: q is not a prime power");
    t /= p;
    ++m;
  }
  return field_make(p, m);
}

const FieldDesc* field_tower(const FieldDesc* base, int n) {
  if (base->n != 1) throw invalid_input("field_tower: base must be a one-stage field");
  return field_make(base->p, base->m, base->fpmod, n);
}

}  // namespace dforms
