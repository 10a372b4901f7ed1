#include "dforms/drinfeld.hpp"

namespace dforms {

std::vector<std::vector<uint8_t>> all_vectors(int q, int r) {
  if (q < 2 || r < 0) throw invalid_input("all_vectors: bad parameters");
  uint64_t total = 1;
  for (int i = 0; i < r; ++i) {
    total *= uint64_t(q);
    if (total > caps().field_enum) throw cap_exceeded("vector enumeration too large");
  }
  std::vector<std::vector<uint8_t>> out;
  out.reserve(size_t(total));
  for (uint64_t n = 0; n < total; ++n) {
    std::vector<uint8_t> v(size_t(r), 0);
    uint64_t x = n;
    for (int i = 0; i < r; ++i) {
      v[size_t(i)] = uint8_t(x % uint64_t(q));
      x /= uint64_t(q);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace dforms
