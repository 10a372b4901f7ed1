#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "dforms/matrix.hpp"

namespace dforms {

// Finitely generated subgroup of GL_r(F_q), described by invertible generators.
struct SubgroupGens {
  const FieldDesc* F = nullptr;
  int r = 0;
  std::vector<MatFq> gens;  // each r x r over F, invertible
};

// Standard generator sets.
SubgroupGens trivial_gens(const FieldDesc* F, int r);
SubgroupGens unipotent_gens(const FieldDesc* F, int r);  // upper unitriangular
SubgroupGens sl_gens(const FieldDesc* F, int r);
SubgroupGens gl_gens(const FieldDesc* F, int r);
// Matrices whose first s columns equal those of the identity (1 <= s <= r).
SubgroupGens js_gens(const FieldDesc* F, int r, int s);

// Full element set by breadth-first closure, returned sorted (deterministic).
// Throws cap_exceeded when the closure grows past caps().group.
std::vector<MatFq> group_elements(const SubgroupGens& G);

struct DoubleCosets {
  size_t count = 0;
  std::vector<MatFq> reps;    // least element of each class, in increasing order
  std::vector<size_t> sizes;  // class sizes, parallel to reps
};

// Partition of the closure of G into classes H*g*J.  The closures of H and J
// must be contained in that of G.
DoubleCosets double_cosets(const SubgroupGens& H, const SubgroupGens& G,
                           const SubgroupGens& J);

// True iff every element of the closure is unipotent.
bool is_fine_image(const SubgroupGens& K);

// Subgroup file: first line "q r", then generators as r*r whitespace-separated
// entries (integers for prime q, ':'-joined F_p coordinates otherwise).
SubgroupGens subgroup_parse(std::istream& in);
SubgroupGens subgroup_load(const std::string& path);

}  // namespace dforms
