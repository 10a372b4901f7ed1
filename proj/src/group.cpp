#include "dforms/group.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>

namespace dforms {

namespace {

// Encodings of an F_p-basis of the field: w^i z^j has encoding p^i * q^j.
std::vector<uint8_t> fp_basis(const FieldDesc* F) {
  std::vector<uint8_t> out;
  uint32_t qj = 1;
  for (int j = 0; j < F->n; ++j, qj *= uint32_t(F->q)) {
    uint32_t pi = 1;
    for (int i = 0; i < F->m; ++i, pi *= uint32_t(F->p))
      out.push_back(uint8_t(pi * qj));
  }
  return out;
}

MatFq elem_mat(const FieldDesc* F, int r, int i, int j, uint8_t a) {
  MatFq e = MatFq::identity(F, r);
  e.set(i, j, a);
  return e;
}

void check_subgroup(const SubgroupGens& G) {
  if (!G.F) throw invalid_input("group: missing field descriptor");
  if (G.r <= 0) throw invalid_input("group: rank must be positive");
  for (const MatFq& g : G.gens) {
    if (g.field() != G.F || g.rows() != G.r || g.cols() != G.r)
      throw invalid_input("group: generator has wrong field or shape");
    if (!g.invertible()) throw invalid_input("group: generator not invertible");
  }
}

}  // namespace

SubgroupGens trivial_gens(const FieldDesc* F, int r) { return {F, r, {}}; }

SubgroupGens unipotent_gens(const FieldDesc* F, int r) {
  SubgroupGens G{F, r, {}};
  for (int i = 0; i + 1 < r; ++i)
    for (uint8_t b : fp_basis(F)) G.gens.push_back(elem_mat(F, r, i, i + 1, b));
  return G;
}

SubgroupGens sl_gens(const FieldDesc* F, int r) {
  SubgroupGens G{F, r, {}};
  for (int i = 0; i + 1 < r; ++i)
    for (uint8_t b : fp_basis(F)) {
      G.gens.push_back(elem_mat(F, r, i, i + 1, b));
      G.gens.push_back(elem_mat(F, r, i + 1, i, b));
    }
  return G;
}

SubgroupGens gl_gens(const FieldDesc* F, int r) {
  SubgroupGens G = sl_gens(F, r);
  MatFq d = MatFq::identity(F, r);
  d.set(0, 0, F->omega);
  G.gens.push_back(d);
  return G;
}

SubgroupGens js_gens(const FieldDesc* F, int r, int s) {
  if (s < 1 || s > r) throw invalid_input("js_gens: s out of range");
  SubgroupGens G{F, r, {}};
  for (int i = 0; i < s; ++i)
    for (int j = s; j < r; ++j)
      for (uint8_t b : fp_basis(F)) G.gens.push_back(elem_mat(F, r, i, j, b));
  for (int i = s; i + 1 < r; ++i)
    for (uint8_t b : fp_basis(F)) {
      G.gens.push_back(elem_mat(F, r, i, i + 1, b));
      G.gens.push_back(elem_mat(F, r, i + 1, i, b));
    }
  if (s < r) {
    MatFq d = MatFq::identity(F, r);
    d.set(s, s, F->omega);
    G.gens.push_back(d);
  }
  return G;
}

std::vector<MatFq> group_elements(const SubgroupGens& G) {
  check_subgroup(G);
  const size_t cap = caps().group;
  MatFq id = MatFq::identity(G.F, G.r);
  std::set<MatFq> seen{id};
  std::deque<MatFq> todo{id};
  while (!todo.empty()) {
    MatFq g = std::move(todo.front());
    todo.pop_front();
    for (const MatFq& s : G.gens) {
      MatFq h = g.mul(s);
      if (seen.insert(h).second) {
        if (seen.size() > cap) throw cap_exceeded("group closure exceeds cap");
        todo.push_back(std::move(h));
      }
    }
  }
  return std::vector<MatFq>(seen.begin(), seen.end());
}

DoubleCosets double_cosets(const SubgroupGens& H, const SubgroupGens& G,
                           const SubgroupGens& J) {
  check_subgroup(H);
  check_subgroup(J);
  std::vector<MatFq> gels = group_elements(G);
  for (const SubgroupGens* S : {&H, &J}) {
    if (S->F != G.F || S->r != G.r)
      throw invalid_input("double_cosets: subgroup over different field or rank");
    for (const MatFq& x : group_elements(*S))
      if (!std::binary_search(gels.begin(), gels.end(), x))
        throw invalid_input("double_cosets: subgroup not contained in G");
  }

  std::map<MatFq, size_t> idx;
  for (size_t i = 0; i < gels.size(); ++i) idx.emplace(gels[i], i);
  std::vector<char> marked(gels.size(), 0);

  DoubleCosets out;
  for (size_t i0 = 0; i0 < gels.size(); ++i0) {
    if (marked[i0]) continue;
    std::deque<size_t> todo{i0};
    marked[i0] = 1;
    size_t csize = 0;
    while (!todo.empty()) {
      size_t i = todo.front();
      todo.pop_front();
      ++csize;
      auto push = [&](const MatFq& x) {
        size_t k = idx.at(x);
        if (!marked[k]) {
          marked[k] = 1;
          todo.push_back(k);
        }
      };
      for (const MatFq& h : H.gens) push(h.mul(gels[i]));
      for (const MatFq& j : J.gens) push(gels[i].mul(j));
    }
    out.reps.push_back(gels[i0]);
    out.sizes.push_back(csize);
  }
  out.count = out.reps.size();
  size_t total = 0;
  for (size_t s : out.sizes) total += s;
  if (total != gels.size())
    throw internal_error("double_cosets: classes do not partition the group");
  return out;
}

bool is_fine_image(const SubgroupGens& K) {
  for (const MatFq& g : group_elements(K))
    if (!is_unipotent(g)) return false;
  return true;
}

SubgroupGens subgroup_parse(std::istream& in) {
  long long q = 0, r = 0;
  if (!(in >> q >> r)) throw invalid_input("subgroup file: expected header 'q r'");
  if (q < 2 || q > 256) throw invalid_input("subgroup file: q out of range");
  if (r < 1 || r > 16) throw invalid_input("subgroup file: rank out of range");
  const FieldDesc* F = field_q(int(q));
  SubgroupGens G{F, int(r), {}};
  std::vector<std::string> toks;
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  size_t per = size_t(r) * size_t(r);
  if (toks.size() % per)
    throw invalid_input("subgroup file: entry count not a multiple of r*r");
  for (size_t off = 0; off < toks.size(); off += per) {
    MatFq g(F, int(r), int(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        g.set(i, j, uint8_t(F->el_parse(toks[off + size_t(i) * r + j])));
    if (!g.invertible())
      throw invalid_input("subgroup file: generator not invertible");
    G.gens.push_back(std::move(g));
  }
  return G;
}

SubgroupGens subgroup_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open subgroup file: " + path);
  return subgroup_parse(in);
}

}  // namespace dforms
