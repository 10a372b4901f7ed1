#include "dforms/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dforms/error.hpp"
#include "dforms/field.hpp"
#include "dforms/group.hpp"
#include "dforms/hecke.hpp"
#include "dforms/satake.hpp"
#include "dforms/verify.hpp"

namespace dforms {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kSchema = "drinfeld-forms/1";

// Everything a subcommand needs, collected from flags.
struct RunConfig {
  int q = 0;
  int r = 2;
  std::string krange = "0..4";
  std::string format = "json";
  std::string group = "gl";
  std::string subspace;
  std::string a_text;
  std::string b_text;
  uint64_t seed = 0;
  uint64_t cap_group = 0;      // 0 keeps the default
  uint64_t cap_monomials = 0;  // 0 keeps the default
};

// caps() is process-global; every run starts from the defaults, applies the
// environment override and then the flags, and restores the previous state
// on exit so embedding callers are unaffected.
struct CapsGuard {
  Caps saved = caps();
  ~CapsGuard() { caps() = saved; }
};

uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw invalid_input(what + ": expected a non-negative integer, got '" + s +
                        "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw invalid_input(what + ": integer out of range: '" + s + "'");
  }
}

void apply_env_caps() {
  const char* env = std::getenv("DFORMS_CAPS");
  if (env == nullptr || *env == '\0') return;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw invalid_input("DFORMS_CAPS: expected key=value, got '" + item +
                          "'");
    std::string key = item.substr(0, eq);
    uint64_t val = parse_u64(item.substr(eq + 1), "DFORMS_CAPS " + key);
    if (val == 0) throw invalid_input("DFORMS_CAPS " + key + ": must be > 0");
    if (key == "group")
      caps().group = size_t(val);
    else if (key == "monomials")
      caps().monomials = size_t(val);
    else if (key == "terms")
      caps().terms = size_t(val);
    else if (key == "field_enum")
      caps().field_enum = size_t(val);
    else
      throw invalid_input("DFORMS_CAPS: unknown key '" + key + "'");
  }
}

void apply_caps(const RunConfig& cfg) {
  caps() = Caps{};
  apply_env_caps();
  if (cfg.cap_group != 0) caps().group = size_t(cfg.cap_group);
  if (cfg.cap_monomials != 0) caps().monomials = size_t(cfg.cap_monomials);
}

void validate_q(int q) {
  if (q < 2 || q > 16) throw invalid_input("q must be a prime power in [2,16]");
  int p = 2;
  while (q % p != 0) ++p;
  int m = q;
  while (m % p == 0) m /= p;
  if (m != 1) throw invalid_input("q must be a prime power in [2,16]");
}

void validate_r(int r) {
  if (r < 1 || r > 8) throw invalid_input("r must lie in [1,8]");
}

std::pair<int, int> parse_krange(const std::string& s) {
  size_t dots = s.find("..");
  int lo = 0, hi = 0;
  if (dots == std::string::npos) {
    lo = hi = int(parse_u64(s, "--k"));
  } else {
    lo = int(parse_u64(s.substr(0, dots), "--k"));
    hi = int(parse_u64(s.substr(dots + 2), "--k"));
  }
  if (lo > hi) throw invalid_input("--k: empty range '" + s + "'");
  if (hi > 64) throw invalid_input("--k: weight above the supported range");
  return {lo, hi};
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  if (s.empty()) throw invalid_input(what + ": missing value");
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(int(parse_u64(item, what)));
  return out;
}

// Subspace rows: ';' between rows, whitespace between entries; entries use
// the field-element syntax (integers for prime q, ':'-joined coordinates
// otherwise), matching the subgroup file format.
std::vector<std::vector<uint8_t>> parse_subspace(const FieldDesc* F, int r,
                                                 const std::string& s) {
  std::vector<std::vector<uint8_t>> rows;
  std::stringstream lines(s);
  std::string line;
  while (std::getline(lines, line, ';')) {
    std::stringstream ls(line);
    std::string tok;
    std::vector<uint8_t> row;
    while (ls >> tok) row.push_back(uint8_t(F->el_parse(tok)));
    if (row.empty()) continue;
    if (int(row.size()) != r)
      throw invalid_input("--subspace: row needs exactly " +
                          std::to_string(r) + " entries");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw invalid_input("--subspace: no rows given");
  return rows;
}

void validate_format(const std::string& f) {
  if (f != "json" && f != "csv")
    throw invalid_input("--format must be json or csv");
}

void emit_json(std::ostream& out, const ojson& j) { out << j.dump(2) << "\n"; }

std::string bool_text(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- dims ----

int cmd_dims(const RunConfig& cfg, std::ostream& out) {
  validate_q(cfg.q);
  validate_r(cfg.r);
  auto [lo, hi] = parse_krange(cfg.krange);
  ojson rows = ojson::array();
  bool all = true;
  std::string csv = "k,oracle,formula,match\n";
  for (int k = lo; k <= hi; ++k) {
    long long oracle = graded_dim(cfg.r, cfg.q, k);
    long long formula = dim_formula(cfg.r, cfg.q, k);
    bool match = oracle == formula;
    all = all && match;
    rows.push_back(ojson{{"k", k},
                         {"oracle", oracle},
                         {"formula", formula},
                         {"match", match}});
    csv += std::to_string(k) + "," + std::to_string(oracle) + "," +
           std::to_string(formula) + "," + bool_text(match) + "\n";
  }
  if (cfg.format == "csv") {
    out << csv;
  } else {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = "dims";
    j["q"] = cfg.q;
    j["r"] = cfg.r;
    j["rows"] = rows;
    j["status"] = all ? "pass" : "mismatch";
    emit_json(out, j);
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------- invariants ----

struct GroupChoice {
  SubgroupGens K;
  std::string name;
  bool has_weights = false;
  std::vector<int> weights;
};

GroupChoice resolve_group(const RunConfig& cfg) {
  GroupChoice g;
  g.name = cfg.group;
  if (cfg.group.rfind("file:", 0) == 0) {
    g.K = subgroup_load(cfg.group.substr(5));
    return g;
  }
  validate_q(cfg.q);
  validate_r(cfg.r);
  const FieldDesc* F = field_q(cfg.q);
  if (cfg.group == "gl") {
    g.K = gl_gens(F, cfg.r);
    g.has_weights = true;
    g.weights = weights_gl(cfg.r, cfg.q);
  } else if (cfg.group == "sl") {
    g.K = sl_gens(F, cfg.r);
    g.has_weights = true;
    g.weights = weights_sl(cfg.r, cfg.q);
  } else if (cfg.group == "unipotent") {
    g.K = unipotent_gens(F, cfg.r);
    g.has_weights = true;
    g.weights = weights_unipotent(cfg.r);
  } else if (cfg.group == "trivial") {
    g.K = trivial_gens(F, cfg.r);
  } else {
    throw invalid_input(
        "--group must be gl, sl, unipotent, trivial or file:path");
  }
  return g;
}

int cmd_invariants(const RunConfig& cfg, std::ostream& out) {
  GroupChoice g = resolve_group(cfg);
  int q = g.K.F->q;
  int r = g.K.r;
  auto [lo, hi] = parse_krange(cfg.krange);
  ojson rows = ojson::array();
  bool all = true;
  std::string csv = "k,dim,reference,match\n";
  for (int k = lo; k <= hi; ++k) {
    long long dim = invariant_dim(g.K, k);
    long long ref = g.has_weights ? weighted_hilbert(g.weights, k)
                                  : level_dim_formula(g.K, r, q, k);
    bool match = dim == ref;
    all = all && match;
    rows.push_back(
        ojson{{"k", k}, {"dim", dim}, {"reference", ref}, {"match", match}});
    csv += std::to_string(k) + "," + std::to_string(dim) + "," +
           std::to_string(ref) + "," + bool_text(match) + "\n";
  }
  if (cfg.format == "csv") {
    out << csv;
  } else {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = "invariants";
    j["q"] = q;
    j["r"] = r;
    j["group"] = g.name;
    j["reference"] = g.has_weights ? "weighted-hilbert" : "level-formula";
    j["rows"] = rows;
    j["status"] = all ? "pass" : "mismatch";
    emit_json(out, j);
  }
  return all ? 0 : 1;
}

// ----------------------------------------------------------- universal ----

int cmd_universal(const RunConfig& cfg, std::ostream& out) {
  validate_q(cfg.q);
  validate_r(cfg.r);
  UniversalFamily U = universal_coeffs(cfg.r, cfg.q);
  bool degrees = true;
  long long qe = 1;
  for (int i = 1; i <= cfg.r; ++i) {
    qe *= cfg.q;
    degrees = degrees && U.c[size_t(i) - 1].degree() == qe - 1;
  }
  bool top = !U.c.back().is_zero() && !r_is_zero(U.c.back());
  bool invariant = true;
  for (const MatFq& m : gl_gens(field_q(cfg.q), cfg.r).gens)
    for (const RElement& ci : U.c)
      invariant = invariant && r_is_zero(group_act(ci, m).sub(ci));
  bool all = degrees && top && invariant;
  ojson rows = ojson::array();
  std::string csv = "i,degree,terms,text\n";
  for (int i = 1; i <= cfg.r; ++i) {
    const RElement& ci = U.c[size_t(i) - 1];
    rows.push_back(ojson{{"i", i},
                         {"degree", ci.degree()},
                         {"terms", ci.term_count()},
                         {"text", ci.text()}});
    csv += std::to_string(i) + "," + std::to_string(ci.degree()) + "," +
           std::to_string(ci.term_count()) + "," + ci.text() + "\n";
  }
  if (cfg.format == "csv") {
    out << csv;
  } else {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = "universal";
    j["q"] = cfg.q;
    j["r"] = cfg.r;
    j["coefficients"] = rows;
    j["checks"] = ojson{{"q_power_only", true},
                        {"degrees", degrees},
                        {"top_nonzero", top},
                        {"invariant", invariant}};
    j["status"] = all ? "pass" : "mismatch";
    emit_json(out, j);
  }
  return all ? 0 : 1;
}

// -------------------------------------------------------------- strata ----

int cmd_strata(const RunConfig& cfg, std::ostream& out) {
  validate_q(cfg.q);
  validate_r(cfg.r);
  const FieldDesc* F = field_q(cfg.q);
  StratumLabel V{parse_subspace(F, cfg.r, cfg.subspace)};
  UniversalFamily U = universal_coeffs(cfg.r, cfg.q);
  UniversalFamily S = specialize_stratum(U, V);
  UniversalFamily small = universal_coeffs(S.r, cfg.q);
  bool match = true;
  for (int i = 0; i < S.r; ++i)
    match = match && r_is_zero(S.c[size_t(i)].sub(small.c[size_t(i)]));
  ojson rows = ojson::array();
  std::string csv = "i,coefficient\n";
  for (int i = 1; i <= cfg.r; ++i) {
    std::string text = i <= S.r ? S.c[size_t(i) - 1].text() : "0";
    rows.push_back(ojson{{"i", i}, {"text", text}});
    csv += std::to_string(i) + "," + text + "\n";
  }
  if (cfg.format == "csv") {
    out << csv;
  } else {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = "strata";
    j["q"] = cfg.q;
    j["r"] = cfg.r;
    ojson basis = ojson::array();
    for (const auto& row : V.basis) {
      ojson jr = ojson::array();
      for (uint8_t e : row) jr.push_back(int(e));
      basis.push_back(jr);
    }
    j["subspace"] = basis;
    j["rank"] = S.r;
    j["coefficients"] = rows;
    j["matches_universal"] = match;
    j["status"] = match ? "pass" : "mismatch";
    emit_json(out, j);
  }
  return match ? 0 : 1;
}

// --------------------------------------------------------------- hecke ----

int cmd_hecke(const RunConfig& cfg, std::ostream& out) {
  validate_q(cfg.q);
  validate_r(cfg.r);
  std::vector<int> a = parse_int_list(cfg.a_text, "--a");
  std::vector<int> b = parse_int_list(cfg.b_text, "--b");
  if (int(a.size()) != cfg.r || int(b.size()) != cfg.r)
    throw invalid_input("--a/--b must list exactly r exponents");
  HeckeElement product = hco_expand(cfg.q, a, b);
  HeckeElement oracle = convolve(cfg.q, a, b);
  bool match = product == oracle;
  ojson rows = ojson::array();
  std::string csv = "type,mult\n";
  for (const auto& kv : product) {
    ojson t = ojson::array();
    std::string ttext;
    for (size_t i = 0; i < kv.first.size(); ++i) {
      t.push_back(kv.first[i]);
      if (i) ttext += " ";
      ttext += std::to_string(kv.first[i]);
    }
    rows.push_back(ojson{{"type", t}, {"mult", kv.second}});
    csv += ttext + "," + std::to_string(kv.second) + "\n";
  }
  if (cfg.format == "csv") {
    out << csv;
  } else {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = "hecke";
    j["q"] = cfg.q;
    j["r"] = cfg.r;
    j["a"] = a;
    j["b"] = b;
    j["product"] = rows;
    j["oracle_match"] = match;
    j["status"] = match ? "pass" : "mismatch";
    emit_json(out, j);
  }
  return match ? 0 : 1;
}

// -------------------------------------------------------------- verify ----

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::vector<CheckResult> results = verification_suite(cfg.seed);
  bool all = true;
  ojson rows = ojson::array();
  std::string csv = "name,pass\n";
  for (const CheckResult& r : results) {
    all = all && r.pass;
    ojson row{{"name", r.name}, {"pass", r.pass}};
    if (!r.pass) row["detail"] = r.detail;
    rows.push_back(row);
    csv += r.name + "," + bool_text(r.pass) + "\n";
  }
  if (cfg.format == "csv") {
    out << csv;
  } else {
    ojson j;
    j["schema"] = kSchema;
    j["command"] = "verify";
    j["seed"] = cfg.seed;
    j["rows"] = rows;
    j["status"] = all ? "pass" : "mismatch";
    emit_json(out, j);
  }
  return all ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--q", cfg.q, "Field size (prime power, 2..16)");
  sub->add_option("--r", cfg.r, "Rank (default 2)");
  sub->add_option("--k", cfg.krange, "Weight or weight range, e.g. 3 or 0..6");
  sub->add_option("--format", cfg.format, "Output format: json (default) or csv");
  sub->add_option("--seed", cfg.seed, "Seed for randomized checks (default 0)");
  sub->add_option("--cap-group", cfg.cap_group, "Override the group-size cap");
  sub->add_option("--cap-monomials", cfg.cap_monomials,
                  "Override the monomial-count cap");
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Exact computations in the graded ring of Drinfeld modular forms: "
      "dimension tables, invariants of level subgroups, the universal "
      "coefficient family, boundary strata and Hecke products."};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* dims = app.add_subcommand(
      "dims", "Graded dimensions: brute-force rank oracle vs closed formula");
  CLI::App* invariants = app.add_subcommand(
      "invariants", "Dimensions of subgroup-invariant subspaces vs reference");
  CLI::App* universal = app.add_subcommand(
      "universal", "Coefficient family of the universal module with checks");
  CLI::App* strata = app.add_subcommand(
      "strata", "Specialize the universal family to a boundary stratum");
  CLI::App* hecke = app.add_subcommand(
      "hecke", "Hecke double-coset product vs the convolution oracle");
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the full cross-verification suite");
  for (CLI::App* sub : {dims, invariants, universal, strata, hecke, verify})
    add_common(sub, cfg);
  invariants->add_option(
      "--group", cfg.group,
      "Subgroup: gl, sl, unipotent, trivial or file:path (default gl)");
  strata->add_option("--subspace", cfg.subspace,
                     "Subspace basis rows, e.g. \"1 0\" or \"1 0 0;0 1 0\"");
  hecke->add_option("--a", cfg.a_text, "First divisor type, e.g. 0,1");
  hecke->add_option("--b", cfg.b_text, "Second divisor type, e.g. 0,1");

  std::vector<const char*> argv;
  argv.push_back("dforms");
  for (const std::string& s : args) argv.push_back(s.c_str());

  try {
    try {
      app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    CapsGuard guard;
    apply_caps(cfg);
    validate_format(cfg.format);
    if (dims->parsed()) return cmd_dims(cfg, out);
    if (invariants->parsed()) return cmd_invariants(cfg, out);
    if (universal->parsed()) return cmd_universal(cfg, out);
    if (strata->parsed()) return cmd_strata(cfg, out);
    if (hecke->parsed()) return cmd_hecke(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    err << "error: no command selected\n";
    return 2;
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const cap_exceeded& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const internal_error& e) {
    err << "error: internal check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace dforms
