#include "ipslab/cli/app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/algebra/parse.hpp"
#include "ipslab/cli/config.hpp"
#include "ipslab/cli/pipelines.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/instances/instances.hpp"
#include "ipslab/measures/matrix.hpp"
#include "ipslab/measures/measures.hpp"
#include "ipslab/refute/refute.hpp"
#include "ipslab/roabp/roabp.hpp"
#include "ipslab/roabp/weakness.hpp"

namespace ipslab::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Json result = Json::object();
  std::vector<CsvRow> rows;
  int code = kExitOk;
  std::string message;  // written to err when the code is not 0
};

struct Opts {
  // global
  std::string field = "Q";
  std::uint64_t seed = 0;
  unsigned trials = 0;
  std::string out;
  unsigned guard_vars = 0;
  std::string format = "json";
  // shared by several commands
  std::string family, poly, g, blocks, order, support, block, monomials, y, z, x, over, set, point;
  std::string roabp, sum, cert, beta, rule = "binom2", desc, csv_trials;
  std::uint64_t n = 0, c = 4, d = 1, p = 2, pi_seed = 0;
  unsigned k = 0, max_degree = 1, q = 4, r = 4, partitions = 3;
  std::size_t t = 2, width = 4, degree = 1, samples = 0, sampler_samples = 10000;
  std::uint64_t coeff_bound = 3, prime = kDefaultRankPrime;
  bool exclusive = false, all_ones = false, containment = false, targeted = false, symbolic = false;
  bool exact = false, randomized = false, no_shuffle = false, list_valid = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw UsageError("cannot write " + path);
  o << body;
}

Json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw UsageError("malformed JSON in " + where + " at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
}

/// Strips the {"tool", "version", "config", "result"} envelope of our own outputs.
Json unwrap(Json j) {
  while (j.is_object() && j.contains("tool") && j.contains("result")) j = Json(j["result"]);
  return j;
}

Json load_json(const std::string& path) { return unwrap(parse_json_text(read_file(path), path)); }

bool looks_like_file(const std::string& spec) {
  return std::filesystem::exists(spec) || spec.ends_with(".json");
}

Json pick(const Json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object() || j.contains("terms")) return j;
  for (const char* k : keys) {
    if (j.contains(k)) return j.at(k);
  }
  return j;
}

/// A JSON file (bare polynomial or one of our outputs) or an inline expression.
SparsePoly load_poly(const std::string& spec, const Field& field, std::initializer_list<const char*> keys,
                     const char* what = "--poly") {
  if (spec.empty()) throw UsageError(std::string(what) + " is required");
  if (looks_like_file(spec)) return poly_from_json(pick(load_json(spec), keys));
  return parse_poly(spec, field);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ' && ch != '\t') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

VarSet parse_vars(const std::string& text, const VarTable& vars) {
  VarSet s;
  for (const auto& name : split(text, ", ;")) {
    if (name == "1" || name == "{}") continue;
    s.insert(vars.id(name));
  }
  return s;
}

std::string join_names(const VarSet& s, const VarTable& vars) {
  std::string out;
  for (VarId v : s.ids()) out += (out.empty() ? "" : ",") + vars.name(v);
  return out;
}

VarPartition blocks_from_json(const Json& j, const VarTable& vars) {
  Json arr = j;
  if (arr.is_object() && arr.contains("descriptor")) arr = arr.at("descriptor");
  if (arr.is_object() && arr.contains("blocks")) arr = arr.at("blocks");
  if (!arr.is_array()) throw UsageError("blocks must be an array of {\"label\", \"vars\"} objects or name lists");
  std::vector<VarSet> bs;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& b = arr[i];
    if (b.is_object()) {
      bs.push_back(varset_from_json(b.at("vars"), vars));
      labels.push_back(b.value("label", "B" + std::to_string(i + 1)));
    } else {
      bs.push_back(varset_from_json(b, vars));
      labels.push_back("B" + std::to_string(i + 1));
    }
  }
  return VarPartition(std::move(bs), std::move(labels));
}

/// A JSON file, an inline "X1=x1,x2;Y=y0,y1" list, or the descriptor stored next to the polynomial.
VarPartition load_blocks(const Opts& o, const VarTable& vars) {
  if (o.blocks.empty()) {
    if (!o.poly.empty() && std::filesystem::exists(o.poly)) {
      const Json j = load_json(o.poly);
      if (j.is_object() && j.contains("descriptor")) return blocks_from_json(j, vars);
    }
    throw UsageError("--blocks is required unless --poly is a gen output with a descriptor");
  }
  if (looks_like_file(o.blocks)) return blocks_from_json(load_json(o.blocks), vars);
  std::vector<VarSet> bs;
  std::vector<std::string> labels;
  for (const auto& part : split(o.blocks, ";")) {
    const auto eq = part.find('=');
    labels.push_back(eq == std::string::npos ? "B" + std::to_string(bs.size() + 1) : part.substr(0, eq));
    bs.push_back(parse_vars(eq == std::string::npos ? part : part.substr(eq + 1), vars));
  }
  return VarPartition(std::move(bs), std::move(labels));
}

SumRoabp load_sum(const std::string& spec, const Field& field) {
  if (spec.empty()) throw UsageError("an ROABP file is required");
  Json j = pick(load_json(spec), {"sum", "roabp"});
  const bool has_field = j.is_object() && j.contains("field");
  return sum_roabp_from_json(j, has_field ? std::nullopt : std::optional<Field>(field));
}

std::vector<Scalar> parse_point(const std::string& text, const Field& F, const VarTable& vars) {
  std::vector<std::optional<Scalar>> point(vars.size());
  for (const auto& kv : split(text, ",;")) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("point entries look like x1=3, got " + kv);
    point[vars.id(kv.substr(0, eq))] = F.parse_scalar(kv.substr(eq + 1));
  }
  std::vector<Scalar> out;
  for (std::size_t v = 0; v < point.size(); ++v) {
    if (!point[v]) throw UsageError("no value for " + vars.name(static_cast<VarId>(v)));
    out.push_back(*point[v]);
  }
  return out;
}

mpq_class parse_rational(const std::string& s) { return std::get<mpq_class>(Field::rationals().parse_scalar(s)); }

std::vector<VarId> parse_order(const std::string& text, const VarTable& vars) {
  std::vector<VarId> out;
  if (text.empty()) {
    for (VarId v = 0; v < vars.size(); ++v) out.push_back(v);
    return out;
  }
  for (const auto& name : split(text, ", ;>")) out.push_back(vars.id(name));
  return out;
}

class Rows {
 public:
  Rows(Outcome& oc, std::string family, std::uint64_t n, std::string field, std::uint64_t seed)
      : oc_(oc), proto_{std::move(family), n, std::move(field), seed, "", "", "", std::nullopt} {}
  void add(std::string quantity, std::string value, std::string bound = "", std::optional<bool> sat = std::nullopt) {
    CsvRow r = proto_;
    r.quantity = std::move(quantity);
    r.value = std::move(value);
    r.bound = std::move(bound);
    r.satisfied = sat;
    oc_.rows.push_back(std::move(r));
  }

 private:
  Outcome& oc_;
  CsvRow proto_;
};

Outcome from_pipeline(PipelineResult pr) {
  Outcome oc;
  oc.result = std::move(pr.json);
  oc.rows = std::move(pr.rows);
  if (!pr.ok) {
    oc.code = kExitVerification;
    oc.message = "one or more checks failed";
  }
  return oc;
}

// ---- gen ----

Outcome cmd_list_valid(const Opts& o) {
  Outcome oc;
  Rows rows(oc, "sizes", 0, "", o.seed);
  oc.result["blockwise"] = blockwise_valid_sizes(256);
  Json sm = Json::array();
  for (const auto& [n, c] : smconst_valid(256)) {
    sm.push_back({{"n", n}, {"c", c}});
    rows.add("smconst_valid", "n=" + std::to_string(n) + ";c=" + std::to_string(c));
  }
  oc.result["smconst"] = sm;
  for (auto n : blockwise_valid_sizes(256)) rows.add("blockwise_valid", "n=" + std::to_string(n));
  return oc;
}

Outcome cmd_gen(const Opts& o, const Field& F) {
  if (o.list_valid) return cmd_list_valid(o);
  if (o.family.empty()) throw UsageError("--family is required");
  if (o.n == 0) throw UsageError("--n is required");
  Outcome oc;
  std::optional<Instance> inst;
  if (o.family == "blockwise") {
    inst = gen_blockwise_binary(o.n, F, BlockwiseOptions{!o.exclusive});
  } else if (o.family == "smconst") {
    inst = gen_setmultilinear_constdeg(o.n, o.c, F, o.pi_seed ? std::optional<std::uint64_t>(o.pi_seed) : std::nullopt);
  } else if (o.family == "subset") {
    const Scalar beta = o.beta.empty() ? F.from_int(static_cast<std::int64_t>(o.n + 1)) : F.parse_scalar(o.beta);
    inst = gen_subset_sum(o.n, beta, F);
  } else if (o.family == "quadratic") {
    inst = gen_quadratic_subset_sum(o.n, F);
  } else if (o.family == "scaled") {
    ScaledOptions so;
    so.p = o.p;
    so.k = o.k;
    if (o.rule == "explicit") {
      so.rule = ThresholdRule::explicit_k;
    } else if (o.rule == "binom2") {
      so.rule = ThresholdRule::binom_2n_2;
    } else if (o.rule == "binomn") {
      so.rule = ThresholdRule::binom_2n_n;
    } else {
      throw UsageError("--rule must be explicit, binom2 or binomn");
    }
    so.seed = o.seed;
    so.all_ones = o.all_ones;
    inst = gen_scaled_quadratic(o.n, so);
  } else if (o.family == "vecinv") {
    const Scalar beta = o.beta.empty() ? F.from_int(2) : F.parse_scalar(o.beta);
    VectorInvariant vi(o.n, beta, F);
    const InstanceDescriptor d = vi.descriptor();
    oc.result["descriptor"] = d.to_json(*vi.vars());
    oc.result["factors"] = vi.factor_count();
    if (vi.factor_count() <= VectorInvariant::kExpandFactorLimit) oc.result["poly"] = poly_to_json(vi.expand());
    Rows rows(oc, "vecinv", o.n, F.describe(), o.seed);
    rows.add("factors", std::to_string(vi.factor_count()));
    rows.add("vars", std::to_string(vi.vars()->size()));
    return oc;
  } else if (o.family == "esym") {
    const Scalar beta = o.beta.empty() ? F.from_int(static_cast<std::int64_t>(binomial(o.n, o.d) + 1)) : F.parse_scalar(o.beta);
    inst = gen_elem_sym_axiom(o.n, o.d, beta, F);
  } else {
    throw UsageError("--family must be one of blockwise, smconst, subset, quadratic, scaled, vecinv, esym");
  }
  oc.result["poly"] = poly_to_json(inst->f);
  oc.result["descriptor"] = inst->desc.to_json(*inst->f.vars());
  Rows rows(oc, o.family, o.n, inst->desc.field.describe(), o.seed);
  rows.add("terms", std::to_string(inst->f.size()));
  rows.add("vars", std::to_string(inst->f.vars()->size()));
  rows.add("blocks", std::to_string(inst->desc.blocks.size()));
  return oc;
}

// ---- inverse / coeff ----

Outcome cmd_inverse(const Opts& o, const Field& F, unsigned guard) {
  const SparsePoly f = load_poly(o.poly, F, {"poly", "axiom", "f"});
  const CubeInverse inv = boolean_inverse(f, guard);
  Outcome oc;
  oc.result["f"] = poly_to_json(f);
  oc.result["g"] = poly_to_json(inv.g);
  oc.result["terms"] = inv.g.size();
  Rows rows(oc, "input", inv.universe.size(), f.field().describe(), o.seed);
  rows.add("inverse_terms", std::to_string(inv.g.size()));
  return oc;
}

Outcome cmd_coeff(const Opts& o, const Field& F, bool support_given) {
  const SparsePoly f = load_poly(o.poly, F, {"poly", "axiom", "f"});
  Outcome oc;
  Rows rows(oc, "input", cube_universe(f).size(), f.field().describe(), o.seed);
  if (o.containment) {
    const auto rep = check_support_containment(f);
    oc.result = containment_to_json(f, rep);
    rows.add("support_coeff_nonzero", rep.all_nonzero ? "true" : "false", "true", rep.all_nonzero);
    rows.add("support_coeff_closed_form", rep.all_match ? "true" : "false", "true", rep.all_match);
    if (!rep.all_nonzero || !rep.all_match) {
      oc.code = kExitVerification;
      oc.message = "support containment check failed";
    }
    return oc;
  }
  if (!support_given) throw UsageError("give --support or --containment");
  const VarSet s = parse_vars(o.support, *f.vars());
  const Scalar c = coeff_on_support(f, s);
  oc.result["support"] = varset_to_json(s, *f.vars());
  oc.result["coeff"] = f.field().format(c);
  rows.add("coeff[" + join_names(s, *f.vars()) + "]", f.field().format(c));
  return oc;
}

// ---- measure ----

void measure_rows(Rows& rows, const MeasureReport& rep) {
  for (const auto& b : rep.blocks) rows.add("alg_rank_" + b.label, std::to_string(b.tm.bound));
  rows.add("kalorkoti_sum", std::to_string(rep.sum));
}

Outcome cmd_kalorkoti(const Opts& o, const Field& F) {
  const SparsePoly f = load_poly(o.poly, F, {"poly", "g", "axiom", "f"});
  const VarPartition part = load_blocks(o, *f.vars());
  const MonomialOrder order = MonomialOrder::parse(o.order, *f.vars());
  const MeasureReport rep =
      o.targeted ? kalorkoti_bound_targeted(f, part, order, o.max_degree) : kalorkoti_bound(f, part, order);
  Outcome oc;
  oc.result = rep.to_json(f);
  Rows rows(oc, "input", f.vars()->size(), f.field().describe(), o.seed);
  measure_rows(rows, rep);
  return oc;
}

Outcome cmd_tm(const Opts& o, const Field& F) {
  const SparsePoly f = load_poly(o.poly, F, {"poly", "g", "axiom", "f"});
  if (o.block.empty()) throw UsageError("--block is required");
  const VarSet s = parse_vars(o.block, *f.vars());
  const MonomialOrder order = MonomialOrder::parse(o.order, *f.vars());
  MeasureReport rep;
  rep.order = order.describe(*f.vars());
  rep.targeted = o.targeted;
  rep.blocks.push_back(BlockMeasure{"S", s,
                                    o.targeted ? alg_rank_lower_bound_targeted(f, s, order, o.max_degree)
                                               : alg_rank_lower_bound_via_TM(f, s, order)});
  rep.sum = rep.blocks.front().tm.bound;
  Outcome oc;
  oc.result = rep.to_json(f);
  Rows rows(oc, "input", f.vars()->size(), f.field().describe(), o.seed);
  rows.add("alg_rank_S", std::to_string(rep.sum));
  return oc;
}

Outcome cmd_independent(const Opts& o) {
  const auto items = split(o.monomials, ",;");
  if (items.empty()) throw UsageError("--monomials is required, e.g. \"y0,y1,x1*y1\"");
  std::string all;
  for (const auto& it : items) all += (all.empty() ? "" : "+") + it;
  const VarTablePtr vars = parse_poly(all).vars();
  std::vector<Monomial> ms;
  Json names = Json::array();
  for (const auto& it : items) {
    const SparsePoly m = parse_poly(it, Field::rationals(), vars);
    if (m.size() != 1) throw UsageError("not a monomial: " + it);
    ms.push_back(m.terms().front().first);
    names.push_back(it);
  }
  const bool indep = monomials_alg_independent(ms);
  Outcome oc;
  oc.result["monomials"] = names;
  oc.result["independent"] = indep;
  oc.result["exponent_rank"] = exponent_rank(ms);
  Rows rows(oc, "input", vars->size(), "Q", o.seed);
  rows.add("independent", indep ? "true" : "false");
  return oc;
}

// ---- rank ----

Outcome cmd_rank_pd(const Opts& o, const Field& F, unsigned trials) {
  const SparsePoly g = load_poly(o.poly, F, {"g", "poly", "f"});
  const VarTable& vars = *g.vars();
  if (o.y.empty()) throw UsageError("--Y is required");
  const VarSet y = parse_vars(o.y, vars);
  const VarSet z = o.z.empty() ? g.support() - y : parse_vars(o.z, vars);
  const VarSet t = g.support() - (y | z);
  Outcome oc;
  oc.result["Y"] = varset_to_json(y, vars);
  oc.result["Z"] = varset_to_json(z, vars);
  oc.result["T"] = varset_to_json(t, vars);
  Rows rows(oc, "input", vars.size(), g.field().describe(), o.seed);
  if (o.symbolic) {
    const std::size_t rk = rank_symbolic_function_field(g, y, z);
    oc.result["method"] = "symbolic";
    oc.result["rank"] = rk;
    rows.add("rank", std::to_string(rk));
  } else if (t.empty() && o.over.empty()) {
    const PDMatrix m = pd_matrix(g, y, z);
    const std::size_t rk = rank_exact(m);
    oc.result["method"] = "exact";
    oc.result["field"] = g.field().describe();
    oc.result["rank"] = rk;
    oc.result["rows"] = m.logical_rows;
    oc.result["cols"] = m.logical_cols;
    oc.result["materialized"] = {m.rows.size(), m.cols.size()};
    rows.add("rank", std::to_string(rk));
  } else {
    std::uint64_t prime = o.prime;
    if (!o.over.empty()) {
      const Field over = Field::parse(o.over);
      if (over.kind() == Field::Kind::prime) prime = over.characteristic();
    }
    const FunctionFieldRank fr = rank_over_function_field(g, y, z, trials, prime, o.seed);
    oc.result["method"] = "function-field";
    oc.result["field"] = fr.field;
    oc.result["rank"] = fr.rank;
    oc.result["per_trial"] = fr.per_trial;
    oc.result["discarded"] = fr.discarded;
    oc.result["log"] = fr.log;
    rows.add("rank", std::to_string(fr.rank));
  }
  return oc;
}

Outcome cmd_evaldim(const Opts& o, const Field& F) {
  const SparsePoly f = load_poly(o.poly, F, {"poly", "g", "f"});
  const VarTable& vars = *f.vars();
  if (o.y.empty()) throw UsageError("--Y is required");
  const VarSet y = parse_vars(o.y, vars);
  const VarSet x = o.x.empty() ? f.support() - y : parse_vars(o.x, vars);
  std::vector<Scalar> set;
  for (const auto& s : split(o.set.empty() ? "0,1" : o.set, ",;")) set.push_back(f.field().parse_scalar(s));
  const auto samples = o.samples ? std::optional<std::size_t>(o.samples) : std::nullopt;
  const std::size_t dim = eval_dim_lower_bound(f, x, y, set, samples, o.seed);
  Outcome oc;
  oc.result["X"] = varset_to_json(x, vars);
  oc.result["Y"] = varset_to_json(y, vars);
  oc.result["eval_dim"] = dim;
  Rows rows(oc, "input", vars.size(), f.field().describe(), o.seed);
  rows.add("eval_dim", std::to_string(dim));
  return oc;
}

// ---- roabp ----

Outcome cmd_roabp_random(const Opts& o, const Field& F) {
  if (o.n == 0) throw UsageError("--n is required");
  std::vector<std::string> names;
  for (std::uint64_t i = 1; i <= o.n; ++i) names.push_back("x" + std::to_string(i));
  RandomRoabpOptions ro;
  ro.n = o.n;
  ro.max_width = o.width;
  ro.degree = o.degree;
  ro.coeff_bound = o.coeff_bound;
  ro.shuffle_order = !o.no_shuffle;
  ro.seed = o.seed;
  const SumRoabp a = random_sum_roabp(F, VarTable::make(names), o.t, ro);
  Outcome oc;
  oc.result = sum_roabp_to_json(a);
  Rows rows(oc, "roabp", o.n, F.describe(), o.seed);
  rows.add("total_width", std::to_string(a.total_width()));
  return oc;
}

Outcome cmd_roabp_extract(const Opts& o, const Field& F) {
  const SumRoabp a = load_sum(o.roabp, F);
  const SparsePoly f = a.extract();
  Outcome oc;
  oc.result["poly"] = poly_to_json(f);
  Rows rows(oc, "roabp", a.vars()->size(), a.field().describe(), o.seed);
  rows.add("terms", std::to_string(f.size()));
  return oc;
}

Outcome cmd_roabp_eval(const Opts& o, const Field& F) {
  const SumRoabp a = load_sum(o.roabp, F);
  const Scalar v = a.eval(parse_point(o.point, a.field(), *a.vars()));
  Outcome oc;
  oc.result["value"] = a.field().format(v);
  Rows rows(oc, "roabp", a.vars()->size(), a.field().describe(), o.seed);
  rows.add("value", a.field().format(v));
  return oc;
}

Outcome cmd_roabp_mult(const Opts& o, const Field& F) {
  const SumRoabp a = load_sum(o.roabp, F);
  const MultilinearWitnesses w = multilinearize_sum_with_witnesses(a);
  Outcome oc;
  oc.result["sum"] = sum_roabp_to_json(w.b);
  Json h = Json::object();
  for (std::size_t v = 0; v < w.h.size(); ++v) {
    if (!w.h[v].is_zero()) h[a.vars()->name(static_cast<VarId>(v))] = poly_to_json(w.h[v]);
  }
  oc.result["h"] = h;
  Rows rows(oc, "roabp", a.vars()->size(), a.field().describe(), o.seed);
  rows.add("nonzero_witnesses", std::to_string(h.size()));
  return oc;
}

Outcome cmd_roabp_width(const Opts& o, const Field& F) {
  const SparsePoly f = load_poly(o.poly, F, {"poly", "f"});
  const std::vector<VarId> order = parse_order(o.order, *f.vars());
  const std::size_t w = width_lower_bound(f, order);
  Outcome oc;
  Json names = Json::array();
  for (VarId v : order) names.push_back(f.vars()->name(v));
  oc.result["order"] = names;
  oc.result["width_lower_bound"] = w;
  Rows rows(oc, "input", f.vars()->size(), f.field().describe(), o.seed);
  rows.add("width_lower_bound", std::to_string(w));
  return oc;
}

WeaknessOptions weakness_options(const Opts& o, unsigned trials) {
  WeaknessOptions wo;
  wo.n = o.n ? o.n : 16;
  wo.t = o.t;
  wo.width = o.width;
  wo.q = o.q;
  wo.r = o.r;
  wo.trials = trials;
  wo.seed = o.seed;
  wo.sampler_samples = o.sampler_samples;
  return wo;
}

Outcome run_weakness(const Opts& o, WeaknessOptions wo) {
  PipelineResult pr = weakness_pipeline(wo);
  if (!o.csv_trials.empty()) write_file(o.csv_trials, pr.trials_csv);
  return from_pipeline(std::move(pr));
}

// ---- refute ----

Json verdict_json(const RandomizedVerdict& v) {
  Json j;
  j["mode"] = "randomized";
  j["ok"] = v.ok;
  j["trials"] = v.trials;
  j["degree_bound"] = v.degree_bound;
  j["field"] = v.field;
  j["failed_trial"] = v.failed_trial ? Json(*v.failed_trial) : Json(nullptr);
  return j;
}

LinRefutation load_cert(const std::string& spec) {
  if (spec.empty()) throw UsageError("--cert is required");
  return certificate_from_json(pick(load_json(spec), {"certificate"}));
}

Outcome cmd_refute_build(const Opts& o) {
  if (o.n == 0) throw UsageError("--n is required");
  const mpq_class beta = o.beta.empty() ? mpq_class(static_cast<unsigned long>(o.n + 1)) : parse_rational(o.beta);
  const LinRefutation r = build_subset_sum_refutation(o.n, beta);
  Outcome oc;
  oc.result = certificate_to_json(r);
  Rows rows(oc, "subset", o.n, "Q", o.seed);
  rows.add("g_terms", std::to_string(r.g.size()));
  return oc;
}

Outcome cmd_refute_lift(const Opts& o) {
  const SparsePoly f = load_poly(o.poly, Field::rationals(), {"poly", "axiom", "f"});
  const LiftResult lr = lift_sparse_refutation(f);
  const ExactVerdict v = verify_exact(lr.cert);
  Outcome oc;
  oc.result = certificate_to_json(lr.cert);
  Json images = Json::array();
  for (const auto& m : lr.images) images.push_back(f.format_monomial(m));
  oc.result["lift"] = {{"s", lr.s}, {"beta", lr.beta.get_str()}, {"images", images}, {"verified", v.ok}};
  Rows rows(oc, "lift", lr.s, "Q", o.seed);
  rows.add("g_terms", std::to_string(lr.cert.g.size()));
  rows.add("verified", v.ok ? "true" : "false", "true", v.ok);
  if (!v.ok) {
    oc.code = kExitVerification;
    oc.message = "lifted certificate failed exact verification";
  }
  return oc;
}

Outcome cmd_refute_verify(const Opts& o, unsigned trials) {
  if (o.exact && o.randomized) throw UsageError("--exact and --randomized are exclusive");
  const LinRefutation r = load_cert(o.cert);
  Outcome oc;
  Rows rows(oc, "certificate", r.f.vars()->size(), r.field().describe(), o.seed);
  bool ok;
  if (o.randomized) {
    const RandomizedVerdict v = verify_randomized(r, trials, o.prime, o.seed);
    oc.result = verdict_json(v);
    ok = v.ok;
    if (!ok) oc.message = "identity fails at random point of trial " + std::to_string(v.failed_trial.value_or(0));
  } else {
    const ExactVerdict v = verify_exact(r);
    oc.result["mode"] = "exact";
    oc.result["ok"] = v.ok;
    oc.result["residual_terms"] = v.residual.size();
    oc.result["residual"] = poly_to_json(v.residual);
    ok = v.ok;
    if (!ok) {
      std::string s = v.residual.to_string();
      if (s.size() > 200) s = s.substr(0, 200) + " ...";
      oc.message = "residual g*f + sum h_j (x_j^2 - x_j) - 1 has " + std::to_string(v.residual.size()) + " terms: " + s;
    }
  }
  rows.add("verified", ok ? "true" : "false", "true", ok);
  if (!ok) oc.code = kExitVerification;
  return oc;
}

Outcome cmd_refute_functional(const Opts& o, const Field& F) {
  FunctionalCheckReport rep;
  if (!o.cert.empty()) {
    rep = functional_check_mult_ips(load_cert(o.cert));
  } else {
    const SparsePoly f = load_poly(o.poly, F, {"axiom", "poly", "f"});
    SparsePoly g = load_poly(o.g, f.field(), {"g", "poly"}, "--g");
    if (!(*g.vars() == *f.vars())) {
      if (!f.vars()->is_prefix_of(*g.vars()) && !g.vars()->is_prefix_of(*f.vars())) {
        throw UsageError("--g and --poly use different variables");
      }
    }
    rep = functional_check_mult_ips(g, f);
  }
  Outcome oc;
  oc.result = rep.to_json();
  Rows rows(oc, "certificate", rep.g.vars()->size(), rep.g.field().describe(), o.seed);
  rows.add("cube_agreement", rep.cube_agreement ? "true" : "false", "true", rep.cube_agreement);
  rows.add("multilinear", rep.multilinear ? "true" : "false");
  const bool ok = rep.verified && rep.cube_agreement;
  if (!ok) {
    oc.code = kExitVerification;
    oc.message = rep.first_disagreement ? "disagrees with 1/f at " + *rep.first_disagreement : "certificate identity fails";
  }
  return oc;
}

Outcome cmd_refute_esym(const Opts& o) {
  if (o.n == 0) throw UsageError("--n is required");
  const mpq_class beta = o.beta.empty() ? mpq_class(static_cast<unsigned long>(binomial(o.n, o.d) + 1)) : parse_rational(o.beta);
  const ElemSymStructure es = elem_sym_inverse_structure(o.n, o.d, beta);
  const Field Q = Field::rationals();
  Outcome oc;
  oc.result["n"] = es.n;
  oc.result["d"] = es.d;
  oc.result["beta"] = beta.get_str();
  Json al = Json::array();
  for (const auto& a : es.alphas) al.push_back(Q.format(a));
  oc.result["alphas"] = al;
  oc.result["beta_prime"] = Q.format(es.beta_prime);
  oc.result["symmetric"] = es.symmetric;
  oc.result["zero_pattern"] = es.zero_pattern;
  oc.result["nonzero_pattern"] = es.nonzero_pattern;
  oc.result["beta_prime_nonzero"] = es.beta_prime_nonzero;
  Rows rows(oc, "esym", o.n, "Q", o.seed);
  rows.add("symmetric", es.symmetric ? "true" : "false", "true", es.symmetric);
  rows.add("zero_pattern", es.zero_pattern ? "true" : "false", "true", es.zero_pattern);
  rows.add("nonzero_pattern", es.nonzero_pattern ? "true" : "false", "true", es.nonzero_pattern);
  rows.add("beta_prime_nonzero", es.beta_prime_nonzero ? "true" : "false", "true", es.beta_prime_nonzero);
  if (!es.ok()) {
    oc.code = kExitVerification;
    oc.message = "inverse does not have the expected elementary symmetric structure";
  }
  return oc;
}

struct Command {
  CLI::App* app;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Opts o;
  o.guard_vars = default_guard_vars();
  CLI::App app{"Desk-scale experiments on IPS refutations, ROABPs and their complexity measures", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--field", o.field, "Q, Fp:<p> or Fpk:p=<p>,k=<k>")->capture_default_str();
  app.add_option("--seed", o.seed, "Base seed")->capture_default_str();
  app.add_option("--trials", o.trials, "Trials for randomized steps (0: command default)");
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_option("--guard-vars", o.guard_vars, "Exhaustive variable limit (env IPSLAB_MAX_VARS)")->capture_default_str();
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::vector<Command> cmds;
  CLI::App* last = nullptr;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<Outcome()> run) {
    last = parent->add_subcommand(name, help);
    cmds.push_back(Command{last, (parent == &app ? "" : parent->get_name() + " ") + name, std::move(run)});
    return last;
  };
  auto field = [&] { return Field::parse(o.field); };
  auto trials_or = [&](unsigned d) { return o.trials ? o.trials : d; };

  auto* gen = leaf(&app, "gen", "Generate a hard instance", [&] { return cmd_gen(o, field()); });
  gen->add_option("--family", o.family, "blockwise|smconst|subset|quadratic|scaled|vecinv|esym");
  gen->add_flag("--list-valid", o.list_valid, "List valid sizes of the blockwise and smconst families up to 256");
  gen->add_option("--n", o.n, "Size parameter");
  gen->add_option("--c", o.c, "smconst: degree parameter")->capture_default_str();
  gen->add_option("--d", o.d, "esym: degree")->capture_default_str();
  gen->add_option("--beta", o.beta, "Constant of the axiom");
  gen->add_option("--p", o.p, "scaled: characteristic")->capture_default_str();
  gen->add_option("--k", o.k, "scaled: subfield degree with --rule explicit");
  gen->add_option("--rule", o.rule, "scaled: explicit|binom2|binomn")->capture_default_str();
  gen->add_flag("--exclusive", o.exclusive, "blockwise: only nonempty proper subsets S of X_i");
  gen->add_option("--pi-seed", o.pi_seed, "smconst: shuffle the pairing tables");
  gen->add_flag("--all-ones", o.all_ones, "scaled: alpha = 1");
  gen->add_option("--desc", o.desc, "Sidecar descriptor file (default <out>.desc.json when --out is set)");

  auto* inv = leaf(&app, "inverse", "Boolean inverse of an axiom", [&] { return cmd_inverse(o, field(), o.guard_vars); });
  inv->add_option("--poly", o.poly, "Polynomial JSON file or expression")->required();

  CLI::Option* support_opt = nullptr;
  auto* coeff = leaf(&app, "coeff", "Single coefficient of the inverse, or the support containment check",
                     [&] { return cmd_coeff(o, field(), support_opt->count() > 0); });
  coeff->add_option("--poly", o.poly, "Axiom")->required();
  support_opt = coeff->add_option("--support", o.support, "Variables of the multilinear monomial, comma separated");
  coeff->add_flag("--containment", o.containment, "Check every axiom monomial against the closed form");

  auto* measure = app.add_subcommand("measure", "Algebraic-rank measures");
  measure->require_subcommand(1);
  auto* kal = leaf(measure, "kalorkoti", "Sum of per-block TM bounds", [&] { return cmd_kalorkoti(o, field()); });
  kal->add_option("--poly", o.poly, "Polynomial (the axiom with --targeted)")->required();
  kal->add_option("--blocks", o.blocks, "Blocks file or inline \"X1=x1,x2;Y=y0,y1\"");
  kal->add_option("--order", o.order, "Monomial order, e.g. \"x>y\"")->default_val("x>y");
  kal->add_flag("--targeted", o.targeted, "Read the inverse through coefficient queries");
  kal->add_option("--max-degree", o.max_degree, "Targeted candidate degree cap")->capture_default_str();
  auto* tm = leaf(measure, "tm", "TM bound for one block", [&] { return cmd_tm(o, field()); });
  tm->add_option("--poly", o.poly, "Polynomial")->required();
  tm->add_option("--block", o.block, "Block variables")->required();
  tm->add_option("--order", o.order, "Monomial order")->default_val("x>y");
  tm->add_flag("--targeted", o.targeted, "Read the inverse through coefficient queries");
  tm->add_option("--max-degree", o.max_degree, "Targeted candidate degree cap")->capture_default_str();
  auto* ind = leaf(measure, "independent", "Algebraic independence of monomials", [&] { return cmd_independent(o); });
  ind->add_option("--monomials", o.monomials, "Comma separated monomials")->required();

  auto* rank = app.add_subcommand("rank", "Partial-derivative and evaluation-dimension ranks");
  rank->require_subcommand(1);
  auto* pd = leaf(rank, "pd", "Rank of M_{Y,Z}", [&] { return cmd_rank_pd(o, field(), trials_or(kDefaultRankTrials)); });
  pd->add_option("--poly", o.poly, "Polynomial")->required();
  pd->add_option("--Y", o.y, "Row variables")->required();
  pd->add_option("--Z", o.z, "Column variables (default: the rest of the support)");
  pd->add_option("--over", o.over, "Fp:<p> for a rank over F_p(T)");
  pd->add_option("--prime", o.prime, "Prime for rational inputs over F(T)")->capture_default_str();
  pd->add_flag("--symbolic", o.symbolic, "Exact elimination over F[T]");
  auto* ed = leaf(rank, "evaldim", "Evaluation dimension", [&] { return cmd_evaldim(o, field()); });
  ed->add_option("--poly", o.poly, "Polynomial")->required();
  ed->add_option("--X", o.x, "Kept variables (default: the rest of the support)");
  ed->add_option("--Y", o.y, "Substituted variables")->required();
  ed->add_option("--set", o.set, "Sample set, comma separated")->default_val("0,1");
  ed->add_option("--samples", o.samples, "Sampled points (0: all)");

  auto* roabp = app.add_subcommand("roabp", "Read-once oblivious ABPs");
  roabp->require_subcommand(1);
  auto* rnd = leaf(roabp, "random", "Random (sum of) ROABPs", [&] { return cmd_roabp_random(o, field()); });
  rnd->add_option("--n", o.n, "Variables")->required();
  rnd->add_option("--width", o.width, "Internal width")->capture_default_str();
  rnd->add_option("--degree", o.degree, "Label degree")->capture_default_str();
  rnd->add_option("--t", o.t, "Members")->capture_default_str();
  rnd->add_option("--coeff-bound", o.coeff_bound, "Coefficients in [-b, b]; 0: uniform over a finite field")->capture_default_str();
  rnd->add_flag("--no-shuffle", o.no_shuffle, "Read the variables in id order");
  auto* ext = leaf(roabp, "extract", "Expand to a polynomial", [&] { return cmd_roabp_extract(o, field()); });
  ext->add_option("--roabp", o.roabp, "ROABP or sum file")->required();
  auto* ev = leaf(roabp, "eval", "Evaluate at a point", [&] { return cmd_roabp_eval(o, field()); });
  ev->add_option("--roabp", o.roabp, "ROABP or sum file")->required();
  ev->add_option("--point", o.point, "x1=1,x2=0,...")->required();
  auto* ml = leaf(roabp, "mult", "Multilinearize with Boolean witnesses", [&] { return cmd_roabp_mult(o, field()); });
  ml->add_option("--roabp", o.roabp, "ROABP or sum file")->required();
  auto* wd = leaf(roabp, "width", "Width lower bound along an order", [&] { return cmd_roabp_width(o, field()); });
  wd->add_option("--poly", o.poly, "Multilinear polynomial")->required();
  wd->add_option("--order", o.order, "Variable order, comma separated (default: by id)");
  auto* wk = leaf(roabp, "weakness", "Rank under random balanced partitions", [&] {
    WeaknessOptions wo = weakness_options(o, trials_or(200));
    wo.sum = load_sum(o.sum, field());
    return run_weakness(o, wo);
  });
  wk->add_option("--sum", o.sum, "Sum of ROABPs file")->required();
  wk->add_option("--q", o.q, "Segments")->capture_default_str();
  wk->add_option("--r", o.r, "Segment length")->capture_default_str();
  wk->add_option("--sampler-samples", o.sampler_samples, "Draws for the sampler checks")->capture_default_str();
  wk->add_option("--csv-trials", o.csv_trials, "Per-trial CSV file");

  auto* refute = app.add_subcommand("refute", "Linear IPS certificates");
  refute->require_subcommand(1);
  auto* rb = leaf(refute, "build", "Subset-sum certificate over Q", [&] { return cmd_refute_build(o); });
  rb->add_option("--n", o.n, "Variables")->required();
  rb->add_option("--beta", o.beta, "Constant (default n+1)");
  auto* rl = leaf(refute, "lift", "Certificate for a sparse positive-coefficient axiom", [&] { return cmd_refute_lift(o); });
  rl->add_option("--poly", o.poly, "Axiom over Q")->required();
  auto* rv = leaf(refute, "verify", "Check a certificate", [&] { return cmd_refute_verify(o, trials_or(kDefaultRankTrials)); });
  rv->add_option("--cert", o.cert, "Certificate file")->required();
  rv->add_flag("--exact", o.exact, "Symbolic identity check (default)");
  rv->add_flag("--randomized", o.randomized, "Random evaluation");
  rv->add_option("--prime", o.prime, "Prime for rational certificates")->capture_default_str();
  auto* rf = leaf(refute, "functional-check", "Compare P(X,1,0) with 1/f on the cube",
                  [&] { return cmd_refute_functional(o, field()); });
  rf->add_option("--cert", o.cert, "Certificate file");
  rf->add_option("--g", o.g, "Candidate g (with --poly)");
  rf->add_option("--poly", o.poly, "Axiom (with --g)");
  auto* re = leaf(refute, "esym", "Structure of the inverse of e_{n,d} - beta", [&] { return cmd_refute_esym(o); });
  re->add_option("--n", o.n, "Variables")->required();
  re->add_option("--d", o.d, "Degree")->capture_default_str();
  re->add_option("--beta", o.beta, "Constant (default C(n,d)+1)");

  auto* pipe = app.add_subcommand("pipeline", "End-to-end experiments");
  pipe->require_subcommand(1);
  auto* p1 = leaf(pipe, "theorem1", "Blockwise instance: containment, zero rule, TM sets, Kalorkoti sum", [&] {
    Theorem1Options t;
    t.n = o.n ? o.n : 4;
    t.field = field();
    t.inclusive = !o.exclusive;
    t.guard_vars = o.guard_vars;
    t.seed = o.seed;
    return from_pipeline(theorem1_pipeline(t));
  });
  p1->add_option("--n", o.n, "n = 2^L with L | n (default 4)");
  p1->add_flag("--exclusive", o.exclusive, "Only nonempty proper subsets S of X_i");
  auto* p2 = leaf(pipe, "constdeg", "Set-multilinear instance: targeted TM sets", [&] {
    ConstdegOptions c;
    c.n = o.n ? o.n : 4;
    c.c = o.c;
    c.field = field();
    if (o.pi_seed) c.pi_seed = o.pi_seed;
    c.seed = o.seed;
    return from_pipeline(constdeg_pipeline(c));
  });
  p2->add_option("--n", o.n, "Size (default 4)");
  p2->add_option("--c", o.c, "Degree parameter")->capture_default_str();
  p2->add_option("--pi-seed", o.pi_seed, "Shuffle the pairing tables");
  auto* p3 = leaf(pipe, "fstw", "Rank of the quadratic instance over F(T)", [&] {
    FstwOptions f;
    f.n = o.n ? o.n : 2;
    f.trials = trials_or(kDefaultRankTrials);
    f.prime = o.prime;
    f.seed = o.seed;
    f.partitions = o.partitions;
    f.guard_vars = o.guard_vars;
    return from_pipeline(fstw_pipeline(f));
  });
  p3->add_option("--n", o.n, "1, 2 or 3 (default 2)");
  p3->add_option("--prime", o.prime, "Modulus for the rank trials")->capture_default_str();
  p3->add_option("--partitions", o.partitions, "Sampled partitions for n = 3")->capture_default_str();
  auto* p4 = leaf(pipe, "weakness", "Seeded sum of ROABPs under random balanced partitions", [&] {
    WeaknessOptions wo = weakness_options(o, trials_or(200));
    if (!o.sum.empty()) wo.sum = load_sum(o.sum, field());
    return run_weakness(o, wo);
  });
  p4->add_option("--n", o.n, "Variables (default 16)");
  p4->add_option("--t", o.t, "Members")->capture_default_str();
  p4->add_option("--width", o.width, "Member width")->capture_default_str();
  p4->add_option("--q", o.q, "Segments")->capture_default_str();
  p4->add_option("--r", o.r, "Segment length")->capture_default_str();
  p4->add_option("--sum", o.sum, "Use this sum instead of a generated one");
  p4->add_option("--sampler-samples", o.sampler_samples, "Draws for the sampler checks")->capture_default_str();
  p4->add_option("--csv-trials", o.csv_trials, "Per-trial CSV file");
  (void)last;

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Command* chosen = nullptr;
  for (const auto& c : cmds) {
    if (c.app->parsed()) chosen = &c;
  }
  if (!chosen) {
    err << "no command given; run with --help\n";
    return kExitUsage;
  }

  ExperimentConfig cfg;
  cfg.command = chosen->name;
  for (const CLI::Option* opt : chosen->app->get_options()) {
    if (opt->count() == 0 || opt->get_single_name() == "help") continue;
    std::string v;
    for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
    cfg.params[opt->get_single_name()] = v;
  }
  cfg.field = o.field;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.guard_vars = o.guard_vars;
  cfg.out = o.out;
  cfg.format = o.format;

  try {
    Outcome oc = chosen->run();
    const std::string body = o.format == "csv" ? render_csv(cfg, oc.rows) : wrap_output(cfg, oc.result).dump(2) + "\n";
    if (o.out.empty()) {
      out << body;
    } else {
      write_file(o.out, body);
    }
    if (chosen->name == "gen" && oc.result.contains("descriptor") && (!o.desc.empty() || !o.out.empty())) {
      std::string path = o.desc;
      if (path.empty()) path = (o.out.ends_with(".json") ? o.out.substr(0, o.out.size() - 5) : o.out) + ".desc.json";
      write_file(path, wrap_output(cfg, oc.result["descriptor"]).dump(2) + "\n");
    }
    if (oc.code != kExitOk) err << chosen->name << ": " << oc.message << '\n';
    return oc.code;
  } catch (const SatisfiableError& e) {
    err << "error: " << e.what() << " (zero at " << e.witness() << ")\n";
    return kExitVerification;
  } catch (const InternalError& e) {
    err << "internal check failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const nlohmann::json::exception& e) {
    err << "malformed JSON input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GuardError& e) {
    err << "size guard: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ipslab::cli
