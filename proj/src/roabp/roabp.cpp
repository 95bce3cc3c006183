#include "ipslab/roabp/roabp.hpp"

#include <algorithm>
#include <set>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/algebra/parse.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/measures/matrix.hpp"

namespace ipslab {

namespace {

std::size_t label_degree(const Field& F, const Univariate& u) {
  for (std::size_t k = u.size(); k-- > 1;) {
    if (!F.is_zero(u[k])) return k;
  }
  return 0;
}

Scalar eval_label(const Field& F, const Univariate& u, const Scalar& x) {
  Scalar acc = F.zero();
  for (std::size_t k = u.size(); k-- > 0;) acc = F.add(F.mul(acc, x), u[k]);
  return acc;
}

Json scalar_json(const Field& F, const Scalar& s) {
  if (F.kind() == Field::Kind::prime) {
    const std::uint64_t v = std::get<std::uint64_t>(s);
    if (v <= static_cast<std::uint64_t>(INT64_MAX)) return static_cast<std::int64_t>(v);
  }
  if (F.kind() == Field::Kind::rationals) {
    const mpq_class& q = std::get<mpq_class>(s);
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return static_cast<std::int64_t>(q.get_num().get_si());
  }
  return F.format(s);
}

Scalar scalar_from_json(const Field& F, const Json& j) {
  if (j.is_string()) return F.parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return F.from_int(j.get<std::int64_t>());
  throw DomainError("label coefficient must be an integer or a string");
}

}  // namespace

Roabp::Roabp(Field field, VarTablePtr vars, std::vector<VarId> order, std::vector<RoabpLayer> layers)
    : field_(std::move(field)), vars_(std::move(vars)), order_(std::move(order)), layers_(std::move(layers)) {
  if (order_.empty()) throw DomainError("an ROABP needs at least one layer");
  if (order_.size() != layers_.size()) throw DomainError("one layer per variable of the order is required");
  std::set<VarId> seen;
  for (VarId v : order_) {
    if (v >= vars_->size()) throw DomainError("ROABP order mentions an unknown variable");
    if (!seen.insert(v).second) throw DomainError("variable " + vars_->name(v) + " is read twice");
  }
  if (layers_.front().rows != 1 || layers_.back().cols != 1) throw DomainError("ROABP end widths must be 1");
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const auto& L = layers_[j];
    if (L.rows == 0 || L.cols == 0) throw DomainError("layer widths must be positive");
    if (L.labels.size() != L.rows * L.cols) throw DomainError("layer " + std::to_string(j) + " has the wrong label count");
    if (j + 1 < layers_.size() && L.cols != layers_[j + 1].rows) {
      throw DomainError("width mismatch between layers " + std::to_string(j) + " and " + std::to_string(j + 1));
    }
    for (const auto& u : L.labels) {
      if (label_degree(field_, u) > kMaxLabelDegree) {
        throw GuardError("label degree above " + std::to_string(kMaxLabelDegree));
      }
    }
  }
}

std::vector<std::size_t> Roabp::widths() const {
  std::vector<std::size_t> w{1};
  for (const auto& L : layers_) w.push_back(L.cols);
  return w;
}

std::size_t Roabp::width() const {
  const auto w = widths();
  return *std::max_element(w.begin(), w.end());
}

bool Roabp::is_multilinear() const {
  for (const auto& L : layers_) {
    for (const auto& u : L.labels) {
      if (label_degree(field_, u) > 1) return false;
    }
  }
  return true;
}

Scalar Roabp::eval(const std::vector<Scalar>& point) const {
  std::vector<Scalar> row{field_.one()};
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const auto& L = layers_[j];
    if (order_[j] >= point.size()) throw DomainError("point misses variable " + vars_->name(order_[j]));
    const Scalar& x = point[order_[j]];
    std::vector<Scalar> next(L.cols, field_.zero());
    for (std::size_t r = 0; r < L.rows; ++r) {
      if (field_.is_zero(row[r])) continue;
      for (std::size_t c = 0; c < L.cols; ++c) {
        next[c] = field_.add(next[c], field_.mul(row[r], eval_label(field_, L.at(r, c), x)));
      }
    }
    row.swap(next);
  }
  return row[0];
}

Scalar Roabp::eval(const Assignment& point) const {
  std::vector<Scalar> dense(vars_->size(), field_.zero());
  for (VarId v : order_) {
    auto it = point.find(v);
    if (it == point.end()) throw DomainError("point misses variable " + vars_->name(v));
    dense[v] = it->second;
  }
  return eval(dense);
}

SparsePoly Roabp::extract() const {
  if (n() > kExtractMaxVars || width() > kExtractMaxWidth) {
    throw GuardError("ROABP extraction is limited to " + std::to_string(kExtractMaxVars) + " variables and width " +
                     std::to_string(kExtractMaxWidth));
  }
  std::vector<SparsePoly> state{SparsePoly::constant(field_, vars_, 1)};
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const auto& L = layers_[j];
    const VarId x = order_[j];
    std::vector<std::vector<SparsePoly::Term>> acc(L.cols);
    for (std::size_t r = 0; r < L.rows; ++r) {
      for (std::size_t c = 0; c < L.cols; ++c) {
        const Univariate& u = L.at(r, c);
        for (std::size_t k = 0; k < u.size(); ++k) {
          if (field_.is_zero(u[k])) continue;
          const Monomial xk = k ? Monomial::var(x, static_cast<std::uint32_t>(k)) : Monomial();
          for (const auto& [m, coef] : state[r].terms()) acc[c].emplace_back(m * xk, field_.mul(coef, u[k]));
        }
      }
    }
    std::vector<SparsePoly> next;
    next.reserve(L.cols);
    for (auto& terms : acc) next.push_back(SparsePoly::from_terms(field_, vars_, std::move(terms)));
    state.swap(next);
  }
  return state[0];
}

Roabp Roabp::multilinearized() const {
  std::vector<RoabpLayer> layers = layers_;
  for (auto& L : layers) {
    for (auto& u : L.labels) {
      if (u.size() <= 2) continue;
      Scalar s = field_.zero();
      for (std::size_t k = 1; k < u.size(); ++k) s = field_.add(s, u[k]);
      u = Univariate{u[0], s};
    }
  }
  return Roabp(field_, vars_, order_, std::move(layers));
}

Roabp multilinearize_roabp(const Roabp& a) { return a.multilinearized(); }

SumRoabp::SumRoabp(std::vector<Roabp> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("a sum of ROABPs needs at least one member");
  for (const auto& m : members_) {
    if (!(m.field() == members_.front().field())) throw FieldMismatch("ROABP members over different fields");
    if (!(*m.vars() == *members_.front().vars())) throw DomainError("ROABP members over different variable tables");
  }
}

std::size_t SumRoabp::total_width() const {
  std::size_t w = 0;
  for (const auto& m : members_) w += m.width();
  return w;
}

std::size_t SumRoabp::max_width() const {
  std::size_t w = 0;
  for (const auto& m : members_) w = std::max(w, m.width());
  return w;
}

bool SumRoabp::is_multilinear() const {
  return std::all_of(members_.begin(), members_.end(), [](const Roabp& m) { return m.is_multilinear(); });
}

Scalar SumRoabp::eval(const std::vector<Scalar>& point) const {
  Scalar acc = field().zero();
  for (const auto& m : members_) acc = field().add(acc, m.eval(point));
  return acc;
}

SparsePoly SumRoabp::extract() const {
  SparsePoly acc(field(), vars());
  for (const auto& m : members_) acc += m.extract();
  return acc;
}

MultilinearWitnesses multilinearize_sum_with_witnesses(const SumRoabp& a) {
  const Field& F = a.field();
  const VarTablePtr& vars = a.vars();
  std::vector<Roabp> bm;
  std::vector<SparsePoly> h(vars->size(), SparsePoly(F, vars));
  SparsePoly f(F, vars), mult_sum(F, vars);
  for (const auto& m : a.members()) {
    bm.push_back(m.multilinearized());
    const SparsePoly fm = m.extract();
    f += fm;
    BooleanReduction red = reduce_by_boolean_axioms(fm);
    mult_sum += red.mult;
    for (std::size_t v = 0; v < h.size(); ++v) h[v] += red.h[v];
  }
  MultilinearWitnesses out{SumRoabp(std::move(bm)), std::move(h)};
  const SparsePoly fb = out.b.extract();
  if (!(fb == mult_sum)) throw InternalError("multilinearized members do not compute mult(f)");
  if (!(f == fb + boolean_combination(out.h, F, vars))) {
    throw InternalError("f != mult(f) + sum h_i (x_i^2 - x_i) after reduction");
  }
  return out;
}

std::size_t width_lower_bound(const SparsePoly& f, const std::vector<VarId>& order) {
  if (!f.is_multilinear()) throw DomainError("width_lower_bound needs a multilinear polynomial");
  if (f.is_zero()) return 0;
  if (!f.support().subset_of(VarSet::from_ids(order))) throw DomainError("the order must contain every variable of f");
  if (order.size() > Roabp::kExtractMaxVars) throw GuardError("width_lower_bound is limited to 24 variables");
  std::size_t best = 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const VarSet y = VarSet::from_ids({order.begin(), order.begin() + i});
    const VarSet z = VarSet::from_ids({order.begin() + i, order.end()});
    best = std::max(best, rank_exact(pd_matrix(f, y, z)));
  }
  return best;
}

Roabp random_roabp(const Field& field, const VarTablePtr& vars, const RandomRoabpOptions& opts) {
  if (opts.n == 0 || opts.n > vars->size()) throw DomainError("random ROABP needs 1 <= n <= number of variables");
  if (!opts.width_profile.empty() && opts.width_profile.size() + 1 != opts.n) {
    throw DomainError("width profile must list n - 1 internal widths");
  }
  Rng rng(opts.seed);
  std::vector<VarId> order(opts.n);
  for (std::size_t i = 0; i < opts.n; ++i) order[i] = static_cast<VarId>(i);
  if (opts.shuffle_order) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  std::vector<std::size_t> w{1};
  for (std::size_t j = 1; j < opts.n; ++j) w.push_back(opts.width_profile.empty() ? opts.max_width : opts.width_profile[j - 1]);
  w.push_back(1);
  auto coeff = [&]() -> Scalar {
    if (opts.coeff_bound == 0) return field.random(rng);
    const std::uint64_t span = 2 * opts.coeff_bound + 1;
    return field.from_int(static_cast<std::int64_t>(uniform_below(rng, span)) - static_cast<std::int64_t>(opts.coeff_bound));
  };
  std::vector<RoabpLayer> layers;
  for (std::size_t j = 0; j < opts.n; ++j) {
    RoabpLayer L{w[j], w[j + 1], {}};
    for (std::size_t e = 0; e < L.rows * L.cols; ++e) {
      Univariate u;
      for (std::size_t k = 0; k <= opts.degree; ++k) u.push_back(coeff());
      L.labels.push_back(std::move(u));
    }
    layers.push_back(std::move(L));
  }
  return Roabp(field, vars, std::move(order), std::move(layers));
}

SumRoabp random_sum_roabp(const Field& field, const VarTablePtr& vars, std::size_t t, const RandomRoabpOptions& opts) {
  std::vector<Roabp> ms;
  for (std::size_t i = 0; i < t; ++i) {
    RandomRoabpOptions o = opts;
    o.seed = derive_seed(opts.seed, i);
    ms.push_back(random_roabp(field, vars, o));
  }
  return SumRoabp(std::move(ms));
}

Json roabp_to_json(const Roabp& a) {
  const Field& F = a.field();
  Json j;
  Json order = Json::array();
  for (VarId v : a.order()) order.push_back(a.vars()->name(v));
  j["order"] = order;
  Json layers = Json::array();
  for (const auto& L : a.layers()) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < L.rows; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < L.cols; ++c) {
        Json u = Json::array();
        for (const auto& s : L.at(r, c)) u.push_back(scalar_json(F, s));
        row.push_back(u);
      }
      rows.push_back(row);
    }
    layers.push_back({{"rows", L.rows}, {"cols", L.cols}, {"labels", rows}});
  }
  j["layers"] = layers;
  return j;
}

Roabp roabp_from_json(const Json& j, const Field& field, const VarTablePtr& vars) {
  if (!j.is_object() || !j.contains("order") || !j.contains("layers")) {
    throw DomainError("ROABP JSON needs \"order\" and \"layers\"");
  }
  std::vector<VarId> order;
  for (const auto& name : j.at("order")) order.push_back(vars->id(name.get<std::string>()));
  std::vector<RoabpLayer> layers;
  for (const auto& lj : j.at("layers")) {
    RoabpLayer L;
    L.rows = lj.at("rows").get<std::size_t>();
    L.cols = lj.at("cols").get<std::size_t>();
    const Json& rows = lj.at("labels");
    if (rows.size() != L.rows) throw DomainError("label rows do not match the declared width");
    for (const auto& row : rows) {
      if (row.size() != L.cols) throw DomainError("label columns do not match the declared width");
      for (const auto& u : row) {
        Univariate lab;
        for (const auto& c : u) lab.push_back(scalar_from_json(field, c));
        if (lab.empty()) lab.push_back(field.zero());
        L.labels.push_back(std::move(lab));
      }
    }
    layers.push_back(std::move(L));
  }
  return Roabp(field, vars, std::move(order), std::move(layers));
}

Json sum_roabp_to_json(const SumRoabp& a) {
  Json j;
  j["field"] = a.field().describe();
  Json ms = Json::array();
  for (const auto& m : a.members()) ms.push_back(roabp_to_json(m));
  j["members"] = ms;
  return j;
}

SumRoabp sum_roabp_from_json(const Json& j, std::optional<Field> field) {
  Json members;
  if (j.is_array()) {
    members = j;
  } else if (j.is_object() && j.contains("members")) {
    members = j.at("members");
  } else if (j.is_object() && j.contains("layers")) {
    members = Json::array({j});
  } else {
    throw DomainError("expected a sum of ROABPs: an array, {\"members\": [...]} or a single ROABP");
  }
  Field F = field ? *field : Field::parse(j.is_object() ? j.value("field", std::string("Q")) : std::string("Q"));
  std::vector<std::string> names;
  for (const auto& m : members) {
    for (const auto& n : m.at("order")) {
      const auto s = n.get<std::string>();
      if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
    }
  }
  std::sort(names.begin(), names.end(), natural_less);
  const VarTablePtr vars = VarTable::make(names);
  std::vector<Roabp> out;
  for (const auto& m : members) out.push_back(roabp_from_json(m, F, vars));
  return SumRoabp(std::move(out));
}

}  // namespace ipslab
