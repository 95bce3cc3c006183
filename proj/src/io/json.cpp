#include "ipslab/io/json.hpp"

#include <algorithm>
#include <set>

#include "ipslab/algebra/parse.hpp"
#include "ipslab/errors.hpp"

namespace ipslab {

Json monomial_to_json(const Monomial& m, const VarTable& vars) {
  Json j = Json::object();
  m.for_each([&](VarId v, std::uint32_t e) { j[vars.name(v)] = e; });
  return j;
}

Monomial monomial_from_json(const Json& j, const VarTable& vars) {
  if (!j.is_object()) throw DomainError("monomial must be a JSON object of exponents");
  std::vector<std::pair<VarId, std::uint32_t>> exps;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_unsigned()) throw DomainError("exponent of " + it.key() + " must be a nonnegative integer");
    exps.emplace_back(vars.id(it.key()), it.value().get<std::uint32_t>());
  }
  return Monomial::from_exponents(exps);
}

Json varset_to_json(const VarSet& s, const VarTable& vars) {
  Json j = Json::array();
  s.for_each([&](VarId v) { j.push_back(vars.name(v)); });
  return j;
}

VarSet varset_from_json(const Json& j, const VarTable& vars) {
  if (!j.is_array()) throw DomainError("variable set must be a JSON array of names");
  VarSet s;
  for (const auto& n : j) s.insert(vars.id(n.get<std::string>()));
  return s;
}

Json poly_to_json(const SparsePoly& f) {
  Json j;
  j["field"] = f.field().describe();
  j["vars"] = f.vars()->names();
  // descending graded order by id, matching to_string
  std::vector<const SparsePoly::Term*> order;
  for (const auto& t : f.terms()) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    const auto da = a->first.degree(), db = b->first.degree();
    if (da != db) return da > db;
    const auto ea = a->first.exponents(), eb = b->first.exponents();
    for (std::size_t i = 0; i < ea.size() && i < eb.size(); ++i) {
      if (ea[i].first != eb[i].first) return ea[i].first < eb[i].first;
      if (ea[i].second != eb[i].second) return ea[i].second > eb[i].second;
    }
    return ea.size() > eb.size();
  });
  Json terms = Json::array();
  for (const auto* t : order) {
    terms.push_back({{"coeff", f.field().format(t->second)}, {"mono", monomial_to_json(t->first, *f.vars())}});
  }
  j["terms"] = std::move(terms);
  return j;
}

SparsePoly poly_from_json(const Json& j, const Field& field, const VarTablePtr& vars) {
  if (!j.is_object() || !j.contains("terms")) throw DomainError("polynomial JSON needs a \"terms\" array");
  std::vector<SparsePoly::Term> terms;
  for (const auto& t : j.at("terms")) {
    const Json& c = t.at("coeff");
    Scalar s = c.is_string() ? field.parse_scalar(c.get<std::string>())
                             : field.from_int(c.get<std::int64_t>());
    terms.emplace_back(t.contains("mono") ? monomial_from_json(t.at("mono"), *vars) : Monomial(), std::move(s));
  }
  return SparsePoly::from_terms(field, vars, std::move(terms));
}

SparsePoly poly_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("polynomial JSON must be an object");
  const Field field = Field::parse(j.value("field", std::string("Q")));
  VarTablePtr vars;
  if (j.contains("vars")) {
    vars = VarTable::make(j.at("vars").get<std::vector<std::string>>());
  } else {
    std::set<std::string> names;
    for (const auto& t : j.at("terms")) {
      if (!t.contains("mono")) continue;
      for (auto it = t.at("mono").begin(); it != t.at("mono").end(); ++it) names.insert(it.key());
    }
    std::vector<std::string> sorted(names.begin(), names.end());
    std::sort(sorted.begin(), sorted.end(), natural_less);
    vars = VarTable::make(std::move(sorted));
  }
  return poly_from_json(j, field, vars);
}

}  // namespace ipslab
