#pragma once

#include <json.hpp>

#include "ipslab/algebra/poly.hpp"

namespace ipslab {

using Json = nlohmann::ordered_json;

/// {"field": ..., "vars": [...], "terms": [{"coeff": "...", "mono": {"x1": 2}}]}
/// Extension fields are written with their modulus, e.g. "Fpk:p=2,k=2,mod=[1,1,1]".
Json poly_to_json(const SparsePoly& f);
/// Accepts the format above; "vars" may be omitted, in which case the names
/// used by the terms are collected in natural order.
SparsePoly poly_from_json(const Json& j);
/// Parses against an existing table (names must be known to it).
SparsePoly poly_from_json(const Json& j, const Field& field, const VarTablePtr& vars);

Json monomial_to_json(const Monomial& m, const VarTable& vars);
Monomial monomial_from_json(const Json& j, const VarTable& vars);
Json varset_to_json(const VarSet& s, const VarTable& vars);
VarSet varset_from_json(const Json& j, const VarTable& vars);

}  // namespace ipslab
