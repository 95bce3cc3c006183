#pragma once

#include <string_view>

#include "ipslab/algebra/poly.hpp"

namespace ipslab {

/// Parses expressions such as "x1^2*x2 - 1/2*y0 + 3" or "(x1+1)*(x1-1)".
/// Names may carry a braced index, as in t_{0,1}. Unknown names throw.
SparsePoly parse_poly(std::string_view text, const Field& field, const VarTablePtr& vars);

/// As above with a fresh table holding the names found in the text, sorted
/// by letter prefix and then numerically.
SparsePoly parse_poly(std::string_view text, const Field& field = Field::rationals());

/// Natural ordering of variable names: "x2" < "x10" < "y0".
bool natural_less(const std::string& a, const std::string& b);

}  // namespace ipslab
