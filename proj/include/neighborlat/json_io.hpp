#pragma once

#include <string>

#include <json.hpp>

#include "neighborlat/k3.hpp"

namespace neighborlat::io {

using json = nlohmann::json;

/// Integers are written as JSON numbers when they fit in 64 bits and as
/// decimal strings otherwise; both forms are accepted on input.
json to_json(const Integer& x);
Integer integer_from_json(const json& j);

json to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const json& j);
json to_json(const IntVector& v);
IntVector vector_from_json(const json& j);

/// {"gram": [[...]]}
json to_json(const Lattice& l);
Lattice lattice_from_json(const json& j);

/// {"gram", "basis_num", "basis_den"} with the ambient Gram matrix.
json to_json(const EmbeddedLattice& m);
EmbeddedLattice embedded_from_json(const json& j);

/// {"divisors", "q_num", "q_den"}
json to_json(const FiniteQuadForm& a);
FiniteQuadForm form_from_json(const json& j);

json to_json(const Element& x);
Element element_from_json(const json& j);

/// {"d", "gen"}
json to_json(const IsotropicLine& line);
IsotropicLine line_from_json(const Lattice& l, const json& j);

/// {"p", "n", "gen"}
json to_json(const LocalLineData& part);
LocalLineData local_from_json(const json& j);

/// {"d", "gen", "local": [...]}
json to_json(const GeneralizedLine& line);

/// {"ns", "t", "glue"}
json to_json(const K3LatticePair& pair);
K3LatticePair k3_pair_from_json(const json& j);

/// Sorted keys, no whitespace.
std::string canonical_dump(const json& j);

/// Parses text, mapping syntax errors to invalid_input.
json parse(const std::string& text);

}  // namespace neighborlat::io
