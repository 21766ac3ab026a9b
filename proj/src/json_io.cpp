#include "neighborlat/json_io.hpp"

namespace neighborlat::io {

namespace {

using Index = Eigen::Index;

[[noreturn]] void bad(const std::string& what) {
  throw LatticeError(ErrorCode::kInvalidInput, what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) bad("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t small_from_json(const json& j) {
  const Integer x = integer_from_json(j);
  if (!fits_int64(x)) bad("value does not fit in 64 bits");
  return to_int64(x);
}

}  // namespace

json to_json(const Integer& x) {
  if (fits_int64(x)) return to_int64(x);
  return to_string(x);
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    return Integer(j.get<std::int64_t>());
  }
  if (j.is_string()) return parse_integer(j.get<std::string>());
  bad("expected an integer or a decimal string");
}

json to_json(const IntMatrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

IntMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) bad("expected a matrix");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  IntMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) bad("ragged matrix");
    for (Index k = 0; k < cols; ++k) m(i, k) = integer_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

json to_json(const IntVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

IntVector vector_from_json(const json& j) {
  if (!j.is_array()) bad("expected a vector");
  IntVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = integer_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

json to_json(const Lattice& l) { return json{{"gram", to_json(l.gram())}}; }

Lattice lattice_from_json(const json& j) { return Lattice(matrix_from_json(field(j, "gram"))); }

json to_json(const EmbeddedLattice& m) {
  return json{{"gram", to_json(m.ambient().gram())},
              {"basis_num", to_json(m.basis().num)},
              {"basis_den", to_json(m.basis().den)}};
}

EmbeddedLattice embedded_from_json(const json& j) {
  Lattice ambient = lattice_from_json(j);
  if (!j.contains("basis_num")) return EmbeddedLattice::whole(ambient);
  RationalMatrix basis{matrix_from_json(j["basis_num"]), 1};
  if (j.contains("basis_den")) basis.den = integer_from_json(j["basis_den"]);
  if (basis.den == 0) bad("basis_den must be nonzero");
  if (basis.cols() != ambient.rank()) bad("basis width differs from the ambient rank");
  return EmbeddedLattice(std::move(ambient), basis.normalize());
}

json to_json(const FiniteQuadForm& a) {
  json q = json::array();
  for (Index i = 0; i < a.q_num.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < a.q_num.cols(); ++k) row.push_back(a.q_num(i, k));
    q.push_back(std::move(row));
  }
  return json{{"divisors", a.divisors}, {"q_num", q}, {"q_den", a.q_den}};
}

FiniteQuadForm form_from_json(const json& j) {
  std::vector<std::int64_t> divisors;
  for (const auto& x : field(j, "divisors")) divisors.push_back(small_from_json(x));
  const IntMatrix q = matrix_from_json(field(j, "q_num"));
  I64Matrix num(q.rows(), q.cols());
  for (Index i = 0; i < q.rows(); ++i) {
    for (Index k = 0; k < q.cols(); ++k) {
      if (!fits_int64(q(i, k))) bad("q_num entry does not fit in 64 bits");
      num(i, k) = to_int64(q(i, k));
    }
  }
  return make_finite_form(std::move(divisors), num, small_from_json(field(j, "q_den")));
}

json to_json(const Element& x) { return json(x); }

Element element_from_json(const json& j) {
  if (!j.is_array()) bad("expected a group element");
  Element x;
  for (const auto& c : j) x.push_back(small_from_json(c));
  return x;
}

json to_json(const IsotropicLine& line) {
  return json{{"d", line.d}, {"gen", to_json(line.generator)}};
}

IsotropicLine line_from_json(const Lattice& l, const json& j) {
  return make_line(l, small_from_json(field(j, "d")), vector_from_json(field(j, "gen")));
}

json to_json(const LocalLineData& part) {
  return json{{"p", part.p}, {"n", part.n}, {"gen", to_json(part.gen)}};
}

LocalLineData local_from_json(const json& j) {
  const std::int64_t n = small_from_json(field(j, "n"));
  if (n < 1 || n > 62) bad("n out of range");
  return LocalLineData{small_from_json(field(j, "p")), static_cast<int>(n),
                       vector_from_json(field(j, "gen")), nullptr};
}

json to_json(const GeneralizedLine& line) {
  json parts = json::array();
  for (const auto& part : line.parts) parts.push_back(to_json(part));
  return json{{"d", line.d}, {"gen", to_json(line.generator)}, {"local", parts}};
}

json to_json(const K3LatticePair& pair) {
  json glue = json::array();
  for (const auto& y : pair.glue) glue.push_back(to_json(y));
  return json{{"ns", to_json(pair.ns)}, {"t", to_json(pair.t)}, {"glue", glue}};
}

K3LatticePair k3_pair_from_json(const json& j) {
  K3LatticePair pair{lattice_from_json(field(j, "ns")), lattice_from_json(field(j, "t")), {}};
  for (const auto& y : field(j, "glue")) pair.glue.push_back(element_from_json(y));
  return pair;
}

std::string canonical_dump(const json& j) { return j.dump(); }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace neighborlat::io
