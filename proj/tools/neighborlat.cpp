// Command-line front end. Every subcommand prints one canonical JSON value.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "neighborlat/corpus.hpp"
#include "neighborlat/json_io.hpp"
#include "neighborlat/kummer.hpp"

namespace {

using namespace neighborlat;
using io::json;

struct Options {
  std::string input;
  std::string second;
  std::string line;
  std::string local;
  std::int64_t d = 0;
  std::int64_t max_classes = kDefaultMaxClasses;
  std::int64_t iso_bound = kDefaultIsoBound;
  bool generalized = false;
  bool list = false;
  std::vector<std::string> pair;
};

// Path, "-" for stdin, or inline JSON.
json load(const std::string& source) {
  std::string text;
  if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else if (!source.empty() && (source.front() == '{' || source.front() == '[')) {
    text = source;
  } else {
    std::ifstream in(source);
    if (!in) throw LatticeError(ErrorCode::kInvalidInput, "cannot read " + source);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return io::parse(text);
}

// A plain lattice, or the lattice induced on an embedded one.
Lattice load_lattice(const std::string& source) {
  const json j = load(source);
  if (j.contains("basis_num")) return io::embedded_from_json(j).as_lattice();
  return io::lattice_from_json(j);
}

json require_line(const Options& o) {
  if (o.line.empty()) throw LatticeError(ErrorCode::kInvalidInput, "--line is required");
  return load(o.line);
}

json form_json(const FiniteQuadForm& a) { return io::to_json(a); }

Cyclic2 parse_cyclic(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw LatticeError(ErrorCode::kInvalidInput, "subgroup generator must look like a,b");
  }
  const Integer a = parse_integer(text.substr(0, comma));
  const Integer b = parse_integer(text.substr(comma + 1));
  if (!fits_int64(a) || !fits_int64(b)) throw LatticeError(ErrorCode::kOverflow, "generator too large");
  return {to_int64(a), to_int64(b)};
}

json info(const Options& o) {
  const Lattice l = load_lattice(o.input);
  const auto [pos, neg] = signature(l);
  return json{{"rank", l.rank()}, {"disc", io::to_json(discriminant(l))},
              {"signature", {pos, neg}}, {"even", l.is_even()}};
}

json lines(const Options& o) {
  json out = json::array();
  for (const auto& line : enumerate_isotropic_lines(load_lattice(o.input), o.d, o.max_classes)) {
    out.push_back(io::to_json(line));
  }
  return out;
}

json neighbor(const Options& o) {
  const Lattice l = load_lattice(o.input);
  return io::to_json(neighbor_from_line(io::line_from_json(l, require_line(o))));
}

json split(const Options& o) {
  const Lattice l = load_lattice(o.input);
  return io::to_json(split_sublattice(io::line_from_json(l, require_line(o))));
}

json transverse(const Options& o) {
  const Lattice l = load_lattice(o.input);
  const IsotropicLine line = io::line_from_json(l, require_line(o));
  const DiscriminantGroup am(split_sublattice(line));
  const auto h = am.coords_rows(RationalMatrix{identity_matrix(l.rank()), 1});
  const auto t = transverse_subgroup(am, h, o.iso_bound);
  json hj = json::array(), tj = json::array();
  for (const auto& x : subgroup_elements(am.form(), h)) {
    if (am.form().element_order(x) > 1) hj.push_back(x);
  }
  for (const auto& x : t) tj.push_back(x);
  return json{{"form", form_json(am.form())},
              {"h", hj},
              {"transverse", tj},
              {"overlattice", io::to_json(overlattice_from_isotropic(am, t))}};
}

json genus_check(const Options& o) {
  if (o.second.empty()) throw LatticeError(ErrorCode::kInvalidInput, "two lattices are required");
  return json{{"same_genus",
               same_genus_invariants(load_lattice(o.input), load_lattice(o.second), o.iso_bound)}};
}

json gen_lines(const Options& o) {
  json out = json::array();
  for (const auto& line : generalized_isotropic_lines(load_lattice(o.input), o.d, o.max_classes)) {
    out.push_back(io::to_json(line));
  }
  return out;
}

GeneralizedLine load_generalized(const Lattice& l, const json& j) {
  const Integer d = io::integer_from_json(j.at("d"));
  if (!fits_int64(d)) throw LatticeError(ErrorCode::kOverflow, "d too large");
  return make_generalized_line(l, to_int64(d), io::vector_from_json(j.at("gen")));
}

json gen_neighbor(const Options& o) {
  const Lattice l = load_lattice(o.input);
  if (!o.local.empty()) {
    const json data = load(o.local);
    std::vector<LocalLineData> changes;
    if (data.is_array()) {
      for (const auto& part : data) changes.push_back(io::local_from_json(part));
    } else {
      changes.push_back(io::local_from_json(data));
    }
    return io::to_json(glue_localizations(l, changes));
  }
  return io::to_json(generalized_neighbor(load_generalized(l, require_line(o))));
}

json maximalize_cmd(const Options& o) {
  const json j = load(o.input);
  return io::to_json(maximalize(io::embedded_from_json(j), o.iso_bound));
}

json is_maximal_cmd(const Options& o) {
  return json{{"maximal", is_maximal(load_lattice(o.input), o.iso_bound)}};
}

json k3_pair_check_cmd(const Options& o) {
  std::string reason;
  const bool ok = k3_pair_check(io::k3_pair_from_json(load(o.input)), &reason);
  json out{{"ok", ok}};
  if (!ok) out["reason"] = reason;
  return out;
}

json k3_neighbor_cmd(const Options& o) {
  const K3LatticePair pair = io::k3_pair_from_json(load(o.input));
  const json line = require_line(o);
  if (o.generalized) return io::to_json(k3_neighbor_data(pair, load_generalized(pair.t, line), o.iso_bound));
  return io::to_json(k3_neighbor_data(pair, io::line_from_json(pair.t, line), o.iso_bound));
}

json k3_split_cmd(const Options& o) {
  const K3LatticePair pair = io::k3_pair_from_json(load(o.input));
  const json line = require_line(o);
  const K3SplitData data = o.generalized ? k3_split_data(pair, load_generalized(pair.t, line))
                                         : k3_split_data(pair, io::line_from_json(pair.t, line));
  return json{{"t_split", io::to_json(data.t_split)},
              {"embeddable", data.embeddable == Embeddable::kYes ? "yes" : "unknown"},
              {"ns_disc_abs", io::to_json(data.ns_disc_abs)}};
}

json rational_json(const RationalMatrix& m) {
  return json{{"num", io::to_json(m.num)}, {"den", io::to_json(m.den)}};
}

json kummer_cmd(const Options& o) {
  const Lattice t = kummer_transcendental();
  json out{{"d", o.d}, {"t", io::to_json(t)}};
  if (!o.pair.empty()) {
    const KummerNeighbor k = kummer_neighbor(parse_cyclic(o.pair[0]), parse_cyclic(o.pair[1]), o.d);
    out["neighbor"] = io::to_json(k.lattice);
    out["natural_basis"] = rational_json(k.natural_basis);
    out["natural_gram"] = io::to_json(k.natural_gram);
    out["meet_basis"] = rational_json(k.meet_basis);
    out["line"] = io::to_json(k.line);
    return out;
  }
  if (o.list) {
    json rows = json::array();
    for (const auto& row : line_subgroup_dictionary(o.d)) {
      json hom = json::array();
      for (const auto& r : row.hom) hom.push_back({io::to_json(r[0]), io::to_json(r[1])});
      rows.push_back(json{{"line", io::to_json(row.line)},
                          {"hom", hom},
                          {"c1", {row.c1[0], row.c1[1]}},
                          {"c2", {row.c2[0], row.c2[1]}}});
    }
    out["rows"] = rows;
    return out;
  }
  out["lines"] = enumerate_isotropic_lines(t, o.d, o.max_classes).size();
  if (o.d % 2 == 1) out["pairs"] = line_subgroup_dictionary(o.d).size();
  return out;
}

// Invariant suite on the built-in corpus at small moduli.
json selftest(const Options& o) {
  std::int64_t checks = 0;
  json failures = json::array();
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  };
  for (const auto& entry : classical_corpus()) {
    const Lattice& l = entry.lattice;
    const Integer disc = discriminant(l);
    const auto [pos, neg] = signature(l);
    check(milgram_signature(discriminant_form(l), o.iso_bound) == ((pos - neg) % 8 + 8) % 8,
          entry.name + ": milgram");
    for (std::int64_t d : {2, 3, 5}) {
      if (gcd_value(Integer(d), disc) != 1) continue;
      const std::string tag = entry.name + " d=" + std::to_string(d);
      for (const auto& line : enumerate_isotropic_lines(l, d, o.max_classes)) {
        const EmbeddedLattice n = neighbor_from_line(line);
        check(line_from_neighbor(l, n) == line, tag + ": round trip");
        check(same_genus_invariants(l, n.as_lattice(), o.iso_bound), tag + ": genus");
        const EmbeddedLattice m = split_sublattice(line);
        check(m.as_lattice().det() == disc * d * d, tag + ": split discriminant");
      }
    }
  }
  for (const auto& entry : local_corpus()) {
    const std::int64_t d = entry.moduli.front();
    const FiniteQuadForm a = discriminant_form(entry.lattice);
    for (const auto& line : generalized_isotropic_lines(entry.lattice, d, o.max_classes)) {
      const Lattice n = generalized_neighbor(line).as_lattice();
      check(n.det() == entry.lattice.det() && signature(n) == signature(entry.lattice) &&
                finite_form_isomorphic(a, discriminant_form(n), o.iso_bound).has_value(),
            entry.name + " d=" + std::to_string(d) + ": generalized neighbor");
    }
  }
  for (const auto& fixture : k3_fixtures()) {
    std::string reason;
    check(k3_pair_check(fixture.pair, &reason), fixture.name + ": " + reason);
  }
  check(line_subgroup_dictionary(3).size() == 16, "kummer d=3");
  return json{{"checks", checks}, {"failures", failures}, {"ok", failures.empty()}};
}

void print(const json& j) { std::cout << io::canonical_dump(j) << '\n'; }

int fail(int status, const std::string& code, const std::string& detail) {
  print(json{{"error", code}, {"detail", detail}});
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighbors of even lattices, discriminant forms and K3 lattice data"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--max-classes", o.max_classes, "Budget on enumerated residue classes")
      ->capture_default_str();
  app.add_option("--iso-bound", o.iso_bound, "Largest finite group searched exhaustively")
      ->capture_default_str();

  using Handler = json (*)(const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto command = [&](const char* name, const char* help, Handler handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, handler);
    return sub;
  };
  auto with_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Lattice JSON: path, - or inline")->required();
    return sub;
  };
  auto with_line = [&](CLI::App* sub) {
    sub->add_option("--line", o.line, "Line JSON {\"d\", \"gen\"}")->required();
    return sub;
  };
  auto with_d = [&](CLI::App* sub) {
    sub->add_option("--d", o.d, "Modulus")->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 31));
    return sub;
  };

  with_input(command("info", "Rank, discriminant, signature, parity", info));
  with_input(command("disc-form", "Discriminant form", [](const Options& opt) {
    return form_json(discriminant_form(load_lattice(opt.input)));
  }));
  with_d(with_input(command("lines", "Isotropic lines mod d", lines)));
  with_line(with_input(command("neighbor", "Neighbor of a line", neighbor)));
  with_line(with_input(command("split", "Kernel sublattice of a line", split)));
  with_line(with_input(command("transverse", "Transversal in the split discriminant group", transverse)));
  auto* genus = with_input(command("genus-check", "Compare genus invariants", genus_check));
  genus->add_option("other", o.second, "Second lattice JSON")->required();
  with_d(with_input(command("gen-lines", "Generalized isotropic lines mod d", gen_lines)));
  auto* gen = with_input(command("gen-neighbor", "Neighbor of a generalized line", gen_neighbor));
  auto* gen_line = gen->add_option("--line", o.line, "Line JSON {\"d\", \"gen\"}");
  auto* gen_local = gen->add_option("--local", o.local, "Local data {\"p\", \"n\", \"gen\"} or a list");
  gen_line->excludes(gen_local);
  gen->callback([&] {
    if (o.line.empty() && o.local.empty()) throw CLI::RequiredError("--line or --local");
  });
  with_input(command("maximalize", "Maximal even overlattice", maximalize_cmd));
  with_input(command("is-maximal", "Whether no even overlattice exists", is_maximal_cmd));
  with_input(command("k3-pair-check", "Check a K3 lattice pair", k3_pair_check_cmd));
  with_line(with_input(command("k3-neighbor", "Pair for the neighbor of a line", k3_neighbor_cmd)))
      ->add_flag("--generalized", o.generalized, "Treat the line as a generalized line");
  with_line(with_input(command("k3-split", "Kernel data of a line", k3_split_cmd)))
      ->add_flag("--generalized", o.generalized, "Treat the line as a generalized line");
  auto* kummer = with_d(command("kummer", "Kummer transcendental lattice dictionary", kummer_cmd));
  auto* list = kummer->add_flag("--list", o.list, "Print the line/subgroup table");
  kummer->add_option("--neighbor", o.pair, "Neighbor for subgroups C1 C2, each given as a,b")
      ->expected(2)
      ->excludes(list);
  command("selftest", "Invariant suite on the built-in corpus", selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "invalid_input", e.what());
  }

  try {
    for (const auto& [sub, handler] : commands) {
      if (!sub->parsed()) continue;
      const json out = handler(o);
      print(out);
      if (sub->get_name() == "selftest" && !out["ok"].get<bool>()) return 1;
      return 0;
    }
    return fail(2, "invalid_input", "no subcommand");
  } catch (const LatticeError& e) {
    return fail(2, std::string(error_code_name(e.code())), e.what());
  } catch (const io::json::exception& e) {
    return fail(2, "invalid_input", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}
