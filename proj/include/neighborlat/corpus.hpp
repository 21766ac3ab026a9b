#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neighborlat/lattice.hpp"

namespace neighborlat {

struct CorpusEntry {
  std::string name;
  Lattice lattice;
};

/// Even lattices of rank 2 to 8, definite and indefinite, used for the
/// classical line and neighbor checks.
std::vector<CorpusEntry> classical_corpus();

struct LocalEntry {
  std::string name;
  Lattice lattice;
  std::vector<std::int64_t> moduli;  // each divisible by some p | disc
};

/// Even lattices whose discriminant is divisible by 3 or 5, for the
/// generalized pipeline.
std::vector<LocalEntry> local_corpus();

/// Moduli for the classical checks.
inline const std::vector<std::int64_t> kCorpusModuli = {2, 3, 4, 5, 6, 7, 9};

}  // namespace neighborlat
