#pragma once

#include <string>

#include "djopt/polyhedra.hpp"

namespace djopt {

enum class EncodingKind { MPCC, Vanishing, Switching, Cardinality, Box, CustomUnion };

// Pair kinds act on coordinates (2j, 2j+1), j < pairs:
//   MPCC       {a >= 0, b = 0} ∪ {a = 0, b <= 0}
//   Switching  {a = 0} ∪ {b = 0}
//   Vanishing  {a = 0} ∪ {a >= 0, b <= 0}    (a >= 0, a b <= 0)
// Cardinality: x in R^n with at most `nonzeros` nonzero entries, as the union
// of coordinate subspaces. Box: lower <= z <= upper.
struct EncodingSpec {
  EncodingKind kind = EncodingKind::MPCC;
  int pairs = 1;
  int n = 0;
  int nonzeros = 0;
  Vec lower, upper;
  PolyhedralSet custom;
};

constexpr int kMaxPairs = 6;
constexpr int kMaxEncodingPieces = 64;

EncodingKind encoding_kind_from_string(const std::string& s);
std::string to_string(EncodingKind k);

PolyhedralSet build(const EncodingSpec& spec);

// Cartesian product, one piece per pair of pieces.
PolyhedralSet product(const PolyhedralSet& S1, const PolyhedralSet& S2);

// The defining predicate of the class, for testing membership.
bool encoding_predicate(const EncodingSpec& spec, const Vec& z, double tol = 1e-9);

// Number of pieces build() produces.
long expected_pieces(const EncodingSpec& spec);

}  // namespace djopt
