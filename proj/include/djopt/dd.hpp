#pragma once

#include <vector>

#include "djopt/linalg.hpp"

namespace djopt {

// Cone generated as cone{rays} + span{lines}.
struct GeneratorRep {
  Eigen::Index dim = 0;
  std::vector<Vec> rays;
  std::vector<Vec> lines;

  bool is_zero() const { return rays.empty() && lines.empty(); }
};

struct HRep {
  Mat A;  // A w <= 0
  Mat E;  // E w = 0
};

constexpr Eigen::Index kDdMaxDim = 12;
constexpr Eigen::Index kDdMaxRows = 64;

// Generators of {w : A w <= 0, E w = 0}. Throws ScaleCapExceeded beyond
// kDdMaxDim / kDdMaxRows. Rays are max-norm normalized and sorted.
GeneratorRep dd_h_to_v(const Mat& A, const Mat& E, const Tolerance& tol = default_tolerance());

// H-representation of the generated cone (polar of the polar).
HRep dd_v_to_h(const GeneratorRep& g, const Tolerance& tol = default_tolerance());

// LP membership v in cone{rays} + span{lines}.
bool generated_contains(const GeneratorRep& g, const Vec& v,
                        const Tolerance& tol = default_tolerance());

// Generator matrices (columns).
Mat ray_matrix(const GeneratorRep& g);
Mat line_matrix(const GeneratorRep& g);

}  // namespace djopt
