#pragma once

#include <random>

#include "djopt/polyhedra.hpp"

namespace djopt::testing {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Mat mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> xs) {
  Mat m(r, c);
  Eigen::Index k = 0;
  for (double x : xs) m(k / c, k % c) = x, ++k;
  return m;
}

// {a >= 0, b = 0} ∪ {a = 0, b <= 0}
inline PolyhedralSet dcomp() {
  ConvexPolyhedron p1(mat(1, 2, {-1, 0}), vec({0}), mat(1, 2, {0, 1}), vec({0}));
  ConvexPolyhedron p2(mat(1, 2, {0, 1}), vec({0}), mat(1, 2, {1, 0}), vec({0}));
  return PolyhedralSet(2, {p1, p2});
}

inline PolyhedralSet halfplane_a_le_0() {
  return PolyhedralSet(ConvexPolyhedron(mat(1, 2, {1, 0}), vec({0}), Mat(0, 2), Vec(0)));
}

inline PolyhedralSet shifted(const PolyhedralSet& S, const Vec& z) {
  PolyhedralSet out = S;
  for (auto& P : out.pieces) {
    if (P.num_ineq()) P.b += P.A * z;
    if (P.num_eq()) P.f += P.E * z;
  }
  return out;
}

// Random union of convex pieces with integer data through a common point z0
// (so the fixture point is a member of at least one piece).
inline PolyhedralSet random_set(std::mt19937_64& rng, Eigen::Index n, int max_pieces, const Vec& z0,
                                bool all_through = false) {
  std::uniform_int_distribution<int> npieces(1, max_pieces);
  std::uniform_int_distribution<int> nrows(1, static_cast<int>(n) + 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<int> coin(0, 3);
  const int k = npieces(rng);
  PolyhedralSet S(n);
  for (int p = 0; p < k; ++p) {
    const int m = nrows(rng);
    Mat A(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = coef(rng);
    Vec b = A * z0;
    if (!(all_through || p == 0))
      for (Eigen::Index i = 0; i < m; ++i) b(i) += coin(rng) == 0 ? 1 : 0;
    Mat E(0, n);
    Vec f(0);
    if (coin(rng) == 0) {
      E = Mat(1, n);
      for (Eigen::Index j = 0; j < n; ++j) E(0, j) = coef(rng);
      f = E * z0;
    }
    S.pieces.emplace_back(A, b, E, f);
    S.pieces.back().dim = n;
  }
  return S;
}

}  // namespace djopt::testing
