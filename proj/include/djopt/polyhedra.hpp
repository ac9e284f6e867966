#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "djopt/dd.hpp"
#include "djopt/linalg.hpp"

namespace djopt {

// {z : A z <= b, E z = f} in R^dim.
struct ConvexPolyhedron {
  Mat A;
  Vec b;
  Mat E;
  Vec f;
  Eigen::Index dim = 0;

  ConvexPolyhedron() = default;
  ConvexPolyhedron(Mat A_, Vec b_, Mat E_, Vec f_);

  static ConvexPolyhedron whole(Eigen::Index n);
  // Homogeneous piece {A w <= 0, E w = 0}.
  static ConvexPolyhedron cone(const Mat& A, const Mat& E);

  Eigen::Index num_ineq() const { return A.rows(); }
  Eigen::Index num_eq() const { return E.rows(); }
  bool is_cone() const;
  void validate() const;
};

// Finite union of convex pieces. A cone is a set whose pieces are all
// homogeneous. Zero pieces encode the empty set (e.g. the typed empty cone
// returned for non-tangent directions).
struct PolyhedralSet {
  Eigen::Index dim = 0;
  std::vector<ConvexPolyhedron> pieces;

  PolyhedralSet() = default;
  explicit PolyhedralSet(Eigen::Index n) : dim(n) {}
  PolyhedralSet(Eigen::Index n, std::vector<ConvexPolyhedron> ps);
  explicit PolyhedralSet(ConvexPolyhedron p);

  static PolyhedralSet empty(Eigen::Index n) { return PolyhedralSet(n); }
  bool is_empty_marker() const { return pieces.empty(); }
  bool is_cone() const;
  void validate() const;
};

using PolyhedralCone = PolyhedralSet;

struct Face {
  Eigen::Index parent = 0;
  std::vector<Eigen::Index> active;  // sorted inequality rows tight on the face
  Vec rep_point;
};

// Relatively open convex region on which the regular normal cone of the union
// is constant: a face of one piece refined by the sign pattern of every
// hyperplane of the other pieces.
struct Cell {
  Eigen::Index parent = 0;
  std::vector<Eigen::Index> active;
  Vec rep_point;
  Mat affine_dirs;  // orthonormal basis of the cell's affine hull directions
};

// Scale used for relative feasibility tests.
double point_scale(const Vec& z);

bool contains(const ConvexPolyhedron& P, const Vec& z, const Tolerance& tol = default_tolerance());
bool contains(const PolyhedralSet& S, const Vec& z, const Tolerance& tol = default_tolerance());

// Inequality rows of P active at z (z assumed in P).
std::vector<Eigen::Index> active_rows(const ConvexPolyhedron& P, const Vec& z,
                                      const Tolerance& tol = default_tolerance());

bool is_nonempty(const ConvexPolyhedron& P, const Tolerance& tol = default_tolerance());

// Union over pieces containing z of {w : A_active w <= 0, E w = 0}.
PolyhedralCone tangent_cone(const PolyhedralSet& S, const Vec& z,
                            const Tolerance& tol = default_tolerance());

struct DistanceResult {
  double value = std::numeric_limits<double>::infinity();
  Vec nearest;
  Eigen::Index piece = -1;
  bool empty() const { return piece < 0; }
};

// Max-norm distance by one LP per piece; value +inf (piece = -1) if S is empty.
DistanceResult distance_inf(const PolyhedralSet& S, const Vec& z,
                            const Tolerance& tol = default_tolerance());
DistanceResult distance_inf(const ConvexPolyhedron& P, const Vec& z,
                            const Tolerance& tol = default_tolerance());

constexpr Eigen::Index kFaceMaxRows = 20;

// All nonempty faces, canonicalized by maximal active set, sorted.
std::vector<Face> faces(const ConvexPolyhedron& P, const Tolerance& tol = default_tolerance());

// Cells of the union; covers every point of S.
std::vector<Cell> cells(const PolyhedralSet& S, const Tolerance& tol = default_tolerance());

// Polar of a cone (union): intersection of the piece polars.
ConvexPolyhedron polar(const PolyhedralCone& K, const Tolerance& tol = default_tolerance());

// Generators of a homogeneous piece.
GeneratorRep generators(const ConvexPolyhedron& K, const Tolerance& tol = default_tolerance());

// Basis (columns) of {w : A w = 0, E w = 0}.
Mat lineality_space(const ConvexPolyhedron& K, const Tolerance& tol = default_tolerance());

// Convex piece built from an H-representation.
ConvexPolyhedron from_hrep(const HRep& h, Eigen::Index n);

// Intersection of two convex pieces.
ConvexPolyhedron intersect(const ConvexPolyhedron& P, const ConvexPolyhedron& Q);

}  // namespace djopt
