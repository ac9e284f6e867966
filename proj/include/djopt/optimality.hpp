#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "djopt/systems.hpp"

namespace djopt {

// min f(x) s.t. g(x) in D, at a feasible point xbar.
struct ProblemPoint {
  Expr objective;
  std::vector<Expr> constraints;
  PolyhedralSet D;
  Vec xbar;
  SmoothMapAtPoint f;  // one row
  SmoothMapAtPoint g;
  std::optional<double> kappa;

  Eigen::Index n() const { return xbar.size(); }
  Eigen::Index d() const { return g.jacobian.rows(); }
  Vec grad_f() const { return f.jacobian.row(0).transpose(); }
  const Mat& hess_f() const { return f.hessians.front(); }
  SystemPoint system() const { return {xbar, D, g, kappa}; }
  void validate(const Tolerance& tol = default_tolerance()) const;
};

ProblemPoint make_problem(const Expr& objective, const std::vector<Expr>& constraints, const PolyhedralSet& D,
                          const Vec& xbar, std::optional<double> kappa = std::nullopt);

// Relatively open region of the critical cone on which the regular normal
// cone of T_D(g xbar) at grad g u is constant.
struct CriticalRegion {
  ConvexPolyhedron closure;
  Vec rep;                  // a point of the relative interior
  std::vector<int> signs;   // sign of each arrangement row on the region
};

struct CriticalCone {
  PolyhedralCone pieces;  // {u : grad g u in K_i, grad f u <= 0}
  std::vector<CriticalRegion> regions;
  Mat rows;  // arrangement rows in u-space (first row: grad f, if nonzero)
};

constexpr int kArrangementMaxRows = 16;

CriticalCone critical_cone(const ProblemPoint& pp, const Tolerance& tol = default_tolerance());

struct MultiplierTriple {
  double alpha = 1.0;
  Vec lambda;
};

enum class Verdict { Satisfied, Violated, Proven, Disproven, Unknown };
const char* verdict_name(Verdict v);

struct CheckReport {
  Verdict verdict = Verdict::Unknown;
  std::optional<Vec> witness;  // direction (Violated / Disproven)
  std::string detail;
  std::optional<double> value;
  double margin = 0;          // sufficiency: Q(u)/2 >= margin |u|_2^2 on the certified regions
  bool conditional = false;   // FOSCMS failed (mode M)
  std::vector<CheckReport> parts;
  std::vector<MultiplierTriple> certificates;
};

enum class MultiplierMode { M, S };

CheckReport necessary_check(const ProblemPoint& pp, const Vec& u, MultiplierMode mode,
                            const Tolerance& tol = default_tolerance());

struct CopositivityResult {
  enum class Status { Proven, Disproven, Unknown } status = Status::Unknown;
  std::optional<Vec> witness;  // unit vector with u^T Q u <= 0
  double margin = 0;           // Proven: u^T Q u >= margin |u|_2^2 on P
  int simplices = 0;
};

constexpr int kCopositivityDefaultDepth = 14;
constexpr int kCopositivityMaxSimplices = 1 << 15;

// Strict copositivity of Q on the closed convex cone P.
CopositivityResult copositivity_test(const Mat& Q, const ConvexPolyhedron& P, int depth = kCopositivityDefaultDepth,
                                     const Tolerance& tol = default_tolerance());

CheckReport sufficient_check(const ProblemPoint& pp, int depth = kCopositivityDefaultDepth,
                             const Tolerance& tol = default_tolerance());

// Feasible point near xbar along u with f below f(xbar), found on the curve
// xbar + t u + t^2/2 p (p maximizing <-grad f, p> over the second-order
// tangent set) projected onto the feasible set. Re-checked by evaluation.
std::optional<Vec> descent_witness(const ProblemPoint& pp, const Vec& u, double delta,
                                   const Tolerance& tol = default_tolerance());

struct SamplingResult {
  bool holds = true;
  std::optional<Vec> fails_at;
  long index = -1;  // lowest failing sample
  long tested = 0;
};

// Halton point k (k >= 1) in [0,1)^n, shifted modulo 1 by a seed-derived vector.
Vec halton(long k, Eigen::Index n, std::uint64_t seed);
// Radial map of [0,1)^n onto the Euclidean ball of radius r around c.
Vec cube_to_ball(const Vec& h, const Vec& c, double r);

// max{f(x) - f(xbar), dist_inf(g(x), D)} >= eps |x - xbar|^2 on Halton points of the delta-ball.
SamplingResult essential_min_oracle(const ProblemPoint& pp, double eps, double delta, long samples,
                                    std::uint64_t seed = 0x5EED, const Tolerance& tol = default_tolerance());
SamplingResult essential_min_oracle_serial(const ProblemPoint& pp, double eps, double delta, long samples,
                                           std::uint64_t seed = 0x5EED, const Tolerance& tol = default_tolerance());

// f(x) >= f(xbar) + eps |x - xbar|^2 on sampled feasible points (Halton points
// projected onto the feasible set).
SamplingResult quadratic_growth_oracle(const ProblemPoint& pp, double eps, double delta, long samples,
                                       std::uint64_t seed = 0x5EED, const Tolerance& tol = default_tolerance());
SamplingResult quadratic_growth_oracle_serial(const ProblemPoint& pp, double eps, double delta, long samples,
                                              std::uint64_t seed = 0x5EED,
                                              const Tolerance& tol = default_tolerance());

}  // namespace djopt
