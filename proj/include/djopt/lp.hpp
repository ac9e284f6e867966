#pragma once

#include <string>

#include "djopt/linalg.hpp"

namespace djopt {

enum class Sense { Max, Min };

/// Linear program over free variables x:
///   optimize c^T x  s.t.  A_ineq x <= b_ineq,  A_eq x = b_eq.
struct LpProblem {
  Vec c;
  Mat A_ineq;
  Vec b_ineq;
  Mat A_eq;
  Vec b_eq;
  Sense sense = Sense::Max;

  Eigen::Index num_vars() const { return c.size(); }
  // Throws DimensionMismatch on inconsistent blocks.
  void validate() const;

  static LpProblem feasibility(Eigen::Index n);
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

const char* to_string(LpStatus status);

/// Result of solve_lp with its certificate.
///
/// Optimal: x, value, and multipliers (dual_ineq >= 0, dual_eq) with
///   Max:  c = A_ineq^T dual_ineq + A_eq^T dual_eq, value = b^T dual
///   Min: -c = A_ineq^T dual_ineq + A_eq^T dual_eq, value = -b^T dual
/// Unbounded: `ray` with A_ineq ray <= 0, A_eq ray = 0 and an improving objective.
/// Infeasible: `farkas` = (y, z), y >= 0, A_ineq^T y + A_eq^T z = 0 and
///   b_ineq^T y + b_eq^T z < 0.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
  Vec dual_ineq;
  Vec dual_eq;
  Vec ray;
  Vec farkas;

  bool optimal() const { return status == LpStatus::Optimal; }
  bool unbounded() const { return status == LpStatus::Unbounded; }
  bool infeasible() const { return status == LpStatus::Infeasible; }
};

/// Two-phase primal simplex with Bland's rule on a dense tableau.
/// Deterministic for fixed input.
LpOutcome solve_lp(const LpProblem& p, const Tolerance& tol = default_tolerance());

/// Re-checks an outcome's certificate against the problem. Returns an empty
/// string if valid, otherwise a description of the first violation.
std::string check_certificate(const LpProblem& p, const LpOutcome& out,
                              const Tolerance& tol = default_tolerance());

}  // namespace djopt
