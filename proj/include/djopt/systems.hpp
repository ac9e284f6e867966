#pragma once

#include <optional>
#include <vector>

#include "djopt/cones.hpp"
#include "djopt/expr.hpp"
#include "djopt/supports.hpp"

namespace djopt {

// Gamma = G^{-1}(D) at xbar, with G given by its value and derivatives there.
struct SystemPoint {
  Vec xbar;
  PolyhedralSet D;
  SmoothMapAtPoint map;
  std::optional<double> kappa;

  Eigen::Index n() const { return map.jacobian.cols(); }
  Eigen::Index d() const { return map.jacobian.rows(); }
  const Mat& J() const { return map.jacobian; }
  void validate(const Tolerance& tol = default_tolerance()) const;
};

SystemPoint make_system(const std::vector<Expr>& G, const PolyhedralSet& D, const Vec& xbar,
                        std::optional<double> kappa = std::nullopt);
SystemPoint identity_system(const PolyhedralSet& D, const Vec& z);

struct DirectionalSystem {
  SystemPoint base;
  Vec u;
  Vec v;                  // grad G u
  Vec c;                  // second derivative of G along (u, u)
  PolyhedralCone TD;      // T_D(G xbar)
  PolyhedralCone TTD;     // T_{T_D}(v)
  PolyhedralCone N;       // N_{T_D}(v), equal to N_D(G xbar; v)
  ConvexPolyhedron Nhat;  // regular normal cone of T_D at v

  // Throws AssumptionViolated unless grad G u lies in T_D(G xbar).
  static DirectionalSystem make(SystemPoint sp, const Vec& u, const Tolerance& tol = default_tolerance());
  const Mat& J() const { return base.map.jacobian; }
};

// Union over pieces K_i of T_D(G xbar) of {u : grad G u in K_i}.
PolyhedralCone linearization_cone(const SystemPoint& sp, const Tolerance& tol = default_tolerance());

struct CheckResult {
  bool holds = true;
  std::optional<Vec> certificate;
};

// ker(grad G^T) meets N_D(G xbar; v) only in 0.
CheckResult foscms_check(const DirectionalSystem& ds, const Tolerance& tol = default_tolerance());
// ker(grad G^T) meets span N_D(G xbar; v) only in 0.
CheckResult nondegeneracy_check(const DirectionalSystem& ds, const Tolerance& tol = default_tolerance());
// <y, c> = 0 on ker(grad G^T) ∩ span N_D(G xbar; v); the certificate is a violating y.
CheckResult generalized_nondegeneracy_check(const DirectionalSystem& ds,
                                            const Tolerance& tol = default_tolerance());

struct T2Gamma {
  PolyhedralSet set;
  bool conditional = false;  // FOSCMS failed: formula needs MSCQ
};

T2Gamma second_order_tangent_gamma(const DirectionalSystem& ds, const Tolerance& tol = default_tolerance());

struct SupportT2Result {
  SupportResult support;
  std::optional<Vec> multiplier;  // y* in Lambda with sigma = -<y*, c>
  bool multiplier_in_lambda = false;
  bool conditional = false;
};

SupportT2Result support_T2_gamma(const DirectionalSystem& ds, const Vec& xstar,
                                 const Tolerance& tol = default_tolerance());

struct SecondSubderivative {
  ExtReal value;
  bool in_domain = false;  // xstar in dom sigma of the second-order tangent set
  bool conditional = false;
  std::optional<Vec> multiplier;
};

SecondSubderivative second_subderivative_gamma(const DirectionalSystem& ds, const Vec& xstar,
                                               const Tolerance& tol = default_tolerance());

enum class MultiplierKind { M, S };

struct Extent {
  ExtReal lo, hi;
};

struct MultiplierSet {
  MultiplierKind kind = MultiplierKind::M;
  Mat Jt;  // grad G^T
  Vec xstar;
  PolyhedralCone cone;

  bool contains(const Vec& y, const Tolerance& tol = default_tolerance()) const;
  bool empty(const Tolerance& tol = default_tolerance()) const;
  // Coordinate ranges by LP; empty vector if the set is empty.
  std::vector<Extent> extents(const Tolerance& tol = default_tolerance()) const;
  bool singleton(const Tolerance& tol = default_tolerance()) const;
};

MultiplierSet multiplier_set(const DirectionalSystem& ds, const Vec& xstar, MultiplierKind kind);

struct MultiplierBounds {
  ExtReal lower = ExtReal::plus_inf();  // inf over Lambda (∩ ball); +inf when empty
  ExtReal upper = ExtReal::minus_inf();
  ExtReal s_lower = ExtReal::minus_inf();  // sup over the S-multipliers
  std::optional<Vec> attaining;
  bool clipped = false;  // the kappa ball |y|_inf <= kappa |x*|_2 was applied
  double radius = 0;
};

// Uses kappa if given, else ds.base.kappa; throws MissingKappa when
// require_kappa is set and neither is available.
MultiplierBounds multiplier_bounds(const DirectionalSystem& ds, const Vec& xstar,
                                   std::optional<double> kappa = std::nullopt, bool require_kappa = false,
                                   const Tolerance& tol = default_tolerance());

struct LowerSupportT2 {
  ExtReal value;
  Vec p0;
  PolyhedralCone K;  // {p : grad G p in T_{T_D}(v)}
};

// Requires generalized nondegeneracy (throws AssumptionViolated otherwise).
LowerSupportT2 lower_support_T2_gamma_detail(const DirectionalSystem& ds, const Vec& xstar,
                                             const Tolerance& tol = default_tolerance());
ExtReal lower_support_T2_gamma(const DirectionalSystem& ds, const Vec& xstar,
                               const Tolerance& tol = default_tolerance());

struct NormalEqualities {
  PolyhedralCone image;  // grad G^T N_{T_D}(v)
  bool certified = false;  // nondegenerate: image equals all four sets
  bool foscms = false;     // only the inclusion chain, image as an upper bound
};

NormalEqualities directional_normal_equalities(const DirectionalSystem& ds,
                                               const Tolerance& tol = default_tolerance());

struct KappaEstimate {
  double kappa = 0;
  int pieces_used = 0;
  int pieces_skipped = 0;  // pieces with empty preimage
};

// Hoffman-type constant of p -> grad G p + c - T_{T_D}(v) in the max-norm.
KappaEstimate kappa_oracle(const DirectionalSystem& ds, const Tolerance& tol = default_tolerance());

// dist_inf(0, Phi(p)) and dist_inf(p, Phi^{-1}(0)).
double phi_residual(const DirectionalSystem& ds, const Vec& p, const Tolerance& tol = default_tolerance());
double preimage_distance(const DirectionalSystem& ds, const Vec& p, const Tolerance& tol = default_tolerance());

}  // namespace djopt
