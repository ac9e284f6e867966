#include "djopt/supports.hpp"

#include <cmath>
#include <sstream>

#include "djopt/error.hpp"
#include "djopt/lp.hpp"

namespace djopt {

ExtReal::ExtReal(double v) {
  if (std::isnan(v)) fail(ErrorCode::InfiniteArithmetic, "NaN is not an extended real");
  if (std::isinf(v)) {
    kind_ = v > 0 ? Kind::PlusInf : Kind::MinusInf;
  } else {
    v_ = v;
  }
}

double ExtReal::value() const {
  if (!is_finite()) fail(ErrorCode::InfiniteArithmetic, "value() of an infinite extended real");
  return v_;
}

double ExtReal::as_double() const {
  switch (kind_) {
    case Kind::Finite: return v_;
    case Kind::PlusInf: return std::numeric_limits<double>::infinity();
    case Kind::MinusInf: return -std::numeric_limits<double>::infinity();
  }
  return v_;
}

ExtReal ExtReal::operator-() const {
  switch (kind_) {
    case Kind::Finite: return ExtReal(-v_);
    case Kind::PlusInf: return minus_inf();
    case Kind::MinusInf: return plus_inf();
  }
  return *this;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.is_finite() && b.is_finite()) return ExtReal(a.v_ + b.v_);
  if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf()))
    fail(ErrorCode::InfiniteArithmetic, "inf - inf");
  return a.is_finite() ? b : a;
}

bool operator==(const ExtReal& a, const ExtReal& b) {
  return a.kind_ == b.kind_ && (!a.is_finite() || a.v_ == b.v_);
}

bool operator<(const ExtReal& a, const ExtReal& b) {
  if (a.kind_ == b.kind_) return a.is_finite() && a.v_ < b.v_;
  return a.is_minus_inf() || b.is_plus_inf();
}

bool ExtReal::le_tol(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.is_finite() && b.is_finite()) return a.v_ <= b.v_ + tol;
  return a <= b;
}

std::string ExtReal::str() const {
  if (is_plus_inf()) return "+inf";
  if (is_minus_inf()) return "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v_;
  return os.str();
}

ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

SupportResult support_function(const PolyhedralSet& S, const Vec& zstar, const Tolerance& tol) {
  require_dims(zstar.size() == S.dim, "support_function: dimension");
  SupportResult best;
  for (std::size_t i = 0; i < S.pieces.size(); ++i) {
    const auto& P = S.pieces[i];
    LpProblem lp;
    lp.c = zstar;
    lp.A_ineq = P.A;
    lp.b_ineq = P.b;
    lp.A_eq = P.E;
    lp.b_eq = P.f;
    const LpOutcome o = solve_lp(lp, tol);
    if (o.infeasible()) continue;
    if (o.unbounded()) {
      best.value = ExtReal::plus_inf();
      best.attaining_point.reset();
      best.attaining_piece = static_cast<Eigen::Index>(i);
      best.dual.reset();
      return best;
    }
    if (best.value < ExtReal(o.value)) {
      best.value = o.value;
      best.attaining_point = o.x;
      best.attaining_piece = static_cast<Eigen::Index>(i);
      Vec d(o.dual_ineq.size() + o.dual_eq.size());
      d << o.dual_ineq, o.dual_eq;
      best.dual = d;
    }
  }
  return best;
}

LowerSupportResult lower_generalized_support_detail(const PolyhedralSet& S, const Vec& zstar,
                                                    const Tolerance& tol) {
  require_dims(zstar.size() == S.dim, "lower_generalized_support: dimension");
  LowerSupportResult out;
  bool any = false;
  for (const auto& P : S.pieces) any = any || is_nonempty(P, tol);
  if (!any) {
    out.value = ExtReal::minus_inf();
    return out;
  }
  const double zs = std::max(1.0, linalg::inf_norm(zstar));
  for (const Cell& c : cells(S, tol)) {
    const ConvexPolyhedron N = regular_normal_cone(S, c.rep_point, tol);
    if (!cone_contains(N, zstar, tol)) continue;
    if (c.affine_dirs.cols() &&
        linalg::inf_norm(c.affine_dirs.transpose() * zstar) > 100 * tol.eps_feas * zs)
      fail(ErrorCode::AssumptionViolated, "normal vector not orthogonal to its cell");
    const ExtReal v = zstar.dot(c.rep_point);
    if (v < out.value) {
      out.value = v;
      out.attaining_cell = c;
    }
  }
  return out;
}

ExtReal lower_generalized_support(const PolyhedralSet& S, const Vec& zstar, const Tolerance& tol) {
  return lower_generalized_support_detail(S, zstar, tol).value;
}

ExtReal second_subderivative_indicator(const DirectionalContext& ctx, const Vec& zstar,
                                       const Tolerance& tol) {
  ctx.validate(tol);
  require_dims(zstar.size() == ctx.S.dim, "second_subderivative_indicator: dimension");
  const PolyhedralCone T = tangent_cone(ctx.S, ctx.z, tol);
  if (!cone_contains(T, ctx.w, tol)) return ExtReal::plus_inf();
  const double ip = zstar.dot(ctx.w);
  const double scale = std::max(1.0, linalg::inf_norm(zstar)) * std::max(1.0, linalg::inf_norm(ctx.w));
  if (ip < -tol.eps_feas * scale) return ExtReal::plus_inf();
  if (ip > tol.eps_feas * scale) return ExtReal::minus_inf();
  return cone_contains(regular_normal_cone(T, ctx.w, tol), zstar, tol) ? ExtReal(0.0)
                                                                         : ExtReal::minus_inf();
}

}  // namespace djopt
