#pragma once

#include <optional>
#include <string>

#include "djopt/cones.hpp"

namespace djopt {

class ExtReal {
 public:
  enum class Kind { Finite, PlusInf, MinusInf };

  ExtReal() = default;
  ExtReal(double v);  // NOLINT: implicit from finite reals; infinities map to the tags

  static ExtReal plus_inf() { return ExtReal(Kind::PlusInf); }
  static ExtReal minus_inf() { return ExtReal(Kind::MinusInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_plus_inf() const { return kind_ == Kind::PlusInf; }
  bool is_minus_inf() const { return kind_ == Kind::MinusInf; }
  // Throws InfiniteArithmetic for infinite values.
  double value() const;
  // Finite value, or +/- infinity as a double.
  double as_double() const;

  ExtReal operator-() const;
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }
  friend bool operator==(const ExtReal& a, const ExtReal& b);
  friend bool operator<(const ExtReal& a, const ExtReal& b);
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }

  // a <= b + tol for finite parts; infinities compared exactly.
  static bool le_tol(const ExtReal& a, const ExtReal& b, double tol);

  std::string str() const;

 private:
  explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  double v_ = 0.0;
};

ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);

struct SupportResult {
  ExtReal value = ExtReal::minus_inf();
  std::optional<Vec> attaining_point;
  std::optional<Eigen::Index> attaining_piece;
  std::optional<Vec> dual;  // piece multipliers (A-rows then E-rows) of the attaining LP
};

// sup over S of <zstar, z>, by one LP per piece.
SupportResult support_function(const PolyhedralSet& S, const Vec& zstar,
                               const Tolerance& tol = default_tolerance());

struct LowerSupportResult {
  ExtReal value = ExtReal::plus_inf();
  std::optional<Cell> attaining_cell;
};

// Minimum of <zstar, rep> over cells whose regular normal cone contains zstar.
LowerSupportResult lower_generalized_support_detail(const PolyhedralSet& S, const Vec& zstar,
                                                    const Tolerance& tol = default_tolerance());
ExtReal lower_generalized_support(const PolyhedralSet& S, const Vec& zstar,
                                  const Tolerance& tol = default_tolerance());

// Second subderivative of the indicator of S at z for zstar in direction w.
ExtReal second_subderivative_indicator(const DirectionalContext& ctx, const Vec& zstar,
                                       const Tolerance& tol = default_tolerance());

}  // namespace djopt
