#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "djopt/linalg.hpp"

namespace djopt {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos };

// Decimal literal m / 10^k, kept exact for printing.
struct Literal {
  std::int64_t mantissa = 0;
  int scale = 0;
  double value() const;
  std::string str() const;
  bool operator==(const Literal&) const = default;
};

struct Node;

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr constant(Literal c);
  static Expr constant(std::int64_t v);
  static Expr var(int index);  // 1-based
  static Expr unary(Op op, Expr a);
  static Expr binary(Op op, Expr a, Expr b);
  static Expr pow(Expr a, int k);

  const Node& node() const { return *node_; }
  bool empty() const { return !node_; }
  int max_var() const;
  double eval(const Vec& x) const;
  std::string str() const;
  bool same(const Expr& other) const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Const;
  Literal literal;
  int var = 0;
  int power = 0;
  Expr a, b;
};

Expr parse(const std::string& text);

inline Expr operator+(Expr a, Expr b) { return Expr::binary(Op::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(Op::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(Op::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(Op::Div, std::move(a), std::move(b)); }

// Value, gradient and Hessian carried together (second-order forward mode).
struct Dual2 {
  double v = 0;
  Vec g;
  Mat h;

  static Dual2 constant(double c, Eigen::Index n);
  static Dual2 variable(double x, Eigen::Index i, Eigen::Index n);
};

Dual2 operator+(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a);
Dual2 operator*(const Dual2& a, const Dual2& b);
Dual2 operator/(const Dual2& a, const Dual2& b);
Dual2 ipow(const Dual2& a, int k);
Dual2 exp(const Dual2& a);
Dual2 log(const Dual2& a);
Dual2 sin(const Dual2& a);
Dual2 cos(const Dual2& a);

Dual2 eval_dual(const Expr& e, const Vec& x);

struct SmoothMapAtPoint {
  Vec value;
  Mat jacobian;               // d x n
  std::vector<Mat> hessians;  // one symmetric n x n per component
};

SmoothMapAtPoint differentiate_at(const std::vector<Expr>& exprs, const Vec& x);
Vec evaluate(const std::vector<Expr>& exprs, const Vec& x);
Mat jacobian_at(const std::vector<Expr>& exprs, const Vec& x);

// Component i is u^T H_i u.
Vec second_directional(const SmoothMapAtPoint& map, const Vec& u);

// Any division or log present (differentiable only on the natural domain).
bool uses_partial_ops(const Expr& e);

}  // namespace djopt
