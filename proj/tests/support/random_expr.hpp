#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "djopt/expr.hpp"

namespace djopt::testing {

// Random smooth expression in x1..xn; divisions and logs only of 1 + square
// or 2 + square so every point is in the domain.
inline Expr random_expr(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> var(1, n);
  std::uniform_int_distribution<int> small(1, 4);
  if (depth == 0) {
    const int k = pick(rng);
    if (k < 6) return Expr::var(var(rng));
    if (k < 8) return Expr::constant(small(rng));
    return Expr::constant(Literal{small(rng) * 5, 1});
  }
  auto sub = [&] { return random_expr(rng, n, depth - 1); };
  auto leaf = [&] { return random_expr(rng, n, 0); };
  switch (pick(rng)) {
    case 0:
    case 1: return sub() + sub();
    case 2: return sub() - sub();
    case 3:
    case 4: return sub() * sub();
    case 5: return Expr::pow(sub(), 2 + pick(rng) % 2);
    case 6: return Expr::unary(pick(rng) % 2 ? Op::Sin : Op::Cos, sub());
    case 7: return Expr::unary(Op::Exp, Expr::constant(Literal{5, 1}) * leaf());
    case 8: return sub() / (Expr::constant(2) + Expr::pow(leaf(), 2));
    default: return Expr::unary(Op::Log, Expr::constant(1) + Expr::pow(sub(), 2));
  }
}

// Long-double evaluation for finite-difference oracles.
inline long double eval_ld(const Expr& e, const std::vector<long double>& x) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Const: return static_cast<long double>(n.literal.mantissa) / std::pow(10.0L, n.literal.scale);
    case Op::Var: return x.at(static_cast<std::size_t>(n.var - 1));
    case Op::Add: return eval_ld(n.a, x) + eval_ld(n.b, x);
    case Op::Sub: return eval_ld(n.a, x) - eval_ld(n.b, x);
    case Op::Mul: return eval_ld(n.a, x) * eval_ld(n.b, x);
    case Op::Div: return eval_ld(n.a, x) / eval_ld(n.b, x);
    case Op::Neg: return -eval_ld(n.a, x);
    case Op::Pow: return std::pow(eval_ld(n.a, x), n.power);
    case Op::Exp: return std::exp(eval_ld(n.a, x));
    case Op::Log: return std::log(eval_ld(n.a, x));
    case Op::Sin: return std::sin(eval_ld(n.a, x));
    case Op::Cos: return std::cos(eval_ld(n.a, x));
  }
  return 0;
}

// Central differences (step h) of value-only evaluation: gradient and Hessian.
inline void central_differences(const Expr& e, const Vec& x, double h, Vec& g, Mat& H) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<long double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = x(static_cast<Eigen::Index>(i));
  const long double hh = h;
  auto f = [&](std::size_t a, int sa, std::size_t b, int sb) {
    auto y = base;
    if (a < n) y[a] += sa * hh;
    if (b < n) y[b] += sb * hh;
    return eval_ld(e, y);
  };
  g = Vec(x.size());
  H = Mat(x.size(), x.size());
  for (std::size_t a = 0; a < n; ++a) {
    g(static_cast<Eigen::Index>(a)) = static_cast<double>((f(a, 1, n, 0) - f(a, -1, n, 0)) / (2 * hh));
    for (std::size_t b = 0; b < n; ++b)
      H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          static_cast<double>((f(a, 1, b, 1) - f(a, 1, b, -1) - f(a, -1, b, 1) + f(a, -1, b, -1)) / (4 * hh * hh));
  }
}

// One Richardson step on central differences with steps h and h/2.
inline void finite_differences(const Expr& e, const Vec& x, double h, Vec& g, Mat& H) {
  Vec g1, g2;
  Mat H1, H2;
  central_differences(e, x, h, g1, H1);
  central_differences(e, x, h / 2, g2, H2);
  g = (4 * g2 - g1) / 3;
  H = (4 * H2 - H1) / 3;
}

}  // namespace djopt::testing
