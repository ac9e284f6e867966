#include "djopt/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "djopt/error.hpp"

namespace djopt {

double Literal::value() const { return static_cast<double>(mantissa) / std::pow(10.0, scale); }

std::string Literal::str() const {
  std::string digits = std::to_string(mantissa);
  if (scale == 0) return digits;
  if (static_cast<int>(digits.size()) <= scale) digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1, '0');
  digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
  return digits;
}

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

const char* func_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    default: return "";
  }
}

Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

}  // namespace

Expr Expr::constant(Literal c) {
  while (c.scale > 0 && c.mantissa % 10 == 0) c.mantissa /= 10, --c.scale;
  Node n;
  n.op = Op::Const;
  n.literal = c;
  return make(std::move(n));
}

Expr Expr::constant(std::int64_t v) {
  if (v < 0) return unary(Op::Neg, constant(-v));
  return constant(Literal{v, 0});
}

Expr Expr::var(int index) {
  if (index < 1) fail(ErrorCode::InvalidArgument, "variables are numbered from 1");
  Node n;
  n.op = Op::Var;
  n.var = index;
  return make(std::move(n));
}

Expr Expr::unary(Op op, Expr a) {
  Node n;
  n.op = op;
  n.a = std::move(a);
  return make(std::move(n));
}

Expr Expr::binary(Op op, Expr a, Expr b) {
  Node n;
  n.op = op;
  n.a = std::move(a);
  n.b = std::move(b);
  return make(std::move(n));
}

Expr Expr::pow(Expr a, int k) {
  Node n;
  n.op = Op::Pow;
  n.power = k;
  n.a = std::move(a);
  return make(std::move(n));
}

int Expr::max_var() const {
  const Node& n = node();
  switch (n.op) {
    case Op::Const: return 0;
    case Op::Var: return n.var;
    default: return std::max(n.a.empty() ? 0 : n.a.max_var(), n.b.empty() ? 0 : n.b.max_var());
  }
}

bool Expr::same(const Expr& o) const {
  const Node& x = node();
  const Node& y = o.node();
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Const: return x.literal == y.literal;
    case Op::Var: return x.var == y.var;
    case Op::Pow: return x.power == y.power && x.a.same(y.a);
    default:
      if (!x.a.same(y.a)) return false;
      return x.b.empty() ? y.b.empty() : (!y.b.empty() && x.b.same(y.b));
  }
}

std::string Expr::str() const {
  const Node& n = node();
  auto wrap = [](const Expr& e, bool parens) { return parens ? "(" + e.str() + ")" : e.str(); };
  const int p = precedence(n.op);
  switch (n.op) {
    case Op::Const: return n.literal.str();
    case Op::Var: return "x" + std::to_string(n.var);
    case Op::Add: return wrap(n.a, precedence(n.a.node().op) < p) + " + " + wrap(n.b, precedence(n.b.node().op) <= p);
    case Op::Sub: return wrap(n.a, precedence(n.a.node().op) < p) + " - " + wrap(n.b, precedence(n.b.node().op) <= p);
    case Op::Mul: return wrap(n.a, precedence(n.a.node().op) < p) + "*" + wrap(n.b, precedence(n.b.node().op) <= p);
    case Op::Div: return wrap(n.a, precedence(n.a.node().op) < p) + "/" + wrap(n.b, precedence(n.b.node().op) <= p);
    case Op::Neg: return "-" + wrap(n.a, precedence(n.a.node().op) < p);
    case Op::Pow: return wrap(n.a, precedence(n.a.node().op) <= p) + "^" + std::to_string(n.power);
    default: return std::string(func_name(n.op)) + "(" + n.a.str() + ")";
  }
}

double Expr::eval(const Vec& x) const {
  const Node& n = node();
  switch (n.op) {
    case Op::Const: return n.literal.value();
    case Op::Var:
      require_dims(n.var <= x.size(), "variable x" + std::to_string(n.var) + " beyond point dimension");
      return x(n.var - 1);
    case Op::Add: return n.a.eval(x) + n.b.eval(x);
    case Op::Sub: return n.a.eval(x) - n.b.eval(x);
    case Op::Mul: return n.a.eval(x) * n.b.eval(x);
    case Op::Div: {
      const double d = n.b.eval(x);
      if (d == 0.0) fail(ErrorCode::DomainError, "division by zero in " + str());
      return n.a.eval(x) / d;
    }
    case Op::Neg: return -n.a.eval(x);
    case Op::Pow: {
      const double v = n.a.eval(x);
      if (v == 0.0 && n.power < 0) fail(ErrorCode::DomainError, "negative power of zero in " + str());
      return std::pow(v, n.power);
    }
    case Op::Exp: return std::exp(n.a.eval(x));
    case Op::Log: {
      const double v = n.a.eval(x);
      if (!(v > 0)) fail(ErrorCode::DomainError, "log of nonpositive value in " + str());
      return std::log(v);
    }
    case Op::Sin: return std::sin(n.a.eval(x));
    case Op::Cos: return std::cos(n.a.eval(x));
  }
  return 0.0;
}

bool uses_partial_ops(const Expr& e) {
  const Node& n = e.node();
  if (n.op == Op::Div || n.op == Op::Log || (n.op == Op::Pow && n.power < 0)) return true;
  return (!n.a.empty() && uses_partial_ops(n.a)) || (!n.b.empty() && uses_partial_ops(n.b));
}

// ---- parser ----

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Bad };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : src_(s) { advance(); }

  Expr parse_all() {
    Expr e = expression();
    if (cur_.kind != Tok::End) error("operator or end of input");
    return e;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Token cur_;

  [[noreturn]] void error(const std::string& expected) const {
    std::ostringstream os;
    os << "line " << cur_.line << ", column " << cur_.column << ": expected " << expected << ", found "
       << (cur_.kind == Tok::End ? std::string("end of input") : "'" + cur_.text + "'");
    throw SyntaxError(cur_.line, cur_.column, expected, os.str());
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') ++line_, col_ = 1;
      else ++col_;
      ++pos_;
    }
    cur_ = Token{};
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= src_.size()) return;
    const char c = src_[pos_];
    std::size_t len = 1;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      cur_.kind = Tok::Number;
      len = 0;
      while (pos_ + len < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_ + len])) || src_[pos_ + len] == '.'))
        ++len;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      cur_.kind = Tok::Ident;
      len = 0;
      while (pos_ + len < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_ + len]))) ++len;
    } else {
      switch (c) {
        case '+': cur_.kind = Tok::Plus; break;
        case '-': cur_.kind = Tok::Minus; break;
        case '*': cur_.kind = Tok::Star; break;
        case '/': cur_.kind = Tok::Slash; break;
        case '^': cur_.kind = Tok::Caret; break;
        case '(': cur_.kind = Tok::LParen; break;
        case ')': cur_.kind = Tok::RParen; break;
        default: cur_.kind = Tok::Bad;
      }
    }
    cur_.text = src_.substr(pos_, len);
    pos_ += len;
    col_ += len;
  }

  Expr expression() {
    Expr e = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const Op op = cur_.kind == Tok::Plus ? Op::Add : Op::Sub;
      advance();
      e = Expr::binary(op, e, term());
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const Op op = cur_.kind == Tok::Star ? Op::Mul : Op::Div;
      advance();
      e = Expr::binary(op, e, unary());
    }
    return e;
  }

  Expr unary() {
    if (cur_.kind == Tok::Minus) {
      advance();
      return Expr::unary(Op::Neg, unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (cur_.kind != Tok::Caret) return base;
    advance();
    bool neg = false;
    if (cur_.kind == Tok::Minus) neg = true, advance();
    if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string::npos || cur_.text.size() > 6)
      error("integer exponent");
    const int k = std::stoi(cur_.text);
    advance();
    return Expr::pow(base, neg ? -k : k);
  }

  Literal number() {
    const std::string& t = cur_.text;
    const auto dot = t.find('.');
    if (t.find('.', dot == std::string::npos ? t.size() : dot + 1) != std::string::npos || t == "." ||
        t.back() == '.' || t.front() == '.')
      error("number");
    std::string digits = t;
    int scale = 0;
    if (dot != std::string::npos) {
      scale = static_cast<int>(t.size() - dot - 1);
      digits.erase(dot, 1);
    }
    while (scale > 0 && digits.back() == '0') digits.pop_back(), --scale;
    const auto first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    if (digits.size() > 18) error("number with at most 18 significant digits");
    return Literal{std::stoll(digits), scale};
  }

  Expr primary() {
    switch (cur_.kind) {
      case Tok::Number: {
        const Literal c = number();
        advance();
        return Expr::constant(c);
      }
      case Tok::Ident: {
        const std::string id = cur_.text;
        if (id.size() > 1 && id[0] == 'x' && id.find_first_not_of("0123456789", 1) == std::string::npos &&
            id[1] != '0' && id.size() < 8) {
          advance();
          return Expr::var(std::stoi(id.substr(1)));
        }
        Op op;
        if (id == "exp") op = Op::Exp;
        else if (id == "log") op = Op::Log;
        else if (id == "sin") op = Op::Sin;
        else if (id == "cos") op = Op::Cos;
        else error("variable x1..xN or one of exp, log, sin, cos");
        advance();
        if (cur_.kind != Tok::LParen) error("'('");
        advance();
        Expr a = expression();
        if (cur_.kind != Tok::RParen) error("')'");
        advance();
        return Expr::unary(op, a);
      }
      case Tok::LParen: {
        advance();
        Expr e = expression();
        if (cur_.kind != Tok::RParen) error("')'");
        advance();
        return e;
      }
      default: error("number, variable, function or '('");
    }
  }
};

}  // namespace

Expr parse(const std::string& text) { return Parser(text).parse_all(); }

// ---- second-order forward mode ----

Dual2 Dual2::constant(double c, Eigen::Index n) { return Dual2{c, Vec::Zero(n), Mat::Zero(n, n)}; }

Dual2 Dual2::variable(double x, Eigen::Index i, Eigen::Index n) {
  Dual2 d = constant(x, n);
  d.g(i) = 1.0;
  return d;
}

namespace {

// f(a) given f, f', f'' at a.v.
Dual2 chain(const Dual2& a, double f0, double f1, double f2) {
  return Dual2{f0, f1 * a.g, f1 * a.h + f2 * a.g * a.g.transpose()};
}

}  // namespace

Dual2 operator+(const Dual2& a, const Dual2& b) { return Dual2{a.v + b.v, a.g + b.g, a.h + b.h}; }
Dual2 operator-(const Dual2& a, const Dual2& b) { return Dual2{a.v - b.v, a.g - b.g, a.h - b.h}; }
Dual2 operator-(const Dual2& a) { return Dual2{-a.v, -a.g, -a.h}; }

Dual2 operator*(const Dual2& a, const Dual2& b) {
  const Mat cross = a.g * b.g.transpose();
  return Dual2{a.v * b.v, a.v * b.g + b.v * a.g, a.v * b.h + b.v * a.h + cross + cross.transpose()};
}

Dual2 operator/(const Dual2& a, const Dual2& b) {
  if (b.v == 0.0) fail(ErrorCode::DomainError, "division by zero");
  return a * chain(b, 1.0 / b.v, -1.0 / (b.v * b.v), 2.0 / (b.v * b.v * b.v));
}

Dual2 ipow(const Dual2& a, int k) {
  if (k == 0) return Dual2::constant(1.0, a.g.size());
  if (a.v == 0.0 && k < 0) fail(ErrorCode::DomainError, "negative power of zero");
  const double f1 = k * std::pow(a.v, k - 1);
  const double f2 = k == 1 ? 0.0 : k * (k - 1) * std::pow(a.v, k - 2);
  return chain(a, std::pow(a.v, k), f1, f2);
}

Dual2 exp(const Dual2& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

Dual2 log(const Dual2& a) {
  if (!(a.v > 0)) fail(ErrorCode::DomainError, "log of nonpositive value");
  return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

Dual2 sin(const Dual2& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
Dual2 cos(const Dual2& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

Dual2 eval_dual(const Expr& e, const Vec& x) {
  const Node& n = e.node();
  const Eigen::Index dim = x.size();
  switch (n.op) {
    case Op::Const: return Dual2::constant(n.literal.value(), dim);
    case Op::Var:
      require_dims(n.var <= dim, "variable x" + std::to_string(n.var) + " beyond point dimension");
      return Dual2::variable(x(n.var - 1), n.var - 1, dim);
    case Op::Add: return eval_dual(n.a, x) + eval_dual(n.b, x);
    case Op::Sub: return eval_dual(n.a, x) - eval_dual(n.b, x);
    case Op::Mul: return eval_dual(n.a, x) * eval_dual(n.b, x);
    case Op::Div: return eval_dual(n.a, x) / eval_dual(n.b, x);
    case Op::Neg: return -eval_dual(n.a, x);
    case Op::Pow: return ipow(eval_dual(n.a, x), n.power);
    case Op::Exp: return exp(eval_dual(n.a, x));
    case Op::Log: return log(eval_dual(n.a, x));
    case Op::Sin: return sin(eval_dual(n.a, x));
    case Op::Cos: return cos(eval_dual(n.a, x));
  }
  return Dual2::constant(0.0, dim);
}

SmoothMapAtPoint differentiate_at(const std::vector<Expr>& exprs, const Vec& x) {
  const Eigen::Index n = x.size();
  SmoothMapAtPoint m;
  m.value = Vec(static_cast<Eigen::Index>(exprs.size()));
  m.jacobian = Mat(static_cast<Eigen::Index>(exprs.size()), n);
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    const Dual2 d = eval_dual(exprs[i], x);
    const auto r = static_cast<Eigen::Index>(i);
    m.value(r) = d.v;
    m.jacobian.row(r) = d.g.transpose();
    Mat h = d.h;
    h.triangularView<Eigen::StrictlyLower>() = h.transpose().triangularView<Eigen::StrictlyLower>();
    m.hessians.push_back(std::move(h));
  }
  return m;
}

Vec evaluate(const std::vector<Expr>& exprs, const Vec& x) {
  Vec v(static_cast<Eigen::Index>(exprs.size()));
  for (std::size_t i = 0; i < exprs.size(); ++i) v(static_cast<Eigen::Index>(i)) = exprs[i].eval(x);
  return v;
}

Mat jacobian_at(const std::vector<Expr>& exprs, const Vec& x) { return differentiate_at(exprs, x).jacobian; }

Vec second_directional(const SmoothMapAtPoint& map, const Vec& u) {
  require_dims(u.size() == map.jacobian.cols(), "second_directional: direction dimension");
  Vec out(static_cast<Eigen::Index>(map.hessians.size()));
  for (std::size_t i = 0; i < map.hessians.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = u.dot(map.hessians[i] * u);
  return out;
}

}  // namespace djopt
