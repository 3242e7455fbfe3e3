#include "spinframe/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "spinframe/error.hpp"

namespace spinframe {

Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}

Jet2 operator-(const Jet2& a) { return {-a.value, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }

Jet2 operator*(double s, const Jet2& a) {
  return {s * a.value, s * a.du, s * a.dv, s * a.duu, s * a.duv, s * a.dvv};
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value,
          a.du * b.value + a.value * b.du,
          a.dv * b.value + a.value * b.dv,
          a.duu * b.value + 2.0 * a.du * b.du + a.value * b.duu,
          a.duv * b.value + a.du * b.dv + a.dv * b.du + a.value * b.duv,
          a.dvv * b.value + 2.0 * a.dv * b.dv + a.value * b.dvv};
}

Jet2 compose(const Jet2& a, double g0, double g1, double g2) {
  return {g0,
          g1 * a.du,
          g1 * a.dv,
          g2 * a.du * a.du + g1 * a.duu,
          g2 * a.du * a.dv + g1 * a.duv,
          g2 * a.dv * a.dv + g1 * a.dvv};
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double r = 1.0 / b.value;
  return a * compose(b, r, -r * r, 2.0 * r * r * r);
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Atan: return "atan";
  }
  return "?";
}

namespace {
Node leaf(Op op, double x = 0.0) {
  Node n;
  n.op = op;
  n.number = x;
  return n;
}
}  // namespace

Expr make_num(double x) { return std::make_shared<Node>(leaf(Op::Num, x)); }
Expr make_var_u() { return std::make_shared<Node>(leaf(Op::VarU)); }
Expr make_var_v() { return std::make_shared<Node>(leaf(Op::VarV)); }
Expr make_pi() { return std::make_shared<Node>(leaf(Op::Pi)); }
Expr make_unary(Op op, Expr a) {
  Node n = leaf(op);
  n.lhs = std::move(a);
  return std::make_shared<Node>(std::move(n));
}
Expr make_binary(Op op, Expr a, Expr b) {
  Node n = leaf(op);
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return std::make_shared<Node>(std::move(n));
}
Expr make_func(Fn f, Expr a) {
  Node n = leaf(Op::Func);
  n.fn = f;
  n.lhs = std::move(a);
  return std::make_shared<Node>(std::move(n));
}

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < src.size() && src[pos] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw ParseError(ErrorKind::Syntax, msg, at);
  }
  void expect(char c) {
    if (!accept(c)) {
      skip_ws();
      fail(std::string("expected '") + c + "'" + (pos < src.size() ? "" : " before end of input"), pos);
    }
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }
  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }
  Expr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    return power();
  }
  Expr power() {
    Expr base = primary();
    if (accept('^')) return make_binary(Op::Pow, base, unary());
    return base;
  }
  Expr primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input", pos);
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'", pos);
  }
  Expr number() {
    const std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t p = pos + 1;
      if (p < src.size() && (src[p] == '+' || src[p] == '-')) ++p;
      if (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) {
        while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
        pos = p;
      }
    }
    const std::string text(src.substr(start, pos - start));
    if (text == ".") fail("malformed number", start);
    return make_num(std::strtod(text.c_str(), nullptr));
  }
  Expr identifier() {
    const std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name(src.substr(start, pos - start));
    if (name == "u") return make_var_u();
    if (name == "v") return make_var_v();
    if (name == "pi") return make_pi();
    static const std::pair<const char*, Fn> fns[] = {
        {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"exp", Fn::Exp},
        {"log", Fn::Log},   {"sqrt", Fn::Sqrt}, {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh},
        {"tanh", Fn::Tanh}, {"atan", Fn::Atan}};
    for (const auto& [fname, fn] : fns) {
      if (name != fname) continue;
      if (!accept('(')) {
        skip_ws();
        throw ParseError(ErrorKind::Arity, "function '" + name + "' expects one argument", pos);
      }
      skip_ws();
      if (peek(')')) throw ParseError(ErrorKind::Arity, "function '" + name + "' expects one argument", pos);
      Expr arg = expression();
      if (peek(',')) throw ParseError(ErrorKind::Arity, "function '" + name + "' expects one argument", pos);
      expect(')');
      return make_func(fn, arg);
    }
    throw ParseError(ErrorKind::UnknownIdentifier, "unknown identifier \"" + name + "\"", start);
  }
};

int precedence(const Expr& e) {
  switch (e->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void print_into(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_into(e, out);
  if (wrap) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  switch (e->op) {
    case Op::Num: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e->number);
      out += buf;
      return;
    }
    case Op::VarU: out += 'u'; return;
    case Op::VarV: out += 'v'; return;
    case Op::Pi: out += "pi"; return;
    case Op::Neg:
      out += '-';
      print_wrapped(e->lhs, precedence(e->lhs) < 3, out);
      return;
    case Op::Func:
      out += fn_name(e->fn);
      print_wrapped(e->lhs, true, out);
      return;
    case Op::Pow:
      print_wrapped(e->lhs, precedence(e->lhs) < 5, out);
      out += '^';
      print_wrapped(e->rhs, precedence(e->rhs) < 3, out);
      return;
    default: break;
  }
  const int p = precedence(e);
  const char sym = e->op == Op::Add ? '+' : e->op == Op::Sub ? '-' : e->op == Op::Mul ? '*' : '/';
  print_wrapped(e->lhs, precedence(e->lhs) < p, out);
  out += sym;
  print_wrapped(e->rhs, precedence(e->rhs) <= p, out);
}

[[noreturn]] void domain_fail(const std::string& what, const Expr& e) {
  throw Error(ErrorKind::Domain, what + " in subexpression '" + print(e) + "'");
}

Jet2 eval_rec(const Expr& e, double u, double v);

Jet2 int_power(const Jet2& a, int n) {
  Jet2 r = Jet2::constant(1.0);
  for (int k = 0; k < std::abs(n); ++k) r = r * a;
  if (n < 0) r = Jet2::constant(1.0) / r;
  return r;
}

Jet2 eval_pow(const Expr& e, double u, double v) {
  const Jet2 a = eval_rec(e->lhs, u, v);
  if (!depends_on_uv(e->rhs)) {
    const double n = eval_rec(e->rhs, u, v).value;
    if (n == std::round(n)) {
      if (n < 0 && a.value == 0.0) domain_fail("negative power of zero", e);
      if (std::abs(n) <= 8) return int_power(a, static_cast<int>(n));
      const double g0 = std::pow(a.value, n);
      const double g1 = n * std::pow(a.value, n - 1);
      const double g2 = n * (n - 1) * std::pow(a.value, n - 2);
      return compose(a, g0, g1, g2);
    }
  }
  if (a.value <= 0.0) domain_fail("non-positive base for non-integer power", e);
  const Jet2 b = eval_rec(e->rhs, u, v);
  const double la = std::log(a.value);
  const Jet2 loga = compose(a, la, 1.0 / a.value, -1.0 / (a.value * a.value));
  const Jet2 x = b * loga;
  const double ex = std::exp(x.value);
  return compose(x, ex, ex, ex);
}

Jet2 eval_func(const Expr& e, const Jet2& a) {
  const double x = a.value;
  switch (e->fn) {
    case Fn::Sin: return compose(a, std::sin(x), std::cos(x), -std::sin(x));
    case Fn::Cos: return compose(a, std::cos(x), -std::sin(x), -std::cos(x));
    case Fn::Tan: {
      const double c = std::cos(x);
      if (std::abs(c) < 1e-300) domain_fail("tan at a pole", e);
      const double t = std::tan(x);
      const double s2 = 1.0 + t * t;
      return compose(a, t, s2, 2.0 * t * s2);
    }
    case Fn::Exp: {
      const double ex = std::exp(x);
      return compose(a, ex, ex, ex);
    }
    case Fn::Log:
      if (x <= 0.0) domain_fail("log of non-positive value", e);
      return compose(a, std::log(x), 1.0 / x, -1.0 / (x * x));
    case Fn::Sqrt: {
      if (x <= 0.0) domain_fail("sqrt of non-positive value", e);
      const double s = std::sqrt(x);
      return compose(a, s, 0.5 / s, -0.25 / (s * x));
    }
    case Fn::Sinh: return compose(a, std::sinh(x), std::cosh(x), std::sinh(x));
    case Fn::Cosh: return compose(a, std::cosh(x), std::sinh(x), std::cosh(x));
    case Fn::Tanh: {
      const double t = std::tanh(x);
      const double s2 = 1.0 - t * t;
      return compose(a, t, s2, -2.0 * t * s2);
    }
    case Fn::Atan: {
      const double q = 1.0 / (1.0 + x * x);
      return compose(a, std::atan(x), q, -2.0 * x * q * q);
    }
  }
  domain_fail("unknown function", e);
}

Jet2 eval_rec(const Expr& e, double u, double v) {
  switch (e->op) {
    case Op::Num: return Jet2::constant(e->number);
    case Op::VarU: return Jet2::var_u(u);
    case Op::VarV: return Jet2::var_v(v);
    case Op::Pi: return Jet2::constant(M_PI);
    case Op::Neg: return -eval_rec(e->lhs, u, v);
    case Op::Add: return eval_rec(e->lhs, u, v) + eval_rec(e->rhs, u, v);
    case Op::Sub: return eval_rec(e->lhs, u, v) - eval_rec(e->rhs, u, v);
    case Op::Mul: return eval_rec(e->lhs, u, v) * eval_rec(e->rhs, u, v);
    case Op::Div: {
      const Jet2 b = eval_rec(e->rhs, u, v);
      if (b.value == 0.0) domain_fail("division by zero", e);
      return eval_rec(e->lhs, u, v) / b;
    }
    case Op::Pow: return eval_pow(e, u, v);
    case Op::Func: return eval_func(e, eval_rec(e->lhs, u, v));
  }
  domain_fail("malformed node", e);
}

}  // namespace

Expr parse(std::string_view source) {
  Parser p{source};
  Expr e = p.expression();
  p.skip_ws();
  if (p.pos != source.size()) {
    if (source[p.pos] == ')') p.fail("unbalanced ')'", p.pos);
    p.fail(std::string("unexpected '") + source[p.pos] + "'", p.pos);
  }
  return e;
}

std::string print(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

bool same_tree(const Expr& a, const Expr& b) {
  if (!a || !b) return !a && !b;
  if (a->op != b->op) return false;
  if (a->op == Op::Num && a->number != b->number) return false;
  if (a->op == Op::Func && a->fn != b->fn) return false;
  return same_tree(a->lhs, b->lhs) && same_tree(a->rhs, b->rhs);
}

bool depends_on_uv(const Expr& e) {
  if (!e) return false;
  if (e->op == Op::VarU || e->op == Op::VarV) return true;
  return depends_on_uv(e->lhs) || depends_on_uv(e->rhs);
}

Jet2 eval_jet2(const Expr& e, double u, double v) { return eval_rec(e, u, v); }

double eval(const Expr& e, double u, double v) { return eval_rec(e, u, v).value; }

}  // namespace spinframe
