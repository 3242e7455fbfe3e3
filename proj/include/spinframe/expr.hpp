#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace spinframe {

// Value plus all partials up to order two in (u, v).
struct Jet2 {
  double value = 0.0;
  double du = 0.0, dv = 0.0;
  double duu = 0.0, duv = 0.0, dvv = 0.0;

  static Jet2 constant(double c) { return Jet2{c}; }
  static Jet2 var_u(double u) { return Jet2{u, 1.0}; }
  static Jet2 var_v(double v) { return Jet2{v, 0.0, 1.0}; }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);
Jet2 operator/(const Jet2& a, const Jet2& b);
// g(a) given g, g', g'' at a.value.
Jet2 compose(const Jet2& a, double g0, double g1, double g2);

enum class Op { Num, VarU, VarV, Pi, Neg, Add, Sub, Mul, Div, Pow, Func };
enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Atan };

const char* fn_name(Fn f);

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Num;
  double number = 0.0;
  Fn fn = Fn::Sin;
  Expr lhs, rhs;  // unary nodes and functions use lhs only
};

Expr parse(std::string_view source);
std::string print(const Expr& e);
bool same_tree(const Expr& a, const Expr& b);
bool depends_on_uv(const Expr& e);

Jet2 eval_jet2(const Expr& e, double u, double v);
double eval(const Expr& e, double u, double v);

Expr make_num(double x);
Expr make_var_u();
Expr make_var_v();
Expr make_pi();
Expr make_unary(Op op, Expr a);
Expr make_binary(Op op, Expr a, Expr b);
Expr make_func(Fn f, Expr a);

}  // namespace spinframe
