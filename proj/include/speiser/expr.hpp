#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "speiser/sphere.hpp"

namespace speiser {

/// Complex number stored as m * e^s with s real, so nested exponentials
/// cannot overflow. Normalized so that |m| stays near 1 once it leaves [1e-100, 1e100].
struct Scaled {
  Complex m{0.0, 0.0};
  double s = 0.0;

  Scaled() = default;
  Scaled(Complex z) : m(z) {}  // NOLINT: implicit by intent
  Scaled(Complex mant, double shift);

  bool is_zero() const { return m == Complex(0.0, 0.0); }
  /// ln|value|; -inf for zero.
  double log_abs() const;
  double arg() const { return std::arg(m); }
  /// Native value. Overflows to inf components when s is large.
  Complex value() const;
  /// True when value() is exactly representable without overflow (|value| < 1e300).
  bool fits() const { return is_zero() || log_abs() < 690.0; }

  friend Scaled operator+(const Scaled& a, const Scaled& b);
  friend Scaled operator-(const Scaled& a, const Scaled& b);
  friend Scaled operator*(const Scaled& a, const Scaled& b);
  friend Scaled operator-(const Scaled& a);
};

Scaled scaled_exp(const Scaled& x);
/// e^x - 1, accurate for small |x|.
Scaled scaled_expm1(const Scaled& x);
Scaled scaled_pow(const Scaled& x, int n);

enum class Op { Const, Var, Add, Mul, Pow, Exp, Expm1 };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  Complex c{0.0, 0.0};  // Const
  int n = 0;            // Pow exponent (>= 0)
  std::vector<NodePtr> args;
};

/// Immutable expression tree over z, complex constants, +, *, integer powers and exp.
/// Expm1 stands for exp(h) - 1 and is produced by the parser for that pattern.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  static Expr constant(Complex c);
  static Expr var();
  static Expr add(const Expr& a, const Expr& b);
  static Expr mul(const Expr& a, const Expr& b);
  static Expr pow(const Expr& a, int n);
  static Expr exp(const Expr& a);
  static Expr expm1(const Expr& a);

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  bool valid() const { return static_cast<bool>(node_); }

  Scaled eval(const Scaled& z) const;
  Complex eval(Complex z) const { return eval(Scaled(z)).value(); }

  /// Symbolic derivative, lightly simplified.
  Expr derivative() const;
  /// Replace z by `inner`.
  Expr substitute(const Expr& inner) const;

  bool depends_on_z() const;
  std::optional<Complex> constant_value() const;  // set when z-free
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr node_;
};

/// Parse the function mini-grammar, e.g. `a*(exp(exp(z))-1)+1 with a=100`.
/// Supports + - * /, ^ with a non-negative integer exponent, exp(...), z,
/// the imaginary unit i, numbers such as 2.5 or 3i, and named parameters
/// bound in the `with` clause or in `params`. Division is by z-free expressions only.
Expr parse_expr(const std::string& text, const std::map<std::string, Complex>& params = {});

/// Entire function from the catalog grammar with its cached derivative.
class CatalogFunction {
 public:
  CatalogFunction() = default;
  explicit CatalogFunction(Expr f, std::string source = {});
  static CatalogFunction parse(const std::string& text, const std::map<std::string, Complex>& params = {});

  const Expr& expr() const { return f_; }
  const Expr& derivative_expr() const { return df_; }
  const std::string& source() const { return source_; }

  Scaled eval_scaled(const Scaled& z) const { return f_.eval(z); }
  Scaled deriv_scaled(const Scaled& z) const { return df_.eval(z); }
  /// Native evaluation; NaN when the value cannot be represented.
  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;

 private:
  Expr f_;
  Expr df_;
  std::string source_;
};

}  // namespace speiser
