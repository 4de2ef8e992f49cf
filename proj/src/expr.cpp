#include "speiser/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

namespace speiser {

// ---------------------------------------------------------------- Scaled

Scaled::Scaled(Complex mant, double shift) : m(mant), s(shift) {
  const double a = std::abs(m);
  if (a == 0.0) {
    s = 0.0;
  } else if (!std::isfinite(a)) {
    throw DomainError("non-finite mantissa in scaled arithmetic");
  } else if (a > 1e100 || a < 1e-100) {
    s += std::log(a);
    m /= a;
  }
}

double Scaled::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(m)) + s;
}

Complex Scaled::value() const {
  if (is_zero()) return {0.0, 0.0};
  return m * std::exp(s);
}

Scaled operator+(const Scaled& a, const Scaled& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double s = std::max(a.s, b.s);
  return Scaled(a.m * std::exp(a.s - s) + b.m * std::exp(b.s - s), s);
}

Scaled operator-(const Scaled& a) { return Scaled(-a.m, a.s); }

Scaled operator-(const Scaled& a, const Scaled& b) { return a + (-b); }

Scaled operator*(const Scaled& a, const Scaled& b) {
  if (a.is_zero() || b.is_zero()) return Scaled();
  return Scaled(a.m * b.m, a.s + b.s);
}

Scaled scaled_exp(const Scaled& x) {
  if (!x.is_zero() && x.log_abs() > 700.0) throw DomainError("exponent too large for scaled arithmetic");
  const Complex v = x.value();
  return Scaled(std::polar(1.0, v.imag()), v.real());
}

Scaled scaled_expm1(const Scaled& x) {
  if (!x.is_zero() && x.log_abs() > 700.0) throw DomainError("exponent too large for scaled arithmetic");
  Complex v = x.value();
  // e^{2 pi i k} = 1, so reduce the imaginary part first.
  const double turns = std::round(v.imag() / (2.0 * std::numbers::pi));
  if (std::abs(turns) < 1e15) v -= Complex(0.0, 2.0 * std::numbers::pi * turns);
  if (std::abs(v) < 0.5) {
    const double a = v.real();
    const double b = v.imag();
    const double sb = std::sin(0.5 * b);
    return Scaled(Complex(std::expm1(a) * std::cos(b) - 2.0 * sb * sb, std::exp(a) * std::sin(b)));
  }
  return scaled_exp(x) - Scaled(Complex(1.0, 0.0));
}

Scaled scaled_pow(const Scaled& x, int n) {
  if (n < 0) throw DomainError("negative powers are outside the catalog grammar");
  Scaled result(Complex(1.0, 0.0));
  Scaled base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------- Expr

namespace {

NodePtr make(Op op, std::vector<NodePtr> args, Complex c = {}, int n = 0) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->args = std::move(args);
  node->c = c;
  node->n = n;
  return node;
}

bool is_const(const Expr& e, Complex c) { return e.node().op == Op::Const && e.node().c == c; }

std::string format_complex(Complex c) {
  char buf[96];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
  } else if (c.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", c.imag());
  } else {
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  }
  std::string s = buf;
  if (!s.empty() && s[0] == '-') s = "(" + s + ")";
  return s;
}

}  // namespace

Expr Expr::constant(Complex c) { return Expr(make(Op::Const, {}, c)); }
Expr Expr::var() { return Expr(make(Op::Var, {})); }

Expr Expr::add(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a.node().op == Op::Const && b.node().op == Op::Const) return constant(a.node().c + b.node().c);
  // exp(h) - 1 becomes expm1(h).
  if (a.node().op == Op::Exp && is_const(b, -1.0)) return expm1(Expr(a.node().args[0]));
  if (b.node().op == Op::Exp && is_const(a, -1.0)) return expm1(Expr(b.node().args[0]));
  return Expr(make(Op::Add, {a.ptr(), b.ptr()}));
}

Expr Expr::mul(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a.node().op == Op::Const && b.node().op == Op::Const) return constant(a.node().c * b.node().c);
  if (b.node().op == Op::Const) return Expr(make(Op::Mul, {b.ptr(), a.ptr()}));
  return Expr(make(Op::Mul, {a.ptr(), b.ptr()}));
}

Expr Expr::pow(const Expr& a, int n) {
  if (n < 0) throw DomainError("negative powers are outside the catalog grammar");
  if (n == 0) return constant(1.0);
  if (n == 1) return a;
  if (a.node().op == Op::Const) return constant(scaled_pow(Scaled(a.node().c), n).value());
  return Expr(make(Op::Pow, {a.ptr()}, {}, n));
}

Expr Expr::exp(const Expr& a) {
  if (a.node().op == Op::Const) return constant(std::exp(a.node().c));
  return Expr(make(Op::Exp, {a.ptr()}));
}

Expr Expr::expm1(const Expr& a) {
  if (a.node().op == Op::Const) return constant(scaled_expm1(Scaled(a.node().c)).value());
  return Expr(make(Op::Expm1, {a.ptr()}));
}

Scaled Expr::eval(const Scaled& z) const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::Const:
      return Scaled(nd.c);
    case Op::Var:
      return z;
    case Op::Add:
      return Expr(nd.args[0]).eval(z) + Expr(nd.args[1]).eval(z);
    case Op::Mul:
      return Expr(nd.args[0]).eval(z) * Expr(nd.args[1]).eval(z);
    case Op::Pow:
      return scaled_pow(Expr(nd.args[0]).eval(z), nd.n);
    case Op::Exp:
      return scaled_exp(Expr(nd.args[0]).eval(z));
    case Op::Expm1:
      return scaled_expm1(Expr(nd.args[0]).eval(z));
  }
  return {};
}

Expr Expr::derivative() const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::Const:
      return constant(0.0);
    case Op::Var:
      return constant(1.0);
    case Op::Add:
      return add(Expr(nd.args[0]).derivative(), Expr(nd.args[1]).derivative());
    case Op::Mul: {
      const Expr u(nd.args[0]);
      const Expr v(nd.args[1]);
      return add(mul(u.derivative(), v), mul(u, v.derivative()));
    }
    case Op::Pow: {
      const Expr u(nd.args[0]);
      return mul(mul(constant(static_cast<double>(nd.n)), pow(u, nd.n - 1)), u.derivative());
    }
    case Op::Exp:
    case Op::Expm1: {
      const Expr u(nd.args[0]);
      return mul(exp(u), u.derivative());
    }
  }
  return {};
}

Expr Expr::substitute(const Expr& inner) const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::Const:
      return *this;
    case Op::Var:
      return inner;
    case Op::Add:
      return add(Expr(nd.args[0]).substitute(inner), Expr(nd.args[1]).substitute(inner));
    case Op::Mul:
      return mul(Expr(nd.args[0]).substitute(inner), Expr(nd.args[1]).substitute(inner));
    case Op::Pow:
      return pow(Expr(nd.args[0]).substitute(inner), nd.n);
    case Op::Exp:
      return exp(Expr(nd.args[0]).substitute(inner));
    case Op::Expm1:
      return expm1(Expr(nd.args[0]).substitute(inner));
  }
  return {};
}

bool Expr::depends_on_z() const {
  if (node_->op == Op::Var) return true;
  for (const auto& a : node_->args) {
    if (Expr(a).depends_on_z()) return true;
  }
  return false;
}

std::optional<Complex> Expr::constant_value() const {
  if (depends_on_z()) return std::nullopt;
  return eval(Complex(0.0, 0.0));
}

std::string Expr::to_string() const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::Const:
      return format_complex(nd.c);
    case Op::Var:
      return "z";
    case Op::Add:
      return "(" + Expr(nd.args[0]).to_string() + " + " + Expr(nd.args[1]).to_string() + ")";
    case Op::Mul:
      return Expr(nd.args[0]).to_string() + "*" + Expr(nd.args[1]).to_string();
    case Op::Pow:
      return "(" + Expr(nd.args[0]).to_string() + ")^" + std::to_string(nd.n);
    case Op::Exp:
      return "exp(" + Expr(nd.args[0]).to_string() + ")";
    case Op::Expm1:
      return "(exp(" + Expr(nd.args[0]).to_string() + ") - 1)";
  }
  return "?";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.op != y.op || x.c != y.c || x.n != y.n || x.args.size() != y.args.size()) return false;
  for (size_t i = 0; i < x.args.size(); ++i) {
    if (!(Expr(x.args[i]) == Expr(y.args[i]))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string text, const std::map<std::string, Complex>& params) : s_(std::move(text)), params_(params) {}

  Expr parse_all() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("function spec, column " + std::to_string(pos_ + 1) + ": " + msg + " in '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = Expr::add(e, product());
      } else if (accept('-')) {
        e = Expr::add(e, Expr::mul(Expr::constant(-1.0), product()));
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = Expr::mul(e, unary());
      } else if (accept('/')) {
        const Expr d = unary();
        const auto dv = d.constant_value();
        if (!dv) fail("division by a z-dependent expression");
        if (*dv == Complex(0.0, 0.0)) fail("division by zero");
        e = Expr::mul(e, Expr::constant(1.0 / *dv));
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::mul(Expr::constant(-1.0), unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip();
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      return Expr::pow(base, std::stoi(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double x = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      if (pos_ < s_.size() && s_[pos_] == 'i' &&
          (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        return Expr::constant(Complex(0.0, x));
      }
      return Expr::constant(x);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "z") return Expr::var();
      if (id == "i") return Expr::constant(Complex(0.0, 1.0));
      if (id == "exp") {
        if (!accept('(')) fail("expected '(' after exp");
        Expr e = sum();
        if (!accept(')')) fail("expected ')'");
        return Expr::exp(e);
      }
      if (auto it = params_.find(id); it != params_.end()) return Expr::constant(it->second);
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  const std::map<std::string, Complex>& params_;
  size_t pos_ = 0;
};

// Splits "expr with a=1, b=2" into the expression and its bindings.
std::pair<std::string, std::string> split_with(const std::string& text) {
  for (size_t p = text.find("with"); p != std::string::npos; p = text.find("with", p + 1)) {
    const bool left = p == 0 || std::isspace(static_cast<unsigned char>(text[p - 1]));
    const bool right = p + 4 < text.size() && std::isspace(static_cast<unsigned char>(text[p + 4]));
    if (left && right) return {text.substr(0, p), text.substr(p + 4)};
  }
  return {text, ""};
}

}  // namespace

Expr parse_expr(const std::string& text, const std::map<std::string, Complex>& params) {
  auto [body, bindings] = split_with(text);
  std::map<std::string, Complex> all = params;
  std::string item;
  std::vector<std::string> items;
  for (char ch : bindings + ",") {
    if (ch == ',') {
      items.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  for (const auto& it : items) {
    if (it.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw DomainError("binding '" + it + "' needs the form name=value");
    std::string name = it.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (name.empty() || name == "z" || name == "i" || name == "exp") throw DomainError("bad parameter name '" + name + "'");
    const Expr v = Parser(it.substr(eq + 1), all).parse_all();
    const auto cv = v.constant_value();
    if (!cv) throw DomainError("parameter '" + name + "' must not depend on z");
    all[name] = *cv;
  }
  return Parser(body, all).parse_all();
}

CatalogFunction::CatalogFunction(Expr f, std::string source)
    : f_(std::move(f)), df_(f_.derivative()), source_(std::move(source)) {
  if (source_.empty()) source_ = f_.to_string();
}

CatalogFunction CatalogFunction::parse(const std::string& text, const std::map<std::string, Complex>& params) {
  return CatalogFunction(parse_expr(text, params), text);
}

namespace {

Complex native(const Expr& e, Complex z) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    const Scaled v = e.eval(Scaled(z));
    if (!v.fits()) return {nan, nan};
    return v.value();
  } catch (const DomainError&) {
    return {nan, nan};
  }
}

}  // namespace

Complex CatalogFunction::eval(Complex z) const { return native(f_, z); }
Complex CatalogFunction::deriv(Complex z) const { return native(df_, z); }

}  // namespace speiser
