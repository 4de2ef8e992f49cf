#include "speiser/analytic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

namespace speiser {

namespace {

// ln(1 + e^{2L}) for L = ln|f|.
double log1p_sq(double L) {
  if (L > 0) return 2.0 * L + std::log1p(std::exp(-2.0 * L));
  return std::log1p(std::exp(2.0 * L));
}

void push_unique(std::vector<SingularValue>& out, SingularValue sv) {
  for (auto& existing : out) {
    if (existing.value.is_infinite() != sv.value.is_infinite()) continue;
    const bool same = existing.value.is_infinite() ||
                      std::abs(existing.value.value() - sv.value.value()) <=
                          1e-9 * (1.0 + std::abs(sv.value.value()));
    if (same) {
      if (sv.kind == SingularKind::Asymptotic) existing.kind = SingularKind::Asymptotic;
      return;
    }
  }
  out.push_back(std::move(sv));
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> differentiate(const std::vector<Complex>& c) {
  std::vector<Complex> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
  return d;
}

std::vector<Complex> poly_mul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> r(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

void trim(std::vector<Complex>& c) {
  while (c.size() > 1 && c.back() == Complex(0.0, 0.0)) c.pop_back();
}

// f = alpha * exp(h) + beta.
struct ExpForm {
  Complex alpha;
  Complex beta;
  Expr h;
};

// First z-dependent exponential reached without passing through another one.
void collect_atoms(const Expr& e, std::vector<Expr>& atoms) {
  const Node& nd = e.node();
  if ((nd.op == Op::Exp || nd.op == Op::Expm1) && e.depends_on_z()) {
    atoms.push_back(Expr(nd.args[0]));
    return;
  }
  for (const auto& a : nd.args) collect_atoms(Expr(a), atoms);
}

struct Lin {
  Complex alpha;
  Complex beta;
};

Lin linear_in(const Expr& e, const Expr& h) {
  const Node& nd = e.node();
  auto unsupported = [&](const std::string& why) -> DomainError {
    return DomainError("singular values: unsupported subtree " + e.to_string() + " (" + why + ")");
  };
  switch (nd.op) {
    case Op::Const:
      return {0.0, nd.c};
    case Op::Var:
      throw unsupported("z outside the exponential");
    case Op::Exp:
      if (!(Expr(nd.args[0]) == h)) throw unsupported("more than one distinct exponential");
      return {1.0, 0.0};
    case Op::Expm1:
      if (!(Expr(nd.args[0]) == h)) throw unsupported("more than one distinct exponential");
      return {1.0, -1.0};
    case Op::Add: {
      const Lin a = linear_in(Expr(nd.args[0]), h);
      const Lin b = linear_in(Expr(nd.args[1]), h);
      return {a.alpha + b.alpha, a.beta + b.beta};
    }
    case Op::Mul: {
      const Lin a = linear_in(Expr(nd.args[0]), h);
      const Lin b = linear_in(Expr(nd.args[1]), h);
      if (a.alpha == Complex(0.0, 0.0)) return {a.beta * b.alpha, a.beta * b.beta};
      if (b.alpha == Complex(0.0, 0.0)) return {b.beta * a.alpha, b.beta * a.beta};
      throw unsupported("not affine in the exponential");
    }
    case Op::Pow: {
      const Lin a = linear_in(Expr(nd.args[0]), h);
      if (a.alpha == Complex(0.0, 0.0)) return {0.0, scaled_pow(Scaled(a.beta), nd.n).value()};
      throw unsupported("power of the exponential");
    }
  }
  throw unsupported("unknown node");
}

ExpForm exp_form(const Expr& f) {
  std::vector<Expr> atoms;
  collect_atoms(f, atoms);
  if (atoms.empty()) throw DomainError("singular values: unsupported expression " + f.to_string());
  const Lin l = linear_in(f, atoms.front());
  if (l.alpha == Complex(0.0, 0.0)) throw DomainError("singular values: function is constant");
  return {l.alpha, l.beta, atoms.front()};
}

}  // namespace

const char* to_string(SingularKind k) { return k == SingularKind::Critical ? "critical" : "asymptotic"; }

double spherical_derivative(const CatalogFunction& f, Complex z) {
  const Scaled df = f.deriv_scaled(Scaled(z));
  if (df.is_zero()) return 0.0;
  const Scaled fv = f.eval_scaled(Scaled(z));
  const double L = fv.is_zero() ? -std::numeric_limits<double>::infinity() : fv.log_abs();
  return std::exp(df.log_abs() - log1p_sq(L));
}

NormalizedTriple normalize_triple(const PointedTriple& t) {
  const double sd = spherical_derivative(t.f, t.w);
  if (!(sd > 1e-300) || std::abs(t.f.deriv(t.w)) == 0.0) {
    throw DomainError("normalize_triple: base point is critical (f^#(w) = 0)");
  }
  const double lambda = 1.0 / sd;
  const Expr inner = Expr::add(Expr::constant(t.w), Expr::mul(Expr::constant(lambda), Expr::var()));
  return {lambda, CatalogFunction(t.f.expr().substitute(inner))};
}

std::optional<std::vector<Complex>> polynomial_coefficients(const Expr& e) {
  const Node& nd = e.node();
  switch (nd.op) {
    case Op::Const:
      return std::vector<Complex>{nd.c};
    case Op::Var:
      return std::vector<Complex>{0.0, 1.0};
    case Op::Add: {
      auto a = polynomial_coefficients(Expr(nd.args[0]));
      auto b = polynomial_coefficients(Expr(nd.args[1]));
      if (!a || !b) return std::nullopt;
      if (a->size() < b->size()) std::swap(a, b);
      for (size_t i = 0; i < b->size(); ++i) (*a)[i] += (*b)[i];
      trim(*a);
      return a;
    }
    case Op::Mul: {
      auto a = polynomial_coefficients(Expr(nd.args[0]));
      auto b = polynomial_coefficients(Expr(nd.args[1]));
      if (!a || !b) return std::nullopt;
      auto r = poly_mul(*a, *b);
      trim(r);
      return r;
    }
    case Op::Pow: {
      auto a = polynomial_coefficients(Expr(nd.args[0]));
      if (!a) return std::nullopt;
      std::vector<Complex> r{1.0};
      for (int i = 0; i < nd.n; ++i) r = poly_mul(r, *a);
      trim(r);
      return r;
    }
    case Op::Exp:
    case Op::Expm1:
      if (e.depends_on_z()) return std::nullopt;
      return std::vector<Complex>{e.eval(Complex(0.0, 0.0))};
  }
  return std::nullopt;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  std::vector<Complex> c = coeffs;
  trim(c);
  const int d = static_cast<int>(c.size()) - 1;
  if (d <= 0) return {};
  if (d == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[static_cast<size_t>(i)] / c[static_cast<size_t>(d)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  const auto dc = differentiate(c);
  std::vector<Complex> roots;
  for (int i = 0; i < d; ++i) {
    Complex z = solver.eigenvalues()[i];
    for (int it = 0; it < 60; ++it) {
      const Complex dp = horner(dc, z);
      if (dp == Complex(0.0, 0.0)) break;
      const Complex step = horner(c, z) / dp;
      z -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

std::vector<SingularValue> singular_values(const CatalogFunction& f) {
  std::vector<SingularValue> out;
  if (auto p = polynomial_coefficients(f.expr())) {
    const int d = static_cast<int>(p->size()) - 1;
    if (d < 1) throw DomainError("singular values: function is constant");
    for (const Complex& r : polynomial_roots(differentiate(*p))) {
      push_unique(out, {SphereValue(horner(*p, r)), SingularKind::Critical, "p(root of p')"});
    }
    push_unique(out, {SphereValue::infinity(), d >= 2 ? SingularKind::Critical : SingularKind::Asymptotic,
                      "infinity, nonconstant entire function"});
  } else {
    const ExpForm form = exp_form(f.expr());
    for (const auto& s : singular_values(CatalogFunction(form.h))) {
      if (s.value.is_infinite()) continue;
      push_unique(out, {SphereValue(form.alpha * std::exp(s.value.value()) + form.beta), s.kind,
                        "affine image of exp(" + std::string(to_string(s.kind)) + " value of inner function)"});
    }
    push_unique(out, {SphereValue(form.beta), SingularKind::Asymptotic, "affine image of the omitted value 0 of exp"});
    push_unique(out, {SphereValue::infinity(), SingularKind::Asymptotic, "infinity, transcendental entire function"});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

std::vector<Complex> critical_points(const CatalogFunction& f) {
  if (auto p = polynomial_coefficients(f.expr())) {
    if (p->size() <= 2) return {};
    return polynomial_roots(differentiate(*p));
  }
  return critical_points(CatalogFunction(exp_form(f.expr()).h));
}

std::vector<OrderSample> order_estimate(const CatalogFunction& f, const std::vector<double>& radii,
                                        int samples_per_circle) {
  if (samples_per_circle < 8) throw DomainError("order_estimate: need at least 8 samples per circle");
  std::vector<OrderSample> out;
  double prev = 0.0;
  for (double r : radii) {
    if (!(r > std::numbers::e)) throw DomainError("order_estimate: radii must exceed e");
    if (r <= prev) throw DomainError("order_estimate: radii must be increasing");
    prev = r;
    double lm = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples_per_circle; ++j) {
      const double th = 2.0 * std::numbers::pi * j / samples_per_circle;
      lm = std::max(lm, f.eval_scaled(Scaled(std::polar(r, th))).log_abs());
    }
    OrderSample s{r, lm, std::nullopt};
    if (lm > 1.0) s.rho = std::log(lm) / std::log(r);
    out.push_back(s);
  }
  return out;
}

double gluing_map(double x) {
  if (x > 0) return std::log(x + std::log1p(std::exp(-x)));
  if (x < -30) return x + std::log1p(-0.5 * std::exp(x) + std::exp(2 * x) / 3.0);
  return std::log(std::log1p(std::exp(x)));
}

std::vector<GlueRow> gluing_check(const std::vector<double>& xs) {
  std::vector<GlueRow> out;
  for (double x : xs) {
    GlueRow row;
    row.x = x;
    row.h = gluing_map(x);
    row.h_minus_x = row.h - x;
    row.h_over_ln_x = (x > 0 && x != 1.0) ? row.h / std::log(x) : std::numeric_limits<double>::quiet_NaN();
    out.push_back(row);
  }
  return out;
}

}  // namespace speiser
