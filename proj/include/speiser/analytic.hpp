#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speiser/expr.hpp"

namespace speiser {

/// Base point w (not critical) of a function, with optional conformal radius.
struct PointedTriple {
  CatalogFunction f;
  Complex w{0.0, 0.0};
  std::optional<double> conformal_radius;
};

/// |f'(z)| / (1 + |f(z)|^2), computed in log scale.
double spherical_derivative(const CatalogFunction& f, Complex z);

struct NormalizedTriple {
  double lambda = 1.0;    // real positive scale
  CatalogFunction g;      // g(z) = f(w + lambda z)
};

/// lambda = 1 / f^#(w), so that g^#(0) = 1. Throws when w is critical.
NormalizedTriple normalize_triple(const PointedTriple& t);

enum class SingularKind { Critical, Asymptotic };
const char* to_string(SingularKind k);

struct SingularValue {
  SphereValue value;
  SingularKind kind = SingularKind::Critical;
  std::string note;  // which structural rule produced it
};

/// Singular values from structural rules:
///   polynomial p of degree >= 1: p(roots of p') and inf;
///   alpha * exp(h) + beta: the affine image of exp(sv(h)), 0 and inf.
/// Anything else throws, naming the unsupported subtree.
std::vector<SingularValue> singular_values(const CatalogFunction& f);

/// Finite critical points: roots of p' for polynomials, critical points of h
/// for alpha * exp(h) + beta.
std::vector<Complex> critical_points(const CatalogFunction& f);

/// Coefficients (constant term first) when the expression is a polynomial in z.
std::optional<std::vector<Complex>> polynomial_coefficients(const Expr& e);

/// Roots of a polynomial via the companion matrix, Newton-refined.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

struct OrderSample {
  double r = 0.0;
  double log_max = 0.0;        // ln M(r)
  std::optional<double> rho;   // ln ln M(r) / ln r, empty when M(r) <= e
};

std::vector<OrderSample> order_estimate(const CatalogFunction& f, const std::vector<double>& radii,
                                        int samples_per_circle);

struct GlueRow {
  double x = 0.0;
  double h = 0.0;
  double h_minus_x = 0.0;
  double h_over_ln_x = 0.0;  // NaN for x <= 0 or x == 1
};

/// h(x) = ln(ln(e^x + 1)), evaluated without overflow or cancellation.
double gluing_map(double x);
std::vector<GlueRow> gluing_check(const std::vector<double>& xs);

}  // namespace speiser
