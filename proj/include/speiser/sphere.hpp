#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace speiser {

using Complex = std::complex<double>;

/// Raised when an operation's precondition is violated by its input.
/// The CLI maps it to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of the Riemann sphere: a finite complex number or infinity.
class SphereValue {
 public:
  SphereValue() = default;
  SphereValue(Complex z) : z_(z) {}  // NOLINT: implicit by intent
  SphereValue(double x) : z_(x, 0.0) {}  // NOLINT

  static SphereValue infinity() {
    SphereValue v;
    v.inf_ = true;
    return v;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  Complex value() const;  // throws DomainError for infinity

  /// Exact equality; infinity equals only infinity.
  friend bool operator==(const SphereValue& a, const SphereValue& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.z_ == b.z_;
  }

  /// Total order for deterministic output: finite values by (re, im), then infinity.
  friend bool operator<(const SphereValue& a, const SphereValue& b);

 private:
  Complex z_{};
  bool inf_ = false;
};

bool approx_equal(const SphereValue& a, const SphereValue& b, double tol = 1e-9);

/// Chordal distance 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)); d(z, inf) = 2 / sqrt(1+|z|^2).
double spherical_distance(const SphereValue& a, const SphereValue& b);

/// Decimal complex as `a+bi`, `a`, `bi`, or `inf`. Round-trips through parse_sphere_value.
std::string format_sphere_value(const SphereValue& v);
SphereValue parse_sphere_value(std::string_view text);

/// Cyclic order of the singular values along the base curve.
/// Arc i joins entry i to entry i+1 (mod k); an edge of type i crosses arc i.
class BaseCurve {
 public:
  BaseCurve() = default;
  explicit BaseCurve(std::vector<SphereValue> entries);

  int size() const { return static_cast<int>(entries_.size()); }
  const SphereValue& operator[](int i) const { return entries_[static_cast<size_t>(i)]; }
  const std::vector<SphereValue>& entries() const { return entries_; }

  /// Index of `v` (approximate match), or -1.
  int index_of(const SphereValue& v, double tol = 1e-9) const;

  /// Label of the face between edge types i-1 and i.
  const SphereValue& face_label(int type) const { return (*this)[type]; }

  friend bool operator==(const BaseCurve& a, const BaseCurve& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<SphereValue> entries_;
};

}  // namespace speiser
