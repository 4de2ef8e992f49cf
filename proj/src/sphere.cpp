#include "speiser/sphere.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace speiser {

Complex SphereValue::value() const {
  if (inf_) throw DomainError("value() called on the point at infinity");
  return z_;
}

bool operator<(const SphereValue& a, const SphereValue& b) {
  if (a.inf_ || b.inf_) return !a.inf_ && b.inf_;
  if (a.z_.real() != b.z_.real()) return a.z_.real() < b.z_.real();
  return a.z_.imag() < b.z_.imag();
}

bool approx_equal(const SphereValue& a, const SphereValue& b, double tol) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  const Complex za = a.value();
  const Complex zb = b.value();
  return std::abs(za - zb) <= tol * std::max(1.0, std::max(std::abs(za), std::abs(zb)));
}

double spherical_distance(const SphereValue& a, const SphereValue& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) {
    const Complex z = a.is_infinite() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  const Complex z = a.value();
  const Complex w = b.value();
  return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view s, std::string_view whole) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last) {
    throw DomainError("malformed complex value '" + std::string(whole) + "'");
  }
  return x;
}

}  // namespace

std::string format_sphere_value(const SphereValue& v) {
  if (v.is_infinite()) return "inf";
  const Complex z = v.value();
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag());
  if (z.real() == 0.0) return im + "i";
  if (im.front() != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

SphereValue parse_sphere_value(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty complex value");
  if (text == "inf" || text == "Inf" || text == "infinity" || text == "oo") return SphereValue::infinity();
  if (text.back() != 'i') return SphereValue(parse_double(text, text));

  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not an exponent sign and not leading.
  size_t split = std::string_view::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s, text);
  };
  if (split == std::string_view::npos) return SphereValue(Complex(0.0, imag_of(body)));
  return SphereValue(Complex(parse_double(body.substr(0, split), text), imag_of(body.substr(split))));
}

BaseCurve::BaseCurve(std::vector<SphereValue> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) throw DomainError("base curve needs at least two singular values");
  for (size_t i = 0; i < entries_.size(); ++i) {
    for (size_t j = i + 1; j < entries_.size(); ++j) {
      if (approx_equal(entries_[i], entries_[j])) {
        throw DomainError("base curve entries must be pairwise distinct (" +
                          format_sphere_value(entries_[i]) + " repeated)");
      }
    }
  }
}

int BaseCurve::index_of(const SphereValue& v, double tol) const {
  for (int i = 0; i < size(); ++i) {
    if (approx_equal(entries_[static_cast<size_t>(i)], v, tol)) return i;
  }
  return -1;
}

}  // namespace speiser
