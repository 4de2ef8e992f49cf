#include "speiser/families.hpp"

#include <array>

namespace speiser {

const char* to_string(Family f) {
  switch (f) {
    case Family::ExpPlusOne:
      return "ExpPlusOne";
    case Family::DoubleExpPerturbed:
      return "DoubleExpPerturbed";
    case Family::HyperbolicSb:
      return "HyperbolicS_b";
    case Family::BinaryTree:
      return "BinaryTree";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "exp") return Family::ExpPlusOne;
  if (name == "dexp") return Family::DoubleExpPerturbed;
  if (name == "hyp") return Family::HyperbolicSb;
  if (name == "tree") return Family::BinaryTree;
  throw DomainError("unknown family '" + name + "' (expected exp, dexp, hyp or tree)");
}

std::optional<ConformalType> FamilySpec::known_type() const {
  switch (family) {
    case Family::ExpPlusOne:
    case Family::DoubleExpPerturbed:
      return ConformalType::Parabolic;
    case Family::HyperbolicSb:
      return ConformalType::Hyperbolic;
    case Family::BinaryTree:
      return std::nullopt;
  }
  return std::nullopt;
}

VertexId comb_vertex_id(long p, std::uint32_t j) {
  const std::uint64_t zz = p >= 0 ? 2 * static_cast<std::uint64_t>(p) : 2 * static_cast<std::uint64_t>(-p) - 1;
  if (zz >= (std::uint64_t{1} << 27)) throw DomainError("spine position out of range");
  if (j >= (std::uint32_t{1} << 27)) throw DomainError("ray index out of range");
  return (zz << 32) | j;
}

std::pair<long, std::uint32_t> comb_position(VertexId id) {
  const std::uint64_t zz = id >> 32;
  const long p = (zz % 2 == 0) ? static_cast<long>(zz / 2) : -static_cast<long>((zz + 1) / 2);
  return {p, static_cast<std::uint32_t>(id & 0xffffffffu)};
}

namespace {

long floor_div2(long p) { return p >= 0 ? p / 2 : -((-p + 1) / 2); }

bool is_special(const SphereValue& v) {
  return approx_equal(v, SphereValue(1.0)) || v.is_infinite();
}

std::string fmt(const SphereValue& v) { return format_sphere_value(v); }

Color comb_color(VertexId id) {
  const auto [p, j] = comb_position(id);
  return ((p + static_cast<long>(j)) % 2 == 0) ? Color::Cross : Color::Circle;
}

// Comb neighbors by type: A (0), B (1), C (2).
std::array<VertexId, 3> comb_neighbors(VertexId id) {
  const auto [p, j] = comb_position(id);
  if (j == 0) {
    const bool even = p % 2 == 0;
    return {comb_vertex_id(even ? p + 1 : p - 1), comb_vertex_id(even ? p - 1 : p + 1), comb_vertex_id(p, 1)};
  }
  if (j % 2 == 1) {
    const VertexId out = comb_vertex_id(p, j + 1);
    return {out, out, comb_vertex_id(p, j - 1)};
  }
  const VertexId in = comb_vertex_id(p, j - 1);
  return {in, in, comb_vertex_id(p, j + 1)};
}

class ExpScheme final : public GraphScheme {
 public:
  ExpScheme() : base_({SphereValue(1.0), SphereValue::infinity()}) {}
  VertexId root() const override { return comb_vertex_id(0); }
  int degree() const override { return 2; }
  const BaseCurve& base() const override { return base_; }
  Color color(VertexId v) const override { return comb_color(check(v)); }
  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override {
    const long p = comb_position(check(v)).first;
    const bool cross = p % 2 == 0;
    return {comb_vertex_id(cross ? p - 1 : p + 1), comb_vertex_id(cross ? p + 1 : p - 1)};
  }
  SchemeMeta meta() const override { return {"ExpPlusOne", {}, ConformalType::Parabolic, kGroundTruthNote}; }

 private:
  static VertexId check(VertexId v) {
    if (comb_position(v).second != 0) throw DomainError("not a vertex of exp_scheme: " + std::to_string(v));
    return v;
  }
  BaseCurve base_;
};

class CombScheme final : public GraphScheme {
 public:
  explicit CombScheme(SphereValue a) : a_(a), base_({a, SphereValue(1.0), SphereValue::infinity()}) {}
  VertexId root() const override { return comb_vertex_id(0); }
  int degree() const override { return 3; }
  const BaseCurve& base() const override { return base_; }
  Color color(VertexId v) const override { return comb_color(v); }
  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override {
    const auto n = comb_neighbors(v);
    return {n[0], n[1], n[2]};
  }
  SchemeMeta meta() const override {
    return {"DoubleExpPerturbed", {{"a", fmt(a_)}, {"b", fmt(a_)}}, ConformalType::Parabolic, kGroundTruthNote};
  }

 private:
  SphereValue a_;
  BaseCurve base_;
};

// Degree 4: comb types spread over (a,b), (b,1), (1,inf), (inf,a).
class DoubleExpScheme final : public GraphScheme {
 public:
  DoubleExpScheme(SphereValue a, SphereValue b, int cut)
      : a_(a), b_(b), cut_(cut), base_({a, b, SphereValue(1.0), SphereValue::infinity()}) {}
  VertexId root() const override { return comb_vertex_id(0); }
  int degree() const override { return 4; }
  const BaseCurve& base() const override { return base_; }
  Color color(VertexId v) const override { return comb_color(v); }
  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override {
    const auto n = comb_neighbors(v);
    const bool upper = floor_div2(comb_position(v).first) > cut_;
    if (upper) return {n[0], n[0], n[1], n[2]};
    return {n[2], n[0], n[1], n[2]};
  }
  SchemeMeta meta() const override {
    return {"DoubleExpPerturbed",
            {{"a", fmt(a_)}, {"b", fmt(b_)}, {"cut", std::to_string(cut_)}},
            ConformalType::Parabolic,
            kGroundTruthNote};
  }

 private:
  SphereValue a_, b_;
  int cut_;
  BaseCurve base_;
};

// S_b: types (b,1), (1,inf), (inf,b).
class HyperbolicScheme final : public GraphScheme {
 public:
  HyperbolicScheme(SphereValue b, int cut) : b_(b), cut_(cut), base_({b, SphereValue(1.0), SphereValue::infinity()}) {}
  VertexId root() const override { return comb_vertex_id(0); }
  int degree() const override { return 3; }
  const BaseCurve& base() const override { return base_; }
  Color color(VertexId v) const override { return comb_color(v); }
  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override {
    const auto [p, j] = comb_position(v);
    const bool upper = floor_div2(p) > cut_;
    if (upper && j != 0) throw DomainError("not a vertex of hyperbolic_scheme: " + std::to_string(v));
    const auto n = comb_neighbors(v);
    if (upper) return {n[0], n[1], n[0]};
    return {n[0], n[1], n[2]};
  }
  SchemeMeta meta() const override {
    return {"HyperbolicS_b", {{"b", fmt(b_)}, {"cut", std::to_string(cut_)}}, ConformalType::Hyperbolic,
            kGroundTruthNote};
  }

 private:
  SphereValue b_;
  int cut_;
  BaseCurve base_;
};

// Ids: depth in the high bits, index below. The root's children are indexed by
// edge type; deeper children by 2 * parent_index + slot.
class BinaryTreeScheme final : public GraphScheme {
 public:
  BinaryTreeScheme() : base_({SphereValue(0.0), SphereValue(1.0), SphereValue::infinity()}) {}
  VertexId root() const override { return 0; }
  int degree() const override { return 3; }
  const BaseCurve& base() const override { return base_; }
  Color color(VertexId v) const override { return (depth(v) % 2 == 0) ? Color::Cross : Color::Circle; }
  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override {
    const std::uint64_t d = depth(v);
    const std::uint64_t i = index(v);
    std::vector<std::optional<VertexId>> out(3);
    if (d == 0) {
      for (int t = 0; t < 3; ++t) out[static_cast<size_t>(t)] = make(1, static_cast<std::uint64_t>(t));
      return out;
    }
    if (d >= 38) throw DomainError("binary tree depth limit reached");
    const int up = parent_type(d, i);
    out[static_cast<size_t>(up)] = d == 1 ? 0 : make(d - 1, i / 2);
    int slot = 0;
    for (int t = 0; t < 3; ++t) {
      if (t == up) continue;
      out[static_cast<size_t>(t)] = make(d + 1, 2 * i + static_cast<std::uint64_t>(slot));
      ++slot;
    }
    return out;
  }
  SchemeMeta meta() const override { return {"BinaryTree", {}, std::nullopt, "diagnostic"}; }

 private:
  static std::uint64_t depth(VertexId v) { return v >> 40; }
  static std::uint64_t index(VertexId v) { return v & ((std::uint64_t{1} << 40) - 1); }
  static VertexId make(std::uint64_t d, std::uint64_t i) { return (d << 40) | i; }

  // Type of the edge joining (d, i) to its parent.
  static int parent_type(std::uint64_t d, std::uint64_t i) {
    if (d == 1) return static_cast<int>(i);
    const int pt = parent_type(d - 1, i / 2);
    const int slot = static_cast<int>(i % 2);
    int seen = 0;
    for (int t = 0; t < 3; ++t) {
      if (t == pt) continue;
      if (seen++ == slot) return t;
    }
    return -1;
  }

  BaseCurve base_;
};

}  // namespace

SchemePtr exp_scheme() { return std::make_shared<ExpScheme>(); }

SchemePtr double_exp_scheme(const SphereValue& a, const SphereValue& b, int cut) {
  if (is_special(a) || is_special(b)) {
    throw DomainError("double_exp_scheme: labels must differ from 1 and inf (a=" + fmt(a) + ", b=" + fmt(b) + ")");
  }
  if (approx_equal(a, b)) return std::make_shared<CombScheme>(a);
  return std::make_shared<DoubleExpScheme>(a, b, cut);
}

SchemePtr hyperbolic_scheme(const SphereValue& b, int cut) {
  if (is_special(b)) throw DomainError("hyperbolic_scheme: b must differ from 1 and inf (b=" + fmt(b) + ")");
  return std::make_shared<HyperbolicScheme>(b, cut);
}

SchemePtr binary_tree_scheme() { return std::make_shared<BinaryTreeScheme>(); }

SchemePtr make_family(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::ExpPlusOne:
      return exp_scheme();
    case Family::DoubleExpPerturbed: {
      if (!spec.a) throw DomainError("dexp family needs parameter a");
      return double_exp_scheme(*spec.a, spec.b.value_or(*spec.a), spec.cut);
    }
    case Family::HyperbolicSb:
      if (!spec.b) throw DomainError("hyp family needs parameter b");
      return hyperbolic_scheme(*spec.b, spec.cut);
    case Family::BinaryTree:
      return binary_tree_scheme();
  }
  throw DomainError("unknown family");
}

SpeiserPatch cycle_patch(int d) {
  if (d < 1) throw DomainError("cycle_patch: d must be positive");
  SpeiserPatch p;
  p.k = 2;
  p.base = BaseCurve({SphereValue(0.0), SphereValue::infinity()});
  const int n = 2 * d;
  p.root = 0;
  for (int v = 0; v < n; ++v) {
    Vertex vx;
    vx.id = static_cast<VertexId>(v);
    vx.color = v % 2 == 0 ? Color::Cross : Color::Circle;
    // Cross at even v: type 0 goes up, type 1 goes down.
    for (int t = 0; t < 2; ++t) {
      HalfEdge he;
      he.id = scheme_half_edge_id(vx.id, t);
      he.vertex = vx.id;
      he.type = t;
      const bool up = (v % 2 == 0) == (t == 0);
      const int w = ((up ? v + 1 : v - 1) % n + n) % n;
      he.twin = scheme_half_edge_id(static_cast<VertexId>(w), t);
      vx.rotation.push_back(he.id);
      p.half_edges[he.id] = he;
    }
    p.vertices[vx.id] = std::move(vx);
  }
  return p;
}

}  // namespace speiser
