#include "speiser/surgery.hpp"

namespace speiser {

int edge_types_between(const BaseCurve& base, const SphereValue& x, const SphereValue& y) {
  const int k = base.size();
  const int i = base.index_of(x);
  const int j = base.index_of(y);
  if (i < 0) throw DomainError("label " + format_sphere_value(x) + " is not on the base curve");
  if (j < 0) throw DomainError("label " + format_sphere_value(y) + " is not on the base curve");
  if (i == j) throw DomainError("labels coincide");
  if ((i + 1) % k == j) return i;
  if ((j + 1) % k == i) return j;
  throw DomainError("labels " + format_sphere_value(x) + " and " + format_sphere_value(y) +
                    " are not adjacent on the base curve");
}

BaseCurve collided_base(const BaseCurve& base, int arc, const SphereValue& moving, const SphereValue& target) {
  const int k = base.size();
  std::vector<SphereValue> entries;
  for (int i = 0; i < k - 1; ++i) {
    const int old = i < arc ? i : i + 1;
    entries.push_back(approx_equal(base[old], moving) ? target : base[old]);
  }
  return BaseCurve(std::move(entries));
}

namespace {

class CollidedScheme final : public GraphScheme {
 public:
  CollidedScheme(SchemePtr src, const CollisionSpec& spec) : src_(std::move(src)) {
    const int k = src_->degree();
    if (k < 3) throw DomainError("collide needs degree >= 3 (degree " + std::to_string(k) + " would leave no Speiser graph)");
    if (approx_equal(spec.moving, spec.target)) throw DomainError("moving and target labels coincide");
    arc_ = edge_types_between(src_->base(), spec.moving, spec.target);
    base_ = collided_base(src_->base(), arc_, spec.moving, spec.target);
    root_ = spec.root.value_or(src_->root());
    bool survives = false;
    for (const auto& w : neighbors(root_)) survives = survives || w.has_value();
    if (!survives) throw DomainError("root " + std::to_string(root_) + " has no surviving edge after collision");
    moving_ = spec.moving;
    target_ = spec.target;
  }

  VertexId root() const override { return root_; }
  int degree() const override { return src_->degree() - 1; }
  const BaseCurve& base() const override { return base_; }
  Color color(VertexId v) const override { return src_->color(v); }
  bool expandable(VertexId v) const override { return src_->expandable(v); }

  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override {
    auto n = src_->neighbors(v);
    n.erase(n.begin() + arc_);
    return n;
  }

  SchemeMeta meta() const override {
    SchemeMeta m = src_->meta();
    m.family = "Collided(" + m.family + ")";
    m.params["moving"] = format_sphere_value(moving_);
    m.params["target"] = format_sphere_value(target_);
    m.known_type.reset();
    m.note.clear();
    return m;
  }

 private:
  SchemePtr src_;
  int arc_ = 0;
  BaseCurve base_;
  VertexId root_ = 0;
  SphereValue moving_, target_;
};

}  // namespace

SchemePtr collide(SchemePtr scheme, const CollisionSpec& spec) {
  if (!scheme) throw DomainError("collide: null scheme");
  return std::make_shared<CollidedScheme>(std::move(scheme), spec);
}

}  // namespace speiser
