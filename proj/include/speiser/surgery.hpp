#pragma once

#include <optional>

#include "speiser/scheme.hpp"

namespace speiser {

/// Moving label a_k collides into target a_1; the two must be adjacent on the base curve.
struct CollisionSpec {
  SphereValue moving;
  SphereValue target;
  std::optional<VertexId> root;  // defaults to the source root
};

/// Index of the arc joining adjacent base entries x and y. Throws if they are not adjacent.
int edge_types_between(const BaseCurve& base, const SphereValue& x, const SphereValue& y);

/// Base curve after deleting arc `arc`: the entry `moving` is replaced by `target`
/// and arcs above the deleted one shift down by one.
BaseCurve collided_base(const BaseCurve& base, int arc, const SphereValue& moving, const SphereValue& target);

/// Deletes every edge crossing the arc between moving and target, keeps the
/// root component, relabels merged faces with the target label and renumbers
/// types 0..k-2. Vertex ids are preserved.
SchemePtr collide(SchemePtr scheme, const CollisionSpec& spec);

}  // namespace speiser
