#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "speiser/patch.hpp"

namespace speiser {

enum class ConformalType { Parabolic, Hyperbolic };
const char* to_string(ConformalType t);

/// Descriptive data attached to a scheme; never affects combinatorics.
struct SchemeMeta {
  std::string family;                         // e.g. "ExpPlusOne"
  std::map<std::string, std::string> params;  // formatted parameter values
  std::optional<ConformalType> known_type;    // ground truth asserted by the literature
  std::string note;
};

/// Lazily generated (possibly infinite) Speiser graph.
///
/// The edge of type t at v leads to the vertex returned in slot t of
/// neighbors(v); its twin is the type-t half-edge at that neighbor. Rotation
/// order follows from the color: types ascend around Cross vertices and
/// descend around Circle vertices. Implementations must be deterministic and
/// safe to query concurrently.
class GraphScheme {
 public:
  virtual ~GraphScheme() = default;

  virtual VertexId root() const = 0;
  virtual int degree() const = 0;
  virtual const BaseCurve& base() const = 0;
  virtual Color color(VertexId v) const = 0;

  /// Neighbor per edge type. A slot is nullopt when the edge is absent, which
  /// only happens for truncated sources (see PatchScheme) and for degree-reducing
  /// wrappers that delete edge types.
  virtual std::vector<std::optional<VertexId>> neighbors(VertexId v) const = 0;

  /// False when neighbors(v) cannot be answered (rim of a finite patch).
  virtual bool expandable(VertexId v) const { return (void)v, true; }

  virtual SchemeMeta meta() const { return {}; }
};

using SchemePtr = std::shared_ptr<const GraphScheme>;

/// Raised by ball() when the vertex budget is exceeded.
class BudgetExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

inline constexpr std::size_t kDefaultVertexBudget = 2'000'000;

/// Half-edge id used by scheme-derived patches: vertex id * 16 + type.
HalfEdgeId scheme_half_edge_id(VertexId v, int type);

/// Vertices at graph distance <= radius from the root. Rim vertices (distance
/// exactly `radius`) are boundary-flagged and keep dangling half-edges.
SpeiserPatch ball(const GraphScheme& scheme, int radius, std::size_t vertex_budget = kDefaultVertexBudget);

/// Same, centred at an arbitrary vertex of the scheme.
SpeiserPatch ball_around(const GraphScheme& scheme, VertexId center, int radius,
                         std::size_t vertex_budget = kDefaultVertexBudget);

/// Scheme view of a finite patch. Boundary vertices are not expandable;
/// vertices outside the patch are rejected.
class PatchScheme final : public GraphScheme {
 public:
  explicit PatchScheme(SpeiserPatch patch, std::optional<VertexId> root = std::nullopt, SchemeMeta meta = {});

  VertexId root() const override { return root_; }
  int degree() const override { return patch_.k; }
  const BaseCurve& base() const override { return patch_.base; }
  Color color(VertexId v) const override { return patch_.vertex(v).color; }
  std::vector<std::optional<VertexId>> neighbors(VertexId v) const override;
  bool expandable(VertexId v) const override;
  SchemeMeta meta() const override { return meta_; }

  const SpeiserPatch& patch() const { return patch_; }

 private:
  SpeiserPatch patch_;
  VertexId root_;
  SchemeMeta meta_;
};

/// Distances from the scheme root out to `radius`, without building a patch.
std::map<VertexId, int> scheme_distances(const GraphScheme& scheme, VertexId center, int radius,
                                         std::size_t vertex_budget = kDefaultVertexBudget);

}  // namespace speiser
