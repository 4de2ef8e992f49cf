#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speiser/sphere.hpp"

namespace speiser {

using VertexId = std::uint64_t;
using HalfEdgeId = std::uint64_t;

enum class Color { Cross, Circle };

inline Color opposite(Color c) { return c == Color::Cross ? Color::Circle : Color::Cross; }
const char* to_string(Color c);

struct HalfEdge {
  HalfEdgeId id = 0;
  VertexId vertex = 0;
  int type = 0;
  std::optional<HalfEdgeId> twin;  // nullopt: dangling (truncated at the rim)
};

struct Vertex {
  VertexId id = 0;
  Color color = Color::Cross;
  std::vector<HalfEdgeId> rotation;  // counterclockwise order of incident half-edges
  bool boundary = false;
};

/// Finite truncation of a labeled Speiser graph, stored as a rotation system.
///
/// Interior vertices carry exactly k half-edges. Around a Cross vertex the
/// edge types read 0, 1, ..., k-1 counterclockwise, around a Circle vertex
/// they read in the reversed cyclic order. The face between consecutive
/// types i-1 and i is labeled by base entry i. Boundary vertices sit on the
/// truncation rim; they keep their dangling half-edges and are exempt from
/// the degree and rotation rules.
struct SpeiserPatch {
  int k = 0;
  BaseCurve base;
  VertexId root = 0;
  std::map<VertexId, Vertex> vertices;
  std::map<HalfEdgeId, HalfEdge> half_edges;
  std::map<VertexId, Complex> positions;  // optional planar positions (lifting output)

  const Vertex& vertex(VertexId id) const;
  const HalfEdge& half_edge(HalfEdgeId id) const;
  bool has_vertex(VertexId id) const { return vertices.count(id) != 0; }

  /// Neighbor across `he`, if the half-edge is not dangling.
  std::optional<VertexId> far_end(const HalfEdge& he) const;

  /// Position of `he` inside its vertex's rotation.
  int slot_of(const HalfEdge& he) const;
};

struct Violation {
  std::string rule;
  std::string message;
  std::optional<VertexId> vertex;
  std::optional<HalfEdgeId> half_edge;
};

using ValidationReport = std::vector<Violation>;

/// Enumerates every violated invariant. An empty report means the patch is valid.
ValidationReport validate(const SpeiserPatch& patch);

std::string describe(const ValidationReport& report);

/// Shortest-path length in the simple-graph reduction; nullopt when unreachable.
std::optional<int> graph_distance(const SpeiserPatch& patch, VertexId u, VertexId v);

/// Distances from `source` to every reachable vertex.
std::map<VertexId, int> distances_from(const SpeiserPatch& patch, VertexId source);

struct Corner {
  VertexId vertex;
  HalfEdgeId from;  // the face lies counterclockwise after `from`
  HalfEdgeId to;    // and counterclockwise before `to`
};

struct Face {
  SphereValue label;
  int label_index = 0;
  std::vector<Corner> corners;
  bool closed = false;  // false: the face runs off through a dangling half-edge
};

/// Faces as orbits of the next-corner-around-face permutation.
std::vector<Face> faces(const SpeiserPatch& patch);

/// Label index of the face in the corner between `from` and the next half-edge.
int corner_label_index(const SpeiserPatch& patch, const Corner& corner);

}  // namespace speiser
