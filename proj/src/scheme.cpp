#include "speiser/scheme.hpp"

#include <deque>

namespace speiser {

const char* to_string(ConformalType t) { return t == ConformalType::Parabolic ? "Parabolic" : "Hyperbolic"; }

HalfEdgeId scheme_half_edge_id(VertexId v, int type) {
  if (type < 0 || type >= 16) throw DomainError("edge type out of range for scheme half-edge ids");
  if (v >= (VertexId{1} << 59)) throw DomainError("vertex id too large for scheme half-edge ids");
  return v * 16 + static_cast<HalfEdgeId>(type);
}

std::map<VertexId, int> scheme_distances(const GraphScheme& scheme, VertexId center, int radius,
                                         std::size_t vertex_budget) {
  if (radius < 0) throw DomainError("radius must be non-negative");
  std::map<VertexId, int> dist{{center, 0}};
  std::deque<VertexId> queue{center};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    const int d = dist[v];
    if (d == radius) continue;
    if (!scheme.expandable(v)) {
      throw DomainError("scheme cannot expand vertex " + std::to_string(v) + " at distance " + std::to_string(d) +
                        " (truncated source too small for radius " + std::to_string(radius) + ")");
    }
    for (const auto& w : scheme.neighbors(v)) {
      if (!w || dist.count(*w)) continue;
      dist[*w] = d + 1;
      if (dist.size() > vertex_budget) {
        throw BudgetExceeded("vertex budget of " + std::to_string(vertex_budget) + " exceeded at radius " +
                             std::to_string(d + 1));
      }
      queue.push_back(*w);
    }
  }
  return dist;
}

SpeiserPatch ball_around(const GraphScheme& scheme, VertexId center, int radius, std::size_t vertex_budget) {
  const auto dist = scheme_distances(scheme, center, radius, vertex_budget);
  const int k = scheme.degree();

  SpeiserPatch p;
  p.k = k;
  p.base = scheme.base();
  p.root = center;

  // Interior vertices know their neighbors; rim vertices only learn theirs from inside.
  std::map<VertexId, std::vector<std::optional<VertexId>>> adj;
  for (const auto& [v, d] : dist) {
    if (d < radius) adj[v] = scheme.neighbors(v);
  }
  for (const auto& [v, d] : dist) {
    if (d == radius) adj[v].assign(static_cast<size_t>(k), std::nullopt);
  }
  for (const auto& [v, d] : dist) {
    if (d == radius) continue;
    const auto& nb = adj[v];
    for (int t = 0; t < k; ++t) {
      const auto& w = nb[static_cast<size_t>(t)];
      if (w && dist.at(*w) == radius) adj[*w][static_cast<size_t>(t)] = v;
    }
  }

  for (const auto& [v, d] : dist) {
    Vertex vx;
    vx.id = v;
    vx.color = scheme.color(v);
    vx.boundary = d == radius;
    const auto& nb = adj[v];
    for (int i = 0; i < k; ++i) {
      const int t = vx.color == Color::Cross ? i : (k - i) % k;
      const auto& w = nb[static_cast<size_t>(t)];
      // Interior vertices of a degree-reducing wrapper have no half-edge for deleted types.
      if (!w && !vx.boundary) continue;
      HalfEdge he;
      he.id = scheme_half_edge_id(v, t);
      he.vertex = v;
      he.type = t;
      if (w && dist.count(*w)) he.twin = scheme_half_edge_id(*w, t);
      vx.rotation.push_back(he.id);
      p.half_edges[he.id] = he;
    }
    p.vertices[v] = std::move(vx);
  }
  return p;
}

SpeiserPatch ball(const GraphScheme& scheme, int radius, std::size_t vertex_budget) {
  return ball_around(scheme, scheme.root(), radius, vertex_budget);
}

PatchScheme::PatchScheme(SpeiserPatch patch, std::optional<VertexId> root, SchemeMeta meta)
    : patch_(std::move(patch)), root_(root.value_or(patch_.root)), meta_(std::move(meta)) {
  if (!patch_.has_vertex(root_)) throw DomainError("root " + std::to_string(root_) + " is not a patch vertex");
}

bool PatchScheme::expandable(VertexId v) const { return !patch_.vertex(v).boundary; }

std::vector<std::optional<VertexId>> PatchScheme::neighbors(VertexId v) const {
  const Vertex& vx = patch_.vertex(v);
  std::vector<std::optional<VertexId>> out(static_cast<size_t>(patch_.k));
  for (HalfEdgeId h : vx.rotation) {
    const HalfEdge& he = patch_.half_edge(h);
    if (he.type >= 0 && he.type < patch_.k) out[static_cast<size_t>(he.type)] = patch_.far_end(he);
  }
  return out;
}

}  // namespace speiser
