#include "speiser/patch.hpp"

#include <deque>
#include <set>
#include <sstream>

namespace speiser {

const char* to_string(Color c) { return c == Color::Cross ? "cross" : "circle"; }

const Vertex& SpeiserPatch::vertex(VertexId id) const {
  auto it = vertices.find(id);
  if (it == vertices.end()) throw DomainError("unknown vertex id " + std::to_string(id));
  return it->second;
}

const HalfEdge& SpeiserPatch::half_edge(HalfEdgeId id) const {
  auto it = half_edges.find(id);
  if (it == half_edges.end()) throw DomainError("unknown half-edge id " + std::to_string(id));
  return it->second;
}

std::optional<VertexId> SpeiserPatch::far_end(const HalfEdge& he) const {
  if (!he.twin) return std::nullopt;
  return half_edge(*he.twin).vertex;
}

int SpeiserPatch::slot_of(const HalfEdge& he) const {
  const auto& rot = vertex(he.vertex).rotation;
  for (size_t i = 0; i < rot.size(); ++i) {
    if (rot[i] == he.id) return static_cast<int>(i);
  }
  throw DomainError("half-edge " + std::to_string(he.id) + " missing from its vertex rotation");
}

namespace {

int mod(int a, int k) { return ((a % k) + k) % k; }

void add(ValidationReport& r, std::string rule, std::string msg, std::optional<VertexId> v = {},
         std::optional<HalfEdgeId> h = {}) {
  r.push_back(Violation{std::move(rule), std::move(msg), v, h});
}

// Structural checks that must pass before faces can be traversed safely.
bool check_references(const SpeiserPatch& p, ValidationReport& r) {
  const size_t before = r.size();
  std::map<HalfEdgeId, VertexId> owner;
  for (const auto& [vid, v] : p.vertices) {
    if (v.id != vid) add(r, "ids", "vertex record id mismatch", vid);
    for (HalfEdgeId h : v.rotation) {
      auto it = p.half_edges.find(h);
      if (it == p.half_edges.end()) {
        add(r, "ids", "rotation lists unknown half-edge " + std::to_string(h), vid, h);
        continue;
      }
      if (it->second.vertex != vid) {
        add(r, "ids", "half-edge " + std::to_string(h) + " listed at a vertex it does not belong to", vid, h);
      }
      if (!owner.emplace(h, vid).second) {
        add(r, "ids", "half-edge " + std::to_string(h) + " appears in more than one rotation slot", vid, h);
      }
    }
  }
  for (const auto& [hid, he] : p.half_edges) {
    if (he.id != hid) add(r, "ids", "half-edge record id mismatch", std::nullopt, hid);
    if (!p.vertices.count(he.vertex)) {
      add(r, "ids", "half-edge attached to unknown vertex " + std::to_string(he.vertex), std::nullopt, hid);
    } else if (!owner.count(hid)) {
      add(r, "ids", "half-edge missing from its vertex rotation", he.vertex, hid);
    }
    if (he.type < 0 || he.type >= p.k) {
      add(r, "type-range", "edge type " + std::to_string(he.type) + " outside 0..k-1", he.vertex, hid);
    }
    if (he.twin) {
      auto t = p.half_edges.find(*he.twin);
      if (t == p.half_edges.end()) {
        add(r, "twin", "twin " + std::to_string(*he.twin) + " does not exist", he.vertex, hid);
      } else if (*he.twin == hid) {
        add(r, "twin", "half-edge is its own twin", he.vertex, hid);
      } else if (!t->second.twin || *t->second.twin != hid) {
        add(r, "twin", "twin does not point back", he.vertex, hid);
      }
    }
  }
  return r.size() == before;
}

}  // namespace

ValidationReport validate(const SpeiserPatch& p) {
  ValidationReport r;
  if (p.k < 2) add(r, "degree", "k must be at least 2");
  if (p.base.size() != p.k) {
    add(r, "labels", "base curve has " + std::to_string(p.base.size()) + " entries, expected k=" +
                         std::to_string(p.k));
  }
  if (!p.vertices.count(p.root)) {
    add(r, "root", "root vertex " + std::to_string(p.root) + " does not exist");
    return r;
  }
  if (p.vertex(p.root).boundary && p.vertices.size() > 1) {
    add(r, "root", "root is a boundary vertex", p.root);
  }
  if (!check_references(p, r) || p.k < 2) return r;

  for (const auto& [hid, he] : p.half_edges) {
    if (!he.twin) continue;
    const HalfEdge& tw = p.half_edge(*he.twin);
    if (p.vertex(he.vertex).color == p.vertex(tw.vertex).color) {
      add(r, "bipartite", "edge joins two " + std::string(to_string(p.vertex(he.vertex).color)) + " vertices",
          he.vertex, hid);
    }
    if (tw.type != he.type) add(r, "twin-type", "twin carries a different edge type", he.vertex, hid);
  }

  for (const auto& [vid, v] : p.vertices) {
    if (v.boundary) continue;
    if (static_cast<int>(v.rotation.size()) != p.k) {
      add(r, "degree", "interior vertex has " + std::to_string(v.rotation.size()) + " half-edges, expected " +
                           std::to_string(p.k), vid);
      continue;
    }
    const int step = v.color == Color::Cross ? 1 : -1;
    for (int i = 0; i < p.k; ++i) {
      const HalfEdge& a = p.half_edge(v.rotation[static_cast<size_t>(i)]);
      const HalfEdge& b = p.half_edge(v.rotation[static_cast<size_t>((i + 1) % p.k)]);
      if (!a.twin) add(r, "dangling", "interior vertex has a dangling half-edge", vid, a.id);
      if (mod(a.type + step, p.k) != b.type) {
        add(r, "rotation", "edge types around " + std::string(to_string(v.color)) +
                               " vertex do not follow the base-curve order", vid, a.id);
        break;
      }
    }
  }

  const auto dist = distances_from(p, p.root);
  for (const auto& [vid, v] : p.vertices) {
    if (!dist.count(vid)) add(r, "connected", "vertex unreachable from root", vid);
  }

  if (r.empty()) {
    for (const Face& f : faces(p)) {
      for (const Corner& c : f.corners) {
        if (p.vertex(c.vertex).boundary) continue;
        if (corner_label_index(p, c) != f.label_index) {
          add(r, "face-label", "face carries two different labels", c.vertex, c.from);
          break;
        }
        for (HalfEdgeId h : {c.from, c.to}) {
          const int t = p.half_edge(h).type;
          if (t != f.label_index && t != mod(f.label_index - 1, p.k)) {
            add(r, "face-types", "face touches edge type " + std::to_string(t) + " outside {i-1, i}",
                c.vertex, h);
          }
        }
      }
    }
  }
  return r;
}

std::string describe(const ValidationReport& report) {
  std::ostringstream os;
  for (const auto& v : report) {
    os << v.rule << ": " << v.message;
    if (v.vertex) os << " [vertex " << *v.vertex << "]";
    if (v.half_edge) os << " [half-edge " << *v.half_edge << "]";
    os << '\n';
  }
  return os.str();
}

std::map<VertexId, int> distances_from(const SpeiserPatch& p, VertexId source) {
  std::map<VertexId, int> dist;
  if (!p.has_vertex(source)) throw DomainError("unknown vertex id " + std::to_string(source));
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (HalfEdgeId h : p.vertex(v).rotation) {
      auto w = p.far_end(p.half_edge(h));
      if (w && !dist.count(*w)) {
        dist[*w] = dist[v] + 1;
        queue.push_back(*w);
      }
    }
  }
  return dist;
}

std::optional<int> graph_distance(const SpeiserPatch& p, VertexId u, VertexId v) {
  if (!p.has_vertex(v)) throw DomainError("unknown vertex id " + std::to_string(v));
  const auto dist = distances_from(p, u);
  auto it = dist.find(v);
  if (it == dist.end()) return std::nullopt;
  return it->second;
}

int corner_label_index(const SpeiserPatch& p, const Corner& c) {
  const Vertex& v = p.vertex(c.vertex);
  return v.color == Color::Cross ? p.half_edge(c.to).type : p.half_edge(c.from).type;
}

std::vector<Face> faces(const SpeiserPatch& p) {
  // A corner is identified by its vertex and the rotation slot of `from`.
  auto next_in_rotation = [&](const HalfEdge& he) {
    const auto& rot = p.vertex(he.vertex).rotation;
    const int s = p.slot_of(he);
    return rot[static_cast<size_t>((s + 1) % static_cast<int>(rot.size()))];
  };
  auto corner_at = [&](HalfEdgeId from) {
    const HalfEdge& he = p.half_edge(from);
    return Corner{he.vertex, from, next_in_rotation(he)};
  };

  std::set<HalfEdgeId> visited;  // keyed by corner.from
  std::vector<Face> out;
  auto walk = [&](HalfEdgeId start) {
    Face f;
    Corner c = corner_at(start);
    while (true) {
      visited.insert(c.from);
      f.corners.push_back(c);
      const HalfEdge& to = p.half_edge(c.to);
      if (!to.twin) break;
      if (*to.twin == start) {
        f.closed = true;
        break;
      }
      if (visited.count(*to.twin)) break;
      c = corner_at(*to.twin);
    }
    f.label_index = corner_label_index(p, f.corners.front());
    if (p.base.size() == p.k) f.label = p.base.face_label(f.label_index);
    out.push_back(std::move(f));
  };

  // Open faces start at a corner whose `from` half-edge is dangling.
  for (const auto& [hid, he] : p.half_edges) {
    if (!he.twin && !visited.count(hid)) walk(hid);
  }
  for (const auto& [hid, he] : p.half_edges) {
    if (!visited.count(hid)) walk(hid);
  }
  return out;
}

}  // namespace speiser
