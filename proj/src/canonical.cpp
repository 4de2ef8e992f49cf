#include "speiser/canonical.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace speiser {

namespace {

void require_valid(const SpeiserPatch& p, const char* what) {
  const auto report = validate(p);
  if (!report.empty()) throw DomainError(std::string(what) + " requires a valid patch:\n" + describe(report));
}

std::string code_from_offset(const SpeiserPatch& p, int root_offset) {
  std::map<VertexId, int> index;
  std::map<VertexId, int> start;
  std::vector<VertexId> order;
  index[p.root] = 0;
  start[p.root] = root_offset;
  order.push_back(p.root);

  std::ostringstream os;
  os << 'k' << p.k;
  for (size_t n = 0; n < order.size(); ++n) {
    const Vertex& v = p.vertex(order[n]);
    const int deg = static_cast<int>(v.rotation.size());
    os << '|' << (v.color == Color::Cross ? 'X' : 'O') << (v.boundary ? 'b' : 'i') << deg;
    for (int i = 0; i < deg; ++i) {
      const HalfEdge& he = p.half_edge(v.rotation[static_cast<size_t>((start[v.id] + i) % deg)]);
      os << ';' << he.type;
      if (!he.twin) {
        os << ":-";
        continue;
      }
      const HalfEdge& tw = p.half_edge(*he.twin);
      const int twin_slot = p.slot_of(tw);
      if (!index.count(tw.vertex)) {
        index[tw.vertex] = static_cast<int>(order.size());
        start[tw.vertex] = twin_slot;
        order.push_back(tw.vertex);
      }
      const int wdeg = static_cast<int>(p.vertex(tw.vertex).rotation.size());
      const int rel = ((twin_slot - start[tw.vertex]) % wdeg + wdeg) % wdeg;
      os << ':' << index[tw.vertex] << '.' << rel;
    }
  }
  return os.str();
}

bool same_label_set(const std::vector<SphereValue>& a, const BaseCurve& b) {
  if (static_cast<int>(a.size()) != b.size()) return false;
  for (const auto& x : a) {
    if (b.index_of(x) < 0) return false;
  }
  return true;
}

}  // namespace

RootedCode canonical_code(const SpeiserPatch& p) {
  require_valid(p, "canonical_code");
  const int deg = static_cast<int>(p.vertex(p.root).rotation.size());
  std::string best = code_from_offset(p, 0);
  for (int o = 1; o < deg; ++o) best = std::min(best, code_from_offset(p, o));
  return RootedCode{best};
}

SpeiserPatch rotate_types(const SpeiserPatch& p, int shift) {
  const int k = p.k;
  shift = ((shift % k) + k) % k;
  SpeiserPatch q = p;
  std::vector<SphereValue> entries(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) entries[static_cast<size_t>(i)] = p.base[(i + shift) % k];
  q.base = BaseCurve(std::move(entries));
  for (auto& [id, he] : q.half_edges) he.type = ((he.type - shift) % k + k) % k;
  return q;
}

bool rooted_isomorphic(const SpeiserPatch& p1, const SpeiserPatch& p2, const std::optional<LabelMap>& label_map) {
  require_valid(p1, "rooted_isomorphic");
  require_valid(p2, "rooted_isomorphic");

  std::vector<SphereValue> mapped;
  for (const auto& v : p1.base.entries()) {
    if (!label_map) {
      mapped.push_back(v);
      continue;
    }
    auto it = std::find_if(label_map->begin(), label_map->end(),
                           [&](const auto& kv) { return approx_equal(kv.first, v); });
    if (it == label_map->end()) {
      throw DomainError("label map does not cover label " + format_sphere_value(v));
    }
    mapped.push_back(it->second);
  }
  if (label_map) {
    for (size_t i = 0; i < mapped.size(); ++i) {
      for (size_t j = i + 1; j < mapped.size(); ++j) {
        if (approx_equal(mapped[i], mapped[j])) throw DomainError("label map is not injective");
      }
    }
    if (!same_label_set(mapped, p2.base)) throw DomainError("label map is not a bijection onto the second label set");
  }
  if (p1.k != p2.k || !same_label_set(mapped, p2.base)) return false;

  const int k = p1.k;
  for (int s = 0; s < k; ++s) {
    bool match = true;
    for (int i = 0; i < k && match; ++i) match = approx_equal(mapped[static_cast<size_t>((i + s) % k)], p2.base[i]);
    if (!match) continue;
    return canonical_code(rotate_types(p1, s)) == canonical_code(p2);
  }
  return false;
}

namespace {

// Position of a type in the host rotation at a vertex of the given color.
int host_slot(Color c, int type, int k) { return c == Color::Cross ? type : (k - type) % k; }

bool cyclically_ordered(const std::vector<int>& slots) {
  if (slots.size() < 3) return true;
  int descents = 0;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[(i + 1) % slots.size()] <= slots[i]) ++descents;
  }
  return descents == 1;
}

}  // namespace

EmbeddingSearch isometric_embed(const SpeiserPatch& small, const GraphScheme& host, int search_radius,
                                const std::optional<std::vector<int>>& type_map) {
  require_valid(small, "isometric_embed");
  const int hk = host.degree();
  std::vector<int> tau(static_cast<size_t>(small.k));
  for (int t = 0; t < small.k; ++t) tau[static_cast<size_t>(t)] = type_map ? type_map->at(static_cast<size_t>(t)) : t;
  for (int t : tau) {
    if (t < 0 || t >= hk) throw DomainError("type map sends a type outside the host degree");
  }

  // Small-patch distances, used for the isometry check.
  std::map<VertexId, std::map<VertexId, int>> small_dist;
  int diameter = 0;
  for (const auto& [id, v] : small.vertices) {
    small_dist[id] = distances_from(small, id);
    for (const auto& [w, d] : small_dist[id]) diameter = std::max(diameter, d);
  }

  EmbeddingSearch out;
  const auto candidates = scheme_distances(host, host.root(), search_radius);
  const Color root_color = small.vertex(small.root).color;
  for (const auto& [h, hd] : candidates) {
    if (host.color(h) != root_color) continue;
    std::map<VertexId, VertexId> image{{small.root, h}};
    std::map<VertexId, VertexId> preimage{{h, small.root}};
    std::deque<VertexId> queue{small.root};
    std::string failure;
    while (!queue.empty() && failure.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      const Vertex& vx = small.vertex(v);
      const VertexId hv = image[v];
      if (!host.expandable(hv)) {
        failure = "host vertex " + std::to_string(hv) + " not expandable";
        break;
      }
      const auto hn = host.neighbors(hv);
      std::vector<int> slots;
      for (HalfEdgeId hid : vx.rotation) {
        const HalfEdge& he = small.half_edge(hid);
        const int ht = tau[static_cast<size_t>(he.type)];
        slots.push_back(host_slot(host.color(hv), ht, hk));
        if (!he.twin) continue;
        const auto& target = hn[static_cast<size_t>(ht)];
        if (!target) {
          failure = "host lacks an edge of type " + std::to_string(ht);
          break;
        }
        const VertexId w = small.half_edge(*he.twin).vertex;
        if (auto it = image.find(w); it != image.end()) {
          if (it->second != *target) failure = "inconsistent closing edge";
          continue;
        }
        if (preimage.count(*target)) {
          failure = "map is not injective";
          break;
        }
        if (host.color(*target) != small.vertex(w).color) {
          failure = "color mismatch";
          break;
        }
        image[w] = *target;
        preimage[*target] = w;
        queue.push_back(w);
      }
      if (failure.empty() && !vx.boundary && !cyclically_ordered(slots)) failure = "rotation order not preserved";
    }
    if (failure.empty()) {
      for (const auto& [u, hu] : image) {
        const auto hdist = scheme_distances(host, hu, diameter);
        for (const auto& [v, d] : small_dist[u]) {
          auto it = hdist.find(image[v]);
          if (it == hdist.end() || it->second != d) {
            failure = "not isometric";
            break;
          }
        }
        if (!failure.empty()) break;
      }
    }
    if (failure.empty()) {
      out.embeddings.push_back(std::move(image));
    } else if (image.size() > 1) {
      ++out.partial_matches;
      out.diagnostics.push_back("root image " + std::to_string(h) + ": " + failure);
    }
  }
  if (out.embeddings.empty() && out.partial_matches > 0) {
    out.diagnostics.push_back("search radius " + std::to_string(search_radius) + " exhausted with " +
                              std::to_string(out.partial_matches) + " partial matches");
  }
  return out;
}

}  // namespace speiser
