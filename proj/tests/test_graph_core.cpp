#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "speiser/canonical.hpp"
#include "speiser/families.hpp"
#include "speiser/scheme.hpp"
#include "speiser/spg_io.hpp"

using namespace speiser;

namespace {

bool has_rule(const ValidationReport& r, const std::string& rule) {
  for (const auto& v : r)
    if (v.rule == rule) return true;
  return false;
}

std::size_t edge_count(const SpeiserPatch& p) {
  std::size_t n = 0;
  for (const auto& [id, h] : p.half_edges)
    if (h.twin && id < *h.twin) ++n;
  return n;
}

SpeiserPatch single_vertex(int k) {
  SpeiserPatch p;
  p.k = k;
  std::vector<SphereValue> labels;
  for (int i = 0; i + 1 < k; ++i) labels.emplace_back(static_cast<double>(i) + 2.0);
  labels.push_back(SphereValue::infinity());
  p.base = BaseCurve(labels);
  Vertex v;
  v.id = 0;
  v.boundary = true;
  for (int t = 0; t < k; ++t) {
    HalfEdge h;
    h.id = static_cast<HalfEdgeId>(t);
    h.vertex = 0;
    h.type = t;
    p.half_edges[h.id] = h;
    v.rotation.push_back(h.id);
  }
  p.vertices[0] = v;
  p.root = 0;
  return p;
}

std::vector<SchemePtr> catalog() {
  return {exp_scheme(),
          double_exp_scheme(SphereValue(-9.0), SphereValue(-9.0)),
          double_exp_scheme(SphereValue(-9.0), SphereValue(-3.0)),
          hyperbolic_scheme(SphereValue(-3.0)),
          binary_tree_scheme(),
          std::make_shared<PatchScheme>(cycle_patch(3))};
}

}  // namespace

TEST_CASE("validate accepts the line complex of z^2") {
  CHECK(validate(cycle_patch(2)).empty());
}

TEST_CASE("validate exempts a lone boundary vertex") {
  for (int k = 2; k <= 4; ++k) CHECK(validate(single_vertex(k)).empty());
}

TEST_CASE("validate reports an edge joining two Cross vertices") {
  SpeiserPatch p = cycle_patch(2);
  for (auto& [id, v] : p.vertices) v.color = Color::Cross;
  CHECK(has_rule(validate(p), "bipartite"));
}

TEST_CASE("validate rejects a reversed rotation at an interior degree-3 vertex") {
  SpeiserPatch p = ball(*double_exp_scheme(SphereValue(-9.0), SphereValue(-9.0)), 2);
  auto& root = p.vertices.at(p.root);
  std::reverse(root.rotation.begin(), root.rotation.end());
  CHECK(has_rule(validate(p), "rotation"));
}

TEST_CASE("validate rejects twins of different type and missing twins") {
  SpeiserPatch p = cycle_patch(2);
  auto& h = p.half_edges.begin()->second;
  h.type = 1 - h.type;
  CHECK_FALSE(validate(p).empty());

  SpeiserPatch q = cycle_patch(2);
  q.half_edges.begin()->second.twin = 999;
  CHECK(has_rule(validate(q), "twin"));
}

TEST_CASE("ball of the exp scheme") {
  const auto s = exp_scheme();
  const SpeiserPatch b2 = ball(*s, 2);
  CHECK(b2.vertices.size() == 5);
  CHECK(edge_count(b2) == 4);
  const SpeiserPatch b0 = ball(*s, 0);
  CHECK(b0.vertices.size() == 1);
  CHECK(validate(b0).empty());
}

TEST_CASE("a finite scheme saturates") {
  const PatchScheme cyc(cycle_patch(2));
  const SpeiserPatch b = ball(cyc, 2);
  CHECK(b.vertices.size() == 4);
  CHECK(edge_count(b) == 4);
  for (const auto& [id, v] : ball(cyc, 3).vertices) CHECK_FALSE(v.boundary);
}

TEST_CASE("vertex budget is enforced") {
  CHECK_THROWS_AS(ball(*binary_tree_scheme(), 20, 1000), BudgetExceeded);
  try {
    ball(*binary_tree_scheme(), 20, 1000);
  } catch (const BudgetExceeded& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("graph_distance examples") {
  const SpeiserPatch b = ball(*exp_scheme(), 2);
  CHECK(graph_distance(b, b.root, b.root) == 0);
  std::vector<VertexId> ends;
  for (const auto& [id, v] : b.vertices)
    if (graph_distance(b, b.root, id) == 2) ends.push_back(id);
  REQUIRE(ends.size() == 2);
  CHECK(graph_distance(b, ends[0], ends[1]) == 4);
  CHECK_THROWS(graph_distance(b, b.root, 987654321));

  // Comb rays carry doubled edges: parallel edges count once.
  const SpeiserPatch comb = ball(*double_exp_scheme(SphereValue(-9.0), SphereValue(-9.0)), 3);
  bool saw_parallel = false;
  for (const auto& [vid, v] : comb.vertices) {
    std::map<VertexId, int> mult;
    for (HalfEdgeId h : v.rotation)
      if (auto w = comb.far_end(comb.half_edge(h))) ++mult[*w];
    for (const auto& [w, m] : mult) {
      if (m > 1) {
        saw_parallel = true;
        CHECK(graph_distance(comb, vid, w) == 1);
      }
    }
  }
  CHECK(saw_parallel);
}

TEST_CASE("canonical code is invariant under id permutations") {
  for (const auto& s : catalog()) {
    const SpeiserPatch p = ball(*s, 3);
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
      CHECK(canonical_code(p) == canonical_code(oracle::permute_ids(p, seed)));
  }
}

TEST_CASE("canonical code of a single vertex is fixed") {
  CHECK(canonical_code(single_vertex(3)) == canonical_code(oracle::permute_ids(single_vertex(3), 9)));
  CHECK_FALSE(canonical_code(single_vertex(3)) == canonical_code(single_vertex(2)));
}

TEST_CASE("exp ball differs from the same path rooted at an end") {
  const SpeiserPatch b = ball(*exp_scheme(), 2);
  SpeiserPatch moved = b;
  for (const auto& [id, v] : b.vertices)
    if (graph_distance(b, b.root, id) == 1) {
      moved.root = id;
      break;
    }
  CHECK_FALSE(canonical_code(b) == canonical_code(moved));
  CHECK_FALSE(oracle::brute_force_isomorphic(b, moved));
}

TEST_CASE("canonical code agrees with brute-force isomorphism on small patches") {
  // Pool of valid patches with at most 8 vertices, including rim rotation flips.
  std::vector<SpeiserPatch> pool;
  for (const auto& s : catalog()) {
    for (int r = 0; r <= 3; ++r) {
      const SpeiserPatch p = ball(*s, r);
      if (p.vertices.size() > 8) break;
      pool.push_back(p);
      for (const auto& [id, v] : p.vertices) {
        if (!v.boundary || v.rotation.size() < 3) continue;
        SpeiserPatch q = p;
        auto& rot = q.vertices.at(id).rotation;
        std::reverse(rot.begin(), rot.end());
        if (validate(q).empty()) pool.push_back(q);
        break;
      }
    }
  }
  pool.push_back(cycle_patch(2));
  pool.push_back(cycle_patch(3));
  pool.push_back(cycle_patch(4));
  pool.push_back(single_vertex(2));
  pool.push_back(single_vertex(3));
  const std::size_t base = pool.size();
  for (std::size_t i = 0; i < base; ++i) pool.push_back(oracle::permute_ids(pool[i], 100 + i));

  int agree_true = 0, agree_false = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i; j < pool.size(); ++j) {
      const bool codes = canonical_code(pool[i]) == canonical_code(pool[j]);
      const bool brute = oracle::brute_force_isomorphic(pool[i], pool[j]);
      CHECK(codes == brute);
      (codes ? agree_true : agree_false)++;
    }
  }
  CHECK(agree_true > 0);
  CHECK(agree_false > 0);
}

TEST_CASE("rooted_isomorphic examples") {
  const SpeiserPatch c4 = cycle_patch(2);
  CHECK(rooted_isomorphic(c4, c4));
  SpeiserPatch relabeled = c4;
  relabeled.base = BaseCurve({SphereValue(-1.0), SphereValue::infinity()});
  CHECK(rooted_isomorphic(c4, relabeled, LabelMap{{SphereValue(0.0), SphereValue(-1.0)},
                                                  {SphereValue::infinity(), SphereValue::infinity()}}));
  CHECK_FALSE(rooted_isomorphic(c4, cycle_patch(3)));
  CHECK_THROWS_AS(rooted_isomorphic(c4, relabeled, LabelMap{{SphereValue(0.0), SphereValue(-1.0)},
                                                            {SphereValue::infinity(), SphereValue(-1.0)}}),
                  DomainError);
}

TEST_CASE("isometric_embed examples") {
  const auto s = exp_scheme();
  // Color-preserving images of the Cross root within distance 3: offsets 0 and +-2.
  std::size_t cross_within_3 = 0;
  for (const auto& [id, v] : ball(*s, 3).vertices)
    if (v.color == Color::Cross) ++cross_within_3;
  CHECK(cross_within_3 == 3);
  CHECK(isometric_embed(ball(*s, 1), *s, 3).embeddings.size() == cross_within_3);
  // A lone root maps onto every same-colored host vertex within the search radius.
  SpeiserPatch lone = ball(*s, 0);
  const SpeiserPatch host_ball = ball(*s, 2);
  std::size_t same = 0;
  for (const auto& [id, v] : host_ball.vertices)
    if (v.color == lone.vertex(lone.root).color) ++same;
  CHECK(isometric_embed(lone, *s, 2).embeddings.size() == same);
  CHECK(isometric_embed(cycle_patch(2), *s, 3).embeddings.empty());
}

TEST_CASE("faces examples") {
  const auto f4 = faces(cycle_patch(2));
  REQUIRE(f4.size() == 2);
  std::set<std::string> labels;
  for (const auto& f : f4) {
    CHECK(f.closed);
    CHECK(f.corners.size() == 4);
    labels.insert(format_sphere_value(f.label));
  }
  CHECK(labels == std::set<std::string>{"0", "inf"});

  const auto f1 = faces(single_vertex(3));
  CHECK(f1.size() == 3);
  for (const auto& f : f1) CHECK_FALSE(f.closed);

  const auto fe = faces(ball(*exp_scheme(), 2));
  REQUIRE(fe.size() == 2);
  std::set<std::string> el;
  for (const auto& f : fe) {
    CHECK_FALSE(f.closed);
    el.insert(format_sphere_value(f.label));
  }
  CHECK(el == std::set<std::string>{"1", "inf"});
}

TEST_CASE("property: balls are nested and valid") {
  for (const auto& s : catalog()) {
    SpeiserPatch prev = ball(*s, 0);
    for (int r = 1; r <= 8; ++r) {
      const SpeiserPatch b = ball(*s, r);
      const auto rep = validate(b);
      CHECK_MESSAGE(rep.empty(), describe(rep));
      for (const auto& [id, v] : prev.vertices) {
        REQUIRE(b.has_vertex(id));
        CHECK(b.vertex(id).color == v.color);
        for (HalfEdgeId h : v.rotation) {
          const HalfEdge& he = prev.half_edge(h);
          if (he.twin) CHECK(b.half_edge(h).twin == he.twin);
        }
      }
      prev = b;
    }
  }
}

TEST_CASE("property: graph distance agrees with Floyd-Warshall and satisfies the triangle inequality") {
  std::mt19937_64 rng(7);
  for (const auto& s : catalog()) {
    const SpeiserPatch b = ball(*s, 4);
    const auto all = oracle::all_pairs(b);
    std::vector<VertexId> ids;
    for (const auto& [id, v] : b.vertices) ids.push_back(id);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    for (int t = 0; t < 60; ++t) {
      const VertexId u = ids[pick(rng)], v = ids[pick(rng)], w = ids[pick(rng)];
      const int uv = *graph_distance(b, u, v), vw = *graph_distance(b, v, w), uw = *graph_distance(b, u, w);
      CHECK(uv == all.at({u, v}));
      CHECK(uw <= uv + vw);
      CHECK(uv == *graph_distance(b, v, u));
    }
  }
}

TEST_CASE("property: faces partition interior half-edges") {
  for (const auto& s : catalog()) {
    const SpeiserPatch b = ball(*s, 4);
    std::map<HalfEdgeId, int> seen;
    for (const auto& f : faces(b))
      for (const auto& c : f.corners) ++seen[c.from];
    for (const auto& [vid, v] : b.vertices) {
      if (v.boundary) continue;
      for (HalfEdgeId h : v.rotation) CHECK(seen[h] == 1);
    }
  }
}

TEST_CASE("SPG round trip") {
  for (const auto& s : catalog()) {
    const SpeiserPatch p = ball(*s, 3);
    const SpeiserPatch q = parse_spg(to_spg(p, {"comment"}));
    CHECK(canonical_code(p) == canonical_code(q));
    CHECK(p.base == q.base);
    CHECK(to_spg(q) == to_spg(p));
  }
}

TEST_CASE("SPG reader rejects invalid input with line numbers") {
  const std::string good = to_spg(cycle_patch(2));
  CHECK_THROWS_WITH_AS(parse_spg("spg 2\n", "x.spg"), doctest::Contains("x.spg:1"), DomainError);

  std::string bad = good;
  const auto pos = bad.find("vertex 0 cross");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 14, "vertex 0 circle");
  CHECK_THROWS_WITH_AS(parse_spg(bad, "y.spg"), doctest::Contains("y.spg:"), DomainError);

  CHECK_THROWS_AS(parse_spg(good + "halfedge 1 type 9 twin dangling\n"), DomainError);
  CHECK_THROWS_AS(parse_spg("spg 1\nk two\n"), DomainError);
}

TEST_CASE("DOT export lists one edge per twin pair") {
  const SpeiserPatch p = ball(*exp_scheme(), 2);
  const std::string dot = to_dot(p);
  std::size_t edges = 0;
  for (std::size_t pos = dot.find(" -- "); pos != std::string::npos; pos = dot.find(" -- ", pos + 1)) ++edges;
  CHECK(edges == edge_count(p));
  CHECK(dot.find("// face") != std::string::npos);
}
