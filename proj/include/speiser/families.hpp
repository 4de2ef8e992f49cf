#pragma once

#include <optional>
#include <string>

#include "speiser/scheme.hpp"

namespace speiser {

enum class Family { ExpPlusOne, DoubleExpPerturbed, HyperbolicSb, BinaryTree };

const char* to_string(Family f);
Family parse_family(const std::string& name);  // exp | dexp | hyp | tree

/// Family name, label parameters and the conformal type asserted in the literature.
struct FamilySpec {
  Family family = Family::ExpPlusOne;
  std::optional<SphereValue> a;
  std::optional<SphereValue> b;
  int cut = 0;

  /// Parabolic for ExpPlusOne and DoubleExpPerturbed, Hyperbolic for HyperbolicSb.
  /// Empty for the binary tree, which is a diagnostic and not a family member.
  std::optional<ConformalType> known_type() const;
};

inline constexpr const char* kGroundTruthNote = "ground truth (published), not computed";

/// Speiser graph of e^z + 1: a bi-infinite path, base (1, inf), root a Cross vertex.
SchemePtr exp_scheme();

/// Perturbed double exponential. With a == b the degree-3 graph of
/// a(e^{e^z} - 1) + 1 with base (a, 1, inf); otherwise degree 4 with base
/// (a, b, 1, inf), faces above `cut` on the spine labeled a and the rest b.
SchemePtr double_exp_scheme(const SphereValue& a, const SphereValue& b, int cut = 0);

/// S_b: base (b, 1, inf). Below the cut it is the degree-3 comb, above it
/// the path of e^z with the upward edge doubled.
SchemePtr hyperbolic_scheme(const SphereValue& b, int cut = 0);

/// 3-regular tree with base (0, 1, inf). Used as a hyperbolic diagnostic.
SchemePtr binary_tree_scheme();

SchemePtr make_family(const FamilySpec& spec);

/// Closed cycle of length 2d: the Speiser graph of z^d over base (0, inf).
SpeiserPatch cycle_patch(int d);

/// Vertex id helpers for the comb-based families: spine position p, ray index j >= 0.
VertexId comb_vertex_id(long p, std::uint32_t j = 0);
std::pair<long, std::uint32_t> comb_position(VertexId id);

}  // namespace speiser
