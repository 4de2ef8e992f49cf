#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speiser/patch.hpp"
#include "speiser/scheme.hpp"

namespace speiser {

/// Canonical string of a rooted patch. Covers colors, edge types, rotations,
/// and boundary flags; label values are not part of the code.
struct RootedCode {
  std::string bytes;
  friend bool operator==(const RootedCode&, const RootedCode&) = default;
  friend auto operator<=>(const RootedCode&, const RootedCode&) = default;
};

/// Breadth-first code from the root. Each vertex lists its rotation starting
/// at the half-edge it was discovered through; the root's starting offset is
/// the one giving the lexicographically smallest code. Throws on invalid patches.
RootedCode canonical_code(const SpeiserPatch& patch);

using LabelMap = std::vector<std::pair<SphereValue, SphereValue>>;

/// True iff the patches are rooted-isomorphic once `label_map` is applied to
/// p1's labels. The mapped base curve of p1 may be a cyclic rotation of p2's;
/// edge types are renumbered accordingly before the codes are compared.
bool rooted_isomorphic(const SpeiserPatch& p1, const SpeiserPatch& p2,
                       const std::optional<LabelMap>& label_map = std::nullopt);

/// Copy of `patch` with edge types shifted by -shift (mod k) and the base rotated to match.
SpeiserPatch rotate_types(const SpeiserPatch& patch, int shift);

struct EmbeddingSearch {
  std::vector<std::map<VertexId, VertexId>> embeddings;
  int partial_matches = 0;
  std::vector<std::string> diagnostics;
};

/// Rotation- and color-preserving isometric embeddings of `small` into `host`
/// whose root image lies within `search_radius` of the host root. Edge types
/// are matched through `type_map` (small type -> host type), identity by default.
EmbeddingSearch isometric_embed(const SpeiserPatch& small, const GraphScheme& host, int search_radius,
                                const std::optional<std::vector<int>>& type_map = std::nullopt);

}  // namespace speiser
