#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "speiser/scheme.hpp"

namespace speiser {

/// Effective resistance from the root to the contracted rim, per radius.
/// An infinite entry marks a ball without rim vertices (finite graph exhausted).
struct ResistanceProfile {
  std::vector<int> radii;
  std::vector<double> resistance;
  std::vector<double> residual;
  std::vector<int> iterations;
  std::vector<std::size_t> vertices;
};

/// Unit conductance per edge, parallel edges counted separately. Rim vertices are
/// grounded and unit current enters at the root; the system is solved by
/// Jacobi-preconditioned conjugate gradients (at most 10 |V| iterations).
ResistanceProfile effective_resistance(const GraphScheme& scheme, const std::vector<int>& radii,
                                       double solver_tol = 1e-10, std::size_t vertex_budget = kDefaultVertexBudget);

struct EscapeEstimate {
  int trials = 0;
  int escapes = 0;
  double p = 0.0;
  double ci_low = 0.0;  // 95% Wilson interval
  double ci_high = 0.0;
};

/// Fraction of simple random walks from the root reaching graph distance `radius`
/// before returning to the root. Trial i uses its own generator seeded from (seed, i).
EscapeEstimate random_walk_escape(const GraphScheme& scheme, int radius, int trials, std::uint64_t seed);

enum class TypeVerdict { ConsistentWithParabolic, ConsistentWithHyperbolic, Inconclusive };
const char* to_string(TypeVerdict v);

inline constexpr const char* kTypeCaveat =
    "heuristic only: SRW transience does NOT prove hyperbolicity of the surface (exponentially growing parabolic "
    "graphs exist, e.g. the double-exp family)";

struct ProfileFit {
  double log_slope = 0.0;       // (R(r_max) - R(r_mid)) / (ln r_max - ln r_mid)
  double last_increment = 0.0;  // relative increase over the last radius step
  bool increments_shrinking = false;
};

ProfileFit fit_profile(const ResistanceProfile& profile);
/// Pure function of the profile.
TypeVerdict classify_profile(const ResistanceProfile& profile);

struct TypeReport {
  TypeVerdict verdict = TypeVerdict::Inconclusive;
  ResistanceProfile profile;
  ProfileFit fit;
  std::optional<ConformalType> known_type;
  std::string text;
};

TypeReport type_heuristic(const GraphScheme& scheme, const std::vector<int>& radii = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});

}  // namespace speiser
