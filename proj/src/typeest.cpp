#include "speiser/typeest.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "speiser/families.hpp"

namespace speiser {

namespace {

struct SolveResult {
  double resistance = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

SolveResult solve_ball(const SpeiserPatch& patch, double tol) {
  std::unordered_map<VertexId, int> index;
  bool has_rim = false;
  for (const auto& [id, v] : patch.vertices) {
    if (v.boundary) {
      has_rim = true;
    } else {
      const int next = static_cast<int>(index.size());
      index.emplace(id, next);
    }
  }
  if (!has_rim) return {std::numeric_limits<double>::infinity(), 0.0, 0};
  if (!index.count(patch.root)) return {0.0, 0.0, 0};

  const int n = static_cast<int>(index.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [hid, he] : patch.half_edges) {
    if (!he.twin || hid > *he.twin) continue;  // each edge once
    const VertexId u = he.vertex;
    const VertexId w = patch.half_edge(*he.twin).vertex;
    const auto iu = index.find(u);
    const auto iw = index.find(w);
    if (iu != index.end()) trips.emplace_back(iu->second, iu->second, 1.0);
    if (iw != index.end()) trips.emplace_back(iw->second, iw->second, 1.0);
    if (iu != index.end() && iw != index.end()) {
      trips.emplace_back(iu->second, iw->second, -1.0);
      trips.emplace_back(iw->second, iu->second, -1.0);
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  const int r = index.at(patch.root);
  b[r] = 1.0;

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(10 * std::max(n, 1));
  cg.compute(L);
  if (cg.info() != Eigen::Success) throw DomainError("effective resistance: matrix factorization failed");
  Eigen::VectorXd x = cg.solve(b);
  const double residual = (L * x - b).norm();
  if (cg.info() != Eigen::Success && residual > 1e3 * tol)
    throw DomainError("effective resistance: conjugate gradients did not converge (residual " +
                      std::to_string(residual) + ")");
  return {x[r], residual, static_cast<int>(cg.iterations())};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ResistanceProfile effective_resistance(const GraphScheme& scheme, const std::vector<int>& radii, double solver_tol,
                                       std::size_t vertex_budget) {
  ResistanceProfile out;
  for (int r : radii) {
    if (r < 1) throw DomainError("effective resistance: radius must be >= 1");
    const SpeiserPatch patch = ball(scheme, r, vertex_budget);
    const SolveResult s = solve_ball(patch, solver_tol);
    out.radii.push_back(r);
    out.resistance.push_back(s.resistance);
    out.residual.push_back(s.residual);
    out.iterations.push_back(s.iterations);
    out.vertices.push_back(patch.vertices.size());
  }
  return out;
}

EscapeEstimate random_walk_escape(const GraphScheme& scheme, int radius, int trials, std::uint64_t seed) {
  if (radius < 1) throw DomainError("random walk: radius must be >= 1");
  if (trials < 1) throw DomainError("random walk: trials must be >= 1");
  const VertexId root = scheme.root();
  const auto dist = scheme_distances(scheme, root, radius);

  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  auto steps_from = [&](VertexId v) -> const std::vector<VertexId>& {
    auto it = adj.find(v);
    if (it != adj.end()) return it->second;
    std::vector<VertexId> nb;
    for (const auto& w : scheme.neighbors(v))
      if (w) nb.push_back(*w);
    return adj.emplace(v, std::move(nb)).first->second;
  };

  const long max_steps = 100'000'000;
  EscapeEstimate est;
  est.trials = trials;
  for (int i = 0; i < trials; ++i) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    VertexId v = root;
    for (long step = 0; step < max_steps; ++step) {
      const auto& nb = steps_from(v);
      if (nb.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      v = nb[pick(rng)];
      if (v == root) break;
      const auto d = dist.find(v);
      if (d == dist.end() || d->second >= radius) {
        ++est.escapes;
        break;
      }
    }
  }
  const double n = trials;
  const double p = est.escapes / n;
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  est.p = p;
  est.ci_low = std::max(0.0, centre - half);
  est.ci_high = std::min(1.0, centre + half);
  return est;
}

const char* to_string(TypeVerdict v) {
  switch (v) {
    case TypeVerdict::ConsistentWithParabolic: return "ConsistentWithParabolic";
    case TypeVerdict::ConsistentWithHyperbolic: return "ConsistentWithHyperbolic";
    case TypeVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ProfileFit fit_profile(const ResistanceProfile& profile) {
  ProfileFit fit;
  const auto& R = profile.resistance;
  const auto& r = profile.radii;
  const std::size_t m = R.size();
  if (m < 3) return fit;
  const std::size_t mid = m / 2;
  fit.log_slope = (R[m - 1] - R[mid]) / (std::log(r[m - 1]) - std::log(r[mid]));
  fit.last_increment = R[m - 1] > 0 ? (R[m - 1] - R[m - 2]) / R[m - 1] : 0.0;
  fit.increments_shrinking = (R[m - 1] - R[m - 2]) < (R[m - 2] - R[m - 3]);
  return fit;
}

TypeVerdict classify_profile(const ResistanceProfile& profile) {
  const auto& R = profile.resistance;
  if (R.size() < 3) return TypeVerdict::Inconclusive;
  if (std::isinf(R.back())) return TypeVerdict::Inconclusive;  // finite graph
  const ProfileFit fit = fit_profile(profile);
  if (fit.last_increment < 0.01 && fit.increments_shrinking) return TypeVerdict::ConsistentWithHyperbolic;
  if (fit.log_slope >= 0.05) return TypeVerdict::ConsistentWithParabolic;
  return TypeVerdict::Inconclusive;
}

TypeReport type_heuristic(const GraphScheme& scheme, const std::vector<int>& radii) {
  TypeReport rep;
  rep.profile = effective_resistance(scheme, radii);
  rep.fit = fit_profile(rep.profile);
  rep.verdict = classify_profile(rep.profile);
  rep.known_type = scheme.meta().known_type;

  std::ostringstream os;
  os << "verdict (heuristic): " << to_string(rep.verdict) << "\n";
  os << "log-slope " << rep.fit.log_slope << ", last relative increment " << rep.fit.last_increment << "\n";
  if (rep.known_type)
    os << "known type: " << to_string(*rep.known_type) << ", " << kGroundTruthNote << "\n";
  else
    os << "known type: unknown\n";
  os << kTypeCaveat << "\n";
  rep.text = os.str();
  return rep;
}

}  // namespace speiser
