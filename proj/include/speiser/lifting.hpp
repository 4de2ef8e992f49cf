#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "speiser/analytic.hpp"
#include "speiser/patch.hpp"

namespace speiser {

/// Axis-aligned rectangle in the plane.
struct Box {
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;

  static Box square(double r) { return {-r, r, -r, r}; }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  double diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }
  Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
};

/// Parse "r" (square [-r,r]^2) or "re_min,re_max,im_min,im_max".
Box parse_box(const std::string& text);

/// Knots t_0 < ... < t_m in [0,1] with values and per-knot residuals.
struct PathSample {
  std::vector<double> t;
  std::vector<Complex> z;
  std::vector<double> residual;

  /// Piecewise-linear interpolation of z at parameter s.
  Complex at(double s) const;
  void check() const;  // knots strictly increasing, sizes consistent
};

/// Polyline through the given points with uniformly spaced knots.
PathSample polyline(const std::vector<Complex>& points);

struct LiftOptions {
  double tol = 1e-10;                // sup spherical residual allowed
  double newton_tol = 1e-12;         // relative Newton residual
  double critical_threshold = 1e-8;  // |f'| < threshold * (1 + |f|) stops the lift
  double escape_bound = 1e6;         // |z| above this stops the lift
  double initial_step = 1.0 / 32.0;
  double min_step = 1e-13;
  int max_steps = 400000;
};

enum class LiftStatus { Completed, NearCritical, Escaped, Failed };
const char* to_string(LiftStatus s);

struct LiftResult {
  PathSample lift;  // every accepted step
  LiftStatus status = LiftStatus::Failed;
  Complex where{0.0, 0.0};  // last point reached
  std::string message;

  Complex endpoint() const { return lift.z.back(); }
  double max_residual() const;
};

/// Lift of an arbitrary curve gamma(t), t in [0,1], starting at z0 with f(z0) = gamma(0).
/// `breakpoints` are parameters the stepper must land on (corners of the curve).
LiftResult lift_curve(const CatalogFunction& f, const std::function<Complex(double)>& gamma, Complex z0,
                      const LiftOptions& opt = {}, const std::vector<double>& breakpoints = {});

/// Lift of a piecewise-linear path.
LiftResult lift_path(const CatalogFunction& f, const PathSample& gamma, Complex z0, const LiftOptions& opt = {});

/// Newton from a grid of seeds over the box; roots verified to 1e-10 and deduplicated at 1e-8.
/// Throws when target is a critical value attained inside the box.
std::vector<Complex> preimages(const CatalogFunction& f, Complex target, const Box& box, int grid);

/// Euclidean disks in the plane chart; consecutive centers lie in the previous disk.
struct DiskChain {
  std::vector<Complex> centers;
  std::vector<double> radii;
  void check() const;
};

struct ChainCertificate {
  int disk = 0;
  Complex center{0.0, 0.0};
  Complex center_preimage{0.0, 0.0};
  std::optional<Complex> next_preimage;  // preimage of the next center on this branch
  int injectivity_samples = 0;
  double min_sample_separation = 0.0;
};

/// Continues the inverse branch fixed by z0 along the chain. Throws when a disk
/// contains a singular value or a lift fails; messages carry the disk index.
std::vector<ChainCertificate> continue_chain(const CatalogFunction& f, const DiskChain& chain, Complex z0,
                                             const LiftOptions& opt = {});

struct PhiSample {
  Complex z{0.0, 0.0};
  Complex phi{0.0, 0.0};
  double residual = 0.0;  // |g(phi) - f(z)|
  int parent = -1;        // index of the tree parent, -1 for the root
};

/// phi = g^{-1} o f on the points of a grid over `box` (nx by ny), continued along a
/// breadth-first spanning tree rooted at the grid point nearest w_f. Points rejected
/// by `keep` are left out, and tree edges only join kept points.
std::vector<PhiSample> inverse_branch_compose(const CatalogFunction& f, const CatalogFunction& g, Complex w_f,
                                              Complex w_g, const Box& box, int nx, int ny, double tol = 1e-9,
                                              const LiftOptions& opt = {},
                                              const std::function<bool(Complex)>& keep = nullptr);

struct GraphFromFunctionOptions {
  Box box = Box::square(3.0);
  int grid = 40;
  double match_tol = 1e-7;
  std::optional<Complex> root_hint;
  LiftOptions lift;
};

/// Preimage of the base graph (anchors i and -i, edges through the chordal
/// midpoints of the real arcs) under f. Vertices found inside the box are
/// fully expanded; lifted endpoints outside the box become boundary vertices.
SpeiserPatch graph_from_function(const CatalogFunction& f, const GraphFromFunctionOptions& opt = {});

/// Base curve (sorted real singular values, then inf) and crossing points per arc.
struct RealBase {
  BaseCurve base;
  std::vector<double> crossing;
};
RealBase real_base(const CatalogFunction& f);

}  // namespace speiser
