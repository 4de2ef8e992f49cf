#include "speiser/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "speiser/scheme.hpp"

namespace speiser {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt(Complex z) {
  std::ostringstream os;
  os.precision(10);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

}  // namespace

Box parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("bad box '" + text + "'");
    }
  }
  Box b;
  if (v.size() == 1 && v[0] > 0) {
    b = Box::square(v[0]);
  } else if (v.size() == 4 && v[0] < v[1] && v[2] < v[3]) {
    b = {v[0], v[1], v[2], v[3]};
  } else {
    throw DomainError("box must be 'r' or 're_min,re_max,im_min,im_max' with min < max: '" + text + "'");
  }
  return b;
}

void PathSample::check() const {
  if (t.size() < 2 || z.size() != t.size()) throw DomainError("path needs at least two knots with values");
  if (!residual.empty() && residual.size() != t.size()) throw DomainError("path residual count mismatch");
  for (size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw DomainError("path knots must be strictly increasing");
  }
  if (t.front() < 0.0 || t.back() > 1.0) throw DomainError("path knots must lie in [0,1]");
}

Complex PathSample::at(double s) const {
  if (s <= t.front()) return z.front();
  if (s >= t.back()) return z.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  const size_t i = static_cast<size_t>(it - t.begin());
  const double u = (s - t[i - 1]) / (t[i] - t[i - 1]);
  return z[i - 1] + u * (z[i] - z[i - 1]);
}

PathSample polyline(const std::vector<Complex>& points) {
  if (points.size() < 2) throw DomainError("polyline needs at least two points");
  PathSample p;
  const double n = static_cast<double>(points.size() - 1);
  for (size_t i = 0; i < points.size(); ++i) {
    p.t.push_back(static_cast<double>(i) / n);
    p.z.push_back(points[i]);
  }
  return p;
}

const char* to_string(LiftStatus s) {
  switch (s) {
    case LiftStatus::Completed:
      return "Completed";
    case LiftStatus::NearCritical:
      return "NearCritical";
    case LiftStatus::Escaped:
      return "Escaped";
    case LiftStatus::Failed:
      return "Failed";
  }
  return "?";
}

double LiftResult::max_residual() const {
  double m = 0.0;
  for (double r : lift.residual) m = std::max(m, r);
  return m;
}

LiftResult lift_curve(const CatalogFunction& f, const std::function<Complex(double)>& gamma, Complex z0,
                      const LiftOptions& opt, const std::vector<double>& breakpoints) {
  if (!(opt.tol > 0)) throw DomainError("lift: tolerance must be positive");
  const Complex w0 = gamma(0.0);
  Complex fz = f.eval(z0);
  const double r0 = spherical_distance(fz, w0);
  if (!(r0 <= opt.tol)) {
    throw DomainError("lift: start point residual " + std::to_string(r0) + " exceeds tolerance (f(z0)=" + fmt(fz) +
                      ", gamma(0)=" + fmt(w0) + ")");
  }
  std::vector<double> stops;
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end());
  stops.push_back(1.0);

  LiftResult res;
  res.lift.t.push_back(0.0);
  res.lift.z.push_back(z0);
  res.lift.residual.push_back(r0);

  double t = 0.0;
  double h = opt.initial_step;
  size_t next = 0;
  Complex z = z0;
  Complex wcur = w0;
  Complex dfz = f.deriv(z);
  int steps = 0;

  auto stop = [&](LiftStatus s, std::string msg) {
    res.status = s;
    res.where = z;
    res.message = std::move(msg);
    return res;
  };

  while (t < 1.0) {
    if (++steps > opt.max_steps) return stop(LiftStatus::Failed, "step budget exhausted at t=" + std::to_string(t));
    if (std::abs(dfz) < opt.critical_threshold * (1.0 + std::abs(fz))) {
      return stop(LiftStatus::NearCritical, "near critical point " + fmt(z));
    }
    const double t1 = std::min(t + h, stops[next]);
    const Complex w1 = gamma(t1);
    const Complex zp = z + (w1 - wcur) / dfz;
    Complex zn = zp;
    bool ok = false;
    for (int it = 0; it < 16 && finite(zn); ++it) {
      const Complex fv = f.eval(zn);
      if (!finite(fv)) break;
      if (std::abs(fv - w1) <= opt.newton_tol * (1.0 + std::abs(w1))) {
        ok = true;
        break;
      }
      const Complex d = f.deriv(zn);
      if (d == Complex(0.0, 0.0) || !finite(d)) break;
      const Complex step = (fv - w1) / d;
      zn -= step;
      // Stagnation at rounding level counts as convergence; the residual check below still applies.
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(zn))) {
        ok = true;
        break;
      }
    }
    bool accept = ok;
    Complex dfn;
    if (accept) {
      const double corr = std::abs(zn - zp);
      const double stepz = std::abs(zp - z);
      accept = corr <= 0.3 * stepz + 1e-12 * (1.0 + std::abs(z));
    }
    if (accept) {
      dfn = f.deriv(zn);
      const double ratio = std::abs(dfn) / std::abs(dfz);
      accept = finite(dfn) && ratio < 2.0 && ratio > 0.5;
    }
    if (!accept) {
      h *= 0.5;
      if (h < opt.min_step) {
        if (std::abs(dfz) < 1e-4 * (1.0 + std::abs(fz))) {
          return stop(LiftStatus::NearCritical, "step size underflow near " + fmt(z));
        }
        return stop(LiftStatus::Failed, "step size underflow at t=" + std::to_string(t));
      }
      continue;
    }
    t = t1;
    if (t1 == stops[next]) ++next;
    z = zn;
    wcur = w1;
    fz = f.eval(z);
    dfz = dfn;
    res.lift.t.push_back(t);
    res.lift.z.push_back(z);
    res.lift.residual.push_back(spherical_distance(fz, w1));
    if (std::abs(z) > opt.escape_bound) return stop(LiftStatus::Escaped, "escaped |z| > " + std::to_string(opt.escape_bound));
    h = std::min(h * 1.5, 0.25);
  }
  if (res.max_residual() > opt.tol) {
    return stop(LiftStatus::Failed, "residual " + std::to_string(res.max_residual()) + " exceeds tolerance");
  }
  return stop(LiftStatus::Completed, "");
}

LiftResult lift_path(const CatalogFunction& f, const PathSample& gamma, Complex z0, const LiftOptions& opt) {
  gamma.check();
  const double t0 = gamma.t.front();
  const double span = gamma.t.back() - t0;
  std::vector<double> bps;
  for (double t : gamma.t) bps.push_back((t - t0) / span);
  auto curve = [&](double s) { return gamma.at(t0 + s * span); };
  LiftResult r = lift_curve(f, curve, z0, opt, bps);
  for (double& t : r.lift.t) t = t0 + t * span;
  return r;
}

std::vector<Complex> preimages(const CatalogFunction& f, Complex target, const Box& box, int grid) {
  if (grid < 2) throw DomainError("preimages: grid must be at least 2");
  std::vector<Complex> crit;
  try {
    crit = critical_points(f);
  } catch (const DomainError&) {
    // Outside the structural rules: no critical-value check possible.
  }
  for (const Complex& c : crit) {
    if (box.contains(c) && std::abs(f.eval(c) - target) <= 1e-9 * (1.0 + std::abs(target))) {
      throw DomainError("preimages: target " + fmt(target) + " is a critical value (critical point " + fmt(c) + ")");
    }
  }
  std::vector<Complex> roots;
  const double dx = (box.re_max - box.re_min) / grid;
  const double dy = (box.im_max - box.im_min) / grid;
  const double far = 4.0 * box.diameter() + std::abs(box.center());
  const double accept = 1e-10 * std::max(1.0, std::abs(target));
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Complex z(box.re_min + (i + 0.5) * dx, box.im_min + (j + 0.5) * dy);
      bool converged = false;
      for (int it = 0; it < 80; ++it) {
        const Complex fv = f.eval(z);
        const Complex d = f.deriv(z);
        if (!finite(fv) || !finite(d) || d == Complex(0.0, 0.0)) break;
        const Complex step = (fv - target) / d;
        z -= step;
        if (!finite(z) || std::abs(z) > far) break;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) {
          converged = true;
          break;
        }
      }
      if (!converged || !finite(z)) continue;
      if (std::abs(f.eval(z) - target) > accept) continue;
      const Box slack{box.re_min - 1e-9, box.re_max + 1e-9, box.im_min - 1e-9, box.im_max + 1e-9};
      if (!slack.contains(z)) continue;
      const bool dup = std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - z) < 1e-8; });
      if (!dup) roots.push_back(z);
    }
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

void DiskChain::check() const {
  if (centers.empty() || centers.size() != radii.size()) throw DomainError("disk chain needs matching centers and radii");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw DomainError("disk " + std::to_string(i) + " has non-positive radius");
    if (i + 1 < centers.size() && !(std::abs(centers[i + 1] - centers[i]) < radii[i])) {
      throw DomainError("center " + std::to_string(i + 1) + " is not inside disk " + std::to_string(i));
    }
  }
}

std::vector<ChainCertificate> continue_chain(const CatalogFunction& f, const DiskChain& chain, Complex z0,
                                             const LiftOptions& opt) {
  chain.check();
  if (std::abs(f.eval(z0) - chain.centers.front()) > 1e-10 * std::max(1.0, std::abs(chain.centers.front()))) {
    throw DomainError("continue_chain: f(z0) does not match the first center");
  }
  const auto svs = singular_values(f);
  for (size_t i = 0; i < chain.centers.size(); ++i) {
    for (const auto& s : svs) {
      if (s.value.is_finite() && std::abs(s.value.value() - chain.centers[i]) < chain.radii[i]) {
        throw DomainError("disk " + std::to_string(i) + " contains singular value " + format_sphere_value(s.value));
      }
    }
  }
  std::vector<ChainCertificate> out;
  Complex z = z0;
  constexpr int kSamples = 8;
  for (size_t i = 0; i < chain.centers.size(); ++i) {
    const Complex c = chain.centers[i];
    const double r = chain.radii[i];
    ChainCertificate cert;
    cert.disk = static_cast<int>(i);
    cert.center = c;
    cert.center_preimage = z;
    std::vector<Complex> pts{z};
    for (int s = 0; s < kSamples; ++s) {
      const Complex q = c + std::polar(0.5 * r, 2.0 * std::numbers::pi * s / kSamples);
      const LiftResult lr = lift_path(f, polyline({c, q}), z, opt);
      if (lr.status != LiftStatus::Completed) {
        throw DomainError("continue_chain: radial lift failed in disk " + std::to_string(i) + ": " + lr.message);
      }
      pts.push_back(lr.endpoint());
    }
    double sep = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < pts.size(); ++a) {
      for (size_t b = a + 1; b < pts.size(); ++b) sep = std::min(sep, std::abs(pts[a] - pts[b]));
    }
    if (!(sep > 1e-9)) throw DomainError("continue_chain: branch is not injective on disk " + std::to_string(i));
    cert.injectivity_samples = kSamples;
    cert.min_sample_separation = sep;
    if (i + 1 < chain.centers.size()) {
      const LiftResult lr = lift_path(f, polyline({c, chain.centers[i + 1]}), z, opt);
      if (lr.status != LiftStatus::Completed) {
        throw DomainError("continue_chain: lift to the next center failed in disk " + std::to_string(i) + ": " +
                          lr.message);
      }
      z = lr.endpoint();
      cert.next_preimage = z;
    }
    out.push_back(cert);
  }
  return out;
}

std::vector<PhiSample> inverse_branch_compose(const CatalogFunction& f, const CatalogFunction& g, Complex w_f,
                                              Complex w_g, const Box& box, int nx, int ny, double tol,
                                              const LiftOptions& opt, const std::function<bool(Complex)>& keep) {
  if (nx < 1 || ny < 1) throw DomainError("inverse_branch_compose: grid must be at least 1x1");
  const Complex fw = f.eval(w_f);
  if (std::abs(fw - g.eval(w_g)) > tol * (1.0 + std::abs(fw))) {
    throw DomainError("inverse_branch_compose: f(w_f) and g(w_g) differ");
  }
  auto point = [&](int i, int j) {
    const double x = nx == 1 ? box.re_min : box.re_min + (box.re_max - box.re_min) * i / (nx - 1);
    const double y = ny == 1 ? box.im_min : box.im_min + (box.im_max - box.im_min) * j / (ny - 1);
    return Complex(x, y);
  };
  const size_t n = static_cast<size_t>(nx) * static_cast<size_t>(ny);
  std::vector<PhiSample> out(n);
  std::vector<bool> done(n, false);
  std::vector<bool> kept(n, true);
  int root = -1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const size_t idx = static_cast<size_t>(j * nx + i);
      out[idx].z = point(i, j);
      kept[idx] = !keep || keep(out[idx].z);
      if (!kept[idx]) continue;
      if (root < 0 || std::abs(out[idx].z - w_f) < std::abs(out[static_cast<size_t>(root)].z - w_f)) {
        root = static_cast<int>(idx);
      }
    }
  }
  if (root < 0) throw DomainError("inverse_branch_compose: no grid point survives the mask");
  LiftOptions lo = opt;
  lo.tol = std::max(lo.tol, tol);

  auto lift_segment = [&](Complex a, Complex b, Complex start, const std::string& label) {
    auto curve = [&](double s) { return f.eval(a + s * (b - a)); };
    const LiftResult lr = lift_curve(g, curve, start, lo);
    if (lr.status != LiftStatus::Completed) {
      throw DomainError("inverse_branch_compose: lift failed on tree edge " + label + " (" + to_string(lr.status) +
                        "): " + lr.message);
    }
    return lr.endpoint();
  };

  out[static_cast<size_t>(root)].phi = lift_segment(w_f, out[static_cast<size_t>(root)].z, w_g, "base->root");
  done[static_cast<size_t>(root)] = true;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    const int ui = u % nx;
    const int uj = u / nx;
    const int nbr[4][2] = {{ui + 1, uj}, {ui - 1, uj}, {ui, uj + 1}, {ui, uj - 1}};
    for (const auto& q : nbr) {
      if (q[0] < 0 || q[0] >= nx || q[1] < 0 || q[1] >= ny) continue;
      const int v = q[1] * nx + q[0];
      if (done[static_cast<size_t>(v)] || !kept[static_cast<size_t>(v)]) continue;
      const std::string label = "(" + std::to_string(ui) + "," + std::to_string(uj) + ")->(" + std::to_string(q[0]) +
                                "," + std::to_string(q[1]) + ")";
      auto& s = out[static_cast<size_t>(v)];
      s.phi = lift_segment(out[static_cast<size_t>(u)].z, s.z, out[static_cast<size_t>(u)].phi, label);
      s.parent = u;
      done[static_cast<size_t>(v)] = true;
      queue.push_back(v);
    }
  }
  // Compact the output to kept points, remapping parent indices.
  std::vector<int> remap(n, -1);
  std::vector<PhiSample> result;
  for (size_t i = 0; i < n; ++i) {
    if (!kept[i]) continue;
    if (!done[i]) throw DomainError("inverse_branch_compose: grid point " + fmt(out[i].z) + " is not connected to the base");
    remap[i] = static_cast<int>(result.size());
    result.push_back(out[i]);
  }
  for (auto& s : result) {
    if (s.parent >= 0) s.parent = remap[static_cast<size_t>(s.parent)];
    s.residual = std::abs(g.eval(s.phi) - f.eval(s.z));
    if (s.residual > tol * (1.0 + std::abs(f.eval(s.z)))) {
      throw DomainError("inverse_branch_compose: residual " + std::to_string(s.residual) + " at " + fmt(s.z));
    }
  }
  return result;
}

RealBase real_base(const CatalogFunction& f) {
  std::vector<double> reals;
  for (const auto& s : singular_values(f)) {
    if (s.value.is_infinite()) continue;
    const Complex v = s.value.value();
    if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real()))) {
      throw DomainError("graph_from_function: singular value " + format_sphere_value(s.value) +
                        " is not real; only the extended real line is supported as base curve");
    }
    reals.push_back(v.real());
  }
  if (reals.empty()) throw DomainError("graph_from_function: need at least one finite singular value");
  std::sort(reals.begin(), reals.end());
  std::vector<SphereValue> entries;
  for (double x : reals) entries.emplace_back(x);
  entries.push_back(SphereValue::infinity());
  RealBase rb{BaseCurve(entries), {}};
  auto theta = [](double x) { return 2.0 * std::atan(x); };
  const size_t m = reals.size();
  for (size_t j = 0; j + 1 < m; ++j) rb.crossing.push_back(std::tan(0.25 * (theta(reals[j]) + theta(reals[j + 1]))));
  rb.crossing.push_back(std::tan(0.25 * (theta(reals.back()) + std::numbers::pi)));
  rb.crossing.push_back(std::tan(0.25 * (theta(reals.front()) - std::numbers::pi)));
  return rb;
}

SpeiserPatch graph_from_function(const CatalogFunction& f, const GraphFromFunctionOptions& opt) {
  const RealBase rb = real_base(f);
  const int k = rb.base.size();
  const Complex I(0.0, 1.0);

  struct V {
    Complex z;
    Color color;
    bool boundary;
    std::vector<std::optional<size_t>> nb;
  };
  std::vector<V> vs;
  auto add = [&](Complex z, Color c, bool boundary) {
    vs.push_back({z, c, boundary, std::vector<std::optional<size_t>>(static_cast<size_t>(k))});
    return vs.size() - 1;
  };
  for (Complex z : preimages(f, I, opt.box, opt.grid)) add(z, Color::Cross, false);
  for (Complex z : preimages(f, -I, opt.box, opt.grid)) add(z, Color::Circle, false);
  if (vs.empty()) throw DomainError("graph_from_function: no anchor preimages in the box");

  auto find = [&](Complex z, Color c) -> std::optional<size_t> {
    std::optional<size_t> best;
    double bd = opt.match_tol * (1.0 + std::abs(z));
    for (size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].color != c) continue;
      const double d = std::abs(vs[i].z - z);
      if (d <= bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  };

  LiftOptions lo = opt.lift;
  lo.escape_bound = std::max(lo.escape_bound, 4.0 * opt.box.diameter());

  std::deque<size_t> work;
  for (size_t i = 0; i < vs.size(); ++i) work.push_back(i);
  while (!work.empty()) {
    const size_t v = work.front();
    work.pop_front();
    const Color c = vs[v].color;
    const Complex anchor = c == Color::Cross ? I : -I;
    for (int j = 0; j < k; ++j) {
      const LiftResult lr = lift_path(f, polyline({anchor, Complex(rb.crossing[static_cast<size_t>(j)], 0.0), -anchor}),
                                      vs[v].z, lo);
      if (lr.status != LiftStatus::Completed) {
        throw DomainError("graph_from_function: lift of type " + std::to_string(j) + " from " + fmt(vs[v].z) +
                          " failed (" + to_string(lr.status) + "): " + lr.message);
      }
      const Complex e = lr.endpoint();
      const Color oc = opposite(c);
      std::optional<size_t> w = find(e, oc);
      if (!w) {
        const bool inside = opt.box.contains(e);
        w = add(e, oc, !inside);
        if (inside) work.push_back(*w);
      }
      auto& slot = vs[v].nb[static_cast<size_t>(j)];
      if (slot && *slot != *w) throw DomainError("graph_from_function: inconsistent lifts at " + fmt(vs[v].z));
      slot = *w;
      if (vs[*w].boundary) {
        auto& back = vs[*w].nb[static_cast<size_t>(j)];
        if (back && *back != v) {
          throw DomainError("graph_from_function: two edges of type " + std::to_string(j) + " meet at " + fmt(e));
        }
        back = v;
      }
    }
  }
  for (size_t v = 0; v < vs.size(); ++v) {
    if (vs[v].boundary) continue;
    for (int j = 0; j < k; ++j) {
      const size_t w = *vs[v].nb[static_cast<size_t>(j)];
      if (vs[w].nb[static_cast<size_t>(j)] != v) {
        throw DomainError("graph_from_function: lifts from " + fmt(vs[v].z) + " and " + fmt(vs[w].z) +
                          " disagree on type " + std::to_string(j));
      }
    }
  }

  // Root: interior Cross vertex nearest the hint; keep only its component.
  const Complex hint = opt.root_hint.value_or(opt.box.center());
  std::optional<size_t> root;
  for (size_t v = 0; v < vs.size(); ++v) {
    if (vs[v].color != Color::Cross || vs[v].boundary) continue;
    if (!root || std::abs(vs[v].z - hint) < std::abs(vs[*root].z - hint)) root = v;
  }
  if (!root) throw DomainError("graph_from_function: no interior Cross vertex");
  std::vector<bool> reach(vs.size(), false);
  std::deque<size_t> q{*root};
  reach[*root] = true;
  while (!q.empty()) {
    const size_t v = q.front();
    q.pop_front();
    for (const auto& w : vs[v].nb) {
      if (w && !reach[*w]) {
        reach[*w] = true;
        q.push_back(*w);
      }
    }
  }

  SpeiserPatch p;
  p.k = k;
  p.base = rb.base;
  p.root = static_cast<VertexId>(*root);
  for (size_t v = 0; v < vs.size(); ++v) {
    if (!reach[v]) continue;
    Vertex vx;
    vx.id = static_cast<VertexId>(v);
    vx.color = vs[v].color;
    vx.boundary = vs[v].boundary;
    // Counterclockwise order of the lifted edge tangents, starting at type 0.
    const Complex anchor = vx.color == Color::Cross ? I : -I;
    const Complex df = f.deriv(vs[v].z);
    std::vector<std::pair<double, int>> ang;
    for (int j = 0; j < k; ++j) {
      const Complex tangent = (Complex(rb.crossing[static_cast<size_t>(j)], 0.0) - anchor) / df;
      ang.push_back({std::arg(tangent), j});
    }
    std::sort(ang.begin(), ang.end());
    const auto zero = std::find_if(ang.begin(), ang.end(), [](const auto& a) { return a.second == 0; });
    std::rotate(ang.begin(), zero, ang.end());
    for (const auto& [a, j] : ang) {
      HalfEdge he;
      he.id = scheme_half_edge_id(vx.id, j);
      he.vertex = vx.id;
      he.type = j;
      if (const auto& w = vs[v].nb[static_cast<size_t>(j)]) he.twin = scheme_half_edge_id(static_cast<VertexId>(*w), j);
      vx.rotation.push_back(he.id);
      p.half_edges[he.id] = he;
    }
    p.positions[vx.id] = vs[v].z;
    p.vertices[vx.id] = std::move(vx);
  }
  const auto report = validate(p);
  if (!report.empty()) throw DomainError("graph_from_function produced an invalid patch:\n" + describe(report));
  return p;
}

}  // namespace speiser
