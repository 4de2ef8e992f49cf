#include "speiser/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "speiser/surgery.hpp"

namespace speiser {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string cnum(Complex z) { return num(z.real()) + (z.imag() < 0 ? "" : "+") + num(z.imag()) + "i"; }

// log(1 + u) for complex u, accurate for small |u|.
Complex clog1p(Complex u) {
  const Complex w = 1.0 + u;
  if (w == Complex(1.0, 0.0)) return u;
  return std::log(w) * u / (w - 1.0);
}

void finish(ConvergenceReport& rep) {
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    rep.rows[i].ratio = i == 0 ? kNaN : rep.rows[i].sup / rep.rows[i - 1].sup;
    rep.diagnostics.push_back("n=" + num(rep.rows[i].n) + ": sup " + num(rep.rows[i].sup) + " attained at z=" +
                              cnum(rep.rows[i].argmax));
  }
  rep.pass = decay_verdict(rep.rows, rep.criterion);
}

void check_sorted(const std::vector<double>& ns) {
  if (ns.empty()) throw DomainError("convergence check needs at least one index");
  for (size_t i = 1; i < ns.size(); ++i) {
    if (!(ns[i] > ns[i - 1])) throw DomainError("sequence indices must be strictly increasing");
  }
}

}  // namespace

PointedSequence quadratic_sequence() {
  PointedSequence s;
  s.name = "quadratic";
  s.f_n = [](double n) {
    return CatalogFunction(parse_expr("z^2 + c", {{"c", Complex(1.0 / n, 0.0)}}), "z^2+1/n with n=" + num(n));
  };
  s.w_n = [](double n) { return std::sqrt(Complex(1.0 - 1.0 / n, 0.0)); };
  s.f = CatalogFunction::parse("z^2");
  s.w = 1.0;
  s.exceptional = {0.0};
  return s;
}

PointedSequence double_exp_sequence() {
  PointedSequence s;
  s.name = "dexp";
  s.f_n = [](double a) {
    return CatalogFunction(parse_expr("a*(exp(exp(z))-1)+1", {{"a", Complex(a, 0.0)}}),
                           "a*(exp(exp(z))-1)+1 with a=" + num(a));
  };
  s.w_n = [](double a) { return Complex(std::log(std::log1p(1.0 / a)), 0.0); };
  s.f = CatalogFunction::parse("exp(z)+1");
  s.w = 0.0;
  return s;
}

PointedSequence constant_sequence(const CatalogFunction& f, Complex w) {
  PointedSequence s;
  s.name = "const";
  s.f_n = [f](double) { return f; };
  s.w_n = [w](double) { return w; };
  s.f = f;
  s.w = w;
  return s;
}

PointedSequence parse_sequence(const std::string& name) {
  if (name == "quadratic") return quadratic_sequence();
  if (name == "dexp") return double_exp_sequence();
  if (name.rfind("const:", 0) == 0) return constant_sequence(CatalogFunction::parse(name.substr(6)), 0.0);
  throw DomainError("unknown sequence '" + name + "' (expected quadratic, dexp or const:<fn>)");
}

double base_point_residual(const PointedSequence& seq, double n) {
  return std::abs(seq.f_n(n).eval(seq.w_n(n)) - seq.f.eval(seq.w));
}

std::function<bool(Complex)> compact_membership(const CompactSpec& K, const PointedSequence& seq) {
  if (!(K.delta > 0)) throw DomainError("compact set: delta must be positive");
  if (!(K.R0 > 0)) throw DomainError("compact set: R0 must be positive");
  std::vector<Complex> holes = seq.exceptional;
  try {
    for (Complex c : critical_points(seq.f)) holes.push_back(c);
  } catch (const DomainError&) {
    // Limit outside the structural rules: E is taken as given.
  }
  const double R0 = K.R0;
  const double delta = K.delta;
  return [holes, R0, delta](Complex z) {
    if (std::abs(z) > R0 + 1e-12) return false;
    for (Complex e : holes) {
      if (std::abs(z - e) < delta - 1e-12) return false;
    }
    return true;
  };
}

std::vector<Complex> compact_points(const CompactSpec& K, const PointedSequence& seq) {
  if (K.grid < 2) throw DomainError("compact set: grid must be at least 2");
  const auto keep = compact_membership(K, seq);
  std::vector<Complex> pts;
  for (int j = 0; j < K.grid; ++j) {
    for (int i = 0; i < K.grid; ++i) {
      const Complex z(-K.R0 + 2.0 * K.R0 * i / (K.grid - 1), -K.R0 + 2.0 * K.R0 * j / (K.grid - 1));
      if (keep(z)) pts.push_back(z);
    }
  }
  if (pts.empty()) throw DomainError("compact set grid is empty");
  return pts;
}

bool decay_verdict(const std::vector<ReportRow>& rows, const DecayCriterion& c) {
  if (rows.empty()) return false;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].sup > (1.0 + c.jitter) * rows[i - 1].sup) return false;
  }
  return rows.back().sup <= c.final_max;
}

ConvergenceReport uniform_convergence_check(const PointedSequence& seq, const CompactSpec& K,
                                            const std::vector<double>& ns, const DecayCriterion& c) {
  check_sorted(ns);
  const auto pts = compact_points(K, seq);
  ConvergenceReport rep;
  rep.check = "uniform";
  rep.extra_columns = {"plane_sup"};
  rep.criterion = c;
  for (double n : ns) {
    const CatalogFunction fn = seq.f_n(n);
    ReportRow row;
    row.n = n;
    double plane = 0.0;
    for (Complex z : pts) {
      const Scaled a = fn.eval_scaled(z);
      const Scaled b = seq.f.eval_scaled(z);
      const SphereValue sa = a.fits() ? SphereValue(a.value()) : SphereValue::infinity();
      const SphereValue sb = b.fits() ? SphereValue(b.value()) : SphereValue::infinity();
      const double d = spherical_distance(sa, sb);
      if (d > row.sup) {
        row.sup = d;
        row.argmax = z;
      }
      if (a.fits() && b.fits()) plane = std::max(plane, std::abs(a.value() - b.value()));
    }
    row.extra = {plane};
    rep.rows.push_back(row);
  }
  finish(rep);
  return rep;
}

ConvergenceReport embedding_convergence_check(const PointedSequence& seq, const CompactSpec& K,
                                              const std::vector<double>& ns, const DecayCriterion& c, double tol) {
  check_sorted(ns);
  const auto keep = compact_membership(K, seq);
  compact_points(K, seq);
  ConvergenceReport rep;
  rep.check = "embedding";
  rep.extra_columns = {"max_residual"};
  rep.criterion = c;
  for (double n : ns) {
    const CatalogFunction fn = seq.f_n(n);
    for (Complex cp : critical_points(fn)) {
      if (keep(cp)) throw DomainError("embedding check: critical point " + cnum(cp) + " of f_n (n=" + num(n) + ") lies in K");
    }
    std::vector<PhiSample> phi;
    try {
      phi = inverse_branch_compose(seq.f, fn, seq.w, seq.w_n(n), Box::square(K.R0), K.grid, K.grid, tol, {}, keep);
    } catch (const DomainError& e) {
      throw DomainError("embedding check, n=" + num(n) + ": " + e.what());
    }
    ReportRow row;
    row.n = n;
    double res = 0.0;
    for (const auto& s : phi) {
      const double d = std::abs(s.phi - s.z);
      if (d > row.sup) {
        row.sup = d;
        row.argmax = s.z;
      }
      res = std::max(res, s.residual);
    }
    row.extra = {res};
    rep.rows.push_back(row);
  }
  finish(rep);
  return rep;
}

Complex translation_oracle(Complex z, double a) { return std::log(clog1p(std::exp(z) / a)); }

ConvergenceReport translation_asymptotics_check(const std::vector<double>& as, const CompactSpec& K,
                                                const DecayCriterion& c, double tol) {
  check_sorted(as);
  const PointedSequence seq = double_exp_sequence();
  const auto keep = compact_membership(K, seq);
  ConvergenceReport rep;
  rep.check = "translation";
  rep.extra_columns = {"oracle_sup", "route_deviation"};
  rep.criterion = c;
  for (double a : as) {
    if (!(a > 1)) throw DomainError("translation check needs a > 1");
    const Complex wa = seq.w_n(a);
    std::vector<PhiSample> phi;
    try {
      phi = inverse_branch_compose(seq.f, seq.f_n(a), seq.w, wa, Box::square(K.R0), K.grid, K.grid, tol, {}, keep);
    } catch (const DomainError& e) {
      throw DomainError("translation check, a=" + num(a) + ": " + e.what());
    }
    ReportRow row;
    row.n = a;
    double oracle_sup = 0.0;
    double route = 0.0;
    Complex worst{0.0, 0.0};
    for (const auto& s : phi) {
      const Complex o = translation_oracle(s.z, a);
      const double d = std::abs(s.phi - s.z - wa);
      if (d > row.sup) {
        row.sup = d;
        row.argmax = s.z;
      }
      oracle_sup = std::max(oracle_sup, std::abs(o - s.z - wa));
      if (std::abs(o - s.phi) > route) {
        route = std::abs(o - s.phi);
        worst = s.z;
      }
    }
    if (route > 10.0 * tol) {
      throw DomainError("translation check, a=" + num(a) + ": lifting and closed form disagree by " + num(route) +
                        " at z=" + cnum(worst) + " (branch mismatch)");
    }
    row.extra = {oracle_sup, route};
    rep.rows.push_back(row);
  }
  finish(rep);
  return rep;
}

KernelCheck kernel_consistency_check(double a, int r, const std::optional<LabelMap>& label_map) {
  if (!(a > 1)) throw DomainError("kernel check needs a > 1");
  if (r < 0) throw DomainError("kernel check needs r >= 0");
  KernelCheck out;
  const Complex I(0.0, 1.0);

  // Spine Cross vertex of a(e^{e^z}-1)+1: e^z = log(1 + (i-1)/a).
  const Complex hint_a = std::log(clog1p((I - 1.0) / a));
  GraphFromFunctionOptions oa;
  oa.box = {hint_a.real() - 1.5, 2.2, hint_a.imag() - 7.5, hint_a.imag() + 7.5};
  oa.grid = 64;
  oa.root_hint = hint_a;
  const CatalogFunction fa = double_exp_sequence().f_n(a);
  const SpeiserPatch pa = graph_from_function(fa, oa);

  const Complex hint_e = std::log(I - 1.0);
  GraphFromFunctionOptions oe;
  oe.box = {-1.0, 1.0, hint_e.imag() - 7.5, hint_e.imag() + 7.5};
  oe.root_hint = hint_e;
  const SpeiserPatch pe = graph_from_function(CatalogFunction::parse("exp(z)+1"), oe);

  const SphereValue moving(1.0 - a);
  out.diagnostics.push_back("lifted patch of f_a: " + std::to_string(pa.vertices.size()) + " vertices, base " +
                            format_sphere_value(pa.base[0]) + " ... ; limit patch: " +
                            std::to_string(pe.vertices.size()) + " vertices");
  SpeiserPatch lhs;
  SpeiserPatch rhs;
  try {
    const SchemePtr collided = collide(std::make_shared<PatchScheme>(pa), {moving, SphereValue::infinity(), {}});
    lhs = ball(*collided, r);
    rhs = ball_around(PatchScheme(pe), pe.root, r);
  } catch (const DomainError& e) {
    out.diagnostics.push_back(std::string("patch not stable at radius ") + std::to_string(r) + ": " + e.what());
    return out;
  }
  const LabelMap identity = {{SphereValue(1.0), SphereValue(1.0)},
                             {SphereValue::infinity(), SphereValue::infinity()}};
  try {
    out.consistent = rooted_isomorphic(lhs, rhs, label_map.value_or(identity));
  } catch (const DomainError& e) {
    out.diagnostics.push_back(std::string("label map rejected: ") + e.what());
    out.consistent = false;
    return out;
  }
  out.diagnostics.push_back("collided ball: " + std::to_string(lhs.vertices.size()) + " vertices; limit ball: " +
                            std::to_string(rhs.vertices.size()) + " vertices; " +
                            (out.consistent ? "rooted-isomorphic" : "not isomorphic"));
  return out;
}

std::string report_csv(const ConvergenceReport& rep) {
  std::ostringstream os;
  os << "n,sup,ratio,argmax_re,argmax_im";
  for (const auto& c : rep.extra_columns) os << ',' << c;
  os << '\n';
  for (const auto& r : rep.rows) {
    os << num(r.n) << ',' << num(r.sup) << ',' << num(r.ratio) << ',' << num(r.argmax.real()) << ','
       << num(r.argmax.imag());
    for (double x : r.extra) os << ',' << num(x);
    os << '\n';
  }
  return os.str();
}

std::string report_svg(const ConvergenceReport& rep) {
  const double W = 480, H = 320, M = 48;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rep.rows) {
    if (r.n > 0 && r.sup > 0) pts.push_back({std::log10(r.n), std::log10(r.sup)});
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << M << "\" y=\"20\" font-size=\"14\">" << rep.check << ": log10 sup vs log10 n</text>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M / 2 << "\" y2=\"" << H - M
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << M / 2 << "\" x2=\"" << M << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  if (!pts.empty()) {
    double x0 = pts.front().first, x1 = x0, y0 = pts.front().second, y1 = y0;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y1 = y0 + 1;
    auto px = [&](double x) { return M + (W - 1.5 * M) * (x - x0) / (x1 - x0); };
    auto py = [&](double y) { return H - M - (H - 1.5 * M) * (y - y0) / (y1 - y0); };
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\"/>\n";
    os << "<text x=\"" << M << "\" y=\"" << H - M / 3 << "\" font-size=\"11\">n: 1e" << num(x0) << " .. 1e" << num(x1)
       << ", sup: 1e" << num(y0) << " .. 1e" << num(y1) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace speiser
