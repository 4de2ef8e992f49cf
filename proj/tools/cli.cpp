#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "speiser/analytic.hpp"
#include "speiser/canonical.hpp"
#include "speiser/convergence.hpp"
#include "speiser/families.hpp"
#include "speiser/lifting.hpp"
#include "speiser/spg_io.hpp"
#include "speiser/surgery.hpp"
#include "speiser/typeest.hpp"

namespace speiser::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
}

/// "1,2,5" or "2..12".
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const double lo = parse_double(item.substr(0, dots));
      const double hi = parse_double(item.substr(dots + 2));
      if (lo > hi) throw UsageError("empty range '" + item + "'");
      for (double x = lo; x <= hi + 1e-9; x += 1.0) out.push_back(x);
    } else {
      out.push_back(parse_double(item));
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double x : parse_list(text)) {
    if (x != static_cast<int>(x)) throw UsageError("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  const SphereValue v = parse_sphere_value(text);
  if (v.is_infinite()) throw DomainError("expected a finite complex number, got '" + text + "'");
  return v.value();
}

std::string fixtures_dir() {
  if (const char* env = std::getenv("SPEISER_FIXTURES"); env && *env) return env;
  return SPEISER_DEFAULT_FIXTURES;
}

std::string resolve_input(const std::string& path) {
  if (fs::exists(path)) return path;
  const fs::path dir = fixtures_dir();
  for (const fs::path& cand : {dir / path, dir / fs::path(path).filename()})
    if (fs::exists(cand)) return cand.string();
  return path;
}

bool looks_like_file(const std::string& s) {
  return s.find('/') != std::string::npos || s.ends_with(".spg") || fs::exists(s);
}

/// "dexp", "dexp:a=-9,b=-3,cut=0", "hyp:b=-3", "exp", "tree".
FamilySpec parse_family_spec(const std::string& text) {
  FamilySpec spec;
  const auto colon = text.find(':');
  spec.family = parse_family(text.substr(0, colon));
  if (spec.family == Family::DoubleExpPerturbed) spec.a = SphereValue(-9.0);
  if (spec.family == Family::HyperbolicSb) spec.b = SphereValue(-9.0);
  if (colon != std::string::npos) {
    for (const auto& kv : split(text.substr(colon + 1), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("family parameter '" + kv + "' needs key=value");
      const std::string key = trim(kv.substr(0, eq));
      const std::string val = trim(kv.substr(eq + 1));
      if (key == "a")
        spec.a = parse_sphere_value(val);
      else if (key == "b")
        spec.b = parse_sphere_value(val);
      else if (key == "cut")
        spec.cut = static_cast<int>(parse_double(val));
      else
        throw UsageError("unknown family parameter '" + key + "'");
    }
  }
  return spec;
}

/// A scheme from an SPG file or a family spec.
SchemePtr load_scheme(const std::string& in) {
  if (looks_like_file(in)) {
    const std::string path = resolve_input(in);
    return std::make_shared<PatchScheme>(read_spg_file(path));
  }
  const FamilySpec spec = parse_family_spec(in);
  return make_family(spec);
}

SphereValue resolve_label(const std::string& text, const GraphScheme& scheme) {
  if (text == "moving") {
    const auto& base = scheme.base();
    for (const auto& v : base.entries())
      if (v.is_finite() && !approx_equal(v, SphereValue(1.0))) return v;
    throw DomainError("no movable finite label on base curve");
  }
  return parse_sphere_value(text);
}

/// Output sink: file when a path is given, otherwise `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot write '" + path + "'");
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

/// Resolved configuration of the selected subcommand chain.
std::vector<std::string> resolved_config(const CLI::App& root) {
  std::vector<std::string> lines;
  std::string path = "speiser";
  const CLI::App* app = &root;
  while (true) {
    const auto subs = app->get_subcommands();
    if (subs.empty()) break;
    app = subs.front();
    path += " " + app->get_name();
  }
  lines.push_back(path);
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h,--help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    std::string name = opt->get_single_name();
    if (value.empty() && opt->count() == 0) continue;
    lines.push_back(name + " = " + value);
  }
  return lines;
}

void write_header(std::ostream& os, const std::vector<std::string>& config) {
  for (const auto& l : config) os << "# " << l << '\n';
}

/// Pulls `--config <file>` out of args and appends its `key = value` entries
/// as flags, skipping keys already given on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (config.empty()) return args;
  std::ifstream in(config);
  if (!in) throw UsageError("cannot read config file '" + config + "'");
  std::string line;
  int lineno = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(config + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    while (key.starts_with("-")) key.erase(0, 1);
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.starts_with(flag + "=")) given = true;
    if (!given) {
      extra.push_back(flag);
      extra.push_back(trim(line.substr(eq + 1)));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

struct Options {
  // shared
  std::string in, out, fn, svg;
  int radius = 3;
  // graph ball
  std::string center;
  // family
  std::string name = "exp", a, b;
  int cut = 0;
  // collide
  std::string from, into;
  // lift
  std::string path, start;
  // speiser-from-fn
  std::string box = "3", root_hint;
  int grid = 40;
  // converge
  std::string mode, seq = "quadratic", ns, as;
  std::optional<double> R0;
  double delta = 0.1;
  std::optional<int> kgrid;
  double tol = 1e-9;
  // order / glue / resistance / walk
  std::string radii, xs, family;
  int samples = 2048, trials = 1000;
  std::uint64_t seed = 0;
};

int cmd_graph_validate(const Options& o, std::ostream& out) {
  const SpeiserPatch p = read_spg_file(resolve_input(o.in));
  out << "valid (" << p.vertices.size() << " vertices, k=" << p.k << ")\n";
  return 0;
}

int cmd_graph_ball(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  const SchemePtr s = load_scheme(o.in);
  const SpeiserPatch p = o.center.empty()
                             ? ball(*s, o.radius)
                             : ball_around(*s, static_cast<VertexId>(std::stoull(o.center)), o.radius);
  Sink sink(o.out, out);
  *sink << to_spg(p, cfg);
  return 0;
}

int cmd_graph_dot(const Options& o, std::ostream& out) {
  SpeiserPatch p;
  if (looks_like_file(o.in))
    p = read_spg_file(resolve_input(o.in));
  else
    p = ball(*make_family(parse_family_spec(o.in)), o.radius);
  Sink sink(o.out, out);
  *sink << to_dot(p);
  return 0;
}

int cmd_family_gen(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  FamilySpec spec = parse_family_spec(o.name);
  if (!o.a.empty()) spec.a = parse_sphere_value(o.a);
  if (!o.b.empty()) spec.b = parse_sphere_value(o.b);
  if (o.cut != 0) spec.cut = o.cut;
  const SchemePtr s = make_family(spec);
  std::vector<std::string> header = cfg;
  header.push_back("family " + std::string(to_string(spec.family)));
  if (auto t = spec.known_type()) header.push_back(std::string("known type ") + to_string(*t) + ", " + kGroundTruthNote);
  Sink sink(o.out, out);
  *sink << to_spg(ball(*s, o.radius), header);
  return 0;
}

int cmd_collide(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  const SchemePtr s = load_scheme(o.in);
  CollisionSpec spec;
  spec.moving = resolve_label(o.from, *s);
  spec.target = resolve_label(o.into, *s);
  const SchemePtr c = collide(s, spec);
  std::vector<std::string> header = cfg;
  header.push_back("collided " + format_sphere_value(spec.moving) + " -> " + format_sphere_value(spec.target));
  Sink sink(o.out, out);
  *sink << to_spg(ball(*c, o.radius), header);
  return 0;
}

std::vector<Complex> read_knots(const std::string& text) {
  std::vector<Complex> pts;
  const std::string path = resolve_input(text);
  if (fs::exists(path)) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto cols = split(line, ',');
      if (cols.size() == 1) {
        pts.push_back(parse_complex(cols[0]));
      } else if (cols.size() >= 2) {
        if (cols[0] == "re") continue;  // header row
        pts.emplace_back(parse_double(cols[0]), parse_double(cols[1]));
      }
    }
  } else {
    for (const auto& item : split(text, ';')) pts.push_back(parse_complex(item));
  }
  if (pts.size() < 2) throw DomainError("path needs at least two knots");
  return pts;
}

int cmd_lift(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  const CatalogFunction f = CatalogFunction::parse(o.fn);
  const std::vector<Complex> knots = read_knots(o.path);
  const Complex z0 = parse_complex(o.start);
  const LiftResult res = lift_path(f, polyline(knots), z0);
  Sink sink(o.out, out);
  write_header(*sink, cfg);
  *sink << "# status = " << to_string(res.status) << '\n';
  *sink << "t,re,im,residual\n";
  for (std::size_t i = 0; i < res.lift.t.size(); ++i)
    *sink << num(res.lift.t[i]) << ',' << num(res.lift.z[i].real()) << ',' << num(res.lift.z[i].imag()) << ','
          << num(res.lift.residual[i]) << '\n';
  if (res.status != LiftStatus::Completed)
    throw DomainError("lift stopped (" + std::string(to_string(res.status)) + "): " + res.message);
  if (!o.out.empty())
    out << "endpoint " << num(res.endpoint().real()) << ',' << num(res.endpoint().imag()) << '\n';
  return 0;
}

int cmd_from_fn(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  GraphFromFunctionOptions opt;
  opt.box = parse_box(o.box);
  opt.grid = o.grid;
  if (!o.root_hint.empty()) opt.root_hint = parse_complex(o.root_hint);
  const SpeiserPatch p = graph_from_function(CatalogFunction::parse(o.fn), opt);
  Sink sink(o.out, out);
  *sink << to_spg(p, cfg);
  if (!o.out.empty()) out << "wrote " << p.vertices.size() << " vertices to " << o.out << '\n';
  return 0;
}

int cmd_converge(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  CompactSpec K;
  K.delta = o.delta;
  if (o.mode == "kernel") {
    const double a = o.as.empty() ? 1e4 : parse_list(o.as).back();
    const KernelCheck kc = kernel_consistency_check(a, o.radius);
    Sink sink(o.out, out);
    write_header(*sink, cfg);
    for (const auto& d : kc.diagnostics) *sink << "# " << d << '\n';
    *sink << "a,radius,consistent\n" << num(a) << ',' << o.radius << ',' << (kc.consistent ? 1 : 0) << '\n';
    return 0;
  }
  ConvergenceReport rep;
  if (o.mode == "translation") {
    K.R0 = o.R0.value_or(1.0);
    K.grid = o.kgrid.value_or(21);
    rep = translation_asymptotics_check(parse_list(o.as.empty() ? "10,100,1000" : o.as), K, {}, o.tol);
  } else if (o.mode == "uniform" || o.mode == "embedding") {
    K.R0 = o.R0.value_or(2.0);
    K.grid = o.kgrid.value_or(41);
    const PointedSequence seq = parse_sequence(o.seq);
    const std::vector<double> ns = parse_list(o.ns.empty() ? "10,100,1000" : o.ns);
    rep = o.mode == "uniform" ? uniform_convergence_check(seq, K, ns)
                              : embedding_convergence_check(seq, K, ns, {}, o.tol);
  } else {
    throw UsageError("unknown mode '" + o.mode + "'");
  }
  Sink sink(o.out, out);
  write_header(*sink, cfg);
  *sink << "# K: R0 = " << num(K.R0) << ", delta = " << num(K.delta) << ", grid = " << K.grid << '\n';
  *sink << "# check = " << rep.check << ", pass = " << (rep.pass ? "true" : "false") << '\n';
  for (const auto& d : rep.diagnostics) *sink << "# " << d << '\n';
  *sink << report_csv(rep);
  if (!o.svg.empty()) {
    std::ofstream svg(o.svg);
    if (!svg) throw DomainError("cannot write '" + o.svg + "'");
    svg << report_svg(rep);
  }
  return 0;
}

int cmd_order(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  const CatalogFunction f = CatalogFunction::parse(o.fn);
  const auto rows = order_estimate(f, parse_list(o.radii), o.samples);
  Sink sink(o.out, out);
  write_header(*sink, cfg);
  *sink << "r,log_max,rho\n";
  for (const auto& r : rows) *sink << num(r.r) << ',' << num(r.log_max) << ',' << (r.rho ? num(*r.rho) : "nan") << '\n';
  return 0;
}

int cmd_glue(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  Sink sink(o.out, out);
  write_header(*sink, cfg);
  *sink << "x,h,h_minus_x,h_over_ln_x\n";
  for (const auto& r : gluing_check(parse_list(o.xs)))
    *sink << num(r.x) << ',' << num(r.h) << ',' << num(r.h_minus_x) << ',' << num(r.h_over_ln_x) << '\n';
  return 0;
}

int cmd_resistance(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  const SchemePtr s = load_scheme(o.family);
  const TypeReport rep = type_heuristic(*s, parse_int_list(o.radii));
  Sink sink(o.out, out);
  write_header(*sink, cfg);
  std::istringstream text(rep.text);
  for (std::string line; std::getline(text, line);) *sink << "# " << line << '\n';
  *sink << "r,resistance,residual,iterations,vertices\n";
  const auto& p = rep.profile;
  for (std::size_t i = 0; i < p.radii.size(); ++i)
    *sink << p.radii[i] << ',' << (std::isinf(p.resistance[i]) ? std::string("inf") : num(p.resistance[i])) << ','
          << num(p.residual[i]) << ',' << p.iterations[i] << ',' << p.vertices[i] << '\n';
  if (!o.out.empty()) out << rep.text;
  return 0;
}

int cmd_walk(const Options& o, const std::vector<std::string>& cfg, std::ostream& out) {
  const SchemePtr s = load_scheme(o.family);
  const EscapeEstimate e = random_walk_escape(*s, o.radius, o.trials, o.seed);
  Sink sink(o.out, out);
  write_header(*sink, cfg);
  *sink << "# " << kTypeCaveat << '\n';
  *sink << "radius,trials,escapes,p_escape,ci95_low,ci95_high\n";
  *sink << o.radius << ',' << e.trials << ',' << e.escapes << ',' << num(e.p) << ',' << num(e.ci_low) << ','
        << num(e.ci_high) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speiser graphs, surgery, lifting and convergence diagnostics", "speiser"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.footer("Any subcommand accepts --config <file> with `key = value` lines; flags override it.\n"
             "SPEISER_FIXTURES overrides the fixture directory used to resolve input files.");
  Options o;

  auto* graph = app.add_subcommand("graph", "Inspect SPG files");
  graph->require_subcommand(1);
  auto* g_validate = graph->add_subcommand("validate", "Check every graph invariant");
  g_validate->add_option("file", o.in, "SPG file")->required();
  auto* g_ball = graph->add_subcommand("ball", "Extract a ball from an SPG file or family");
  g_ball->add_option("in", o.in, "SPG file or family spec")->required();
  g_ball->add_option("--radius", o.radius, "Ball radius");
  g_ball->add_option("--center", o.center, "Center vertex id (default: root)");
  g_ball->add_option("--out", o.out, "Output SPG file");
  auto* g_dot = graph->add_subcommand("dot", "Export Graphviz DOT");
  g_dot->add_option("in", o.in, "SPG file or family spec")->required();
  g_dot->add_option("--radius", o.radius, "Ball radius for family specs");
  g_dot->add_option("--out", o.out, "Output DOT file");

  auto* family = app.add_subcommand("family", "Model families");
  family->require_subcommand(1);
  auto* f_gen = family->add_subcommand("gen", "Write a ball of a family graph");
  f_gen->add_option("--name", o.name, "exp | dexp | hyp | tree, optionally with :a=..,b=..,cut=..");
  f_gen->add_option("--a", o.a, "Label a");
  f_gen->add_option("--b", o.b, "Label b");
  f_gen->add_option("--cut", o.cut, "Cut shift");
  f_gen->add_option("--radius", o.radius, "Ball radius");
  f_gen->add_option("--out", o.out, "Output SPG file");

  auto* c = app.add_subcommand("collide", "Collide two adjacent labels");
  c->add_option("--in", o.in, "SPG file or family spec")->required();
  c->add_option("--from", o.from, "Moving label, or `moving` for the first finite label other than 1")->required();
  c->add_option("--into", o.into, "Target label")->required();
  c->add_option("--radius", o.radius, "Ball radius of the output");
  c->add_option("--out", o.out, "Output SPG file");

  auto* l = app.add_subcommand("lift", "Lift a polyline through f");
  l->add_option("--fn", o.fn, "Function spec")->required();
  l->add_option("--path", o.path, "CSV file of knots (re,im) or `z0;z1;...`")->required();
  l->add_option("--start", o.start, "Starting preimage z0")->required();
  l->add_option("--out", o.out, "Output CSV");

  auto* g = app.add_subcommand("speiser-from-fn", "Speiser graph of f by lifting");
  g->add_option("--fn", o.fn, "Function spec")->required();
  g->add_option("--box", o.box, "Box radius r or re_min,re_max,im_min,im_max");
  g->add_option("--grid", o.grid, "Preimage search grid");
  g->add_option("--root-hint", o.root_hint, "Point near the desired root vertex");
  g->add_option("--out", o.out, "Output SPG file");

  auto* cv = app.add_subcommand("converge", "Kernel convergence diagnostics");
  cv->add_option("--mode", o.mode, "uniform | embedding | translation | kernel")
      ->required()
      ->check(CLI::IsMember({"uniform", "embedding", "translation", "kernel"}));
  cv->add_option("--seq", o.seq, "quadratic | dexp | const:<fn>");
  cv->add_option("--n", o.ns, "Indices for uniform and embedding modes");
  cv->add_option("--a", o.as, "Parameters a for translation and kernel modes");
  cv->add_option("--R0", o.R0, "Radius of K (default 2, translation 1)");
  cv->add_option("--delta", o.delta, "Excluded disk radius");
  cv->add_option("--grid", o.kgrid, "Lattice size on K (default 41, translation 21)");
  cv->add_option("--tol", o.tol, "Lifting tolerance");
  cv->add_option("--radius", o.radius, "Ball radius for kernel mode");
  cv->add_option("--out", o.out, "Output CSV");
  cv->add_option("--svg", o.svg, "Optional log-log SVG plot");

  auto* ord = app.add_subcommand("order", "Order of growth estimate");
  ord->add_option("--fn", o.fn, "Function spec")->required();
  ord->add_option("--radii", o.radii, "Radii list, each > e")->required();
  ord->add_option("--samples", o.samples, "Samples per circle");
  ord->add_option("--out", o.out, "Output CSV");

  auto* gl = app.add_subcommand("glue-check", "Asymptotics of h(x) = ln ln(e^x + 1)");
  gl->add_option("--xs", o.xs, "Points x")->required();
  gl->add_option("--out", o.out, "Output CSV");

  auto* rs = app.add_subcommand("resistance", "Effective resistance profile and type heuristic");
  rs->add_option("--family", o.family, "Family spec or SPG file")->required();
  o.radii = "2..12";
  rs->add_option("--radii", o.radii, "Radii, e.g. 2..12");
  rs->add_option("--out", o.out, "Output CSV");

  auto* wk = app.add_subcommand("walk", "Random-walk escape estimate");
  wk->add_option("--family", o.family, "Family spec or SPG file")->required();
  wk->add_option("--radius", o.radius, "Escape radius");
  wk->add_option("--trials", o.trials, "Number of walks");
  wk->add_option("--seed", o.seed, "Random seed");
  wk->add_option("--out", o.out, "Output CSV");

  std::vector<std::string> args;
  try {
    args = apply_config(raw_args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }
  std::vector<const char*> argv{"speiser"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    out << leaf->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  const std::vector<std::string> cfg = resolved_config(app);
  try {
    if (g_validate->parsed()) return cmd_graph_validate(o, out);
    if (g_ball->parsed()) return cmd_graph_ball(o, cfg, out);
    if (g_dot->parsed()) return cmd_graph_dot(o, out);
    if (f_gen->parsed()) return cmd_family_gen(o, cfg, out);
    if (c->parsed()) return cmd_collide(o, cfg, out);
    if (l->parsed()) return cmd_lift(o, cfg, out);
    if (g->parsed()) return cmd_from_fn(o, cfg, out);
    if (cv->parsed()) return cmd_converge(o, cfg, out);
    if (ord->parsed()) return cmd_order(o, cfg, out);
    if (gl->parsed()) return cmd_glue(o, cfg, out);
    if (rs->parsed()) return cmd_resistance(o, cfg, out);
    if (wk->parsed()) return cmd_walk(o, cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace speiser::cli
