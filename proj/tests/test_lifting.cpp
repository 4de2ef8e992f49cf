#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "speiser/canonical.hpp"
#include "speiser/families.hpp"
#include "speiser/lifting.hpp"
#include "speiser/spg_io.hpp"

using namespace speiser;
using std::numbers::pi;

namespace {

const Complex I(0.0, 1.0);

bool has_point(const std::vector<Complex>& pts, Complex z, double tol = 1e-9) {
  return std::any_of(pts.begin(), pts.end(), [&](Complex p) { return std::abs(p - z) < tol; });
}

std::function<Complex(double)> circle(Complex c, double r, Complex start_dir = 1.0, double turns = 1.0) {
  return [=](double t) { return c + r * start_dir * std::exp(2.0 * pi * I * turns * t); };
}

/// Largest r such that no patch-boundary vertex lies within distance < r of the root.
int interior_radius(const SpeiserPatch& p) {
  int best = 1 << 20;
  for (const auto& [id, d] : distances_from(p, p.root))
    if (p.vertex(id).boundary) best = std::min(best, d);
  return best;
}

}  // namespace

TEST_CASE("preimages examples") {
  const auto sq = CatalogFunction::parse("z^2");
  const auto roots = preimages(sq, I, Box::square(2.0), 40);
  CHECK(roots.size() == 2);
  CHECK(has_point(roots, std::exp(I * pi / 4.0)));
  CHECK(has_point(roots, std::exp(I * 5.0 * pi / 4.0)));

  // ln|i-1| + i(3pi/4 + 2pi j): j = -1, 0 lie in Im [-8, 8]; j = 1 gives Im = 8.64.
  const auto ex = CatalogFunction::parse("exp(z)+1");
  const auto logs = preimages(ex, I, Box{-1, 1, -8, 8}, 40);
  CHECK(logs.size() == 2);
  for (int j : {-1, 0}) CHECK(has_point(logs, Complex(std::log(std::sqrt(2.0)), 3 * pi / 4 + 2 * pi * j)));
  CHECK(logs.size() == 2);

  CHECK_THROWS_AS(preimages(sq, 0.0, Box::square(2.0), 40), DomainError);
}

TEST_CASE("lift examples") {
  const auto sq = CatalogFunction::parse("z^2");
  const LiftResult once = lift_curve(sq, circle(0.0, 1.0), 1.0);
  REQUIRE(once.status == LiftStatus::Completed);
  CHECK(std::abs(once.endpoint() + 1.0) < 1e-9);
  const LiftResult twice = lift_curve(sq, circle(0.0, 1.0, 1.0, 2.0), 1.0);
  REQUIRE(twice.status == LiftStatus::Completed);
  CHECK(std::abs(twice.endpoint() - 1.0) < 1e-9);

  const auto ex = CatalogFunction::parse("exp(z)+1");
  const LiftResult seg = lift_curve(ex, [](double t) { return Complex(2.0 + t); }, 0.0);
  REQUIRE(seg.status == LiftStatus::Completed);
  CHECK(std::abs(seg.endpoint() - std::log(2.0)) < 1e-10);

  const LiftOptions opt;
  for (const auto* r : {&once, &twice, &seg}) CHECK(r->max_residual() <= opt.tol);
}

TEST_CASE("lift rejects a bad start and stops near critical points") {
  const auto sq = CatalogFunction::parse("z^2");
  CHECK_THROWS_AS(lift_curve(sq, circle(0.0, 1.0), 2.0), DomainError);
  LiftOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(lift_curve(sq, circle(0.0, 1.0), 1.0, bad), DomainError);
  const LiftResult hit = lift_path(sq, polyline({1.0, -1.0}), 1.0);
  CHECK(hit.status == LiftStatus::NearCritical);
}

TEST_CASE("monodromy of z^2 + 1/10") {
  const auto f = CatalogFunction::parse("z^2+1/10");
  const double c = 0.1;
  const Complex z0 = std::sqrt(Complex(0.5));
  const LiftResult around = lift_curve(f, circle(c, 0.5), z0);
  REQUIRE(around.status == LiftStatus::Completed);
  CHECK(std::abs(around.endpoint() + z0) <= 1e-8);

  const Complex z1 = std::sqrt(Complex(2.4));
  const LiftResult away = lift_curve(f, circle(2.0, 0.5), z1);
  REQUIRE(away.status == LiftStatus::Completed);
  CHECK(std::abs(away.endpoint() - z1) <= 1e-8);
}

TEST_CASE("property: homotopic paths lift to the same endpoint") {
  const LiftOptions opt;
  struct Case {
    std::string fn;
    Complex z0;
    std::vector<Complex> p1, p2;
  };
  const std::vector<Case> cases = {
      {"z^2", 1.0, {1.0, 1.0 + I, -1.0 + I, -1.0}, {1.0, 2.0 + 2.0 * I, -0.5 + 0.5 * I, -1.0}},
      {"exp(z)+1", 0.0, {2.0, 2.0 + I, 3.0 + I, 3.0}, {2.0, 2.5 - 0.3 * I, 3.0}},
      {"z^2+1/10", 1.0, {1.1, 1.1 + I, -2.0 + I, -2.0}, {1.1, 0.5 + 0.2 * I, -2.0 + 0.1 * I, -2.0}},
  };
  for (const auto& c : cases) {
    INFO(c.fn);
    const auto f = CatalogFunction::parse(c.fn);
    const LiftResult a = lift_path(f, polyline(c.p1), c.z0, opt);
    const LiftResult b = lift_path(f, polyline(c.p2), c.z0, opt);
    REQUIRE(a.status == LiftStatus::Completed);
    REQUIRE(b.status == LiftStatus::Completed);
    CHECK(a.max_residual() <= opt.tol);
    CHECK(b.max_residual() <= opt.tol);
    CHECK(std::abs(a.endpoint() - b.endpoint()) <= 10 * opt.tol);
  }
}

TEST_CASE("continue_chain examples") {
  const auto sq = CatalogFunction::parse("z^2");
  DiskChain chain;
  for (int k = 0; k <= 4; ++k) {
    chain.centers.push_back(std::exp(I * pi * (k / 4.0)));
    chain.radii.push_back(0.9);
  }
  const auto cert = continue_chain(sq, chain, 1.0);
  REQUIRE(cert.size() == 5);
  CHECK(std::abs(cert.back().center_preimage - I) < 1e-9);

  DiskChain one{{2.0}, {0.5}};
  const auto single = continue_chain(sq, one, std::sqrt(2.0));
  REQUIRE(single.size() == 1);
  CHECK(std::abs(single[0].center_preimage - std::sqrt(2.0)) < 1e-12);

  DiskChain bad{{1.0, 0.2}, {0.9, 0.5}};
  CHECK_THROWS_WITH_AS(continue_chain(sq, bad, 1.0), doctest::Contains("1"), DomainError);
}

TEST_CASE("inverse_branch_compose examples") {
  const auto f = CatalogFunction::parse("z^2");
  const auto g = CatalogFunction::parse("z^2+1/10");
  const auto phi = inverse_branch_compose(f, g, 1.0, std::sqrt(0.9), Box{0.5, 1.5, -0.5, 0.5}, 11, 11);
  bool found = false;
  for (const auto& s : phi) {
    CHECK(std::abs(s.phi - std::sqrt(s.z * s.z - 0.1)) < 1e-9);
    CHECK(s.residual <= 1e-9);
    if (std::abs(s.z - 1.0) < 1e-12) {
      found = true;
      CHECK(std::abs(s.phi - std::sqrt(0.9)) < 1e-10);
    }
  }
  CHECK(found);

  const auto ex = CatalogFunction::parse("exp(z)+1");
  const auto dx = CatalogFunction::parse("a*(exp(exp(z))-1)+1 with a=100");
  const Complex w_g = std::log(std::log1p(0.01));
  const auto tr = inverse_branch_compose(ex, dx, 0.0, w_g, Box{0.0, 1.0, -0.5, 0.5}, 5, 5);
  for (const auto& s : tr) {
    if (std::abs(s.z - 1.0) < 1e-12) {
      CHECK(std::abs(s.phi - std::log(std::log1p(std::exp(1.0) / 100.0))) < 1e-9);
      CHECK(s.phi.real() == doctest::Approx(-3.6186).epsilon(1e-4));
    }
  }
}

TEST_CASE("property: inverse_branch_compose(f, f) is the identity") {
  for (const std::string spec : {"z^2", "exp(z)+1", "z^3+2i", "a*(exp(exp(z))-1)+1 with a=100"}) {
    INFO(spec);
    const auto f = CatalogFunction::parse(spec);
    const Complex w(0.7, 0.3);
    const auto phi = inverse_branch_compose(f, f, w, w, Box{0.4, 1.0, 0.0, 0.6}, 7, 7);
    CHECK(phi.size() == 49);
    for (const auto& s : phi) CHECK(std::abs(s.phi - s.z) <= 1e-9);
  }
}

TEST_CASE("graph_from_function of z^d is the 2d-cycle") {
  for (int d = 2; d <= 4; ++d) {
    const auto f = CatalogFunction::parse("z^" + std::to_string(d));
    GraphFromFunctionOptions opt;
    opt.box = Box::square(2.0);
    const SpeiserPatch p = graph_from_function(f, opt);
    CHECK(validate(p).empty());
    CHECK(p.vertices.size() == static_cast<std::size_t>(2 * d));
    int cross = 0;
    for (const auto& [id, v] : p.vertices) {
      CHECK_FALSE(v.boundary);
      cross += v.color == Color::Cross;
    }
    CHECK(cross == d);
    const auto fs = faces(p);
    REQUIRE(fs.size() == 2);
    std::set<std::string> labels;
    for (const auto& fc : fs) {
      CHECK(fc.closed);
      labels.insert(format_sphere_value(fc.label));
    }
    CHECK(labels == std::set<std::string>{"0", "inf"});
    CHECK(canonical_code(p) == canonical_code(cycle_patch(d)));
    CHECK(rooted_isomorphic(p, cycle_patch(d)));
  }
}

TEST_CASE("graph_from_function of e^z + 1 is a piece of the exp path") {
  GraphFromFunctionOptions opt;
  opt.box = Box::square(8.0);
  const SpeiserPatch p = graph_from_function(CatalogFunction::parse("exp(z)+1"), opt);
  CHECK(validate(p).empty());
  const PatchScheme host(p);
  const int R = interior_radius(p);
  REQUIRE(R >= 1);
  for (int r = 0; r <= R; ++r) CHECK(rooted_isomorphic(ball(host, r), ball(*exp_scheme(), r)));
}

TEST_CASE("graph_from_function reproduces the double-exp fixture") {
  GraphFromFunctionOptions opt;
  opt.box = Box{-4.0, 2.2, -9.5, 10.5};
  opt.root_hint = Complex(-1.906, 2.30);
  const SpeiserPatch p = graph_from_function(CatalogFunction::parse("a*(exp(exp(z))-1)+1 with a=10"), opt);
  const SpeiserPatch golden = read_spg_file(std::string(SPEISER_DEFAULT_FIXTURES) + "/dexp_a10_lifted.spg");
  CHECK(canonical_code(p) == canonical_code(golden));
  CHECK(p.base == golden.base);
}

TEST_CASE("real base of the catalog families") {
  const RealBase rb = real_base(CatalogFunction::parse("a*(exp(exp(z))-1)+1 with a=10"));
  REQUIRE(rb.base.size() == 3);
  CHECK(approx_equal(rb.base[0], SphereValue(-9.0)));
  CHECK(approx_equal(rb.base[1], SphereValue(1.0)));
  CHECK(rb.base[2].is_infinite());
  CHECK(rb.crossing.size() == 3);
}

TEST_CASE("path samples") {
  const PathSample p = polyline({0.0, 1.0, 1.0 + I});
  CHECK(std::abs(p.at(0.25) - 0.5) < 1e-15);
  CHECK(std::abs(p.at(0.75) - (1.0 + 0.5 * I)) < 1e-15);
  PathSample bad = p;
  bad.t[1] = 0.0;
  CHECK_THROWS_AS(bad.check(), DomainError);
}
