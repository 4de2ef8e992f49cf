#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speiser/convergence.hpp"

using namespace speiser;

namespace {

/// Branch of sqrt(z^2 - 1/n) closest to z.
Complex sqrt_branch(Complex z, double n) {
  Complex s = std::sqrt(z * z - 1.0 / n);
  if (std::abs(s - z) > std::abs(s + z)) s = -s;
  return s;
}

}  // namespace

TEST_CASE("base point identity holds for every sequence") {
  const auto q = quadratic_sequence();
  const auto d = double_exp_sequence();
  for (double n : {10.0, 100.0, 1e4}) {
    CHECK(base_point_residual(q, n) <= 1e-10);
    CHECK(base_point_residual(d, n) <= 1e-10);
  }
  CHECK(base_point_residual(constant_sequence(CatalogFunction::parse("exp(z)+1"), 0.3), 5.0) <= 1e-15);
}

TEST_CASE("compact set excludes E and critical points") {
  const auto q = quadratic_sequence();
  const CompactSpec K{2.0, 0.1, 41};
  const auto in = compact_membership(K, q);
  CHECK_FALSE(in(0.05));
  CHECK(in(0.5));
  CHECK_FALSE(in(Complex(1.5, 1.5)));
  for (const auto& z : compact_points(K, q)) {
    CHECK(std::abs(z) <= 2.0 + 1e-12);
    CHECK(std::abs(z) >= 0.1 - 1e-12);
  }
  CHECK_THROWS_AS(compact_points(CompactSpec{2.0, 0.1, 0}, q), DomainError);
}

TEST_CASE("uniform convergence of z^2 + 1/n") {
  const auto q = quadratic_sequence();
  const CompactSpec K{2.0, 0.1, 41};
  const auto rep = uniform_convergence_check(q, K, {10, 20, 40});
  REQUIRE(rep.rows.size() == 3);
  REQUIRE(rep.extra_columns.size() == 1);
  for (const auto& row : rep.rows) CHECK(std::abs(row.extra[0] - 1.0 / row.n) <= 1e-12);
  CHECK(rep.rows[0].sup == doctest::Approx(0.2).epsilon(0.01));
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].sup / rep.rows[i - 1].sup == doctest::Approx(0.5).epsilon(0.05));
  // Re-evaluating at the reported argmax reproduces the sup.
  for (const auto& row : rep.rows) {
    const auto fn = q.f_n(row.n);
    CHECK(spherical_distance(fn.eval(row.argmax), q.f.eval(row.argmax)) == doctest::Approx(row.sup).epsilon(1e-12));
  }
}

TEST_CASE("embedding convergence of z^2 + 1/n matches the square-root oracle") {
  const auto q = quadratic_sequence();
  const CompactSpec K{2.0, 0.5, 41};
  const std::vector<double> ns{10, 100, 1000};
  const auto rep = embedding_convergence_check(q, K, ns);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    double oracle = 0.0;
    for (const auto& z : compact_points(K, q)) oracle = std::max(oracle, std::abs(sqrt_branch(z, row.n) - z));
    CHECK(std::abs(row.sup - oracle) <= 1e-8);
    CHECK(std::abs(sqrt_branch(row.argmax, row.n) - row.argmax) == doctest::Approx(row.sup).epsilon(1e-8));
  }
  CHECK(rep.rows[1].sup <= 0.02);
  CHECK(rep.rows[1].sup < rep.rows[0].sup);
  CHECK(rep.rows[2].sup < rep.rows[1].sup);
}

TEST_CASE("constant sequences give zero rows") {
  const auto c = constant_sequence(CatalogFunction::parse("exp(z)+1"), 0.0);
  const CompactSpec K{1.0, 0.1, 11};
  for (const auto& row : uniform_convergence_check(c, K, {1, 2}).rows) CHECK(row.sup == 0.0);
  for (const auto& row : embedding_convergence_check(c, K, {1, 2}).rows) CHECK(row.sup <= 1e-9);
}

TEST_CASE("embedding check refuses a critical point inside K") {
  PointedSequence s;
  s.name = "shifted square";
  s.f = CatalogFunction::parse("z^2");
  s.w = 1.0;
  s.f_n = [](double n) { return CatalogFunction::parse("(z-c)^2", {{"c", 1.0 / n}}); };
  s.w_n = [](double n) { return Complex(1.0 + 1.0 / n); };
  s.exceptional = {0.0};
  CHECK_THROWS_AS(embedding_convergence_check(s, CompactSpec{1.0, 0.05, 21}, {5.0}), DomainError);
}

TEST_CASE("translation asymptotics for a(e^{e^z}-1)+1") {
  const CompactSpec K{1.0, 0.1, 21};
  const auto rep = translation_asymptotics_check({10, 100, 1000}, K);
  REQUIRE(rep.rows.size() == 3);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    CHECK(std::abs(row.sup - row.extra[0]) <= 1e-8);
    CHECK(row.extra[1] <= 1e-8);
    if (i > 0) {
      CHECK(row.ratio >= 1.0 / 30.0);
      CHECK(row.ratio <= 0.3);
    }
  }
  CHECK(rep.pass);
  // Closed form at z = 0 reduces to the base point shift.
  CHECK(std::abs(translation_oracle(0.0, 100.0) - std::log(std::log1p(0.01))) < 1e-14);
}

TEST_CASE("kernel consistency") {
  CHECK(kernel_consistency_check(1e4, 0).consistent);
  CHECK(kernel_consistency_check(1e4, 3).consistent);
  const LabelMap wrong{{SphereValue(1.0), SphereValue(1.0)}, {SphereValue::infinity(), SphereValue(1.0)}};
  CHECK_FALSE(kernel_consistency_check(1e4, 3, wrong).consistent);
}

TEST_CASE("decay verdict") {
  std::vector<ReportRow> rows(3);
  rows[0].sup = 0.1;
  rows[1].sup = 0.01;
  rows[2].sup = 0.001;
  CHECK(decay_verdict(rows, {}));
  rows[2].sup = 0.0104;
  CHECK(decay_verdict(rows, {}) == false);
  rows[2].sup = 0.0099;
  CHECK(decay_verdict(rows, {}));
  rows[2].sup = 0.02;
  CHECK_FALSE(decay_verdict(rows, {}));
}

TEST_CASE("report rendering") {
  const auto rep = uniform_convergence_check(quadratic_sequence(), CompactSpec{2.0, 0.1, 11}, {10, 20});
  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("n,sup,ratio,argmax_re,argmax_im,plane_sup\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(report_svg(rep).find("<svg") != std::string::npos);
}
