#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "speiser/canonical.hpp"
#include "speiser/lifting.hpp"

namespace speiser {

/// n -> (f_n, w_n) with limit (f, w) and exceptional set E.
struct PointedSequence {
  std::string name;
  std::function<CatalogFunction(double)> f_n;
  std::function<Complex(double)> w_n;
  CatalogFunction f;
  Complex w{0.0, 0.0};
  std::vector<Complex> exceptional;
};

/// z^2 + 1/n -> z^2, w = 1, w_n = sqrt(1 - 1/n), E = {0}.
PointedSequence quadratic_sequence();
/// a(e^{e^z} - 1) + 1 -> e^z + 1 indexed by a, w = 0, w_a = ln ln(1 + 1/a).
PointedSequence double_exp_sequence();
/// f_n = f, w_n = w.
PointedSequence constant_sequence(const CatalogFunction& f, Complex w);
/// "quadratic", "dexp" or "const:<function spec>".
PointedSequence parse_sequence(const std::string& name);

/// |f_n(w_n) - f(w)|.
double base_point_residual(const PointedSequence& seq, double n);

/// K = {|z| <= R0} minus open delta-disks around E and the critical points of f, sampled on a grid x grid lattice.
struct CompactSpec {
  double R0 = 2.0;
  double delta = 0.1;
  int grid = 41;
};

/// Membership test for K (E closed under the critical points of f).
std::function<bool(Complex)> compact_membership(const CompactSpec& K, const PointedSequence& seq);
std::vector<Complex> compact_points(const CompactSpec& K, const PointedSequence& seq);

struct ReportRow {
  double n = 0.0;
  double sup = 0.0;
  double ratio = 0.0;  // sup / previous sup, NaN for the first row
  Complex argmax{0.0, 0.0};
  std::vector<double> extra;
};

struct DecayCriterion {
  double final_max = 1e-2;
  double jitter = 0.05;  // allowed relative increase between consecutive rows
};

struct ConvergenceReport {
  std::string check;
  std::vector<std::string> extra_columns;
  std::vector<ReportRow> rows;
  DecayCriterion criterion;
  bool pass = false;
  std::vector<std::string> diagnostics;
};

/// Recomputes pass from rows: non-increasing up to jitter and final sup <= final_max.
bool decay_verdict(const std::vector<ReportRow>& rows, const DecayCriterion& c);

/// Rows: sup over K of the spherical distance between f_n and f; extra column: plane sup.
ConvergenceReport uniform_convergence_check(const PointedSequence& seq, const CompactSpec& K,
                                            const std::vector<double>& ns, const DecayCriterion& c = {});

/// Rows: sup over K of |phi_n(z) - z| with phi_n = f_n^{-1} o f; extra column: max residual.
ConvergenceReport embedding_convergence_check(const PointedSequence& seq, const CompactSpec& K,
                                              const std::vector<double>& ns, const DecayCriterion& c = {},
                                              double tol = 1e-9);

/// ln ln(1 + e^z / a) on principal branches.
Complex translation_oracle(Complex z, double a);

/// Rows indexed by a: sup |phi(z) - z - w_a| from lifting; extra columns: the same from the
/// closed form, and the sup distance between the two routes. Throws if the routes
/// disagree by more than 10 * tol.
ConvergenceReport translation_asymptotics_check(const std::vector<double>& as, const CompactSpec& K,
                                                const DecayCriterion& c = {}, double tol = 1e-9);

struct KernelCheck {
  bool consistent = false;
  std::vector<std::string> diagnostics;
};

/// Collides the lifted graph of a(e^{e^z}-1)+1 along (1-a) -> inf and compares its
/// radius-r ball with the lifted graph of e^z + 1. An invalid label map gives false.
KernelCheck kernel_consistency_check(double a, int r, const std::optional<LabelMap>& label_map = std::nullopt);

std::string report_csv(const ConvergenceReport& report);
/// Log-log plot of sup against n.
std::string report_svg(const ConvergenceReport& report);

}  // namespace speiser
