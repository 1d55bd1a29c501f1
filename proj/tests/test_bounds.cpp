#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "possum/bounds.hpp"
#include "possum/kernels.hpp"
#include "possum/measures.hpp"

using namespace possum;

namespace {

double at_one_formula(int n, int k) {
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) binom = binom * (n - 2 + i) / i;
  return (1.0 + 2.0 * k / (n - 1)) * binom;
}

const MultiPoly x1 = MultiPoly::variable(2, 0);
const MultiPoly x2 = MultiPoly::variable(2, 1);

}  // namespace

TEST_CASE("harmonic constant bound") {
  CHECK(harmonic_constant_bound(DomainMeasure::ball(3), 0) == 1.0);
  CHECK(harmonic_constant_bound(DomainMeasure::ball(3), 2) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(harmonic_constant_bound(DomainMeasure::simplex(3), 1) == doctest::Approx(3.0).epsilon(1e-13));
  for (int n = 2; n <= 5; ++n)
    for (int d = 1; d <= 4; ++d) {
      double mb = 0, ms = 0;
      for (int k = 0; k <= d; ++k) {
        mb = std::max(mb, at_one_formula(n, k));
        ms = std::max(ms, at_one_formula(n, 2 * k));
      }
      CHECK(harmonic_constant_bound(DomainMeasure::ball(n), d) == doctest::Approx(std::sqrt(mb)).epsilon(1e-12));
      CHECK(harmonic_constant_bound(DomainMeasure::simplex(n), d) == doctest::Approx(std::sqrt(ms)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(harmonic_constant_bound(DomainMeasure::ball(1), 2), InvalidArgument);
}

TEST_CASE("harmonic constant empirical") {
  CHECK(harmonic_constant_empirical(DomainMeasure::ball(2), 0, 5) == 1.0);
  for (auto dom : {DomainMeasure::ball(2), DomainMeasure::simplex(2)})
    for (int d = 1; d <= 3; ++d) {
      const double e = harmonic_constant_empirical(dom, d, 20, 3, 1000);
      CHECK(e >= 1.0 / (d + 1) - 1e-12);  // |p| <= sum_k |p_k|
      CHECK(e <= harmonic_constant_bound(dom, d));
    }
  // A pure H_k element is its own component.
  const auto& B = orthonormal_basis(DomainMeasure::ball(2), 2);
  const MultiPoly p = B.basis.back();
  const auto parts = project_components(p, DomainMeasure::ball(2));
  CHECK(sup_norm_estimate(parts[2], DomainMeasure::ball(2), 500) ==
        doctest::Approx(sup_norm_estimate(p, DomainMeasure::ball(2), 500)).epsilon(1e-10));
}

TEST_CASE("theoretical epsilon") {
  for (auto dom : {DomainMeasure::ball(2), DomainMeasure::simplex(2), DomainMeasure::ball(3)})
    for (int d = 1; d <= 2; ++d) {
      const int n = dom.n;
      double worst_scaled = 0.0;
      for (int r = 2 * (n + 1) * d; r <= 60; r += 2) {
        const EpsilonReport rep = theoretical_epsilon_report(n, d, r, dom, 1.0);
        CHECK(rep.closed_form_applicable);
        CHECK(rep.epsilon >= 0.0);
        CHECK(rep.epsilon <= rep.closed_form);
        CHECK(rep.constant == doctest::Approx(2.0 * (n + 1) * (n + 1) * d * d * harmonic_constant_bound(dom, d)));
        worst_scaled = std::max(worst_scaled, rep.epsilon * r * r);
      }
      CHECK(worst_scaled <= 2.0 * (n + 1) * (n + 1) * d * d * harmonic_constant_bound(dom, d));
    }
  CHECK(theoretical_epsilon(2, 1, 8, DomainMeasure::ball(2), 0.0) == 0.0);
  CHECK_FALSE(theoretical_epsilon_report(2, 1, 4, DomainMeasure::ball(2), 1.0).closed_form_applicable);
  CHECK_THROWS_AS(theoretical_epsilon(2, 3, 3, DomainMeasure::ball(2), 1.0), LambdaTooSmall);
  CHECK_THROWS_AS(theoretical_epsilon(3, 1, 8, DomainMeasure::ball(2), 1.0), DimensionMismatch);
}

TEST_CASE("upper bound") {
  const DomainMeasure b2 = DomainMeasure::ball(2), s2 = DomainMeasure::simplex(2);
  CHECK(upper_bound(MultiPoly::constant(2, 3.5), 5, b2, Point{0.1, 0.1}) == 3.5);
  CHECK_THROWS_AS(upper_bound(x1, 5, b2, Point{2.0, 0.0}), OutsideDomain);

  // Eigenvalues all one give back f(x*).
  const PerturbedKernel I = kernel_from_eigenvalues(b2, 2, std::vector<double>(5, 1.0));
  const MultiPoly f = x1 * x1 - x2;
  CHECK(apply_operator(I, f).evaluate<double>(Point{0.3, 0.4}) == doctest::Approx(f.evaluate<double>(Point{0.3, 0.4})));

  struct Case {
    DomainMeasure dom;
    MultiPoly f;
    Point xstar;
    double range;
  };
  const MultiPoly one = MultiPoly::constant(2, 1.0);
  const double s = 1 / std::sqrt(2.0);
  const std::vector<Case> cases{{b2, x1, {-1, 0}, 2},
                                {b2, x1 + x2, {-s, -s}, 2 * std::sqrt(2.0)},
                                {b2, x1 * x2, {s, -s}, 1},
                                {b2, squared_norm(2), {0, 0}, 1},
                                {b2, x1 * x1 - x2, {0, 1}, 2.25},
                                {b2, one - squared_norm(2), {1, 0}, 1},
                                {s2, x1, {0, 0}, 1},
                                {s2, x2, {1, 0}, 1},
                                {s2, x1 * x2, {0, 0}, 0.25},
                                {s2, x1 * x1, {0, 1}, 1}};
  for (const auto& c : cases) {
    const int d = c.f.degree();
    for (int r : {2 * 3 * d, 2 * 3 * d + 8}) {
      const UpperBoundReport rep = upper_bound_report(c.f, r, c.dom, c.xstar);
      CHECK(rep.cross_check_ok);
      CHECK(std::abs(rep.sigma_mass - 1.0) < 1e-10);
      CHECK(rep.value >= rep.f_at_xstar - 1e-9);
      const double gap = rep.value - rep.f_at_xstar;
      CHECK(gap <= harmonic_constant_bound(c.dom, d) * 9.0 * d * d / (r * r) * c.range);
    }
  }
}

TEST_CASE("bisection") {
  const DomainMeasure s2 = DomainMeasure::simplex(2);
  const double hi = 2 * theoretical_epsilon(2, 2, 12, s2, 0.25);
  const double eps = minimal_feasible_epsilon(x1 * x2, 0.0, 12, s2, hi);
  CHECK(eps > 0.0);
  CHECK(eps <= hi / 2);
  CHECK(minimal_feasible_epsilon(x1 * x2, 0.1, 12, s2, 1e-3) == INFINITY);
}

TEST_CASE("compute_bounds") {
  BoundOptions o;
  o.xstar = Point{-1.0, 0.0};
  o.lambda_shift = -1.0;
  o.fmax_minus_fmin = 2.0;
  const BoundReport rep = compute_bounds(x1, 12, DomainMeasure::ball(2), o);
  CHECK(rep.d == 1);
  CHECK(rep.eps_theoretical > 0.0);
  CHECK(rep.eps_empirical <= rep.eps_theoretical);
  CHECK(rep.upper_gap > 0.0);
  CHECK_FALSE(rep.heuristic_shift);
  const auto j = bound_report_to_json(rep);
  CHECK(j.at("r") == 12);
  CHECK(j.contains("gamma_bound"));

  const BoundReport h = compute_bounds(x1, 12, DomainMeasure::ball(2));
  CHECK(h.heuristic_shift);
  CHECK(h.heuristic_xstar);
  CHECK(h.fmax_minus_fmin == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(h.eps_theoretical == doctest::Approx(rep.eps_theoretical).epsilon(1e-4));

  const BoundReport c = compute_bounds(MultiPoly::constant(2, 2.0), 4, DomainMeasure::simplex(2));
  CHECK(c.eps_theoretical == 0.0);
  CHECK(c.eps_empirical == 0.0);
  CHECK(c.upper_gap == 0.0);
}

TEST_CASE("loglog slope") {
  std::vector<double> r, v;
  for (int k = 8; k <= 48; k += 4) {
    r.push_back(k);
    v.push_back(3.0 / (k * k));
  }
  CHECK(loglog_slope(r, v) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::isnan(loglog_slope({4}, {1.0})));
}

TEST_CASE("convergence study") {
  std::vector<int> rs;
  for (int r = 8; r <= 48; r += 4) rs.push_back(r);

  BoundOptions ob;
  ob.xstar = Point{-1.0, 0.0};
  ob.lambda_shift = -1.0;
  ob.fmax_minus_fmin = 2.0;
  ob.bisect = false;
  const StudyResult sb = convergence_study(x1, DomainMeasure::ball(2), rs, ob);
  CHECK(sb.slope_eps_theoretical >= -2.2);
  CHECK(sb.slope_eps_theoretical <= -1.8);

  BoundOptions os;
  os.xstar = Point{0.0, 0.0};
  os.lambda_shift = 0.0;
  os.fmax_minus_fmin = 0.25;
  os.bisect = false;
  const StudyResult ss = convergence_study(x1 * x2, DomainMeasure::simplex(2), rs, os);
  CHECK(ss.slope_upper_gap <= -1.8);
  CHECK(ss.window == std::vector<int>{28, 32, 36, 40, 44, 48});

  const std::string csv = study_to_csv(ss);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,eps_empirical,eps_theoretical,upper_gap,slope_window");
  int rows = 0, prev = 0;
  while (std::getline(in, line)) {
    const int r = std::stoi(line.substr(0, line.find(',')));
    CHECK(r > prev);
    prev = r;
    ++rows;
  }
  CHECK(rows == static_cast<int>(rs.size()));

  const StudyResult sc = convergence_study(MultiPoly::constant(2, 1.0), DomainMeasure::ball(2), {2, 4}, {});
  for (const auto& row : sc.rows) {
    CHECK(row.ok);
    CHECK(row.eps_theoretical == 0.0);
    CHECK(row.eps_empirical == 0.0);
  }

  // Rows that fail are recorded and skipped.
  const StudyResult se = convergence_study(x1 * x1, DomainMeasure::ball(2), {1, 8}, ob);
  CHECK_FALSE(se.rows[0].ok);
  CHECK_FALSE(se.rows[0].error.empty());
  CHECK(se.rows[1].ok);
  CHECK(study_summary_json(se).at("skipped_rows").size() == 1);
  CHECK_THROWS_AS(convergence_study(x1, DomainMeasure::ball(2), {8, 4}, ob), InvalidArgument);
}
