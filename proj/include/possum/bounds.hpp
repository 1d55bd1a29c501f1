#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "possum/domain.hpp"
#include "possum/polyarith.hpp"

namespace possum {

// sqrt(max_{k<=d} G^n_k(1)) on the ball, sqrt(max_{k<=d} G^n_{2k}(1)) on the simplex.
double harmonic_constant_bound(const DomainMeasure& domain, int d);
// max over random p of max_k |p_k|_inf / |p|_inf with sampled sup norms.
double harmonic_constant_empirical(const DomainMeasure& domain, int d, int trials,
                                   std::uint64_t seed = 7, int samples = 2000);

struct EpsilonReport {
  double epsilon = 0.0;       // gamma_bound * sum_inv_gap * range
  double sum_inv_gap = 0.0;   // sum_{k=1}^d |1 - 1/lambda_k| over component eigenvalues
  double gamma_bound = 0.0;
  double constant = 0.0;      // 2 (n+1)^2 d^2 gamma_bound
  bool closed_form_applicable = false;  // r >= 2(n+1)d
  double closed_form = 0.0;   // constant / r^2 * range
};

EpsilonReport theoretical_epsilon_report(int n, int d, int r, const DomainMeasure& domain,
                                         double fmax_minus_fmin);
double theoretical_epsilon(int n, int d, int r, const DomainMeasure& domain, double fmax_minus_fmin);

struct UpperBoundReport {
  double value = 0.0;           // (K f)(x*) = sum lambda_k f_k(x*)
  double cubature_value = 0.0;  // sum_i w_i f(y_i) K(y_i, x*)
  double f_at_xstar = 0.0;
  double sigma_mass = 1.0;      // lambda_0
  bool cross_check_ok = true;   // the two values agree to 1e-9
};

UpperBoundReport upper_bound_report(const MultiPoly& f, int r, const DomainMeasure& domain,
                                    const Point& xstar);
double upper_bound(const MultiPoly& f, int r, const DomainMeasure& domain, const Point& xstar);

// Smallest feasible epsilon by bisection on [0, hi], `iterations` halvings.
// Returns +inf when hi itself is infeasible.
double minimal_feasible_epsilon(const MultiPoly& f, double lambda_shift, int r,
                                const DomainMeasure& domain, double hi, int iterations = 20);

// Dense sampling plus coordinate refinement. Heuristic.
std::pair<Point, double> find_minimizer(const MultiPoly& f, const DomainMeasure& domain,
                                        int samples = 4000);
// Sampled f_max - f_min. Heuristic.
double estimate_range(const MultiPoly& f, const DomainMeasure& domain, int samples = 4000);

struct BoundOptions {
  std::optional<Point> xstar;
  std::optional<double> lambda_shift;
  std::optional<double> fmax_minus_fmin;
  bool bisect = true;
};

struct BoundReport {
  DomainMeasure domain;
  int n = 0, d = 0, r = 0;
  double eps_theoretical = 0.0;
  double eps_empirical = 0.0;  // NaN when the bisection was skipped
  double upper_gap = 0.0;
  double upper_bound = 0.0;
  double gamma_bound = 0.0;
  double closed_form = 0.0;
  bool closed_form_applicable = false;
  double fmax_minus_fmin = 0.0;
  double lambda_shift = 0.0;
  Point xstar;
  bool heuristic_shift = false;
  bool heuristic_xstar = false;
  bool heuristic_range = false;
};

BoundReport compute_bounds(const MultiPoly& f, int r, const DomainMeasure& domain,
                           const BoundOptions& options = {});
nlohmann::json bound_report_to_json(const BoundReport& rep);

struct StudyRow {
  int r = 0;
  bool ok = false;
  std::string error;
  double eps_empirical = 0.0;
  double eps_theoretical = 0.0;
  double upper_gap = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  std::vector<int> window;  // r values used for the slope fits
  double slope_eps_theoretical = 0.0;
  double slope_eps_empirical = 0.0;
  double slope_upper_gap = 0.0;
};

StudyResult convergence_study(const MultiPoly& f, const DomainMeasure& domain,
                              const std::vector<int>& r_list, const BoundOptions& options = {},
                              int threads = 0);
// Least-squares slope of log(value) against log(r); NaN with fewer than two positive points.
double loglog_slope(const std::vector<double>& r, const std::vector<double>& value);
std::string study_to_csv(const StudyResult& study);
nlohmann::json study_summary_json(const StudyResult& study);

}  // namespace possum
