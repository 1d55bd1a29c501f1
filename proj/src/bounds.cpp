#include "possum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "possum/certify.hpp"
#include "possum/kernels.hpp"
#include "possum/measures.hpp"
#include "possum/orthopoly.hpp"
#include "possum/parallel.hpp"

namespace possum {

namespace {

void require_ball_or_simplex(const DomainMeasure& domain) {
  if (domain.kind == DomainKind::Sphere) throw InvalidArgument("bounds are computed on the ball or simplex");
}

// Component eigenvalues of the kernel used for degree-d polynomials.
std::vector<double> component_eigenvalues(const DomainMeasure& domain, int d, int r,
                                          const DensitySolution& sol) {
  std::vector<double> out;
  for (int k = 0; k <= d; ++k)
    out.push_back(domain.kind == DomainKind::Simplex ? sol.lambda[2 * k] : sol.lambda[k]);
  (void)r;
  return out;
}

// NaN marks a value that was not computed and prints as an empty field.
std::string fmt12(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

double harmonic_constant_bound(const DomainMeasure& domain, int d) {
  require_ball_or_simplex(domain);
  if (d < 0) throw InvalidArgument("degree must be >= 0");
  if (d == 0) return 1.0;
  if (domain.n < 2) throw InvalidArgument("harmonic constant bound needs n >= 2");
  double m = 1.0;
  for (int k = 0; k <= d; ++k)
    m = std::max(m, gegenbauer_at_one(domain.n, domain.kind == DomainKind::Simplex ? 2 * k : k));
  return std::sqrt(m);
}

double harmonic_constant_empirical(const DomainMeasure& domain, int d, int trials, std::uint64_t seed,
                                   int samples) {
  require_ball_or_simplex(domain);
  if (d < 0 || trials < 1) throw InvalidArgument("harmonic_constant_empirical needs d >= 0, trials >= 1");
  if (d == 0) return 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto monos = monomials_up_to(domain.n, d);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    MultiPoly p(domain.n);
    for (const auto& m : monos) p.add_term(m, coef(rng));
    const double norm = sup_norm_estimate(p, domain, samples);
    if (norm <= 0) continue;
    for (const MultiPoly& pk : project_components(p, domain))
      best = std::max(best, sup_norm_estimate(pk, domain, samples) / norm);
  }
  return best;
}

EpsilonReport theoretical_epsilon_report(int n, int d, int r, const DomainMeasure& domain,
                                         double fmax_minus_fmin) {
  require_ball_or_simplex(domain);
  if (n != domain.n) throw DimensionMismatch("n differs from the domain dimension");
  if (fmax_minus_fmin < 0) throw InvalidArgument("fmax - fmin must be >= 0");
  EpsilonReport rep;
  if (d <= 0) return rep;
  const DensitySolution sol = domain.kind == DomainKind::Simplex ? solve_density(n, 2 * d, 2 * r)
                                                                   : solve_density(n, d, r);
  check_eigen_gaps(sol, sol.d);
  const auto eig = component_eigenvalues(domain, d, r, sol);
  for (int k = 1; k <= d; ++k) rep.sum_inv_gap += std::abs(1.0 - 1.0 / eig[k]);
  rep.gamma_bound = harmonic_constant_bound(domain, d);
  rep.epsilon = rep.gamma_bound * rep.sum_inv_gap * fmax_minus_fmin;
  rep.constant = 2.0 * (n + 1.0) * (n + 1.0) * d * d * rep.gamma_bound;
  rep.closed_form_applicable = r >= 2 * (n + 1) * d;
  rep.closed_form = rep.constant / (static_cast<double>(r) * r) * fmax_minus_fmin;
  return rep;
}

double theoretical_epsilon(int n, int d, int r, const DomainMeasure& domain, double fmax_minus_fmin) {
  return theoretical_epsilon_report(n, d, r, domain, fmax_minus_fmin).epsilon;
}

UpperBoundReport upper_bound_report(const MultiPoly& f, int r, const DomainMeasure& domain,
                                    const Point& xstar) {
  require_ball_or_simplex(domain);
  require_inside(domain, xstar);
  UpperBoundReport rep;
  rep.f_at_xstar = f.evaluate<double>(xstar);
  const int d = f.degree();
  if (d <= 0) {
    rep.value = rep.cubature_value = f.is_zero() ? 0.0 : f.coefficient(Monomial(f.nvars(), 0));
    return rep;
  }
  if (r < d) throw InvalidArgument("upper_bound needs r >= deg f");
  const PerturbedKernel K = make_kernel(domain, d, r);
  rep.sigma_mass = K.eigenvalues[0];
  rep.value = apply_operator(K, f).evaluate<double>(xstar);
  const CubatureRule& rule = cubature(domain, d + 2 * r);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * f.evaluate<double>(rule.points[i]) * kernel_eval(K, rule.points[i], xstar);
  rep.cubature_value = s;
  rep.cross_check_ok = std::abs(rep.value - rep.cubature_value) <= 1e-9 * std::max(1.0, std::abs(rep.value));
  return rep;
}

double upper_bound(const MultiPoly& f, int r, const DomainMeasure& domain, const Point& xstar) {
  return upper_bound_report(f, r, domain, xstar).value;
}

double minimal_feasible_epsilon(const MultiPoly& f, double lambda_shift, int r,
                                const DomainMeasure& domain, double hi, int iterations) {
  auto feasible = [&](double eps) {
    return plan_feasible(plan_synthesis(f, lambda_shift, eps, r, domain));
  };
  if (feasible(0.0)) return 0.0;
  if (!(hi > 0) || !feasible(hi)) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::pair<Point, double> find_minimizer(const MultiPoly& f, const DomainMeasure& domain, int samples) {
  return sample_minimum(f, domain, samples);
}

double estimate_range(const MultiPoly& f, const DomainMeasure& domain, int samples) {
  const double lo = sample_minimum(f, domain, samples).second;
  const double hi = -sample_minimum(MultiPoly::constant(f.nvars(), 0.0) - f, domain, samples).second;
  return std::max(0.0, hi - lo);
}

BoundReport compute_bounds(const MultiPoly& f, int r, const DomainMeasure& domain,
                           const BoundOptions& options) {
  require_ball_or_simplex(domain);
  if (f.nvars() != domain.nvars()) throw DimensionMismatch("polynomial and domain dimension differ");
  BoundReport rep;
  rep.domain = domain;
  rep.n = domain.n;
  rep.d = std::max(f.degree(), 0);
  rep.r = r;
  if (options.xstar) {
    rep.xstar = *options.xstar;
    require_inside(domain, rep.xstar);
  } else {
    rep.xstar = find_minimizer(f, domain).first;
    rep.heuristic_xstar = true;
  }
  if (options.fmax_minus_fmin) {
    rep.fmax_minus_fmin = *options.fmax_minus_fmin;
  } else {
    rep.fmax_minus_fmin = estimate_range(f, domain);
    rep.heuristic_range = true;
  }
  if (options.lambda_shift) {
    rep.lambda_shift = *options.lambda_shift;
  } else {
    rep.lambda_shift = default_shift(f, domain);
    rep.heuristic_shift = true;
  }
  rep.gamma_bound = harmonic_constant_bound(domain, rep.d);
  const UpperBoundReport ub = upper_bound_report(f, r, domain, rep.xstar);
  rep.upper_bound = ub.value;
  rep.upper_gap = ub.value - ub.f_at_xstar;
  if (rep.d == 0) return rep;
  const EpsilonReport eps = theoretical_epsilon_report(domain.n, rep.d, r, domain, rep.fmax_minus_fmin);
  rep.eps_theoretical = eps.epsilon;
  rep.closed_form = eps.closed_form;
  rep.closed_form_applicable = eps.closed_form_applicable;
  rep.eps_empirical = options.bisect
                          ? minimal_feasible_epsilon(f, rep.lambda_shift, r, domain, 2.0 * eps.epsilon)
                          : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

nlohmann::json bound_report_to_json(const BoundReport& rep) {
  nlohmann::json j = {{"domain", rep.domain.name()},
                      {"n", rep.n},
                      {"d", rep.d},
                      {"r", rep.r},
                      {"eps_theoretical", rep.eps_theoretical},
                      {"eps_empirical", std::isfinite(rep.eps_empirical) ? nlohmann::json(rep.eps_empirical)
                                                                         : nlohmann::json(nullptr)},
                      {"upper_bound", rep.upper_bound},
                      {"upper_gap", rep.upper_gap},
                      {"gamma_bound", rep.gamma_bound},
                      {"fmax_minus_fmin", rep.fmax_minus_fmin},
                      {"lambda_shift", rep.lambda_shift},
                      {"xstar", rep.xstar},
                      {"heuristic",
                       {{"lambda_shift", rep.heuristic_shift},
                        {"xstar", rep.heuristic_xstar},
                        {"fmax_minus_fmin", rep.heuristic_range}}}};
  if (rep.closed_form_applicable) j["closed_form_bound"] = rep.closed_form;
  return j;
}

double loglog_slope(const std::vector<double>& r, const std::vector<double>& value) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] > 0 && value[i] > 0 && std::isfinite(value[i])) {
      lx.push_back(std::log(r[i]));
      ly.push_back(std::log(value[i]));
    }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

StudyResult convergence_study(const MultiPoly& f, const DomainMeasure& domain,
                              const std::vector<int>& r_list, const BoundOptions& options, int threads) {
  require_ball_or_simplex(domain);
  if (!std::is_sorted(r_list.begin(), r_list.end())) throw InvalidArgument("r_list must be ascending");
  // Resolve the heuristic inputs once so every row uses the same values.
  BoundOptions fixed = options;
  if (!fixed.xstar) fixed.xstar = find_minimizer(f, domain).first;
  if (!fixed.fmax_minus_fmin) fixed.fmax_minus_fmin = estimate_range(f, domain);
  if (!fixed.lambda_shift) fixed.lambda_shift = default_shift(f, domain);

  StudyResult out;
  out.rows.resize(r_list.size());
  parallel_for(
      r_list.size(),
      [&](std::size_t i) {
        StudyRow& row = out.rows[i];
        row.r = r_list[i];
        try {
          const BoundReport rep = compute_bounds(f, row.r, domain, fixed);
          row.eps_theoretical = rep.eps_theoretical;
          row.eps_empirical = rep.eps_empirical;
          row.upper_gap = rep.upper_gap;
          row.ok = true;
        } catch (const Error& e) {
          row.error = std::string(e.kind()) + ": " + e.what();
        }
      },
      threads);

  std::vector<const StudyRow*> good;
  for (const auto& row : out.rows)
    if (row.ok) good.push_back(&row);
  const std::size_t start = good.size() / 2;
  std::vector<double> rs, et, ee, ug;
  for (std::size_t i = start; i < good.size(); ++i) {
    out.window.push_back(good[i]->r);
    rs.push_back(good[i]->r);
    et.push_back(good[i]->eps_theoretical);
    ee.push_back(good[i]->eps_empirical);
    ug.push_back(good[i]->upper_gap);
  }
  out.slope_eps_theoretical = loglog_slope(rs, et);
  out.slope_eps_empirical = loglog_slope(rs, ee);
  out.slope_upper_gap = loglog_slope(rs, ug);
  return out;
}

std::string study_to_csv(const StudyResult& study) {
  std::string s = "r,eps_empirical,eps_theoretical,upper_gap,slope_window\n";
  for (const auto& row : study.rows) {
    if (!row.ok) continue;
    const bool in_window = std::find(study.window.begin(), study.window.end(), row.r) != study.window.end();
    s += std::to_string(row.r) + "," + fmt12(row.eps_empirical) + "," + fmt12(row.eps_theoretical) + "," +
         fmt12(row.upper_gap) + "," + (in_window ? fmt12(study.slope_eps_theoretical) : "") + "\n";
  }
  return s;
}

nlohmann::json study_summary_json(const StudyResult& study) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& row : study.rows)
    if (!row.ok) errors.push_back({{"r", row.r}, {"error", row.error}});
  return {{"slope_eps_theoretical", num(study.slope_eps_theoretical)},
          {"slope_eps_empirical", num(study.slope_eps_empirical)},
          {"slope_upper_gap", num(study.slope_upper_gap)},
          {"window", study.window},
          {"skipped_rows", errors}};
}

}  // namespace possum
