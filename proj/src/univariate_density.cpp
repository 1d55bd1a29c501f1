#include "possum/univariate_density.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "possum/orthopoly.hpp"

namespace possum {

UniPoly linearized_objective(int n, int d) {
  if (n < 2) throw InvalidArgument("linearized objective needs n >= 2");
  if (d < 1) throw InvalidArgument("linearized objective needs d >= 1");
  UniPoly h({static_cast<double>(d)});
  for (int k = 1; k <= d; ++k) {
    UniPoly g = to_monomial({n, Normalization::Sup}, k);
    for (double& c : g.coeffs) c = -c;
    h = h + g;
  }
  return h;
}

double linearized_objective_value(int n, int d, double x) {
  const auto g = eval_all({n, Normalization::Sup}, d, x);
  double h = d;
  for (int k = 1; k <= d; ++k) h -= g[k];
  return h;
}

DensitySolution solve_density(int n, int d, int r) {
  if (n < 2) throw InvalidArgument("solve_density needs n >= 2");
  if (d < 1) throw InvalidArgument("solve_density needs d >= 1");
  if (r < d) throw InvalidArgument("solve_density needs r >= d");
  // A_ij = int h Ghat_i Ghat_j w_n, exact for degree 2r + d.
  const QuadratureRule rule = gauss_quadrature(n, (2 * r + d) / 2 + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r + 1, r + 1);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const auto g = orthonormal_values<double>(n, r, x);
    const Eigen::Map<const Eigen::VectorXd> gv(g.data(), r + 1);
    A.noalias() += (rule.weights[i] * linearized_objective_value(n, d, x)) * gv * gv.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success) throw ConditioningFailure("eigen solver failed");
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  v /= v.norm();
  // Sign: Ghat_0 coefficient nonnegative, else first nonzero coefficient positive.
  int lead = 0;
  if (std::abs(v[0]) < 1e-14)
    while (lead < r && std::abs(v[lead]) < 1e-14) ++lead;
  if (v[lead] < 0) v = -v;
  DensitySolution sol = density_from_square_root(n, std::vector<double>(v.data(), v.data() + r + 1));
  sol.d = d;
  sol.objective = v.dot(A * v);
  return sol;
}

DensitySolution density_from_square_root(int n, std::vector<double> v) {
  if (n < 1) throw InvalidArgument("Gegenbauer parameter n must be >= 1");
  if (v.empty()) throw InvalidArgument("square root needs at least one coefficient");
  DensitySolution sol;
  sol.n = n;
  sol.d = 0;
  sol.r = static_cast<int>(v.size()) - 1;
  sol.v = std::move(v);
  auto pq = orthonormal_series_to_monomial<long double>(n, sol.v);
  sol.p = UniPoly(std::vector<double>(pq.coeffs.begin(), pq.coeffs.end()));
  // lambda_k = int Gtilde_k p^2 w_n, with p evaluated in orthonormal form.
  sol.lambda = expand(
      [&](double x) {
        const double pv = orthonormal_series_eval(n, sol.v, x);
        return pv * pv;
      },
      2 * sol.r, n);
  return sol;
}

DensitySolution synthetic_density(int n, int r, std::vector<double> lambda) {
  DensitySolution sol;
  sol.n = n;
  sol.r = r;
  sol.d = 0;
  sol.lambda = std::move(lambda);
  return sol;
}

EigenGapReport check_eigen_gaps(const DensitySolution& sol, int d) {
  if (d < 0 || d >= static_cast<int>(sol.lambda.size()))
    throw InvalidArgument("check_eigen_gaps: d exceeds the stored eigenvalues");
  EigenGapReport rep;
  for (int k = 1; k <= d; ++k) {
    const double lk = sol.lambda[k];
    if (lk < 0.5)
      throw LambdaTooSmall("lambda_" + std::to_string(k) + " = " + std::to_string(lk) +
                           " < 1/2; increase r");
    rep.sum_gap += 1.0 - lk;
    rep.sum_inv_gap += std::abs(1.0 - 1.0 / lk);
  }
  const double n1 = sol.n + 1.0;
  const double r2 = static_cast<double>(sol.r) * sol.r;
  rep.gap_bound = n1 * n1 * d * d / r2;
  rep.inv_gap_ok = rep.sum_inv_gap <= 2.0 * rep.sum_gap + 1e-10;
  rep.gap_ok = sol.r < d || rep.sum_gap <= rep.gap_bound;
  rep.inverse_bound_applicable = sol.r >= 2 * (sol.n + 1) * d;
  rep.inverse_bound_ok = !rep.inverse_bound_applicable || rep.sum_inv_gap <= 2.0 * rep.gap_bound;
  rep.ok = rep.inv_gap_ok && rep.gap_ok && rep.inverse_bound_ok;
  return rep;
}

}  // namespace possum
