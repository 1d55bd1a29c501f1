#include "possum/orthopoly.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace possum {

namespace {

void require_n(int n) {
  if (n < 1) throw InvalidArgument("Gegenbauer parameter n must be >= 1");
}

// Ghat_m(x) and its derivative.
std::pair<double, double> value_and_derivative(int n, int m, double x) {
  double g_prev = 0.0, g = 1.0, d_prev = 0.0, d = 0.0;
  for (int k = 0; k < m; ++k) {
    const double bk = k >= 1 ? recurrence_b<double>(n, k) : 0.0;
    const double bnext = recurrence_b<double>(n, k + 1);
    const double g_next = (x * g - bk * g_prev) / bnext;
    const double d_next = (g + x * d - bk * d_prev) / bnext;
    g_prev = g;
    g = g_next;
    d_prev = d;
    d = d_next;
  }
  return {g, d};
}

// Roots of Ghat_m from the Jacobi matrix, polished by Newton and symmetrized.
std::vector<double> jacobi_roots(int n, int m) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 1; k < m; ++k) sub[k - 1] = recurrence_b<double>(n, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  for (double& xi : x) {
    for (int it = 0; it < 3; ++it) {
      auto [g, d] = value_and_derivative(n, m, xi);
      if (d == 0.0) break;
      const double step = g / d;
      if (std::abs(step) > 1e-6) break;  // eigenvalues are already close; refuse large jumps
      xi -= step;
    }
  }
  for (int i = 0; i < m / 2; ++i) {
    const double s = 0.5 * (x[m - 1 - i] - x[i]);
    x[i] = -s;
    x[m - 1 - i] = s;
  }
  if (m % 2 == 1) x[m / 2] = 0.0;
  return x;
}

}  // namespace

RecurrenceCoeffs recurrence_coeffs(int n, int kmax) {
  require_n(n);
  if (kmax < 0) throw InvalidArgument("kmax must be >= 0");
  RecurrenceCoeffs rc;
  rc.a.assign(kmax + 1, 0.0);
  rc.b.assign(kmax + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) rc.b[k] = recurrence_b<double>(n, k);
  return rc;
}

std::vector<double> eval_all(const GegenbauerFamily& family, int kmax, double x) {
  require_n(family.n);
  if (kmax < 0) throw InvalidArgument("degree must be >= 0");
  std::vector<double> g = orthonormal_values<double>(family.n, kmax, x);
  if (family.normalization == Normalization::Orthonormal) return g;
  if (family.normalization == Normalization::C && family.n == 1)
    throw InvalidArgument("C normalization is undefined for n = 1");
  const std::vector<double> one = orthonormal_values<double>(family.n, kmax, 1.0);
  for (int k = 0; k <= kmax; ++k)
    g[k] = family.normalization == Normalization::C ? g[k] * one[k] : g[k] / one[k];
  return g;
}

double eval(const GegenbauerFamily& family, int k, double x) {
  return eval_all(family, k, x)[k];
}

double gegenbauer_at_one(int n, int k) {
  if (n < 2) throw InvalidArgument("gegenbauer_at_one needs n >= 2");
  if (k < 0) throw InvalidArgument("degree must be >= 0");
  if (k == 0) return 1.0;
  const double log_binom = std::lgamma(k + n - 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - 1.0);
  return (1.0 + 2.0 * k / (n - 1.0)) * std::exp(log_binom);
}

std::vector<double> roots(int n, int k) {
  require_n(n);
  if (k < 1) throw InvalidArgument("roots need k >= 1");
  return jacobi_roots(n, k);
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

QuadratureRule gauss_quadrature(int n, int m) {
  require_n(n);
  if (m < 1) throw InvalidArgument("quadrature needs m >= 1");
  QuadratureRule rule;
  rule.nodes = jacobi_roots(n, m);
  rule.exact_degree = 2 * m - 1;
  // Christoffel numbers 1 / sum_k Ghat_k(x)^2, equal to the squared first
  // eigenvector components of the Jacobi matrix but accurate for tiny weights.
  rule.weights.resize(m);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto g = orthonormal_values<double>(n, m - 1, rule.nodes[i]);
    double s = 0.0;
    for (double v : g) s += v * v;
    rule.weights[i] = 1.0 / s;
  }
  for (int i = 0; i < m / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[m - 1 - i]);
    rule.weights[i] = rule.weights[m - 1 - i] = w;
  }
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

std::vector<double> expand(const std::function<double(double)>& q, int degree, int n) {
  require_n(n);
  if (degree < 0) return {};
  const QuadratureRule rule = gauss_quadrature(n, degree + 1);
  std::vector<double> lambda(degree + 1, 0.0);
  const GegenbauerFamily sup{n, Normalization::Sup};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double wq = rule.weights[i] * q(rule.nodes[i]);
    const auto g = eval_all(sup, degree, rule.nodes[i]);
    for (int k = 0; k <= degree; ++k) lambda[k] += wq * g[k];
  }
  return lambda;
}

std::vector<double> expand(const UniPoly& q, int n) {
  return expand([&](double x) { return q(x); }, std::max(q.degree(), 0), n);
}

UniPoly to_monomial(const GegenbauerFamily& family, int k) {
  require_n(family.n);
  std::vector<double> coeffs(k + 1, 0.0);
  coeffs[k] = 1.0;
  if (family.normalization != Normalization::Orthonormal) {
    if (family.normalization == Normalization::C && family.n == 1)
      throw InvalidArgument("C normalization is undefined for n = 1");
    const double one = orthonormal_values<double>(family.n, k, 1.0)[k];
    coeffs[k] = family.normalization == Normalization::C ? one : 1.0 / one;
  }
  auto p = orthonormal_series_to_monomial<long double>(family.n, coeffs);
  std::vector<double> out(p.coeffs.begin(), p.coeffs.end());
  return UniPoly(std::move(out));
}

double orthonormal_series_eval(int n, std::span<const double> coeffs, double x) {
  if (coeffs.empty()) return 0.0;
  const auto g = orthonormal_values<double>(n, static_cast<int>(coeffs.size()) - 1, x);
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * g[k];
  return s;
}

}  // namespace possum
