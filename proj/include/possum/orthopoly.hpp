#pragma once

#include <functional>
#include <span>
#include <vector>

#include "possum/polyarith.hpp"

namespace possum {

// C: G_k = Ghat_k(1) Ghat_k, so G_k(1) = Ghat_k(1)^2.
// Orthonormal: Ghat_k with respect to the probability weight w_n.
// Sup: Gtilde_k = G_k / G_k(1), so Gtilde_k(1) = 1.
enum class Normalization { C, Orthonormal, Sup };

struct GegenbauerFamily {
  int n = 2;
  Normalization normalization = Normalization::Orthonormal;
};

// x Ghat_k = b_{k+1} Ghat_{k+1} + a_k Ghat_k + b_k Ghat_{k-1}.
// a has entries 0..kmax, b has entries 0..kmax with b[0] = 0.
struct RecurrenceCoeffs {
  std::vector<double> a;
  std::vector<double> b;
};

// Orthonormal recurrence coefficient b_k (k >= 1) for w_n, n >= 1.
template <class Real>
Real recurrence_b(int n, int k) {
  if (n == 1) return k == 1 ? sqrt_value(Real(1) / Real(2)) : Real(1) / Real(2);
  const Real lam = Real(n - 1) / Real(2);
  const Real kk = Real(k);
  const Real beta = kk * (kk + 2 * lam - 1) / (4 * (kk + lam) * (kk + lam - 1));
  return sqrt_value(beta);
}

RecurrenceCoeffs recurrence_coeffs(int n, int kmax);

// Ghat_0(x), ..., Ghat_kmax(x) by forward recurrence.
template <class Real>
std::vector<Real> orthonormal_values(int n, int kmax, Real x) {
  std::vector<Real> g(kmax + 1);
  g[0] = 1;
  if (kmax >= 1) g[1] = x / recurrence_b<Real>(n, 1);
  for (int k = 1; k < kmax; ++k)
    g[k + 1] = (x * g[k] - recurrence_b<Real>(n, k) * g[k - 1]) / recurrence_b<Real>(n, k + 1);
  return g;
}

double eval(const GegenbauerFamily& family, int k, double x);
// All k = 0..kmax at once, in the requested normalization.
std::vector<double> eval_all(const GegenbauerFamily& family, int kmax, double x);

// G_k(1) = (1 + 2k/(n-1)) binom(k+n-2, k); n >= 2.
double gegenbauer_at_one(int n, int k);

std::vector<double> roots(int n, int k);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exact_degree = 0;

  double integrate(const std::function<double(double)>& f) const;
};

QuadratureRule gauss_quadrature(int n, int m);

// lambda_k = int Gtilde_k q w_n for k = 0..deg q, so that q = sum lambda_k G_k.
std::vector<double> expand(const UniPoly& q, int n);
std::vector<double> expand(const std::function<double(double)>& q, int degree, int n);

// Monomial coefficients of sum_k coeffs[k] Ghat_k, built by the recurrence in Real.
template <class Real>
BasicUniPoly<Real> orthonormal_series_to_monomial(int n, std::span<const double> coeffs) {
  const int kmax = static_cast<int>(coeffs.size()) - 1;
  std::vector<Real> out(coeffs.size(), Real(0));
  std::vector<Real> prev, cur{Real(1)};
  for (int k = 0; k <= kmax; ++k) {
    for (std::size_t i = 0; i < cur.size(); ++i) out[i] += static_cast<Real>(coeffs[k]) * cur[i];
    if (k == kmax) break;
    const Real bnext = recurrence_b<Real>(n, k + 1);
    const Real bk = k >= 1 ? recurrence_b<Real>(n, k) : Real(0);
    std::vector<Real> next(cur.size() + 1, Real(0));
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= bk * prev[i];
    for (Real& v : next) v /= bnext;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return BasicUniPoly<Real>(std::move(out));
}

UniPoly to_monomial(const GegenbauerFamily& family, int k);

// sum_k coeffs[k] Ghat_k(x).
double orthonormal_series_eval(int n, std::span<const double> coeffs, double x);

}  // namespace possum
