#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "possum/domain.hpp"
#include "possum/polyarith.hpp"
#include "possum/univariate_density.hpp"

namespace possum {

// CD_{2r}(x, y; lambda). Ball: q = p^2 from solve_density(n, d, r), component k has
// eigenvalue lambda_k. Simplex: q = p^2 from solve_density(n, 2d, 2r), only its even
// part is used and component k has eigenvalue lambda_{2k}.
struct PerturbedKernel {
  DomainMeasure domain;
  int r = 0;
  DensitySolution density;
  std::vector<double> eigenvalues;  // one per component degree 0..2r
  bool has_square = false;          // false for kernels built from eigenvalues only

  // Orthonormal-Gegenbauer coefficients of p and, on the simplex, its parity parts.
  std::vector<double> p_coeffs;
  std::vector<double> p_even_coeffs;
  std::vector<double> p_odd_coeffs;

  double q(double t) const;       // p(t)^2
  double q_even(double t) const;  // (q(t) + q(-t)) / 2
  int gegenbauer_n() const { return domain.n; }
};

PerturbedKernel make_kernel(const DomainMeasure& domain, int d, int r);
// Kernel around a given density solution (ball: q degree 2r; simplex: q degree 4r).
PerturbedKernel kernel_from_density(const DomainMeasure& domain, const DensitySolution& sol);
// Kernel from the orthonormal coefficients of p alone.
PerturbedKernel kernel_from_square_root(const DomainMeasure& domain, int r, std::vector<double> v);
// Eigenvalue-only kernel (evaluated by component sums).
PerturbedKernel kernel_from_eigenvalues(const DomainMeasure& domain, int r,
                                        std::vector<double> eigenvalues);

// Degree-k component of the CD kernel, by the closed forms.
double cd_component(const DomainMeasure& domain, int k, std::span<const double> x,
                    std::span<const double> y);
// Components 0..kmax at once.
std::vector<double> cd_components(const DomainMeasure& domain, int kmax, std::span<const double> x,
                                  std::span<const double> y);

double kernel_eval(const PerturbedKernel& K, std::span<const double> x, std::span<const double> y);
// sum_k eigenvalue_k cd_component(k, x, y); the oracle for kernel_eval.
double kernel_eval_components(const PerturbedKernel& K, std::span<const double> x,
                              std::span<const double> y);

MultiPoly apply_operator(const PerturbedKernel& K, const MultiPoly& f);
MultiPoly apply_inverse(const PerturbedKernel& K, const MultiPoly& f);

// max |int C_r(x, .) p dmu - p(x)| over random p of degree <= r and random x.
double reproducing_check(const DomainMeasure& domain, int r, int trials, std::uint64_t seed = 1);

// max |cd_component(k, x, y) - sum_{deg P = k} P(x) P(y)| over k <= kmax and random
// pairs, with P the Gram-Schmidt basis. Ball and simplex only.
double closed_form_error(const DomainMeasure& domain, int kmax, int pairs, std::uint64_t seed = 1);

// Simplex and sphere helpers shared with certify.
std::vector<double> simplex_lift(std::span<const double> x);  // (x_1..x_n, 1 - |x|), clamped

}  // namespace possum
