#pragma once

#include <vector>

#include "possum/polyarith.hpp"

namespace possum {

struct DensitySolution {
  int n = 2;
  int d = 1;
  int r = 1;
  std::vector<double> v;       // p = sum v_k Ghat_k, |v| = 1
  UniPoly p;                   // monomial form of p
  std::vector<double> lambda;  // lambda_0 .. lambda_2r of q = p^2
  double objective = 0.0;      // int h q w_n
};

// h = d - sum_{k=1}^d Gtilde_k.
UniPoly linearized_objective(int n, int d);
double linearized_objective_value(int n, int d, double x);

DensitySolution solve_density(int n, int d, int r);

// p = sum v_k Ghat_k given; fills p and lambda (d = 0, objective unset). n >= 1.
DensitySolution density_from_square_root(int n, std::vector<double> v);

// Solution with prescribed lambda (no square root); used for synthetic kernels.
DensitySolution synthetic_density(int n, int r, std::vector<double> lambda);

struct EigenGapReport {
  double sum_inv_gap = 0.0;  // sum_{k<=d} |1 - 1/lambda_k|
  double sum_gap = 0.0;      // sum_{k<=d} (1 - lambda_k)
  double gap_bound = 0.0;    // (n+1)^2 d^2 / r^2
  bool gap_ok = true;
  bool inv_gap_ok = true;    // sum_inv_gap <= 2 sum_gap + 1e-10
  bool inverse_bound_applicable = false;  // r >= 2(n+1)d
  bool inverse_bound_ok = true;     // sum_inv_gap <= 2 (n+1)^2 d^2 / r^2 when applicable
  bool ok = true;
};

// Throws LambdaTooSmall when lambda_k < 1/2 for some 1 <= k <= d.
EigenGapReport check_eigen_gaps(const DensitySolution& sol, int d);

}  // namespace possum
