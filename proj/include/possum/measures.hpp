#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "possum/domain.hpp"
#include "possum/polyarith.hpp"

namespace possum {

long double monomial_moment_ld(const DomainMeasure& domain, const Monomial& alpha);
double monomial_moment(const DomainMeasure& domain, const Monomial& alpha);

double inner_product(const MultiPoly& p, const MultiPoly& q, const DomainMeasure& domain);

struct OrthonormalBasis {
  DomainMeasure domain;
  int degree = 0;
  std::vector<Monomial> monomials;  // graded-lex, the Gram-Schmidt input order
  std::vector<int> degrees;         // exact degree of basis[i]
  std::vector<MultiPoly> basis;
  // basis[i] = sum_j coeffs[i][j] x^monomials[j], lower triangular, long double.
  std::vector<std::vector<long double>> coeffs;

  // Indices of the basis elements of exact degree k.
  std::vector<int> component(int k) const;
};

inline constexpr double kCholeskyPivotThreshold = 1e-10;

// Cached per (domain, degree); the reference stays valid for the program lifetime.
const OrthonormalBasis& orthonormal_basis(const DomainMeasure& domain, int degree);

// (f_0, ..., f_d) with f_k in H_k and sum f_k = f.
std::vector<MultiPoly> project_components(const MultiPoly& f, const DomainMeasure& domain);

struct CubatureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return points.size(); }
};

// Positive rule exact to exact_degree, obtained from a product rule on a sphere.
// Cached per (domain, degree).
const CubatureRule& cubature(const DomainMeasure& domain, int exact_degree);

nlohmann::json cubature_to_json(const CubatureRule& rule);
CubatureRule cubature_from_json(const nlohmann::json& j);

}  // namespace possum
