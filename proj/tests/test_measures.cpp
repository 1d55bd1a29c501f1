#include <doctest.h>

#include <cmath>
#include <random>

#include "possum/measures.hpp"

using namespace possum;

namespace {

// Gamma-function moment formulas, evaluated independently of the library.
double moment_oracle(const DomainMeasure& dom, const Monomial& a) {
  int total = 0;
  for (int e : a) total += e;
  double prod = 1.0;
  switch (dom.kind) {
    case DomainKind::Ball:
    case DomainKind::Sphere: {
      for (int e : a) {
        if (e % 2) return 0.0;
        prod *= std::tgamma((e + 1) / 2.0) / std::tgamma(0.5);
      }
      // Ball(n) is the projection of the uniform measure on the sphere in R^{n+1}.
      const double dim = dom.kind == DomainKind::Ball ? dom.n + 1 : dom.n;
      return prod * std::tgamma(dim / 2.0) / std::tgamma((dim + total) / 2.0);
    }
    case DomainKind::Simplex:
      for (int e : a) prod *= std::tgamma(e + 0.5) / std::tgamma(0.5);
      return prod * std::tgamma((dom.n + 1) / 2.0) / std::tgamma((dom.n + 1) / 2.0 + total);
  }
  return 0.0;
}

void check_moments(const DomainMeasure& dom, int degree) {
  for (const auto& a : monomials_up_to(dom.n, degree)) {
    const double expect = moment_oracle(dom, a);
    CHECK(std::abs(monomial_moment(dom, a) - expect) <= 1e-12 * std::max(expect, 1e-300) + 1e-300);
  }
}

MultiPoly random_poly(int nvars, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiPoly p(nvars);
  for (const auto& m : monomials_up_to(nvars, degree)) p.add_term(m, u(rng));
  return p;
}

}  // namespace

TEST_CASE("moments") {
  for (auto dom : {DomainMeasure::ball(1), DomainMeasure::ball(3), DomainMeasure::simplex(2), DomainMeasure::sphere(3)})
    CHECK(monomial_moment(dom, Monomial(dom.n, 0)) == 1.0);
  CHECK(monomial_moment(DomainMeasure::ball(1), {2}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(monomial_moment(DomainMeasure::simplex(1), {1}) ==
        doctest::Approx(std::beta(1.5, 0.5) / std::beta(0.5, 0.5)).epsilon(1e-14));
  CHECK(monomial_moment(DomainMeasure::simplex(1), {1}) == doctest::Approx(0.5).epsilon(1e-15));
  for (int n = 1; n <= 4; ++n) {
    check_moments(DomainMeasure::ball(n), 14);
    check_moments(DomainMeasure::simplex(n), 10);
    if (n >= 2) check_moments(DomainMeasure::sphere(n), 14);
  }
}

TEST_CASE("inner products") {
  const auto one2 = MultiPoly::constant(2, 1.0);
  CHECK(inner_product(one2, one2, DomainMeasure::ball(2)) == doctest::Approx(1.0));
  CHECK(inner_product(MultiPoly::variable(2, 0), MultiPoly::variable(2, 1), DomainMeasure::ball(2)) == 0.0);
  CHECK(inner_product(MultiPoly::variable(2, 0), one2, DomainMeasure::simplex(2)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(inner_product(one2, MultiPoly::constant(3, 1.0), DomainMeasure::ball(2)), DimensionMismatch);
}

TEST_CASE("orthonormal basis examples") {
  const auto& b0 = orthonormal_basis(DomainMeasure::ball(2), 0);
  REQUIRE(b0.basis.size() == 1);
  CHECK(b0.basis[0].coefficient({0, 0}) == doctest::Approx(1.0));

  const auto& b1 = orthonormal_basis(DomainMeasure::ball(2), 1);
  REQUIRE(b1.basis.size() == 3);
  const double m = monomial_moment(DomainMeasure::ball(2), {2, 0});
  CHECK(b1.basis[1].size() == 1);
  CHECK(b1.basis[1].coefficient({1, 0}) == doctest::Approx(1 / std::sqrt(m)).epsilon(1e-13));
  CHECK(b1.basis[2].size() == 1);
  CHECK(b1.basis[2].coefficient({0, 1}) == doctest::Approx(1 / std::sqrt(m)).epsilon(1e-13));

  CHECK_THROWS_AS(orthonormal_basis(DomainMeasure::sphere(3), 2), InvalidArgument);
}

TEST_CASE("orthonormal basis Gram matrix is the identity") {
  for (auto [dom, deg] : {std::pair{DomainMeasure::ball(2), 10}, std::pair{DomainMeasure::simplex(2), 8},
                          std::pair{DomainMeasure::ball(3), 6}, std::pair{DomainMeasure::simplex(3), 5},
                          std::pair{DomainMeasure::ball(1), 12}}) {
    const auto& B = orthonormal_basis(dom, deg);
    for (std::size_t i = 0; i < B.basis.size(); ++i) {
      CHECK(B.basis[i].degree() == B.degrees[i]);
      CHECK(B.degrees[i] == total_degree(B.monomials[i]));
      for (std::size_t j = 0; j <= i; ++j)
        CHECK(std::abs(inner_product(B.basis[i], B.basis[j], dom) - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("orthonormal basis fails loudly past the conditioning limit") {
  CHECK_THROWS_AS(orthonormal_basis(DomainMeasure::simplex(2), 40), ConditioningFailure);
}

TEST_CASE("project_components examples") {
  const auto one = project_components(MultiPoly::constant(2, 1.0), DomainMeasure::ball(2));
  REQUIRE(one.size() == 1);
  CHECK(one[0].coefficient({0, 0}) == doctest::Approx(1.0));

  const auto lin = project_components(MultiPoly::variable(3, 0), DomainMeasure::ball(3));
  REQUIRE(lin.size() == 2);
  CHECK(lin[0].is_zero());
  CHECK(lin[1].size() == 1);
  CHECK(lin[1].coefficient({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));

  const DomainMeasure b2 = DomainMeasure::ball(2);
  const auto sq = project_components(squared_norm(2), b2);
  REQUIRE(sq.size() == 3);
  const double f0 = monomial_moment(b2, {2, 0}) + monomial_moment(b2, {0, 2});
  CHECK(sq[0].coefficient({0, 0}) == doctest::Approx(f0).epsilon(1e-12));
  CHECK(sq[1].is_zero());
  const MultiPoly f2 = squared_norm(2) - MultiPoly::constant(2, f0);
  for (const auto& [m, c] : f2.terms()) CHECK(sq[2].coefficient(m) == doctest::Approx(c).epsilon(1e-10));
}

TEST_CASE("project_components is an orthogonal decomposition") {
  std::mt19937_64 rng(4);
  for (auto dom : {DomainMeasure::ball(2), DomainMeasure::simplex(2), DomainMeasure::ball(3), DomainMeasure::simplex(3)}) {
    for (int t = 0; t < 5; ++t) {
      const MultiPoly f = random_poly(dom.n, 4, rng);
      const auto parts = project_components(f, dom);
      MultiPoly sum(dom.n);
      for (const auto& p : parts) sum = sum + p;
      for (const auto& [m, c] : f.terms()) CHECK(std::abs(sum.coefficient(m) - c) < 1e-8);
      for (std::size_t j = 0; j < parts.size(); ++j) {
        CHECK(parts[j].degree() <= static_cast<int>(j));
        const double nj = std::sqrt(inner_product(parts[j], parts[j], dom));
        for (std::size_t k = 0; k < j; ++k) {
          const double nk = std::sqrt(inner_product(parts[k], parts[k], dom));
          CHECK(std::abs(inner_product(parts[j], parts[k], dom)) <= 1e-8 * std::max(nj * nk, 1e-12));
        }
        // Orthogonal to every polynomial of lower degree.
        if (j >= 1) {
          const MultiPoly low = random_poly(dom.n, static_cast<int>(j) - 1, rng);
          CHECK(std::abs(inner_product(parts[j], low, dom)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("cubature reproduces moments") {
  const std::vector<std::pair<DomainMeasure, int>> cases{
      {DomainMeasure::ball(2), 6},    {DomainMeasure::simplex(2), 8}, {DomainMeasure::ball(1), 11},
      {DomainMeasure::simplex(1), 9}, {DomainMeasure::ball(3), 9},    {DomainMeasure::simplex(3), 6},
      {DomainMeasure::sphere(2), 10}, {DomainMeasure::sphere(3), 9},  {DomainMeasure::sphere(4), 7},
      {DomainMeasure::ball(2), 0}};
  for (const auto& [dom, deg] : cases) {
    CAPTURE(dom.name());
    CAPTURE(deg);
    const CubatureRule& rule = cubature(dom, deg);
    CHECK(rule.exact_degree >= deg);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(rule.weights[i] > 0.0);
      s += rule.weights[i];
      if (dom.kind == DomainKind::Sphere) {
        double nrm = 0;
        for (double v : rule.points[i]) nrm += v * v;
        CHECK(nrm == doctest::Approx(1.0).epsilon(1e-13));
      } else {
        CHECK(contains(dom, rule.points[i]));
      }
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& a : monomials_up_to(dom.n, deg)) {
      double got = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        double term = rule.weights[i];
        for (int j = 0; j < dom.n; ++j) term *= std::pow(rule.points[i][j], a[j]);
        got += term;
      }
      const double expect = moment_oracle(dom, a);
      CHECK(std::abs(got - expect) <= 1e-10 * std::max(expect, 1e-2));
    }
  }
}

TEST_CASE("cubature json round trip") {
  const CubatureRule& rule = cubature(DomainMeasure::simplex(2), 4);
  const CubatureRule back = cubature_from_json(nlohmann::json::parse(cubature_to_json(rule).dump()));
  CHECK(back.exact_degree == rule.exact_degree);
  REQUIRE(back.size() == rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    CHECK(back.weights[i] == rule.weights[i]);
    CHECK(back.points[i] == rule.points[i]);
  }
  CHECK_THROWS_AS(cubature_from_json(nlohmann::json::parse(R"({"points": [[0]], "weights": []})")), ParseError);
}
