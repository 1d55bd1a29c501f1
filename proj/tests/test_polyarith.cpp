#include <doctest.h>

#include <cmath>
#include <random>

#include "possum/orthopoly.hpp"
#include "possum/polyarith.hpp"

using namespace possum;

namespace {

MultiPoly random_poly(int nvars, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiPoly p(nvars);
  for (const auto& m : monomials_up_to(nvars, degree)) p.add_term(m, u(rng));
  return p;
}

double max_coeff_diff(const MultiPoly& a, const MultiPoly& b) {
  double worst = 0.0;
  for (const auto& [m, c] : a.terms()) worst = std::max(worst, std::abs(c - b.coefficient(m)));
  for (const auto& [m, c] : b.terms()) worst = std::max(worst, std::abs(c - a.coefficient(m)));
  return worst;
}

// h_even(u, v^2) + v h_odd(u, v^2) rebuilt term by term.
MultiPoly rejoin(const MultiPoly& even, const MultiPoly& odd, int var) {
  MultiPoly h(even.nvars());
  for (const auto& [m, c] : even.terms()) {
    Monomial k = m;
    k[var] = 2 * m[var];
    h.add_term(k, c);
  }
  for (const auto& [m, c] : odd.terms()) {
    Monomial k = m;
    k[var] = 2 * m[var] + 1;
    h.add_term(k, c);
  }
  return h;
}

}  // namespace

TEST_CASE("arith examples") {
  const auto x1 = MultiPoly::variable(2, 0), x2 = MultiPoly::variable(2, 1);
  const MultiPoly s = (x1 + x2) + (x1 - x2);
  CHECK(s.size() == 1);
  CHECK(s.coefficient({1, 0}) == 2.0);

  const MultiPoly one = MultiPoly::constant(3, 1.0);
  const MultiPoly g = one - coordinate_sum(3);
  const MultiPoly prod = g * one;
  CHECK(prod.size() == 4);
  CHECK(prod.coefficient({0, 0, 0}) == 1.0);
  for (int i = 0; i < 3; ++i) {
    Monomial m(3, 0);
    m[i] = 1;
    CHECK(prod.coefficient(m) == -1.0);
  }

  const auto x = MultiPoly::variable(1, 0);
  const auto c1 = MultiPoly::constant(1, 1.0);
  const MultiPoly dsq = (x + c1) * (x - c1);
  CHECK(dsq.size() == 2);
  CHECK(dsq.coefficient({2}) == 1.0);
  CHECK(dsq.coefficient({0}) == -1.0);
  CHECK(arith(x, c1, ArithOp::Sub).coefficient({0}) == -1.0);
  CHECK(scale(x, 3.0).coefficient({1}) == 3.0);
}

TEST_CASE("zero terms are pruned and degree of zero is -1") {
  MultiPoly p(2);
  p.add_term({1, 0}, 1.0);
  p.add_term({1, 0}, -1.0);
  CHECK(p.is_zero());
  CHECK(p.degree() == -1);
  MultiPoly q(1);
  q.add_term({3}, 1e-17);
  q.prune();
  CHECK(q.is_zero());
}

TEST_CASE("dimension mismatch and bad monomials throw") {
  CHECK_THROWS_AS(MultiPoly::variable(2, 0) + MultiPoly::variable(3, 0), DimensionMismatch);
  MultiPoly p(2);
  CHECK_THROWS_AS(p.add_term({1, 0, 0}, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(p.add_term({-1, 0}, 1.0), InvalidArgument);
  const std::vector<double> x{1.0};
  CHECK_THROWS_AS(p.evaluate<double>(x), DimensionMismatch);
}

TEST_CASE("evaluate examples") {
  const MultiPoly g = MultiPoly::constant(2, 1.0) - squared_norm(2);
  CHECK(g.evaluate<double>(std::vector<double>{0.0, 0.0}) == 1.0);
  const MultiPoly x1x2 = MultiPoly::variable(2, 0) * MultiPoly::variable(2, 1);
  CHECK(x1x2.evaluate<double>(std::vector<double>{2.0, 3.0}) == 6.0);

  // G_2^3(x . y) in six variables at x = y = e_1.
  MultiPoly dot(6);
  for (int i = 0; i < 3; ++i) {
    Monomial m(6, 0);
    m[i] = m[i + 3] = 1;
    dot.add_term(m, 1.0);
  }
  const MultiPoly lifted = compose(to_monomial({3, Normalization::C}, 2), dot);
  const std::vector<double> e1e1{1, 0, 0, 1, 0, 0};
  CHECK(lifted.evaluate<double>(e1e1) == doctest::Approx(gegenbauer_at_one(3, 2)).epsilon(1e-13));
  CHECK(lifted.evaluate<double>(e1e1) == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("even_odd_split examples") {
  const auto u = MultiPoly::variable(2, 0), v = MultiPoly::variable(2, 1);
  const auto [even, odd] = even_odd_split((u + v) * (u + v), 1);
  CHECK(max_coeff_diff(even, u * u + v) == 0.0);  // slot 1 now holds s = v^2
  CHECK(max_coeff_diff(odd, scale(u, 2.0)) == 0.0);

  const auto [e3, o3] = even_odd_split(v * v * v, 1);
  CHECK(e3.is_zero());
  CHECK(max_coeff_diff(o3, v) == 0.0);
}

TEST_CASE("even_odd_split round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const auto u = MultiPoly::variable(2, 0), v = MultiPoly::variable(2, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> pc(7);
    for (double& x : pc) x = c(rng);
    const MultiPoly h = compose(UniPoly(pc), u + v);
    const auto [even, odd] = even_odd_split(h, 1);
    CHECK(max_coeff_diff(rejoin(even, odd, 1), h) < 1e-12);
  }
  for (int t = 0; t < 10; ++t) {
    const MultiPoly h = random_poly(2, 20, rng);
    for (int var = 0; var < 2; ++var) {
      const auto [even, odd] = even_odd_split(h, var);
      CHECK(max_coeff_diff(rejoin(even, odd, var), h) < 1e-12);
    }
  }
}

TEST_CASE("arith algebra on random inputs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 3;
    const MultiPoly a = random_poly(n, 4, rng), b = random_poly(n, 3, rng), c = random_poly(n, 2, rng);
    CHECK(max_coeff_diff(a + b, b + a) < 1e-12);
    CHECK(max_coeff_diff(a * b, b * a) < 1e-12);
    CHECK(max_coeff_diff((a + b) + c, a + (b + c)) < 1e-12);
    CHECK(max_coeff_diff((a * b) * c, a * (b * c)) < 1e-12);
    CHECK(max_coeff_diff(a * (b + c), a * b + a * c) < 1e-12);
    Point x(n);
    for (double& xi : x) xi = u(rng);
    const double ab = a.evaluate<double>(x) * b.evaluate<double>(x);
    CHECK(std::abs((a * b).evaluate<double>(x) - ab) <= 1e-10 * std::max(1.0, std::abs(ab)));
  }
}

TEST_CASE("compose and substitute agree with evaluation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MultiPoly h = random_poly(2, 5, rng);
  const MultiPoly a = random_poly(3, 1, rng), b = random_poly(3, 2, rng);
  const MultiPoly hs = substitute(h, {a, b});
  const UniPoly q({0.5, -1.0, 0.25, 2.0});
  const MultiPoly qa = compose(q, a);
  for (int t = 0; t < 10; ++t) {
    Point x{u(rng), u(rng), u(rng)};
    const Point ab{a.evaluate<double>(x), b.evaluate<double>(x)};
    CHECK(hs.evaluate<double>(x) == doctest::Approx(h.evaluate<double>(ab)).epsilon(1e-12));
    CHECK(qa.evaluate<double>(x) == doctest::Approx(q(ab[0])).epsilon(1e-12));
  }
}

TEST_CASE("monomial enumeration") {
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 6; ++d) {
      const auto all = monomials_up_to(n, d);
      double expect = 1;
      for (int i = 1; i <= n; ++i) expect = expect * (d + i) / i;
      CHECK(all.size() == static_cast<std::size_t>(std::lround(expect)));
      for (std::size_t i = 1; i < all.size(); ++i) CHECK(graded_less(all[i - 1], all[i]));
    }
  const auto d2 = monomials_of_degree(2, 2);
  REQUIRE(d2.size() == 3);
  CHECK(d2[0] == Monomial{2, 0});
  CHECK(d2[2] == Monomial{0, 2});
}

TEST_CASE("sup_norm_estimate examples") {
  CHECK(sup_norm_estimate(MultiPoly::constant(2, 1.0), DomainMeasure::ball(2), 100) == 1.0);
  CHECK(sup_norm_estimate(MultiPoly::variable(1, 0), DomainMeasure::simplex(1), 10) == 1.0);
  CHECK(sup_norm_estimate(squared_norm(2), DomainMeasure::ball(2), 10000) >= 0.999);
  // A lower estimate: never above the true maximum 1 of |x1 x2| * 4 on the simplex.
  const MultiPoly p = scale(MultiPoly::variable(2, 0) * MultiPoly::variable(2, 1), 4.0);
  CHECK(sup_norm_estimate(p, DomainMeasure::simplex(2), 2000) <= 0.25 * 4.0 + 1e-15);
}

TEST_CASE("sample_minimum finds known minimizers") {
  const auto [x, v] = sample_minimum(MultiPoly::variable(2, 0), DomainMeasure::ball(2), 2000);
  CHECK(v == doctest::Approx(-1.0).epsilon(1e-6));
  const MultiPoly f = MultiPoly::variable(2, 0) * MultiPoly::variable(2, 0) - MultiPoly::variable(2, 1);
  CHECK(sample_minimum(f, DomainMeasure::ball(2), 4000).second == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("json round trip is exact") {
  std::mt19937_64 rng(9);
  const MultiPoly p = random_poly(3, 4, rng);
  const MultiPoly q = poly_from_json(nlohmann::json::parse(poly_to_json(p).dump()));
  CHECK(q.nvars() == 3);
  CHECK(max_coeff_diff(p, q) == 0.0);
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::parse(R"({"nvars": 2, "terms": [{"exp": [1], "c": 1}]})")),
                  ParseError);
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::parse(R"({"terms": []})")), ParseError);
  CHECK_THROWS_AS(read_poly_file("/nonexistent/poly.json"), ParseError);
}
