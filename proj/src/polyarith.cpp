#include "possum/polyarith.hpp"

#include <cmath>
#include <fstream>
#include <functional>

namespace possum {

bool graded_less(const Monomial& a, const Monomial& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a > b;
}

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  Monomial m(nvars, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == nvars - 1) {
      m[i] = left;
      out.push_back(m);
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[i] = e;
      rec(i + 1, left - e);
    }
  };
  if (nvars >= 1 && degree >= 0) rec(0, degree);
  return out;
}

std::vector<Monomial> monomials_up_to(int nvars, int degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= degree; ++d) {
    auto part = monomials_of_degree(nvars, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

double sup_norm_estimate(const MultiPoly& p, const DomainMeasure& domain, int samples) {
  if (samples < 1) throw InvalidArgument("samples must be positive");
  if (p.nvars() != domain.nvars()) throw DimensionMismatch("polynomial and domain dimension differ");
  double best = 0.0;
  for (const Point& x : domain_samples(domain, samples))
    best = std::max(best, std::abs(p.evaluate<double>(x)));
  return best;
}

void project_into(const DomainMeasure& domain, Point& x) {
  if (domain.kind == DomainKind::Ball || domain.kind == DomainKind::Sphere) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    if (domain.kind == DomainKind::Sphere ? sq > 0 : sq > 1.0)
      for (double& v : x) v /= std::sqrt(sq);
  } else {
    double s = 0.0;
    for (double& v : x) {
      v = std::max(v, 0.0);
      s += v;
    }
    if (s > 1.0)
      for (double& v : x) v /= s;
  }
}

std::pair<Point, double> sample_minimum(const MultiPoly& p, const DomainMeasure& domain, int samples) {
  if (p.nvars() != domain.nvars()) throw DimensionMismatch("polynomial and domain dimension differ");
  Point best;
  double best_val = 0.0;
  for (const Point& x : domain_samples(domain, samples)) {
    const double v = p.evaluate<double>(x);
    if (best.empty() || v < best_val) {
      best = x;
      best_val = v;
    }
  }
  for (double step = 0.1; step > 1e-12; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < domain.n; ++i)
        for (double sgn : {1.0, -1.0}) {
          Point x = best;
          x[i] += sgn * step;
          project_into(domain, x);
          const double v = p.evaluate<double>(x);
          if (v < best_val) {
            best = x;
            best_val = v;
            improved = true;
          }
        }
    }
  }
  return {best, best_val};
}

nlohmann::json poly_to_json(const MultiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"exp", m}, {"c", c}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

MultiPoly poly_from_json(const nlohmann::json& j) {
  try {
    const int nvars = j.at("nvars").get<int>();
    MultiPoly p(nvars);
    for (const auto& t : j.at("terms")) {
      auto m = t.at("exp").get<Monomial>();
      if (static_cast<int>(m.size()) != nvars)
        throw ParseError("term exponent length differs from nvars");
      p.add_term(m, t.at("c").get<double>());
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad polynomial JSON: ") + e.what());
  }
}

MultiPoly read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return poly_from_json(j);
}

MultiPoly squared_norm(int nvars) {
  MultiPoly p(nvars);
  for (int i = 0; i < nvars; ++i) {
    Monomial m(nvars, 0);
    m[i] = 2;
    p.add_term(m, 1.0);
  }
  return p;
}

MultiPoly coordinate_sum(int nvars) {
  MultiPoly p(nvars);
  for (int i = 0; i < nvars; ++i) p = p + MultiPoly::variable(nvars, i);
  return p;
}

}  // namespace possum
