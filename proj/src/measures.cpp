#include "possum/measures.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "possum/orthopoly.hpp"

namespace possum {

namespace {

// prod_{j<m} (j + 1/2) = Gamma(m + 1/2) / Gamma(1/2).
long double half_rising(int m) {
  long double v = 1.0L;
  for (int j = 0; j < m; ++j) v *= j + 0.5L;
  return v;
}

// prod_{j<m} (a + j) = Gamma(a + m) / Gamma(a).
long double rising(long double a, int m) {
  long double v = 1.0L;
  for (int j = 0; j < m; ++j) v *= a + j;
  return v;
}

// Uniform measure on the unit sphere of R^d.
long double sphere_moment(int d, const Monomial& alpha) {
  int half_total = 0;
  long double num = 1.0L;
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0L;
    num *= half_rising(a / 2);
    half_total += a / 2;
  }
  return num / rising(d / 2.0L, half_total);
}

void check_alpha(const DomainMeasure& domain, const Monomial& alpha) {
  if (static_cast<int>(alpha.size()) != domain.nvars())
    throw DimensionMismatch("exponent length does not match the domain dimension");
  for (int a : alpha)
    if (a < 0) throw InvalidArgument("negative exponent");
}

using DomainKey = std::tuple<int, int, int>;
DomainKey key_of(const DomainMeasure& d, int degree) {
  return {static_cast<int>(d.kind), d.n, degree};
}

// Product rule on the unit sphere of R^dim, exact to the given degree, with
// exact sign symmetry in every coordinate.
void sphere_rule(int dim, int degree, std::vector<Point>& pts, std::vector<double>& wts) {
  pts.clear();
  wts.clear();
  if (dim == 2) {
    int m = degree + 1;
    m = ((m + 3) / 4) * 4;
    const int q = m / 4;
    std::vector<std::pair<double, double>> first;
    for (int j = 0; j < q; ++j) {
      const double th = 2.0 * std::numbers::pi * (j + 0.5) / m;
      first.emplace_back(std::cos(th), std::sin(th));
    }
    // Angles 2pi(j+1/2)/m are closed under both axis reflections, so the
    // full circle is the first quadrant with all sign patterns.
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0})
        for (const auto& [c, s] : first) {
          pts.push_back({sx * c, sy * s});
          wts.push_back(1.0 / m);
        }
    return;
  }
  std::vector<Point> sub;
  std::vector<double> subw;
  sphere_rule(dim - 1, degree, sub, subw);
  const int m = (degree + 2) / 2;
  const QuadratureRule gq = gauss_quadrature(dim - 1, m);
  for (int i = 0; i < m; ++i) {
    const double t = gq.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < sub.size(); ++j) {
      Point p(dim);
      p[0] = t;
      for (int c = 1; c < dim; ++c) p[c] = s * sub[j][c - 1];
      pts.push_back(std::move(p));
      wts.push_back(gq.weights[i] * subw[j]);
    }
  }
}

CubatureRule build_cubature(const DomainMeasure& domain, int degree) {
  std::vector<Point> pts;
  std::vector<double> wts;
  const int n = domain.n;
  switch (domain.kind) {
    case DomainKind::Sphere: sphere_rule(n, degree, pts, wts); break;
    case DomainKind::Ball: sphere_rule(n + 1, degree, pts, wts); break;
    case DomainKind::Simplex: sphere_rule(n + 1, 2 * degree, pts, wts); break;
  }
  std::map<Point, double> merged;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point x;
    switch (domain.kind) {
      case DomainKind::Sphere: x = pts[i]; break;
      case DomainKind::Ball: x.assign(pts[i].begin(), pts[i].begin() + n); break;
      case DomainKind::Simplex:
        x.resize(n);
        for (int c = 0; c < n; ++c) x[c] = pts[i][c] * pts[i][c];
        break;
    }
    for (double& v : x)
      if (v == 0.0) v = 0.0;  // fold -0 into +0 so the keys merge
    merged[x] += wts[i];
  }
  CubatureRule rule;
  rule.exact_degree = degree;
  double total = 0.0;
  for (const auto& [x, w] : merged) total += w;
  for (const auto& [x, w] : merged) {
    rule.points.push_back(x);
    rule.weights.push_back(w / total);
  }
  return rule;
}

}  // namespace

long double monomial_moment_ld(const DomainMeasure& domain, const Monomial& alpha) {
  check_alpha(domain, alpha);
  switch (domain.kind) {
    case DomainKind::Sphere: return sphere_moment(domain.n, alpha);
    case DomainKind::Ball: {
      Monomial padded = alpha;
      padded.push_back(0);
      return sphere_moment(domain.n + 1, padded);
    }
    case DomainKind::Simplex: {
      long double num = 1.0L;
      int total = 0;
      for (int a : alpha) {
        num *= half_rising(a);
        total += a;
      }
      return num / rising((domain.n + 1) / 2.0L, total);
    }
  }
  return 0.0L;
}

double monomial_moment(const DomainMeasure& domain, const Monomial& alpha) {
  return static_cast<double>(monomial_moment_ld(domain, alpha));
}

double inner_product(const MultiPoly& p, const MultiPoly& q, const DomainMeasure& domain) {
  require_same_nvars(p, q);
  if (p.nvars() != domain.nvars()) throw DimensionMismatch("polynomial and domain dimension differ");
  long double s = 0.0L;
  Monomial m(p.nvars());
  for (const auto& [a, ca] : p.terms())
    for (const auto& [b, cb] : q.terms()) {
      for (int i = 0; i < p.nvars(); ++i) m[i] = a[i] + b[i];
      s += static_cast<long double>(ca) * cb * monomial_moment_ld(domain, m);
    }
  return static_cast<double>(s);
}

std::vector<int> OrthonormalBasis::component(int k) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] == k) idx.push_back(static_cast<int>(i));
  return idx;
}

const OrthonormalBasis& orthonormal_basis(const DomainMeasure& domain, int degree) {
  static std::mutex mu;
  static std::map<DomainKey, std::unique_ptr<OrthonormalBasis>> cache;
  if (degree < 0) throw InvalidArgument("degree must be >= 0");
  if (domain.kind == DomainKind::Sphere)
    throw InvalidArgument("monomials are linearly dependent on the sphere; no orthonormal basis is built");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key_of(domain, degree)];
  if (slot) return *slot;

  auto b = std::make_unique<OrthonormalBasis>();
  b->domain = domain;
  b->degree = degree;
  b->monomials = monomials_up_to(domain.n, degree);
  const int size = static_cast<int>(b->monomials.size());
  for (const auto& m : b->monomials) b->degrees.push_back(total_degree(m));

  std::vector<std::vector<long double>> gram(size, std::vector<long double>(size));
  Monomial sum(domain.n);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j <= i; ++j) {
      for (int c = 0; c < domain.n; ++c) sum[c] = b->monomials[i][c] + b->monomials[j][c];
      gram[i][j] = gram[j][i] = monomial_moment_ld(domain, sum);
    }
  std::vector<std::vector<long double>> L(size, std::vector<long double>(size, 0.0L));
  for (int j = 0; j < size; ++j) {
    long double d = gram[j][j];
    for (int k = 0; k < j; ++k) d -= L[j][k] * L[j][k];
    const long double pivot = d > 0 ? std::sqrt(d) : 0.0L;
    if (pivot < kCholeskyPivotThreshold)
      throw ConditioningFailure("moment matrix pivot " + std::to_string(static_cast<double>(pivot)) +
                                " below threshold at degree " + std::to_string(b->degrees[j]));
    L[j][j] = pivot;
    for (int i = j + 1; i < size; ++i) {
      long double s = gram[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      L[i][j] = s / pivot;
    }
  }
  // C = L^{-1}, lower triangular.
  b->coeffs.assign(size, std::vector<long double>(size, 0.0L));
  for (int i = 0; i < size; ++i) {
    b->coeffs[i][i] = 1.0L / L[i][i];
    for (int j = 0; j < i; ++j) {
      long double s = 0.0L;
      for (int k = j; k < i; ++k) s += L[i][k] * b->coeffs[k][j];
      b->coeffs[i][j] = -s / L[i][i];
    }
  }
  for (int i = 0; i < size; ++i) {
    MultiPoly p(domain.n);
    for (int j = 0; j <= i; ++j) p.add_term(b->monomials[j], static_cast<double>(b->coeffs[i][j]));
    b->basis.push_back(std::move(p));
  }
  slot = std::move(b);
  return *slot;
}

std::vector<MultiPoly> project_components(const MultiPoly& f, const DomainMeasure& domain) {
  if (f.nvars() != domain.nvars()) throw DimensionMismatch("polynomial and domain dimension differ");
  const int d = std::max(f.degree(), 0);
  const OrthonormalBasis& B = orthonormal_basis(domain, d);
  const int size = static_cast<int>(B.monomials.size());
  // <f, x^m_j> for every basis monomial.
  std::vector<long double> fm(size, 0.0L);
  Monomial sum(domain.n);
  for (int j = 0; j < size; ++j)
    for (const auto& [beta, c] : f.terms()) {
      for (int i = 0; i < domain.n; ++i) sum[i] = beta[i] + B.monomials[j][i];
      fm[j] += static_cast<long double>(c) * monomial_moment_ld(domain, sum);
    }
  std::vector<std::vector<long double>> comp(d + 1, std::vector<long double>(size, 0.0L));
  for (int i = 0; i < size; ++i) {
    long double ci = 0.0L;
    for (int j = 0; j <= i; ++j) ci += B.coeffs[i][j] * fm[j];
    for (int j = 0; j <= i; ++j) comp[B.degrees[i]][j] += ci * B.coeffs[i][j];
  }
  std::vector<MultiPoly> out;
  for (int k = 0; k <= d; ++k) {
    MultiPoly p(domain.n);
    for (int j = 0; j < size; ++j) p.add_term(B.monomials[j], static_cast<double>(comp[k][j]));
    out.push_back(p.prune());
  }
  return out;
}

const CubatureRule& cubature(const DomainMeasure& domain, int exact_degree) {
  static std::mutex mu;
  static std::map<DomainKey, std::unique_ptr<CubatureRule>> cache;
  if (exact_degree < 0) throw InvalidArgument("exact_degree must be >= 0");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key_of(domain, exact_degree)];
  if (!slot) slot = std::make_unique<CubatureRule>(build_cubature(domain, exact_degree));
  return *slot;
}

nlohmann::json cubature_to_json(const CubatureRule& rule) {
  return {{"points", rule.points}, {"weights", rule.weights}, {"exact_degree", rule.exact_degree}};
}

CubatureRule cubature_from_json(const nlohmann::json& j) {
  try {
    CubatureRule rule;
    rule.points = j.at("points").get<std::vector<Point>>();
    rule.weights = j.at("weights").get<std::vector<double>>();
    rule.exact_degree = j.at("exact_degree").get<int>();
    if (rule.points.size() != rule.weights.size())
      throw ParseError("cubature points and weights differ in length");
    for (double w : rule.weights)
      if (!(w > 0)) throw ParseError("cubature weights must be positive");
    return rule;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad cubature JSON: ") + e.what());
  }
}

}  // namespace possum
