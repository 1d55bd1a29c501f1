#include "possum/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "possum/errors.hpp"

namespace possum {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

void require_dim(int n) {
  if (n < 1) throw InvalidArgument("domain dimension must be positive");
}

}  // namespace

DomainMeasure DomainMeasure::ball(int n) {
  require_dim(n);
  return {DomainKind::Ball, n};
}

DomainMeasure DomainMeasure::simplex(int n) {
  require_dim(n);
  return {DomainKind::Simplex, n};
}

DomainMeasure DomainMeasure::sphere(int n) {
  if (n < 2) throw InvalidArgument("sphere needs ambient dimension >= 2");
  return {DomainKind::Sphere, n};
}

std::string DomainMeasure::name() const {
  switch (kind) {
    case DomainKind::Ball: return "ball";
    case DomainKind::Simplex: return "simplex";
    case DomainKind::Sphere: return "sphere";
  }
  return "?";
}

DomainMeasure parse_domain(std::string_view name, int n) {
  if (name == "ball") return DomainMeasure::ball(n);
  if (name == "simplex") return DomainMeasure::simplex(n);
  if (name == "sphere") return DomainMeasure::sphere(n);
  throw InvalidArgument("unknown domain '" + std::string(name) + "'");
}

bool contains(const DomainMeasure& domain, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != domain.n) return false;
  double sq = 0.0, sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
    sq += v * v;
    sum += v;
  }
  switch (domain.kind) {
    case DomainKind::Ball: return std::sqrt(sq) <= 1.0 + tol;
    case DomainKind::Sphere: return std::abs(std::sqrt(sq) - 1.0) <= tol;
    case DomainKind::Simplex:
      for (double v : x)
        if (v < -tol) return false;
      return sum <= 1.0 + tol;
  }
  return false;
}

void require_inside(const DomainMeasure& domain, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != domain.n)
    throw DimensionMismatch("point has dimension " + std::to_string(x.size()) + ", domain " +
                            std::to_string(domain.n));
  if (!contains(domain, x, tol)) throw OutsideDomain("point lies outside the " + domain.name());
}

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::vector<Point> domain_samples(const DomainMeasure& domain, int count) {
  const int n = domain.n;
  if (n > static_cast<int>(std::size(kPrimes))) throw InvalidArgument("dimension too large for sampling");
  std::vector<Point> out;
  if (domain.kind == DomainKind::Ball) {
    out.push_back(Point(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (double s : {1.0, -1.0}) {
        Point p(n, 0.0);
        p[i] = s;
        out.push_back(p);
      }
    // Cube points pushed radially onto the sphere when they fall outside: this
    // puts a share of the sample on the boundary, where extrema usually sit.
    for (int k = 1; static_cast<int>(out.size()) < count; ++k) {
      Point p(n);
      double sq = 0.0;
      for (int i = 0; i < n; ++i) {
        p[i] = 2.0 * radical_inverse(k, kPrimes[i]) - 1.0;
        sq += p[i] * p[i];
      }
      if (sq > 1.0)
        for (double& v : p) v /= std::sqrt(sq);
      out.push_back(p);
    }
  } else if (domain.kind == DomainKind::Simplex) {
    out.push_back(Point(n, 0.0));
    for (int i = 0; i < n; ++i) {
      Point p(n, 0.0);
      p[i] = 1.0;
      out.push_back(p);
    }
    out.push_back(Point(n, 1.0 / (n + 1)));
    for (int k = 1; static_cast<int>(out.size()) < count; ++k) {
      // Sorted uniforms give uniform spacings on the simplex.
      std::vector<double> u(n);
      for (int i = 0; i < n; ++i) u[i] = radical_inverse(k, kPrimes[i]);
      std::sort(u.begin(), u.end());
      Point p(n);
      double prev = 0.0;
      for (int i = 0; i < n; ++i) {
        p[i] = u[i] - prev;
        prev = u[i];
      }
      out.push_back(p);
      if (k % 3 == 1) {
        // Facet 1-|x| = 0.
        Point q = p;
        const double s = std::accumulate(q.begin(), q.end(), 0.0);
        if (s > 0)
          for (double& v : q) v /= s;
        out.push_back(q);
      } else if (k % 3 == 2) {
        // Facet x_i = 0 for the smallest coordinate.
        Point q = p;
        *std::min_element(q.begin(), q.end()) = 0.0;
        out.push_back(q);
      }
    }
  } else {
    throw InvalidArgument("sampling supports ball and simplex only");
  }
  if (static_cast<int>(out.size()) > count && count >= 1) out.resize(std::max<std::size_t>(count, 1));
  return out;
}

Point random_point(const DomainMeasure& domain, std::mt19937_64& rng) {
  const int n = domain.n;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Point p(n);
  switch (domain.kind) {
    case DomainKind::Sphere:
    case DomainKind::Ball: {
      double sq = 0.0;
      do {
        sq = 0.0;
        for (double& v : p) {
          v = gauss(rng);
          sq += v * v;
        }
      } while (sq < 1e-300);
      const double radius = domain.kind == DomainKind::Ball ? std::pow(unif(rng), 1.0 / n) : 1.0;
      for (double& v : p) v *= radius / std::sqrt(sq);
      break;
    }
    case DomainKind::Simplex: {
      std::exponential_distribution<double> ex(1.0);
      double total = 0.0;
      std::vector<double> e(n + 1);
      for (double& v : e) {
        v = ex(rng);
        total += v;
      }
      for (int i = 0; i < n; ++i) p[i] = e[i] / total;
      break;
    }
  }
  return p;
}

}  // namespace possum
