#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace possum {

using Point = std::vector<double>;

enum class DomainKind { Ball, Simplex, Sphere };

// Ball(n): unit ball in R^n with the probability measure c_n (1-|x|^2)^{-1/2} dx.
// Simplex(n): {x >= 0, sum x <= 1} with density prop. to prod x_i^{-1/2} (1-|x|)^{-1/2}.
// Sphere(n): unit sphere S^{n-1} in R^n with normalized surface measure.
struct DomainMeasure {
  DomainKind kind = DomainKind::Ball;
  int n = 1;

  static DomainMeasure ball(int n);
  static DomainMeasure simplex(int n);
  static DomainMeasure sphere(int n);

  int nvars() const { return n; }
  std::string name() const;
  bool operator==(const DomainMeasure&) const = default;
};

DomainMeasure parse_domain(std::string_view name, int n);

inline constexpr double kDomainTolerance = 1e-12;

bool contains(const DomainMeasure& domain, std::span<const double> x,
              double tol = kDomainTolerance);
// Throws OutsideDomain / DimensionMismatch.
void require_inside(const DomainMeasure& domain, std::span<const double> x,
                    double tol = kDomainTolerance);

// Deterministic Halton-based sample plus vertices and center. Ball and simplex only.
std::vector<Point> domain_samples(const DomainMeasure& domain, int count);

// Random point drawn from a distribution supported on the whole domain.
Point random_point(const DomainMeasure& domain, std::mt19937_64& rng);

double radical_inverse(std::uint64_t index, int base);

}  // namespace possum
