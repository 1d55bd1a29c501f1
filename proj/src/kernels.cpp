#include "possum/kernels.hpp"

#include <cmath>
#include <random>

#include "possum/measures.hpp"
#include "possum/orthopoly.hpp"

namespace possum {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double ball_defect(std::span<const double> x) {
  return std::sqrt(std::max(0.0, 1.0 - dot(x, x)));
}

void check_pair(const DomainMeasure& domain, std::span<const double> x, std::span<const double> y) {
  require_inside(domain, x);
  require_inside(domain, y);
}

// Arguments fed to the univariate polynomial by the closed forms.
std::vector<double> closed_form_arguments(const DomainMeasure& domain, std::span<const double> x,
                                          std::span<const double> y) {
  check_pair(domain, x, y);
  switch (domain.kind) {
    case DomainKind::Ball: {
      const double u = dot(x, y), v = ball_defect(x) * ball_defect(y);
      return {u + v, u - v};
    }
    case DomainKind::Sphere: return {dot(x, y)};
    case DomainKind::Simplex: {
      const auto lx = simplex_lift(x), ly = simplex_lift(y);
      const int m = static_cast<int>(lx.size());
      std::vector<double> w(m);
      for (int i = 0; i < m; ++i) w[i] = std::sqrt(lx[i] * ly[i]);
      std::vector<double> out;
      out.reserve(std::size_t{1} << m);
      for (unsigned t = 0; t < (1u << m); ++t) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += (t >> i & 1u) ? -w[i] : w[i];
        out.push_back(s);
      }
      return out;
    }
  }
  return {};
}

int family_parameter(const DomainMeasure& domain) {
  return domain.kind == DomainKind::Sphere ? domain.n - 1 : domain.n;
}

std::vector<double> orthonormal_parity_part(const std::vector<double>& v, int parity) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = parity; k < v.size(); k += 2) out[k] = v[k];
  return out;
}

}  // namespace

std::vector<double> simplex_lift(std::span<const double> x) {
  std::vector<double> out(x.size() + 1);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::max(0.0, x[i]);
    s += x[i];
  }
  out.back() = std::max(0.0, 1.0 - s);
  return out;
}

double PerturbedKernel::q(double t) const {
  const double p = orthonormal_series_eval(density.n, p_coeffs, t);
  return p * p;
}

double PerturbedKernel::q_even(double t) const {
  const double a = orthonormal_series_eval(density.n, p_even_coeffs, t);
  const double b = orthonormal_series_eval(density.n, p_odd_coeffs, t);
  return a * a + b * b;
}

PerturbedKernel kernel_from_density(const DomainMeasure& domain, const DensitySolution& sol) {
  if (domain.kind == DomainKind::Sphere) throw InvalidArgument("perturbed kernels are built on the ball or simplex");
  if (sol.n != domain.n) throw DimensionMismatch("density parameter n differs from the domain dimension");
  if (sol.v.empty()) throw InvalidArgument("density has no square root");
  PerturbedKernel K;
  K.domain = domain;
  K.density = sol;
  K.has_square = true;
  K.p_coeffs = sol.v;
  if (domain.kind == DomainKind::Ball) {
    K.r = sol.r;
    K.eigenvalues = sol.lambda;
  } else {
    if (sol.r % 2 != 0) throw InvalidArgument("simplex kernels need a square root of even degree 2r");
    K.r = sol.r / 2;
    for (int k = 0; k <= 2 * K.r; ++k) K.eigenvalues.push_back(sol.lambda[2 * k]);
    K.p_even_coeffs = orthonormal_parity_part(sol.v, 0);
    K.p_odd_coeffs = orthonormal_parity_part(sol.v, 1);
  }
  return K;
}

PerturbedKernel make_kernel(const DomainMeasure& domain, int d, int r) {
  if (domain.kind == DomainKind::Ball) return kernel_from_density(domain, solve_density(domain.n, d, r));
  if (domain.kind == DomainKind::Simplex)
    return kernel_from_density(domain, solve_density(domain.n, 2 * d, 2 * r));
  throw InvalidArgument("perturbed kernels are built on the ball or simplex");
}

PerturbedKernel kernel_from_square_root(const DomainMeasure& domain, int r, std::vector<double> v) {
  const int max_deg = domain.kind == DomainKind::Simplex ? 2 * r : r;
  if (static_cast<int>(v.size()) - 1 > max_deg) throw DegreeOverflow("square root degree exceeds the kernel budget");
  v.resize(max_deg + 1, 0.0);
  return kernel_from_density(domain, density_from_square_root(domain.n, std::move(v)));
}

PerturbedKernel kernel_from_eigenvalues(const DomainMeasure& domain, int r, std::vector<double> eigenvalues) {
  PerturbedKernel K;
  K.domain = domain;
  K.r = r;
  K.eigenvalues = std::move(eigenvalues);
  K.density = synthetic_density(domain.n, r, K.eigenvalues);
  K.has_square = false;
  return K;
}

std::vector<double> cd_components(const DomainMeasure& domain, int kmax, std::span<const double> x,
                                  std::span<const double> y) {
  const int gn = family_parameter(domain);
  if (gn < 2) throw InvalidArgument("closed-form components need Gegenbauer parameter >= 2");
  const GegenbauerFamily fam{gn, Normalization::C};
  const auto args = closed_form_arguments(domain, x, y);
  const int deg = domain.kind == DomainKind::Simplex ? 2 * kmax : kmax;
  std::vector<double> out(kmax + 1, 0.0);
  for (double t : args) {
    const auto g = eval_all(fam, deg, t);
    for (int k = 0; k <= kmax; ++k) out[k] += domain.kind == DomainKind::Simplex ? g[2 * k] : g[k];
  }
  for (double& v : out) v /= static_cast<double>(args.size());
  return out;
}

double cd_component(const DomainMeasure& domain, int k, std::span<const double> x,
                    std::span<const double> y) {
  if (k < 0) throw InvalidArgument("component degree must be >= 0");
  return cd_components(domain, k, x, y)[k];
}

double kernel_eval_components(const PerturbedKernel& K, std::span<const double> x,
                              std::span<const double> y) {
  const int kmax = static_cast<int>(K.eigenvalues.size()) - 1;
  const auto c = cd_components(K.domain, kmax, x, y);
  double s = 0.0;
  for (int k = 0; k <= kmax; ++k) s += K.eigenvalues[k] * c[k];
  return s;
}

double kernel_eval(const PerturbedKernel& K, std::span<const double> x, std::span<const double> y) {
  if (!K.has_square) return kernel_eval_components(K, x, y);
  const auto args = closed_form_arguments(K.domain, x, y);
  double s = 0.0;
  for (double t : args) s += K.domain.kind == DomainKind::Simplex ? K.q_even(t) : K.q(t);
  return s / static_cast<double>(args.size());
}

MultiPoly apply_operator(const PerturbedKernel& K, const MultiPoly& f) {
  const int d = f.degree();
  if (d > 2 * K.r || d >= static_cast<int>(K.eigenvalues.size()))
    throw DegreeOverflow("polynomial degree " + std::to_string(d) + " exceeds the kernel degree");
  const auto comps = project_components(f, K.domain);
  MultiPoly out(f.nvars());
  for (std::size_t k = 0; k < comps.size(); ++k) out = out + K.eigenvalues[k] * comps[k];
  return out;
}

MultiPoly apply_inverse(const PerturbedKernel& K, const MultiPoly& f) {
  const int d = f.degree();
  if (d > 2 * K.r || d >= static_cast<int>(K.eigenvalues.size()))
    throw DegreeOverflow("polynomial degree " + std::to_string(d) + " exceeds the kernel degree");
  for (int k = 0; k <= std::max(d, 0); ++k)
    if (std::abs(K.eigenvalues[k]) <= 1e-12)
      throw SingularEigenvalue("component eigenvalue " + std::to_string(k) + " vanishes");
  const auto comps = project_components(f, K.domain);
  MultiPoly out(f.nvars());
  for (std::size_t k = 0; k < comps.size(); ++k) out = out + (1.0 / K.eigenvalues[k]) * comps[k];
  return out;
}

double reproducing_check(const DomainMeasure& domain, int r, int trials, std::uint64_t seed) {
  if (r < 0 || trials < 1) throw InvalidArgument("reproducing_check needs r >= 0 and trials >= 1");
  const CubatureRule& rule = cubature(domain, 2 * r);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto monos = monomials_up_to(domain.n, r);
  constexpr int kPointsPerTrial = 5;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    MultiPoly p(domain.n);
    for (const auto& m : monos) p.add_term(m, coef(rng));
    std::vector<double> pv(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) pv[i] = p.evaluate<double>(rule.points[i]);
    for (int j = 0; j < kPointsPerTrial; ++j) {
      const Point x = random_point(domain, rng);
      double integral = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto c = cd_components(domain, r, x, rule.points[i]);
        double kern = 0.0;
        for (double v : c) kern += v;
        integral += rule.weights[i] * kern * pv[i];
      }
      worst = std::max(worst, std::abs(integral - p.evaluate<double>(x)));
    }
  }
  return worst;
}

double closed_form_error(const DomainMeasure& domain, int kmax, int pairs, std::uint64_t seed) {
  if (kmax < 0 || pairs < 1) throw InvalidArgument("closed_form_error needs kmax >= 0 and pairs >= 1");
  const OrthonormalBasis& B = orthonormal_basis(domain, kmax);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Point x = random_point(domain, rng), y = random_point(domain, rng);
    const auto closed = cd_components(domain, kmax, x, y);
    for (int k = 0; k <= kmax; ++k) {
      double sum = 0.0;
      for (int i : B.component(k)) sum += B.basis[i].evaluate<double>(x) * B.basis[i].evaluate<double>(y);
      worst = std::max(worst, std::abs(closed[k] - sum));
    }
  }
  return worst;
}

}  // namespace possum
