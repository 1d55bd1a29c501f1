#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "possum/kernels.hpp"
#include "possum/measures.hpp"
#include "possum/polyarith.hpp"

namespace possum {

// Dense coefficient layout over monomials_up_to(nvars, degree).
class DenseSpace {
 public:
  DenseSpace(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  int index(const Monomial& m) const;  // -1 when out of range
  // Index of monomial i times x_var, or -1 past the degree.
  int shifted(std::size_t i, int var) const { return shift_[i * nvars_ + var]; }

  // Values of every monomial at x.
  std::vector<quad> monomial_values(std::span<const quad> x) const;

  // out = acc * (c0 + sum_j c[j] x_j). Terms pushed past the degree must be zero.
  void multiply_linear(const std::vector<quad>& acc, quad c0, std::span<const quad> c,
                       std::vector<quad>& out) const;

 private:
  int nvars_, degree_;
  std::vector<Monomial> monomials_;
  std::map<Monomial, int> index_;
  std::vector<int> shift_;
};

// One weighted square w * s(x)^2. The coefficients of s are hi + lo: hi is the
// binary64 rounding and lo the binary64 rounding of the remainder.
struct SquarePiece {
  double weight = 0.0;
  std::vector<double> hi;
  std::vector<double> lo;
};

struct SquareDecomposition {
  int nvars = 0;
  int degree = 0;  // s ranges over monomials_up_to(nvars, degree)
  std::vector<SquarePiece> pieces;

  MultiPoly root(std::size_t i) const;     // hi part
  MultiPoly root_lo(std::size_t i) const;  // remainder part
  int root_degree(std::size_t i) const;    // -1 for a zero root
  // sum w s(x)^2.
  quad evaluate(std::span<const quad> x) const;
  double evaluate(std::span<const double> x) const;
  // sum w s^2 expanded into one polynomial (hi parts only).
  MultiPoly expand() const;
};

// Generator subsets are sorted 1-based index lists; {} is the empty product.
using GeneratorSet = std::vector<int>;

// Ball: g_1 = 1 - |x|^2. Simplex: g_i = x_i (i <= n), g_{n+1} = 1 - |x|.
int generator_count(const DomainMeasure& domain);
MultiPoly generator(const DomainMeasure& domain, int j);
MultiPoly generator_product(const DomainMeasure& domain, const GeneratorSet& J);
quad generator_product_value(const DomainMeasure& domain, const GeneratorSet& J,
                             std::span<const quad> x);
std::string generator_key(const GeneratorSet& J);  // "J:[1,3]"
GeneratorSet parse_generator_key(const std::string& key);

struct FixedYKernelSOS {
  Point y;
  DomainMeasure domain;
  std::map<GeneratorSet, SquareDecomposition> terms;

  // sum_J g_J(x) sigma_J(x).
  double evaluate(std::span<const double> x) const;
};

// Returns (h_odd, h_even) in variables (u, s) with
// p(u+v)^2 + p(u-v)^2 = v^2 h_odd(u, v^2)^2 + h_even(u, v^2)^2.
template <class Real>
std::pair<BasicMultiPoly<Real>, BasicMultiPoly<Real>> split_square(const BasicUniPoly<Real>& p, int r);
std::pair<MultiPoly, MultiPoly> split_square(const UniPoly& p, int r);

// h(u + v, rest) with v appended as the last variable.
template <class Real>
BasicMultiPoly<Real> shift_first_variable(const BasicMultiPoly<Real>& h);

// Recursion over v_(0)..v_(n) for one square P; returns a -> h_a(s_0..s_n).
std::map<std::vector<int>, QuadPoly> simplex_split(const QuadUniPoly& P, int n);

// Precomputes the formal splits of a kernel once so fixed-y representations are
// cheap to produce for many y.
class KernelSosBuilder {
 public:
  explicit KernelSosBuilder(const PerturbedKernel& K);
  ~KernelSosBuilder();
  KernelSosBuilder(KernelSosBuilder&&) noexcept;

  const PerturbedKernel& kernel() const;
  const DenseSpace& space() const;
  FixedYKernelSOS build(std::span<const double> y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FixedYKernelSOS ball_kernel_sos(const PerturbedKernel& K, std::span<const double> y);
FixedYKernelSOS simplex_kernel_sos(const PerturbedKernel& K, std::span<const double> y);

struct PreorderingCertificate {
  DomainMeasure domain;
  int r = 0;
  double epsilon = 0.0;
  double lambda_shift = 0.0;
  bool shift_heuristic = false;
  std::map<GeneratorSet, SquareDecomposition> sigma;

  std::size_t piece_count() const;
  // sum_J g_J(x) sigma_J(x), in extended precision.
  quad evaluate(std::span<const quad> x) const;
};

// Everything synthesize computes before assembling squares.
struct SynthesisPlan {
  DomainMeasure domain;
  int r = 0;
  int d = 0;
  double epsilon = 0.0;
  double lambda_shift = 0.0;
  std::shared_ptr<const PerturbedKernel> kernel;  // null for constant f
  MultiPoly target;                               // f - shift + epsilon
  MultiPoly g;                                    // K^{-1} target
  const CubatureRule* rule = nullptr;
  std::vector<double> g_values;                   // g at the cubature nodes
  double min_g = 0.0;
};

inline constexpr double kNodeClampTolerance = 1e-10;

SynthesisPlan plan_synthesis(const MultiPoly& f, double lambda_shift, double epsilon, int r,
                             const DomainMeasure& domain);
// True when every g(y_i) >= -1e-10.
bool plan_feasible(const SynthesisPlan& plan);

PreorderingCertificate synthesize(const MultiPoly& f, double lambda_shift, double epsilon, int r,
                                  const DomainMeasure& domain, int threads = 0);
PreorderingCertificate assemble(const SynthesisPlan& plan, int threads = 0);

struct VerifyReport {
  double max_residual = 0.0;
  bool degree_ok = true;
  bool sos_ok = true;
  int samples = 0;
  int max_degree = 0;  // max deg(sigma_J g_J)
  bool ok(double tol = 1e-8) const { return max_residual < tol && degree_ok && sos_ok; }
};

VerifyReport verify(const PreorderingCertificate& cert, const MultiPoly& f, int samples);

nlohmann::json certificate_to_json(const PreorderingCertificate& cert);
PreorderingCertificate certificate_from_json(const nlohmann::json& j);
nlohmann::json verify_report_to_json(const VerifyReport& rep);

// Cubature/sampling minimum of f minus 1e-8; heuristic.
double default_shift(const MultiPoly& f, const DomainMeasure& domain);

}  // namespace possum
