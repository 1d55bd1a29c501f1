#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "possum/domain.hpp"
#include "possum/errors.hpp"
#include "possum/quad.hpp"

namespace possum {

using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

// Graded lexicographic: lower total degree first, then lexicographic with x1 largest first.
bool graded_less(const Monomial& a, const Monomial& b);

// All exponent vectors in nvars variables with total degree <= degree, graded-lex order.
std::vector<Monomial> monomials_up_to(int nvars, int degree);
std::vector<Monomial> monomials_of_degree(int nvars, int degree);

inline constexpr double kPruneThreshold = 1e-15;

template <class Real>
class BasicMultiPoly {
 public:
  using Terms = std::map<Monomial, Real>;

  BasicMultiPoly() = default;
  explicit BasicMultiPoly(int nvars) : nvars_(nvars) {
    if (nvars < 1) throw InvalidArgument("polynomial needs at least one variable");
  }

  static BasicMultiPoly constant(int nvars, Real c) {
    BasicMultiPoly p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }
  static BasicMultiPoly variable(int nvars, int index, Real c = Real(1)) {
    if (index < 0 || index >= nvars) throw InvalidArgument("variable index out of range");
    BasicMultiPoly p(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.add_term(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  Real coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Real(0) : it->second;
  }

  // Accumulates c into the coefficient of m; exact cancellations are erased.
  void add_term(const Monomial& m, Real c) {
    if (static_cast<int>(m.size()) != nvars_)
      throw DimensionMismatch("monomial length does not match nvars");
    for (int e : m)
      if (e < 0) throw InvalidArgument("negative exponent");
    if (c == Real(0)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Real(0)) terms_.erase(it);
    }
  }

  BasicMultiPoly& prune(double threshold = kPruneThreshold) {
    std::erase_if(terms_, [&](const auto& kv) {
      return abs_value(kv.second) < static_cast<Real>(threshold);
    });
    return *this;
  }

  template <class X>
  X evaluate(std::span<const X> x) const {
    if (static_cast<int>(x.size()) != nvars_)
      throw DimensionMismatch("point dimension does not match nvars");
    X total = 0;
    for (const auto& [m, c] : terms_) {
      X term = static_cast<X>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < m[i]; ++e) term *= x[i];
      total += term;
    }
    return total;
  }
  Real operator()(std::span<const Real> x) const { return evaluate<Real>(x); }

  template <class Other>
  BasicMultiPoly<Other> cast() const {
    BasicMultiPoly<Other> out(nvars_);
    for (const auto& [m, c] : terms_) out.add_term(m, static_cast<Other>(c));
    return out;
  }

 private:
  int nvars_ = 0;
  Terms terms_;
};

using MultiPoly = BasicMultiPoly<double>;
using QuadPoly = BasicMultiPoly<quad>;

template <class Real>
void require_same_nvars(const BasicMultiPoly<Real>& a, const BasicMultiPoly<Real>& b) {
  if (a.nvars() != b.nvars())
    throw DimensionMismatch("polynomials have " + std::to_string(a.nvars()) + " and " +
                            std::to_string(b.nvars()) + " variables");
}

template <class Real>
BasicMultiPoly<Real> operator+(const BasicMultiPoly<Real>& a, const BasicMultiPoly<Real>& b) {
  require_same_nvars(a, b);
  BasicMultiPoly<Real> out = a;
  for (const auto& [m, c] : b.terms()) out.add_term(m, c);
  return out.prune();
}

template <class Real>
BasicMultiPoly<Real> operator-(const BasicMultiPoly<Real>& a, const BasicMultiPoly<Real>& b) {
  require_same_nvars(a, b);
  BasicMultiPoly<Real> out = a;
  for (const auto& [m, c] : b.terms()) out.add_term(m, -c);
  return out.prune();
}

template <class Real>
BasicMultiPoly<Real> operator*(const BasicMultiPoly<Real>& a, const BasicMultiPoly<Real>& b) {
  require_same_nvars(a, b);
  BasicMultiPoly<Real> out(a.nvars());
  Monomial m(a.nvars());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      for (int i = 0; i < a.nvars(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  return out.prune();
}

template <class Real>
BasicMultiPoly<Real> operator*(Real s, const BasicMultiPoly<Real>& a) {
  BasicMultiPoly<Real> out(a.nvars());
  for (const auto& [m, c] : a.terms()) out.add_term(m, s * c);
  return out.prune();
}

template <class Real>
BasicMultiPoly<Real> scale(const BasicMultiPoly<Real>& a, Real s) {
  return s * a;
}

enum class ArithOp { Add, Sub, Mul };

template <class Real>
BasicMultiPoly<Real> arith(const BasicMultiPoly<Real>& a, const BasicMultiPoly<Real>& b,
                           ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
  }
  return a;
}

template <class Real>
BasicMultiPoly<Real> power(const BasicMultiPoly<Real>& a, int e) {
  BasicMultiPoly<Real> out = BasicMultiPoly<Real>::constant(a.nvars(), Real(1));
  for (int i = 0; i < e; ++i) out = out * a;
  return out;
}

// Splits h by parity in variable `var`: h = h_even(.., v^2, ..) + v * h_odd(.., v^2, ..).
// In the outputs the slot `var` holds s = v^2. Returns (h_even, h_odd).
template <class Real>
std::pair<BasicMultiPoly<Real>, BasicMultiPoly<Real>> even_odd_split(
    const BasicMultiPoly<Real>& h, int var) {
  if (var < 0 || var >= h.nvars()) throw InvalidArgument("split variable out of range");
  BasicMultiPoly<Real> even(h.nvars()), odd(h.nvars());
  for (const auto& [m, c] : h.terms()) {
    Monomial k = m;
    if (m[var] % 2 == 0) {
      k[var] = m[var] / 2;
      even.add_term(k, c);
    } else {
      k[var] = (m[var] - 1) / 2;
      odd.add_term(k, c);
    }
  }
  return {even, odd};
}

template <class Real>
struct BasicUniPoly {
  std::vector<Real> coeffs;  // index = power

  BasicUniPoly() = default;
  explicit BasicUniPoly(std::vector<Real> c) : coeffs(std::move(c)) { trim(); }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == Real(0)) coeffs.pop_back();
  }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Real operator()(Real x) const {
    Real acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
};

using UniPoly = BasicUniPoly<double>;
using QuadUniPoly = BasicUniPoly<quad>;

template <class Real>
BasicUniPoly<Real> operator*(const BasicUniPoly<Real>& a, const BasicUniPoly<Real>& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return {};
  std::vector<Real> c(a.coeffs.size() + b.coeffs.size() - 1, Real(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return BasicUniPoly<Real>(std::move(c));
}

template <class Real>
BasicUniPoly<Real> operator+(const BasicUniPoly<Real>& a, const BasicUniPoly<Real>& b) {
  std::vector<Real> c(std::max(a.coeffs.size(), b.coeffs.size()), Real(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return BasicUniPoly<Real>(std::move(c));
}

// p(arg) for univariate p and multivariate arg, by Horner.
template <class Real>
BasicMultiPoly<Real> compose(const BasicUniPoly<Real>& p, const BasicMultiPoly<Real>& arg) {
  BasicMultiPoly<Real> acc(arg.nvars());
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
    acc = acc * arg + BasicMultiPoly<Real>::constant(arg.nvars(), *it);
  return acc;
}

// h(args[0], ..., args[k-1]) where h has k variables and all args share nvars.
template <class Real>
BasicMultiPoly<Real> substitute(const BasicMultiPoly<Real>& h,
                                const std::vector<BasicMultiPoly<Real>>& args) {
  if (static_cast<int>(args.size()) != h.nvars())
    throw DimensionMismatch("substitute needs one argument per variable");
  const int m = args.front().nvars();
  std::vector<std::vector<BasicMultiPoly<Real>>> powers(args.size());
  BasicMultiPoly<Real> out(m);
  for (const auto& [mono, c] : h.terms()) {
    BasicMultiPoly<Real> term = BasicMultiPoly<Real>::constant(m, c);
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(BasicMultiPoly<Real>::constant(m, Real(1)));
      while (static_cast<int>(pw.size()) <= mono[i]) pw.push_back(pw.back() * args[i]);
      if (mono[i] > 0) term = term * pw[mono[i]];
    }
    out = out + term;
  }
  return out;
}

// Max |p| over domain_samples(domain, samples). Heuristic lower estimate of the sup norm.
double sup_norm_estimate(const MultiPoly& p, const DomainMeasure& domain, int samples);

// Smallest sampled value of p, refined by a projected pattern search. Heuristic.
std::pair<Point, double> sample_minimum(const MultiPoly& p, const DomainMeasure& domain, int samples);
// Clamps x into the domain (radial scaling on the ball, clip and rescale on the simplex).
void project_into(const DomainMeasure& domain, Point& x);

nlohmann::json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const nlohmann::json& j);
MultiPoly read_poly_file(const std::string& path);

// Convenience constructors used by tests and the CLI.
MultiPoly squared_norm(int nvars);  // |x|^2
MultiPoly coordinate_sum(int nvars);  // x_1 + ... + x_n

}  // namespace possum
