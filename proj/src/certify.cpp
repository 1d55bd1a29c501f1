#include "possum/certify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "possum/orthopoly.hpp"
#include "possum/parallel.hpp"

namespace possum {

namespace {

std::vector<quad> to_quad(std::span<const double> x) {
  return std::vector<quad>(x.begin(), x.end());
}

// Values of every monomial in `monos` at x.
std::vector<quad> values_of(const std::vector<Monomial>& monos, int nvars, int degree,
                            std::span<const quad> x) {
  std::vector<std::vector<quad>> pw(nvars, std::vector<quad>(degree + 1, quad(1)));
  for (int i = 0; i < nvars; ++i)
    for (int e = 1; e <= degree; ++e) pw[i][e] = pw[i][e - 1] * x[i];
  std::vector<quad> out(monos.size());
  for (std::size_t k = 0; k < monos.size(); ++k) {
    quad v = 1;
    for (int i = 0; i < nvars; ++i) v *= pw[i][monos[k][i]];
    out[k] = v;
  }
  return out;
}

void split_hi_lo(const std::vector<quad>& c, SquarePiece& piece) {
  piece.hi.resize(c.size());
  piece.lo.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    piece.hi[k] = static_cast<double>(c[k]);
    piece.lo[k] = static_cast<double>(c[k] - static_cast<quad>(piece.hi[k]));
  }
}

bool all_zero(const std::vector<quad>& c) {
  for (quad v : c)
    if (v != 0) return false;
  return true;
}

template <class Real>
Real binomial(int m, int j) {
  Real b = 1;
  for (int i = 0; i < j; ++i) b = b * Real(m - i) / Real(i + 1);
  return b;
}

template <class Real>
BasicMultiPoly<Real> scaled_no_prune(const BasicMultiPoly<Real>& h, Real s) {
  BasicMultiPoly<Real> out(h.nvars());
  for (const auto& [m, c] : h.terms()) out.add_term(m, s * c);
  return out;
}

int generator_degree(const DomainMeasure& domain, const GeneratorSet& J) {
  return domain.kind == DomainKind::Ball ? 2 * static_cast<int>(J.size()) : static_cast<int>(J.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseSpace

DenseSpace::DenseSpace(int nvars, int degree)
    : nvars_(nvars), degree_(degree), monomials_(monomials_up_to(nvars, degree)) {
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_[monomials_[i]] = static_cast<int>(i);
  shift_.assign(monomials_.size() * nvars_, -1);
  for (std::size_t i = 0; i < monomials_.size(); ++i)
    for (int v = 0; v < nvars_; ++v) {
      Monomial m = monomials_[i];
      ++m[v];
      shift_[i * nvars_ + v] = index(m);
    }
}

int DenseSpace::index(const Monomial& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : it->second;
}

std::vector<quad> DenseSpace::monomial_values(std::span<const quad> x) const {
  return values_of(monomials_, nvars_, degree_, x);
}

void DenseSpace::multiply_linear(const std::vector<quad>& acc, quad c0, std::span<const quad> c,
                                 std::vector<quad>& out) const {
  out.assign(monomials_.size(), quad(0));
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    const quad a = acc[i];
    if (a == 0) continue;
    out[i] += c0 * a;
    for (int v = 0; v < nvars_; ++v) {
      if (c[v] == 0) continue;
      const int j = shift_[i * nvars_ + v];
      if (j < 0) throw std::logic_error("dense product exceeds the degree budget");
      out[j] += c[v] * a;
    }
  }
}

// ---------------------------------------------------------------------------
// SquareDecomposition

MultiPoly SquareDecomposition::root(std::size_t i) const {
  const auto monos = monomials_up_to(nvars, degree);
  MultiPoly p(nvars);
  for (std::size_t k = 0; k < monos.size(); ++k) p.add_term(monos[k], pieces.at(i).hi[k]);
  return p;
}

MultiPoly SquareDecomposition::root_lo(std::size_t i) const {
  const auto monos = monomials_up_to(nvars, degree);
  MultiPoly p(nvars);
  for (std::size_t k = 0; k < monos.size() && k < pieces.at(i).lo.size(); ++k)
    p.add_term(monos[k], pieces.at(i).lo[k]);
  return p;
}

int SquareDecomposition::root_degree(std::size_t i) const {
  const auto monos = monomials_up_to(nvars, degree);
  int d = -1;
  const auto& pc = pieces.at(i);
  for (std::size_t k = 0; k < monos.size(); ++k) {
    const bool nz = pc.hi[k] != 0.0 || (k < pc.lo.size() && pc.lo[k] != 0.0);
    if (nz) d = std::max(d, total_degree(monos[k]));
  }
  return d;
}

quad SquareDecomposition::evaluate(std::span<const quad> x) const {
  const auto monos = monomials_up_to(nvars, degree);
  const auto mv = values_of(monos, nvars, degree, x);
  quad total = 0;
  for (const auto& pc : pieces) {
    quad s = 0;
    for (std::size_t k = 0; k < monos.size(); ++k) {
      quad c = pc.hi[k];
      if (k < pc.lo.size()) c += pc.lo[k];
      s += c * mv[k];
    }
    total += static_cast<quad>(pc.weight) * s * s;
  }
  return total;
}

double SquareDecomposition::evaluate(std::span<const double> x) const {
  const auto xq = to_quad(x);
  return static_cast<double>(evaluate(std::span<const quad>(xq)));
}

MultiPoly SquareDecomposition::expand() const {
  MultiPoly out(nvars);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const MultiPoly s = root(i);
    out = out + pieces[i].weight * (s * s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

int generator_count(const DomainMeasure& domain) {
  switch (domain.kind) {
    case DomainKind::Ball: return 1;
    case DomainKind::Simplex: return domain.n + 1;
    case DomainKind::Sphere: break;
  }
  throw InvalidArgument("preorderings are defined on the ball and simplex");
}

MultiPoly generator(const DomainMeasure& domain, int j) {
  const int n = domain.n;
  if (j < 1 || j > generator_count(domain)) throw InvalidArgument("generator index out of range");
  if (domain.kind == DomainKind::Ball) return MultiPoly::constant(n, 1.0) - squared_norm(n);
  if (j <= n) return MultiPoly::variable(n, j - 1);
  return MultiPoly::constant(n, 1.0) - coordinate_sum(n);
}

MultiPoly generator_product(const DomainMeasure& domain, const GeneratorSet& J) {
  MultiPoly out = MultiPoly::constant(domain.n, 1.0);
  for (int j : J) out = out * generator(domain, j);
  return out;
}

quad generator_product_value(const DomainMeasure& domain, const GeneratorSet& J,
                             std::span<const quad> x) {
  quad v = 1;
  for (int j : J) {
    if (domain.kind == DomainKind::Ball) {
      quad s = 1;
      for (quad xi : x) s -= xi * xi;
      v *= s;
    } else if (j <= domain.n) {
      v *= x[j - 1];
    } else {
      quad s = 1;
      for (quad xi : x) s -= xi;
      v *= s;
    }
  }
  return v;
}

std::string generator_key(const GeneratorSet& J) {
  std::string s = "J:[";
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(J[i]);
  }
  return s + "]";
}

GeneratorSet parse_generator_key(const std::string& key) {
  if (key.size() < 4 || key.rfind("J:[", 0) != 0 || key.back() != ']')
    throw ParseError("bad generator key '" + key + "'");
  GeneratorSet J;
  std::stringstream ss(key.substr(3, key.size() - 4));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) J.push_back(std::stoi(item));
  for (std::size_t i = 1; i < J.size(); ++i)
    if (J[i] <= J[i - 1]) throw ParseError("generator key must be strictly increasing");
  return J;
}

double FixedYKernelSOS::evaluate(std::span<const double> x) const {
  const auto xq = to_quad(x);
  quad total = 0;
  for (const auto& [J, dec] : terms)
    total += generator_product_value(domain, J, xq) * dec.evaluate(std::span<const quad>(xq));
  return static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Splitting

template <class Real>
BasicMultiPoly<Real> shift_first_variable(const BasicMultiPoly<Real>& h) {
  BasicMultiPoly<Real> out(h.nvars() + 1);
  for (const auto& [m, c] : h.terms()) {
    const int k = m[0];
    Monomial mm = m;
    mm.push_back(0);
    for (int j = 0; j <= k; ++j) {
      mm[0] = k - j;
      mm.back() = j;
      out.add_term(mm, c * binomial<Real>(k, j));
    }
  }
  return out;
}

template <class Real>
std::pair<BasicMultiPoly<Real>, BasicMultiPoly<Real>> split_square(const BasicUniPoly<Real>& p, int r) {
  if (p.degree() > r) throw InvalidArgument("split_square: deg p exceeds r");
  BasicMultiPoly<Real> h(1);
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) h.add_term({static_cast<int>(i)}, p.coeffs[i]);
  auto [even, odd] = even_odd_split(shift_first_variable(h), 1);
  const Real root2 = sqrt_value(Real(2));
  return {scaled_no_prune(odd, root2), scaled_no_prune(even, root2)};
}

template BasicMultiPoly<double> shift_first_variable(const BasicMultiPoly<double>&);
template BasicMultiPoly<quad> shift_first_variable(const BasicMultiPoly<quad>&);
template std::pair<MultiPoly, MultiPoly> split_square(const UniPoly&, int);
template std::pair<QuadPoly, QuadPoly> split_square(const QuadUniPoly&, int);

std::pair<MultiPoly, MultiPoly> split_square(const UniPoly& p, int r) {
  return split_square<double>(p, r);
}

std::map<std::vector<int>, QuadPoly> simplex_split(const QuadUniPoly& P, int n) {
  std::map<std::vector<int>, QuadPoly> cur;
  QuadPoly h(1);
  for (std::size_t i = 0; i < P.coeffs.size(); ++i) h.add_term({static_cast<int>(i)}, P.coeffs[i]);
  cur[{}] = h;
  const quad root2 = sqrt_quad(2);
  // Step i splits off v_(i); the running u-variable stays first.
  for (int i = 0; i <= n; ++i) {
    std::map<std::vector<int>, QuadPoly> next;
    for (const auto& [a, H] : cur) {
      const QuadPoly shifted = shift_first_variable(H);
      auto [even, odd] = even_odd_split(shifted, shifted.nvars() - 1);
      auto a0 = a, a1 = a;
      a0.push_back(0);
      a1.push_back(1);
      if (!even.is_zero()) next[a0] = scaled_no_prune(even, root2);
      if (!odd.is_zero()) next[a1] = scaled_no_prune(odd, root2);
    }
    cur = std::move(next);
  }
  // The remaining u equals the empty sum u_(n+1) = 0.
  std::map<std::vector<int>, QuadPoly> out;
  for (const auto& [a, H] : cur) {
    QuadPoly s(n + 1);
    for (const auto& [m, c] : H.terms())
      if (m[0] == 0) s.add_term(Monomial(m.begin() + 1, m.end()), c);
    if (!s.is_zero()) out[a] = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// KernelSosBuilder

namespace {

// Coefficients of a bivariate h(u, s) as table[j][i] for u^i s^j.
std::vector<std::vector<quad>> uv_table(const QuadPoly& h) {
  std::vector<std::vector<quad>> t;
  for (const auto& [m, c] : h.terms()) {
    const int i = m[0], j = m[1];
    if (static_cast<int>(t.size()) <= j) t.resize(j + 1);
    if (static_cast<int>(t[j].size()) <= i) t[j].resize(i + 1, quad(0));
    t[j][i] += c;
  }
  return t;
}

struct SimplexTerm {
  int x_index;             // dense index of prod_{i>=1} x_{n+1-i}^{e_i}
  quad coef;
  std::vector<int> e;      // exponents of s_1..s_n (for the y scaling)
};

struct SimplexPiece {
  GeneratorSet J;
  std::vector<int> a;
  std::vector<std::vector<SimplexTerm>> by_power;  // grouped by exponent of s_0
};

}  // namespace

struct KernelSosBuilder::Impl {
  PerturbedKernel K;
  DenseSpace space;
  // Ball.
  std::vector<std::vector<quad>> h_even, h_odd;
  // Simplex.
  std::vector<SimplexPiece> simplex_pieces;

  Impl(const PerturbedKernel& kernel, int nvars, int degree) : K(kernel), space(nvars, degree) {}

  std::vector<quad> ball_substitute(const std::vector<std::vector<quad>>& table,
                                    const std::vector<std::vector<quad>>& upow, quad c) const {
    const std::size_t size = space.size();
    std::vector<quad> acc(size, quad(0)), tmp;
    const int n = space.nvars();
    std::vector<quad> zero(n, quad(0));
    for (int j = static_cast<int>(table.size()) - 1; j >= 0; --j) {
      if (j + 1 < static_cast<int>(table.size())) {
        // acc *= c (1 - |x|^2)
        std::vector<quad> next(size, quad(0));
        for (std::size_t k = 0; k < size; ++k) next[k] = c * acc[k];
        for (int v = 0; v < n; ++v) {
          std::vector<quad> unit(n, quad(0));
          unit[v] = 1;
          std::vector<quad> once, twice;
          space.multiply_linear(acc, 0, unit, once);
          space.multiply_linear(once, 0, unit, twice);
          for (std::size_t k = 0; k < size; ++k) next[k] -= c * twice[k];
        }
        acc = std::move(next);
      }
      for (std::size_t i = 0; i < table[j].size(); ++i) {
        const quad hij = table[j][i];
        if (hij == 0) continue;
        for (std::size_t k = 0; k < size; ++k) acc[k] += hij * upow[i][k];
      }
    }
    (void)tmp;
    (void)zero;
    return acc;
  }

  FixedYKernelSOS build_ball(std::span<const double> y) const {
    const int n = space.nvars();
    const int r = space.degree();
    FixedYKernelSOS out;
    out.y.assign(y.begin(), y.end());
    out.domain = K.domain;
    double ny = 0.0;
    for (double v : y) ny += v * v;
    const double c = std::max(0.0, 1.0 - ny);
    const auto yq = to_quad(y);
    std::vector<std::vector<quad>> upow(r + 1);
    upow[0].assign(space.size(), quad(0));
    upow[0][0] = 1;
    for (int i = 1; i <= r; ++i) space.multiply_linear(upow[i - 1], 0, yq, upow[i]);
    (void)n;
    auto add = [&](const GeneratorSet& J, double w, const std::vector<std::vector<quad>>& table) {
      SquareDecomposition& dec = out.terms[J];
      dec.nvars = space.nvars();
      dec.degree = r;
      if (table.empty()) return;
      const auto s = ball_substitute(table, upow, static_cast<quad>(c));
      if (all_zero(s)) return;
      SquarePiece piece;
      piece.weight = w;
      split_hi_lo(s, piece);
      dec.pieces.push_back(std::move(piece));
    };
    add({}, 0.5, h_even);
    add({1}, 0.5 * c, h_odd);
    return out;
  }

  FixedYKernelSOS build_simplex(std::span<const double> y) const {
    const int n = space.nvars();
    const int r = space.degree();
    const auto ly = simplex_lift(y);
    FixedYKernelSOS out;
    out.y.assign(y.begin(), y.end());
    out.domain = K.domain;
    // s_i = y_{n+1-i} x_{n+1-i}; lifted index n - i (0-based).
    std::vector<std::vector<quad>> ypow(n + 1, std::vector<quad>(r + 1, quad(1)));
    for (int i = 0; i <= n; ++i)
      for (int e = 1; e <= r; ++e) ypow[i][e] = ypow[i][e - 1] * static_cast<quad>(ly[n - i]);
    const quad c0 = ly[n];
    std::vector<quad> lin(n, -c0);
    const double base = std::ldexp(1.0, -(n + 1));
    for (const auto& sp : simplex_pieces) {
      double w = base;
      for (int i = 0; i <= n; ++i)
        if (sp.a[i]) w *= ly[n - i];
      std::vector<quad> acc(space.size(), quad(0)), next;
      for (int k = static_cast<int>(sp.by_power.size()) - 1; k >= 0; --k) {
        if (k + 1 < static_cast<int>(sp.by_power.size())) {
          space.multiply_linear(acc, c0, lin, next);
          acc.swap(next);
        }
        for (const auto& t : sp.by_power[k]) {
          quad v = t.coef;
          for (int i = 1; i <= n; ++i) v *= ypow[i][t.e[i]];
          acc[t.x_index] += v;
        }
      }
      SquareDecomposition& dec = out.terms[sp.J];
      dec.nvars = n;
      dec.degree = r;
      if (all_zero(acc)) continue;
      SquarePiece piece;
      piece.weight = w;
      split_hi_lo(acc, piece);
      dec.pieces.push_back(std::move(piece));
    }
    return out;
  }
};

KernelSosBuilder::KernelSosBuilder(const PerturbedKernel& K) {
  if (!K.has_square) throw InvalidArgument("kernel has no square root to split");
  const int n = K.domain.n;
  const int gn = K.density.n;
  impl_ = std::make_unique<Impl>(K, n, K.r);
  if (K.domain.kind == DomainKind::Ball) {
    const QuadUniPoly P = orthonormal_series_to_monomial<quad>(gn, K.p_coeffs);
    auto [odd, even] = split_square<quad>(P, K.r);
    impl_->h_even = uv_table(even);
    impl_->h_odd = uv_table(odd);
  } else if (K.domain.kind == DomainKind::Simplex) {
    for (const auto* coeffs : {&K.p_even_coeffs, &K.p_odd_coeffs}) {
      const QuadUniPoly P = orthonormal_series_to_monomial<quad>(gn, *coeffs);
      if (P.coeffs.empty()) continue;
      for (const auto& [a, h] : simplex_split(P, n)) {
        SimplexPiece sp;
        sp.a = a;
        for (int i = n; i >= 0; --i)
          if (a[i]) sp.J.push_back(n + 1 - i);
        for (const auto& [e, c] : h.terms()) {
          Monomial xm(n, 0);
          for (int i = 1; i <= n; ++i) xm[n - i] = e[i];
          const int idx = impl_->space.index(xm);
          if (idx < 0 || total_degree(e) > K.r) throw std::logic_error("simplex split exceeds degree r");
          if (static_cast<int>(sp.by_power.size()) <= e[0]) sp.by_power.resize(e[0] + 1);
          sp.by_power[e[0]].push_back({idx, c, e});
        }
        impl_->simplex_pieces.push_back(std::move(sp));
      }
    }
  } else {
    throw InvalidArgument("kernel SOS representations exist on the ball and simplex");
  }
}

KernelSosBuilder::~KernelSosBuilder() = default;
KernelSosBuilder::KernelSosBuilder(KernelSosBuilder&&) noexcept = default;

const PerturbedKernel& KernelSosBuilder::kernel() const { return impl_->K; }
const DenseSpace& KernelSosBuilder::space() const { return impl_->space; }

FixedYKernelSOS KernelSosBuilder::build(std::span<const double> y) const {
  require_inside(impl_->K.domain, y);
  return impl_->K.domain.kind == DomainKind::Ball ? impl_->build_ball(y) : impl_->build_simplex(y);
}

FixedYKernelSOS ball_kernel_sos(const PerturbedKernel& K, std::span<const double> y) {
  if (K.domain.kind != DomainKind::Ball) throw InvalidArgument("ball_kernel_sos needs a ball kernel");
  return KernelSosBuilder(K).build(y);
}

FixedYKernelSOS simplex_kernel_sos(const PerturbedKernel& K, std::span<const double> y) {
  if (K.domain.kind != DomainKind::Simplex) throw InvalidArgument("simplex_kernel_sos needs a simplex kernel");
  return KernelSosBuilder(K).build(y);
}

// ---------------------------------------------------------------------------
// Certificates

std::size_t PreorderingCertificate::piece_count() const {
  std::size_t c = 0;
  for (const auto& [J, dec] : sigma) c += dec.pieces.size();
  return c;
}

quad PreorderingCertificate::evaluate(std::span<const quad> x) const {
  quad total = 0;
  for (const auto& [J, dec] : sigma) total += generator_product_value(domain, J, x) * dec.evaluate(x);
  return total;
}

SynthesisPlan plan_synthesis(const MultiPoly& f, double lambda_shift, double epsilon, int r,
                             const DomainMeasure& domain) {
  if (domain.kind == DomainKind::Sphere) throw InvalidArgument("certificates are built on the ball or simplex");
  if (f.nvars() != domain.nvars()) throw DimensionMismatch("polynomial and domain dimension differ");
  if (!std::isfinite(lambda_shift) || !std::isfinite(epsilon)) throw InvalidArgument("shift and epsilon must be finite");
  const int d = std::max(f.degree(), 0);
  if (r < std::max(d, 1)) throw InvalidArgument("r must be >= max(deg f, 1)");
  SynthesisPlan plan;
  plan.domain = domain;
  plan.r = r;
  plan.d = d;
  plan.epsilon = epsilon;
  plan.lambda_shift = lambda_shift;
  plan.target = f + MultiPoly::constant(f.nvars(), epsilon - lambda_shift);
  if (d == 0) {
    plan.g = plan.target;
    const double c = plan.target.coefficient(Monomial(f.nvars(), 0));
    plan.g_values = {c};
    plan.min_g = c;
    return plan;
  }
  auto K = std::make_shared<PerturbedKernel>(make_kernel(domain, d, r));
  check_eigen_gaps(K->density, K->density.d);
  plan.kernel = K;
  plan.g = apply_inverse(*K, plan.target);
  plan.rule = &cubature(domain, d + 2 * r);
  plan.g_values.resize(plan.rule->size());
  plan.min_g = INFINITY;
  for (std::size_t i = 0; i < plan.rule->size(); ++i) {
    plan.g_values[i] = plan.g.evaluate<double>(plan.rule->points[i]);
    plan.min_g = std::min(plan.min_g, plan.g_values[i]);
  }
  return plan;
}

bool plan_feasible(const SynthesisPlan& plan) { return plan.min_g >= -kNodeClampTolerance; }

PreorderingCertificate assemble(const SynthesisPlan& plan, int threads) {
  if (!plan_feasible(plan)) {
    std::ostringstream msg;
    msg << "K^{-1}(f - shift + eps) is negative at a cubature node (min " << plan.min_g
        << "); increase epsilon or r";
    throw CertificateInfeasible(msg.str());
  }
  PreorderingCertificate cert;
  cert.domain = plan.domain;
  cert.r = plan.r;
  cert.epsilon = plan.epsilon;
  cert.lambda_shift = plan.lambda_shift;
  const int n = plan.domain.n;
  if (!plan.kernel) {
    SquareDecomposition dec;
    dec.nvars = n;
    dec.degree = 0;
    const double c = std::max(plan.min_g, 0.0);
    if (c > 0) dec.pieces.push_back({c, {1.0}, {0.0}});
    cert.sigma[{}] = dec;
    return cert;
  }
  const KernelSosBuilder builder(*plan.kernel);
  const CubatureRule& rule = *plan.rule;
  std::vector<FixedYKernelSOS> per_node(rule.size());
  std::vector<double> scale(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) scale[i] = rule.weights[i] * std::max(plan.g_values[i], 0.0);
  parallel_for(
      rule.size(),
      [&](std::size_t i) {
        if (scale[i] > 0) per_node[i] = builder.build(rule.points[i]);
      },
      threads);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (auto& [J, dec] : per_node[i].terms) {
      SquareDecomposition& dst = cert.sigma[J];
      dst.nvars = n;
      dst.degree = plan.r;
      for (auto& pc : dec.pieces) {
        pc.weight *= scale[i];
        if (pc.weight > 0) dst.pieces.push_back(std::move(pc));
      }
    }
    per_node[i] = FixedYKernelSOS{};
  }
  std::erase_if(cert.sigma, [](const auto& kv) { return kv.second.pieces.empty(); });
  return cert;
}

PreorderingCertificate synthesize(const MultiPoly& f, double lambda_shift, double epsilon, int r,
                                  const DomainMeasure& domain, int threads) {
  return assemble(plan_synthesis(f, lambda_shift, epsilon, r, domain), threads);
}

VerifyReport verify(const PreorderingCertificate& cert, const MultiPoly& f, int samples) {
  if (samples < 1) throw InvalidArgument("samples must be positive");
  if (f.nvars() != cert.domain.nvars()) throw DimensionMismatch("polynomial and certificate dimension differ");
  VerifyReport rep;
  const int n = cert.domain.n;
  const int m = generator_count(cert.domain);

  struct Prepared {
    const GeneratorSet* J;
    int degree;
    std::vector<Monomial> monos;
    std::vector<std::vector<quad>> coeffs;
    std::vector<quad> weights;
  };
  std::vector<Prepared> prepared;
  for (const auto& [J, dec] : cert.sigma) {
    for (int j : J)
      if (j < 1 || j > m) rep.degree_ok = false;
    if (dec.nvars != n) rep.degree_ok = false;
    Prepared p{&J, dec.degree, monomials_up_to(n, dec.degree), {}, {}};
    int max_root = -1;
    for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
      const auto& pc = dec.pieces[i];
      if (!(pc.weight >= 0) || !std::isfinite(pc.weight)) rep.sos_ok = false;
      if (pc.hi.size() != p.monos.size() || (!pc.lo.empty() && pc.lo.size() != p.monos.size())) {
        rep.sos_ok = false;
        continue;
      }
      std::vector<quad> c(p.monos.size());
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (!std::isfinite(pc.hi[k]) || (!pc.lo.empty() && !std::isfinite(pc.lo[k]))) rep.sos_ok = false;
        c[k] = static_cast<quad>(pc.hi[k]) + (pc.lo.empty() ? quad(0) : static_cast<quad>(pc.lo[k]));
        if (c[k] != 0) max_root = std::max(max_root, total_degree(p.monos[k]));
      }
      p.coeffs.push_back(std::move(c));
      p.weights.push_back(pc.weight);
    }
    if (max_root >= 0) {
      const int deg = 2 * max_root + generator_degree(cert.domain, J);
      rep.max_degree = std::max(rep.max_degree, deg);
      if (deg > 2 * cert.r) rep.degree_ok = false;
    }
    prepared.push_back(std::move(p));
  }

  const auto pts = domain_samples(cert.domain, samples);
  rep.samples = static_cast<int>(pts.size());
  const quad shift = static_cast<quad>(cert.epsilon) - static_cast<quad>(cert.lambda_shift);
  for (const Point& x : pts) {
    const auto xq = to_quad(x);
    const quad target = f.evaluate<quad>(xq) + shift;
    quad total = 0;
    for (const auto& p : prepared) {
      const auto mv = values_of(p.monos, n, p.degree, xq);
      quad sigma = 0;
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        quad s = 0;
        const auto& c = p.coeffs[i];
        for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * mv[k];
        sigma += p.weights[i] * s * s;
      }
      total += generator_product_value(cert.domain, *p.J, xq) * sigma;
    }
    rep.max_residual = std::max(rep.max_residual, static_cast<double>(abs_value(target - total)));
  }
  return rep;
}

namespace {

nlohmann::json dense_to_json(int nvars, const std::vector<Monomial>& monos, const std::vector<double>& c) {
  MultiPoly p(nvars);
  for (std::size_t k = 0; k < monos.size() && k < c.size(); ++k) p.add_term(monos[k], c[k]);
  return poly_to_json(p);
}

std::vector<double> json_to_dense(const nlohmann::json& j, int nvars, int degree,
                                  const std::vector<Monomial>& monos) {
  const MultiPoly p = poly_from_json(j);
  if (p.nvars() != nvars) throw ParseError("square has the wrong number of variables");
  if (p.degree() > degree) throw ParseError("square exceeds its declared degree");
  std::vector<double> out(monos.size(), 0.0);
  for (std::size_t k = 0; k < monos.size(); ++k) out[k] = p.coefficient(monos[k]);
  return out;
}

}  // namespace

nlohmann::json certificate_to_json(const PreorderingCertificate& cert) {
  nlohmann::json sigma = nlohmann::json::object();
  for (const auto& [J, dec] : cert.sigma) {
    const auto monos = monomials_up_to(dec.nvars, dec.degree);
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& pc : dec.pieces) {
      nlohmann::json jp = {{"w", pc.weight}, {"poly", dense_to_json(dec.nvars, monos, pc.hi)}};
      bool any_lo = false;
      for (double v : pc.lo) any_lo = any_lo || v != 0.0;
      if (any_lo) jp["lo"] = dense_to_json(dec.nvars, monos, pc.lo);
      pieces.push_back(std::move(jp));
    }
    sigma[generator_key(J)] = {{"degree", dec.degree}, {"pieces", pieces}};
  }
  return {{"domain", cert.domain.name()},   {"n", cert.domain.n},
          {"r", cert.r},                     {"epsilon", cert.epsilon},
          {"lambda_shift", cert.lambda_shift}, {"shift_heuristic", cert.shift_heuristic},
          {"sigma", sigma}};
}

PreorderingCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    PreorderingCertificate cert;
    cert.domain = parse_domain(j.at("domain").get<std::string>(), j.at("n").get<int>());
    cert.r = j.at("r").get<int>();
    cert.epsilon = j.at("epsilon").get<double>();
    cert.lambda_shift = j.at("lambda_shift").get<double>();
    cert.shift_heuristic = j.value("shift_heuristic", false);
    const int n = cert.domain.n;
    for (const auto& [key, jd] : j.at("sigma").items()) {
      const GeneratorSet J = parse_generator_key(key);
      SquareDecomposition dec;
      dec.nvars = n;
      int degree = jd.value("degree", -1);
      if (degree < 0)
        for (const auto& jp : jd.at("pieces")) degree = std::max(degree, poly_from_json(jp.at("poly")).degree());
      dec.degree = std::max(degree, 0);
      const auto monos = monomials_up_to(n, dec.degree);
      for (const auto& jp : jd.at("pieces")) {
        SquarePiece pc;
        pc.weight = jp.at("w").get<double>();
        pc.hi = json_to_dense(jp.at("poly"), n, dec.degree, monos);
        pc.lo = jp.contains("lo") ? json_to_dense(jp.at("lo"), n, dec.degree, monos)
                                  : std::vector<double>(monos.size(), 0.0);
        dec.pieces.push_back(std::move(pc));
      }
      cert.sigma[J] = std::move(dec);
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad certificate JSON: ") + e.what());
  }
}

nlohmann::json verify_report_to_json(const VerifyReport& rep) {
  return {{"max_residual", rep.max_residual}, {"degree_ok", rep.degree_ok}, {"sos_ok", rep.sos_ok},
          {"samples", rep.samples},           {"max_degree", rep.max_degree}};
}

double default_shift(const MultiPoly& f, const DomainMeasure& domain) {
  double best = sample_minimum(f, domain, 4000).second;
  const int d = std::max(f.degree(), 1);
  for (const Point& y : cubature(domain, 2 * d + 8).points) best = std::min(best, f.evaluate<double>(y));
  return best - 1e-8;
}

}  // namespace possum
