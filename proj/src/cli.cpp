#include "possum/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "possum/bounds.hpp"
#include "possum/certify.hpp"
#include "possum/kernels.hpp"
#include "possum/parallel.hpp"

namespace possum::cli {

namespace {

using nlohmann::json;

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Infeasible: return "infeasible";
    case ErrorCategory::Input: return "input";
    case ErrorCategory::Numerical: return "numerical";
  }
  return "unknown";
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Infeasible: return 1;
    case ErrorCategory::Input: return 2;
    case ErrorCategory::Numerical: return 3;
  }
  return 3;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& category,
                  const std::string& message) {
  err << json{{"error", kind}, {"category", category}, {"message", message}}.dump() << "\n";
}

template <class T>
const T& need(const std::optional<T>& v, const char* flag) {
  if (!v) throw InvalidArgument(std::string("missing required option ") + flag);
  return *v;
}

void need_path(const std::string& p, const char* flag) {
  if (p.empty()) throw InvalidArgument(std::string("missing required option ") + flag);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw InvalidArgument("cannot write " + path);
  o << text;
  if (!o) throw InvalidArgument("failed writing " + path);
}

// Writes to path when given, otherwise to out.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_text(path, text);
}

struct Problem {
  DomainMeasure domain;
  MultiPoly f;
};

Problem load_problem(const RunConfig& c) {
  need_path(c.f_path, "--f");
  const DomainMeasure domain = parse_domain(c.domain, need(c.n, "--n"));
  if (domain.kind == DomainKind::Sphere) throw InvalidArgument("certificates and bounds need ball or simplex");
  MultiPoly f = read_poly_file(c.f_path);
  if (f.nvars() != domain.n) throw DimensionMismatch("polynomial has " + std::to_string(f.nvars()) +
                                                     " variables, domain has " + std::to_string(domain.n));
  if (c.d && f.degree() > *c.d) throw InvalidArgument("polynomial degree exceeds --d");
  return {domain, std::move(f)};
}

BoundOptions bound_options(const RunConfig& c) {
  BoundOptions o;
  if (c.xstar) o.xstar = *c.xstar;
  o.lambda_shift = c.shift;
  o.fmax_minus_fmin = c.range;
  o.bisect = c.bisect;
  return o;
}

int run_certify(const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(c);
  const int r = need(c.r, "--r");
  const int d = std::max(p.f.degree(), 0);
  const bool heuristic_shift = !c.shift;
  const double shift = c.shift ? *c.shift : default_shift(p.f, p.domain);
  const bool heuristic_range = !c.range;
  const double range = c.range ? *c.range : estimate_range(p.f, p.domain);

  double eps = 0.0;
  std::string eps_mode = c.eps;
  if (c.eps == "auto" || c.eps == "bisect") {
    const double theo = d == 0 ? 0.0 : theoretical_epsilon(p.domain.n, d, r, p.domain, range);
    eps = theo;
    if (c.eps == "bisect") {
      eps = minimal_feasible_epsilon(p.f, shift, r, p.domain, 2.0 * theo);
      if (!std::isfinite(eps)) throw CertificateInfeasible("no feasible epsilon in [0, 2 * theoretical]");
    }
  } else {
    std::size_t used = 0;
    try {
      eps = std::stod(c.eps, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != c.eps.size() || !(eps >= 0)) throw InvalidArgument("--eps must be auto, bisect or a number >= 0");
    eps_mode = "explicit";
  }

  PreorderingCertificate cert = synthesize(p.f, shift, eps, r, p.domain);
  cert.shift_heuristic = heuristic_shift;
  const VerifyReport rep = verify(cert, p.f, c.samples);

  write_text(c.out_path.empty() ? "cert.json" : c.out_path, certificate_to_json(cert).dump() + "\n");
  json j = verify_report_to_json(rep);
  j["epsilon"] = eps;
  j["eps_mode"] = eps_mode;
  j["lambda_shift"] = shift;
  j["pieces"] = cert.piece_count();
  j["heuristic"] = {{"lambda_shift", heuristic_shift}, {"fmax_minus_fmin", heuristic_range}};
  const std::string text = j.dump() + "\n";
  if (!c.report_path.empty()) write_text(c.report_path, text);
  out << text;
  if (!rep.ok()) throw ConditioningFailure("assembled certificate fails verification");
  return 0;
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  need_path(c.cert_path, "--cert");
  need_path(c.f_path, "--f");
  const PreorderingCertificate cert = certificate_from_json(read_json(c.cert_path));
  const MultiPoly f = read_poly_file(c.f_path);
  if (f.nvars() != cert.domain.n) throw DimensionMismatch("polynomial and certificate dimension differ");
  const VerifyReport rep = verify(cert, f, c.samples);
  emit(c.out_path, verify_report_to_json(rep).dump() + "\n", out);
  if (!rep.ok()) {
    report_error(err, "VerificationFailed", "infeasible", "certificate does not represent f");
    return 1;
  }
  return 0;
}

int run_bounds(const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(c);
  const BoundReport rep = compute_bounds(p.f, need(c.r, "--r"), p.domain, bound_options(c));
  emit(c.out_path, bound_report_to_json(rep).dump() + "\n", out);
  return 0;
}

int run_study(const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(c);
  if (c.r_range.empty()) throw InvalidArgument("missing required option --r (start:stop:step)");
  const StudyResult s = convergence_study(p.f, p.domain, parse_r_range(c.r_range), bound_options(c));
  emit(c.out_path, study_to_csv(s), out);
  if (!c.summary_path.empty()) write_text(c.summary_path, study_summary_json(s).dump() + "\n");
  return 0;
}

int run_kernel_check(const RunConfig& c, std::ostream& out) {
  const DomainMeasure domain = parse_domain(c.domain, need(c.n, "--n"));
  const int r = need(c.r, "--r");
  json j = {{"domain", domain.name()}, {"n", domain.n}, {"r", r}};
  j["reproducing_error"] = reproducing_check(domain, r, c.trials, c.seed);
  if (domain.kind != DomainKind::Sphere) {
    j["kmax"] = c.kmax;
    j["closed_form_error"] = closed_form_error(domain, c.kmax, c.trials, c.seed);
  }
  emit(c.out_path, j.dump() + "\n", out);
  return 0;
}

}  // namespace

std::vector<int> parse_r_range(const std::string& spec) {
  std::vector<int> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw ParseError("bad r range '" + spec + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) parts = {parts[0], parts[0], 1};
  if (parts.size() == 2) parts.push_back(1);
  if (parts.size() != 3 || parts[2] < 1 || parts[0] < 0 || parts[1] < parts[0])
    throw ParseError("r range must be start:stop:step with 0 <= start <= stop and step >= 1");
  std::vector<int> out;
  for (int r = parts[0]; r <= parts[1]; r += parts[2]) out.push_back(r);
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "certify") return run_certify(config, out);
    if (config.command == "verify") return run_verify(config, out, err);
    if (config.command == "bounds") return run_bounds(config, out);
    if (config.command == "study") return run_study(config, out);
    if (config.command == "kernel-check") return run_kernel_check(config, out);
    throw InvalidArgument("unknown command '" + config.command + "'");
  } catch (const Error& e) {
    report_error(err, e.kind(), category_name(e.category()), e.what());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", "numerical", e.what());
    return 3;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-squares certificates and bounds on the ball and simplex"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--domain", c.domain, "ball or simplex");
    s->add_option("--n", c.n, "dimension");
    s->add_option("--f", c.f_path, "polynomial JSON {nvars, terms: [{exp, c}]}");
  };
  auto certify = app.add_subcommand("certify", "synthesize and verify a certificate");
  common(certify);
  certify->add_option("--out", c.out_path, "certificate path (default cert.json)");
  certify->add_option("--r", c.r, "half degree of the certificate");
  certify->add_option("--d", c.d, "degree bound for f");
  certify->add_option("--eps", c.eps, "auto, bisect or a number");
  certify->add_option("--shift", c.shift, "lower bound lambda to certify f - lambda + eps");
  certify->add_option("--range", c.range, "f_max - f_min");
  certify->add_option("--samples", c.samples, "verification samples");
  certify->add_option("--report", c.report_path, "also write the verification report here");

  auto verify_cmd = app.add_subcommand("verify", "check a certificate against f");
  verify_cmd->add_option("--cert", c.cert_path, "certificate JSON");
  verify_cmd->add_option("--f", c.f_path, "polynomial JSON");
  verify_cmd->add_option("--samples", c.samples, "verification samples");
  verify_cmd->add_option("--out", c.out_path, "report path (stdout when omitted)");

  auto bounds = app.add_subcommand("bounds", "theoretical and empirical bounds");
  common(bounds);
  bounds->add_option("--out", c.out_path, "output path (stdout when omitted)");
  bounds->add_option("--r", c.r, "half degree");
  bounds->add_option("--shift", c.shift, "lambda shift for bisection");
  bounds->add_option("--range", c.range, "f_max - f_min");
  bounds->add_option("--xstar", c.xstar, "minimizer, comma separated")->delimiter(',');
  bounds->add_flag("!--no-bisect", c.bisect, "skip the epsilon bisection");

  auto study = app.add_subcommand("study", "convergence table over r");
  common(study);
  study->add_option("--out", c.out_path, "CSV path (stdout when omitted)");
  study->add_option("--r", c.r_range, "start:stop:step");
  study->add_option("--shift", c.shift, "lambda shift for bisection");
  study->add_option("--range", c.range, "f_max - f_min");
  study->add_option("--xstar", c.xstar, "minimizer, comma separated")->delimiter(',');
  study->add_option("--summary", c.summary_path, "slope summary JSON");
  study->add_flag("!--no-bisect", c.bisect, "skip the epsilon bisection");

  auto kcheck = app.add_subcommand("kernel-check", "reproducing and closed-form kernel errors");
  kcheck->add_option("--domain", c.domain, "ball, simplex or sphere");
  kcheck->add_option("--n", c.n, "dimension");
  kcheck->add_option("--r", c.r, "kernel degree");
  kcheck->add_option("--kmax", c.kmax, "highest component compared with the basis");
  kcheck->add_option("--trials", c.trials, "random trials");
  kcheck->add_option("--seed", c.seed, "random seed");
  kcheck->add_option("--out", c.out_path, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error(std::cerr, "ParseError", "input", e.what());
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, std::cout, std::cerr);
}

}  // namespace possum::cli
