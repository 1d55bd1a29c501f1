#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace possum::cli {

struct RunConfig {
  std::string command;  // certify, verify, bounds, study, kernel-check
  std::string domain = "ball";
  std::optional<int> n, d, r;
  std::string eps = "auto";  // auto | bisect | number
  std::optional<double> shift;
  std::optional<double> range;   // f_max - f_min
  std::optional<std::vector<double>> xstar;
  std::string f_path, cert_path, out_path, report_path, summary_path;
  std::string r_range;  // start:stop:step
  int samples = 200;
  int trials = 20;
  int kmax = 6;
  bool bisect = true;
  std::uint64_t seed = 1;
};

// start:stop:step, inclusive of stop when reached.
std::vector<int> parse_r_range(const std::string& spec);

// Validates required fields, runs the command and returns the process exit code.
// Errors are reported as one JSON object on err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv with CLI11 and dispatches to run.
int main(int argc, char** argv);

}  // namespace possum::cli
