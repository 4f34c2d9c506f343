#pragma once

// Subcommands of the cc4 tool. Each returns the process exit status and
// writes its JSON (or plain) report to `out`.

#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "cc4/core.hpp"

namespace cc4::cli {

inline constexpr const char* kSchemaVersion = "1.0";

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInfeasible = 3,
  kDegenerate = 4,
  kIo = 5,
  kVerificationFailed = 6,
};

/// Thresholds used to decide exit 0 vs 6.
inline constexpr double kResidualTolerance = 1e-9;
inline constexpr double kDriftThreshold = 1e-6;

/// CC4_EPS_SIGN if set (must parse as a non-negative number), else 1e-9.
/// Throws InvalidInput on a malformed value.
double eps_sign_from_env();

struct SolveOptions {
  double s = 0.0;
  double t = 0.0;
  double lambda = kDefaultLambda;
  bool plain = false;
};

struct SpecialOptions {
  double lambda = kDefaultLambda;
  std::optional<double> m2;
  std::optional<double> m4;
  bool plain = false;
};

struct ScanOptions {
  double s_min = 0.01;
  double s_max = 2.5;
  double t_min = 0.02;
  double t_max = 4.5;
  int resolution = 512;
  double lambda = kDefaultLambda;
  std::string out;
};

struct CurvesOptions {
  std::string curve = "all";
  int n = 200;
  std::optional<double> s_min;
  std::optional<double> s_max;
  std::string out;
};

struct SimulateOptions {
  double s = 0.0;
  double t = 0.0;
  double lambda = kDefaultLambda;
  int periods = 1;
  int steps_per_period = 20000;
  int every = 1;
  std::string out;
};

int run_solve(const SolveOptions& options, std::ostream& out);
int run_special(const SpecialOptions& options, std::ostream& out);
int run_scan(const ScanOptions& options, std::ostream& out);
int run_curves(const CurvesOptions& options, std::ostream& out);
int run_simulate(const SimulateOptions& options, std::ostream& out);

/// Full command-line entry point (argv[0] is the program name).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Envelope shared by every command.
nlohmann::json envelope(const std::string& command, nlohmann::json inputs);

}  // namespace cc4::cli
