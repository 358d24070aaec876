#pragma once

// Run configuration, sweep rows and the JSON / CSV emitters behind the
// command-line driver. Every record carries an anchor string naming the
// quantity it reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lane_emden/limit_theory.hpp"
#include "lane_emden/spectral.hpp"

namespace lane_emden {

inline constexpr int kSchemaVersion = 1;

enum class Command { Solve, Spectrum, Morse, Sweep, LimitCheck };
enum class OutputFormat { Json, Csv };

enum ExitCode : int {
  kExitOk = 0,
  kExitSolverFailure = 1,
  kExitCheckFailure = 2,
  kExitBadConfig = 3,
};

const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& s);

struct RunConfig {
  Command command = Command::Solve;
  std::vector<double> p_list{400.0};
  int N = 2;
  int grid_M = 0;  ///< 0: step-based grid
  double grid_step = MorseConfig{}.grid_step;
  /// "auto", "log:<ln a>" or "radius:<a>".
  std::string inner_rule = "auto";
  double tol_shoot = 1e-9;
  double tol_eig = 1e-10;
  double ell = kReferenceEll;
  double R = 10.0;
  int eig_count = 4;
  OutputFormat format = OutputFormat::Json;
  std::string out = "-";

  /// Throws Error(InvalidInput) naming every violated constraint.
  void validate() const;
  MorseConfig morse_config() const;
};

struct SweepRow {
  double p = 0.0;
  double u0 = 0.0;
  double r_p = 0.0;
  double s_p = 0.0;
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  double ell_hat = 0.0;
  double max_plus = 0.0;
  double max_minus = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  int m_rad = 0;
  std::int64_t morse_total = 0;
  std::string status = "ok";  ///< "ok" or "<error kind>: <message>"
};

/// One pipeline solve -> scales -> f_p -> Morse index for a single p.
/// Solver errors are captured in `status`.
SweepRow compute_row(double p, const RunConfig& cfg);

/// Rows in p_list order; rows run concurrently.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string document;  ///< JSON or CSV text
  std::string message;   ///< diagnostics for stderr
};

/// Executes the configured command; never throws for solver errors.
RunOutcome run(const RunConfig& cfg);

/// %.15g rendering used for every emitted number.
std::string format_number(double x);

}  // namespace lane_emden
