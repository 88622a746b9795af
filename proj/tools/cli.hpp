#ifndef GVFLAT_TOOLS_CLI_HPP
#define GVFLAT_TOOLS_CLI_HPP

#include <complex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gvflat/bps.hpp"
#include "gvflat/genus0.hpp"
#include "gvflat/potentials.hpp"

namespace gvflat::cli {

/// Exit codes of the command-line tool.
enum ExitCode { kSuccess = 0, kCheckFailure = 1, kConfigError = 2 };

/// Invalid or unreadable configuration. The message carries the field path
/// or the parse location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GvEntry {
  int g = 0;
  int d = 1;
  long n = 0;
};

struct BernoulliMutation {
  int index = 4;  // B_index is replaced by B_index + delta
  Rational delta = Rational(1) / 7;
  bool on_potential_side = true;
};

struct RunConfig {
  std::vector<GvEntry> gv;
  std::vector<double> B{0.3};
  std::vector<double> omega{1.0};
  Complex G{1.0, 0.0};
  std::vector<std::int64_t> beta{1};
  std::optional<Complex> v_override;
  std::string experiment;
  int degree = 1;

  double quad_rel = 1e-10;  // flat-section and genus-0 quadratures
  double quad_abs = 1e-14;
  double check_tol = 1e-4;
  double reconstruct_tol = 1e-3;

  double eps_start = 0.2;
  double eps_ratio = 0.5;
  int eps_count = 9;

  int q_lo = -10;
  int q_hi = 10;

  int max_degree = 4;
  int g_max = 6;
  int n_q = 8;
  int j_max = 4;

  std::optional<long> theorem1_n0;
  GvVariable theorem1_variable = GvVariable::Imaginary;
  std::optional<BernoulliMutation> mutation;

  Theorem2Convention convention = Theorem2Convention::Derived;

  int vanishing_m = 1;
  std::vector<int> vanishing_ranks{1};
  double lambda_start = 1.0;
  double lambda_stop = 1000.0;
  int lambda_count = 7;
  Complex vanishing_t{1.0, 0.0};

  std::vector<double> genus0_t{0.01, 0.0159};
  int genus0_K = 4000;
  int genus0_N = 40;

  int threads = 1;
  std::string output = "out";

  GvTable gv_table() const;
  /// v_beta from the override or from geometry and beta.
  Complex v() const;
  std::vector<double> eps_grid() const;
  std::vector<double> lambdas() const;
  QuadOptions quad() const;
};

/// Parses and validates a JSON config document. Throws ConfigError.
RunConfig parse_config(const std::string& text);

using Cell = std::variant<long, double, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

struct CommandResult {
  std::vector<Table> tables;
  bool pass = true;
};

CommandResult cmd_bps(const RunConfig& cfg);
CommandResult cmd_theorem1(const RunConfig& cfg);
CommandResult cmd_asymptotics(const RunConfig& cfg);
CommandResult cmd_reconstruct(const RunConfig& cfg);
CommandResult cmd_vanishing(const RunConfig& cfg);
CommandResult cmd_genus0(const RunConfig& cfg);

/// Full command-line entry point; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gvflat::cli

#endif
