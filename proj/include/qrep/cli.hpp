#pragma once

// Sweep driver behind the qrep2d command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qrep/connection.hpp"
#include "qrep/ion_platform.hpp"

namespace qrep::cli {

enum class Command {
  kThreshold,
  kQMinCurve,
  kConnectLevels,
  kMaxDistance,
  kMbRegion,
  kIonRates,
  kIonFidelity,
  kStorage,
};

std::string_view to_string(Command c);

enum class Format { kCsv, kJson };

struct SweepConfig {
  Command command = Command::kThreshold;
  std::vector<std::string> schemes{"alternating"};  // threshold, q-min-curve
  std::vector<double> p{0.99};
  std::vector<double> q;  // empty: q = p (connect-levels) or 1 (max-distance)
  std::vector<int> n{1};  // connection levels
  std::vector<int> m{1};  // MB purification rounds
  std::vector<double> distance_km{1000.0};
  std::vector<int> links{4, 8, 16};
  std::vector<std::string> strategies{"multipartite-full", "bipartite-full",
                                      "bipartite-reduced"};
  ConnectMode mode = ConnectMode::kProbabilistic;
  bool solve_q = false;  // connect-levels: report q_th(n, p) instead
  double tol = 1e-4;
  double p_suc = 1.0;
  std::uint64_t trials = 10000;  // Monte Carlo trials for ion-rates
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  IonParams ion;
  Format format = Format::kCsv;
  std::string output;  // empty: stdout or $QREP_OUTPUT_DIR/<command>.<ext>

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct ResultTable {
  /// Column names carry units in brackets: [1] dimensionless, [km], [s].
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Rows come out in grid order whatever the job count. Failures of single
/// points (divergence, degenerate states) land in the row's status column.
ResultTable run(const SweepConfig& config);

/// Expands a grid token list: plain numbers, or start:stop:step ranges
/// (stop included within half a step). Throws ConfigError on bad tokens.
std::vector<double> expand_grid(const std::vector<std::string>& tokens, const char* field);

void write_csv(std::ostream& out, const ResultTable& table);
/// One JSON object per row.
void write_json_lines(std::ostream& out, const ResultTable& table);

/// Full command-line entry point. Returns 0 on success, 1 on internal
/// errors and 2 on usage or configuration errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrep::cli
