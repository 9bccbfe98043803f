#pragma once

// Monte Carlo revenue tables: draw Y, classify the equilibrium regime, and
// average the closed-form revenues per class.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tworound {

enum class YSampler {
  /// Independent U(0,1) entries normalized by their sum.
  kNormalizedUniform,
  /// Uniform on the simplex (normalized unit exponentials).
  kDirichlet,
};

const char* to_string(YSampler s);
YSampler parse_sampler(const std::string& name);

using Valuation = std::array<double, 3>;

struct ExperimentConfig {
  std::vector<Valuation> valuations;
  std::vector<int> thetas;
  int draws = 10'000;
  /// Random-valuation table only.
  int valuation_draws = 1'000;
  double valuation_max = 1'000.0;
  std::uint64_t seed = 42;
  YSampler sampler = YSampler::kNormalizedUniform;
  int first_id = 1;
  bool parallel = true;

  void validate() const;

  static ExperimentConfig gap_table();
  static ExperimentConfig theta_table();
  static ExperimentConfig random_valuation_table();
  /// 2, 3 or 4.
  static ExperimentConfig for_table(int table);
};

/// Tallies for one (valuation, theta) cell.
struct CellStats {
  long draws = 0;
  /// Sorted draws with a tie, which the ordering constraint rejects.
  long unordered = 0;
  /// Draws within 1e-9 of the regime boundary.
  long indeterminate = 0;
  long risky_count = 0;
  long truthful_count = 0;
  double risky_sum = 0.0;
  double truthful_sum = 0.0;
  double risky_max = 0.0;
  double truthful_max = 0.0;

  long retained() const noexcept { return risky_count + truthful_count; }
};

struct CellSpec {
  Valuation v{};
  int theta = 3;
  int draws = 10'000;
  std::uint64_t seed = 42;
  YSampler sampler = YSampler::kNormalizedUniform;
};

/// Per-draw streams are keyed by (seed, theta, v, draw index), so both
/// kernels return identical tallies.
CellStats run_cell_serial(const CellSpec& spec);
CellStats run_cell_parallel(const CellSpec& spec);

struct ExperimentRow {
  int id = 0;
  /// Absent for the random-valuation table.
  std::optional<Valuation> v;
  int theta = 0;
  long risky_count = 0;
  std::optional<double> risky_avg;
  long truthful_count = 0;
  std::optional<double> truthful_avg;
  std::optional<double> increment_pct;

  // Bookkeeping beyond the CSV columns.
  long raw_draws = 0;
  long unordered = 0;
  long indeterminate = 0;
  /// Random-valuation table: valuations drawn and valuations skipped for an
  /// empty class or a degenerate ratio.
  long valuations_total = 0;
  long valuations_skipped = 0;
};

std::vector<ExperimentRow> run_gap_experiment(const ExperimentConfig& config);
std::vector<ExperimentRow> run_theta_experiment(const ExperimentConfig& config);
std::vector<ExperimentRow> run_random_valuation_experiment(const ExperimentConfig& config);
std::vector<ExperimentRow> run_table(int table, const ExperimentConfig& config);

/// Valuation k of the random-valuation table, sorted descending.
Valuation random_valuation(std::uint64_t seed, long index, double max_value);

}  // namespace tworound
