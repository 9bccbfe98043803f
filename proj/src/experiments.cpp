#include "tworound/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "tworound/equilibrium.hpp"
#include "tworound/errors.hpp"
#include "tworound/rng.hpp"
#include "tworound/selection.hpp"

namespace tworound {

const char* to_string(YSampler s) {
  return s == YSampler::kNormalizedUniform ? "normalized-uniform" : "dirichlet";
}

YSampler parse_sampler(const std::string& name) {
  if (name == "normalized-uniform") return YSampler::kNormalizedUniform;
  if (name == "dirichlet") return YSampler::kDirichlet;
  raise(ErrorKind::kInvalidArgument, "unknown sampler '" + name + "' (normalized-uniform | dirichlet)");
}

namespace {

constexpr std::uint64_t kCellTag = 0x63656c6cULL;
constexpr std::uint64_t kValuationTag = 0x76616c75ULL;

void check_valuation(const Valuation& v) {
  if (!(v[0] >= v[1] && v[1] >= v[2] && v[2] > 0.0)) {
    raise(ErrorKind::kInvalidArgument, "valuations must satisfy v1 >= v2 >= v3 > 0");
  }
  if (v[1] == v[2]) raise(ErrorKind::kDegenerateRatio, "v2 == v3 leaves the classification undefined");
}

void check_theta(int theta) {
  if (theta < 3 || theta > kMaxTheta) raise(ErrorKind::kInvalidArgument, "theta must be in [3, 20]");
}

enum class DrawClass : unsigned char { kUnordered, kIndeterminate, kRisky, kTruthful };

struct DrawOutcome {
  DrawClass cls = DrawClass::kUnordered;
  double revenue = 0.0;
};

std::uint64_t draw_seed(const CellSpec& spec, long draw) {
  return derive_seed(spec.seed, {kCellTag, static_cast<std::uint64_t>(spec.theta), std::bit_cast<std::uint64_t>(spec.v[0]),
                                 std::bit_cast<std::uint64_t>(spec.v[1]), std::bit_cast<std::uint64_t>(spec.v[2]),
                                 static_cast<std::uint64_t>(draw)});
}

DrawOutcome run_draw(const CellSpec& spec, long draw) {
  SplitMix64 rng(draw_seed(spec, draw));
  auto y = spec.sampler == YSampler::kNormalizedUniform ? sample_normalized_uniform(spec.theta, rng)
                                                         : sample_simplex(spec.theta, rng);
  std::sort(y.begin(), y.end(), std::greater<>());
  const ExclusionY ey(std::move(y));
  if (!ey.ordered() || !ey.within_bounds()) return {};
  const auto c = n11_classify(spec.v[0], spec.v[1], spec.v[2], ey);
  if (c.indeterminate) return {DrawClass::kIndeterminate, 0.0};
  if (c.risky_ne) return {DrawClass::kRisky, n11_revenue(N11Rank::kRisky, spec.v[0], spec.v[1], spec.v[2], ey)};
  return {DrawClass::kTruthful, n11_revenue(N11Rank::kTruthful, spec.v[0], spec.v[1], spec.v[2], ey)};
}

void tally(CellStats& s, const DrawOutcome& d) {
  ++s.draws;
  switch (d.cls) {
    case DrawClass::kUnordered: ++s.unordered; break;
    case DrawClass::kIndeterminate: ++s.indeterminate; break;
    case DrawClass::kRisky:
      ++s.risky_count;
      s.risky_sum += d.revenue;
      s.risky_max = std::max(s.risky_max, d.revenue);
      break;
    case DrawClass::kTruthful:
      ++s.truthful_count;
      s.truthful_sum += d.revenue;
      s.truthful_max = std::max(s.truthful_max, d.revenue);
      break;
  }
}

void check_spec(const CellSpec& spec) {
  check_valuation(spec.v);
  check_theta(spec.theta);
  if (spec.draws < 1) raise(ErrorKind::kInvalidArgument, "draws must be >= 1");
}

std::optional<double> increment(const ExperimentRow& row) {
  if (!row.risky_avg || !row.truthful_avg) return std::nullopt;
  return 100.0 * (*row.risky_avg - *row.truthful_avg) / *row.truthful_avg;
}

ExperimentRow row_from_cell(int id, const Valuation& v, int theta, const CellStats& s) {
  ExperimentRow row;
  row.id = id;
  row.v = v;
  row.theta = theta;
  row.raw_draws = s.draws;
  row.unordered = s.unordered;
  row.indeterminate = s.indeterminate;
  row.risky_count = s.risky_count;
  row.truthful_count = s.truthful_count;
  if (s.risky_count > 0) row.risky_avg = s.risky_sum / static_cast<double>(s.risky_count);
  if (s.truthful_count > 0) row.truthful_avg = s.truthful_sum / static_cast<double>(s.truthful_count);
  row.increment_pct = increment(row);
  return row;
}

CellStats run_cell(const CellSpec& spec, bool parallel) {
  return parallel ? run_cell_parallel(spec) : run_cell_serial(spec);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (draws < 1) raise(ErrorKind::kInvalidArgument, "draws must be >= 1");
  if (valuation_draws < 1) raise(ErrorKind::kInvalidArgument, "valuation_draws must be >= 1");
  if (!(valuation_max > 0.0)) raise(ErrorKind::kInvalidArgument, "valuation_max must be positive");
  if (thetas.empty()) raise(ErrorKind::kInvalidArgument, "at least one theta is required");
  for (int t : thetas) check_theta(t);
  for (const auto& v : valuations) check_valuation(v);
}

ExperimentConfig ExperimentConfig::gap_table() {
  ExperimentConfig c;
  c.valuations = {{450, 350, 200}, {450, 400, 200}, {450, 425, 200}, {450, 440, 200}};
  c.thetas = {3};
  c.first_id = 1;
  return c;
}

ExperimentConfig ExperimentConfig::theta_table() {
  ExperimentConfig c;
  c.valuations = {{450, 400, 200}};
  c.thetas = {3, 4, 5, 6};
  c.first_id = 5;
  return c;
}

ExperimentConfig ExperimentConfig::random_valuation_table() {
  ExperimentConfig c;
  c.thetas = {3, 4, 5, 6};
  c.first_id = 9;
  return c;
}

ExperimentConfig ExperimentConfig::for_table(int table) {
  switch (table) {
    case 2: return gap_table();
    case 3: return theta_table();
    case 4: return random_valuation_table();
    default: raise(ErrorKind::kInvalidArgument, "table must be 2, 3 or 4");
  }
}

CellStats run_cell_serial(const CellSpec& spec) {
  check_spec(spec);
  CellStats s;
  for (long d = 0; d < spec.draws; ++d) tally(s, run_draw(spec, d));
  return s;
}

CellStats run_cell_parallel(const CellSpec& spec) {
  check_spec(spec);
  std::vector<DrawOutcome> out(static_cast<std::size_t>(spec.draws));
  const long draws = spec.draws;
#if defined(TWOROUND_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (long d = 0; d < draws; ++d) out[static_cast<std::size_t>(d)] = run_draw(spec, d);
  CellStats s;
  for (const auto& d : out) tally(s, d);
  return s;
}

std::vector<ExperimentRow> run_gap_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRow> rows;
  int id = config.first_id;
  for (const auto& v : config.valuations) {
    for (int theta : config.thetas) {
      const CellSpec spec{v, theta, config.draws, config.seed, config.sampler};
      rows.push_back(row_from_cell(id++, v, theta, run_cell(spec, config.parallel)));
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_theta_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRow> rows;
  int id = config.first_id;
  for (int theta : config.thetas) {
    for (const auto& v : config.valuations) {
      const CellSpec spec{v, theta, config.draws, config.seed, config.sampler};
      rows.push_back(row_from_cell(id++, v, theta, run_cell(spec, config.parallel)));
    }
  }
  return rows;
}

Valuation random_valuation(std::uint64_t seed, long index, double max_value) {
  SplitMix64 rng(derive_seed(seed, {kValuationTag, static_cast<std::uint64_t>(index)}));
  Valuation v{rng.uniform() * max_value, rng.uniform() * max_value, rng.uniform() * max_value};
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

std::vector<ExperimentRow> run_random_valuation_experiment(const ExperimentConfig& config) {
  config.validate();
  const long nv = config.valuation_draws;
  std::vector<Valuation> vals(static_cast<std::size_t>(nv));
  for (long k = 0; k < nv; ++k) vals[static_cast<std::size_t>(k)] = random_valuation(config.seed, k, config.valuation_max);

  std::vector<ExperimentRow> rows;
  int id = config.first_id;
  for (int theta : config.thetas) {
    std::vector<CellStats> cells(static_cast<std::size_t>(nv));
    std::vector<char> usable(static_cast<std::size_t>(nv), 0);
    const auto work = [&](long k) {
      const auto& v = vals[static_cast<std::size_t>(k)];
      if (!(v[1] > v[2] && v[2] > 0.0)) return;
      usable[static_cast<std::size_t>(k)] = 1;
      const CellSpec spec{v, theta, config.draws, config.seed, config.sampler};
      cells[static_cast<std::size_t>(k)] = run_cell_serial(spec);
    };
    if (config.parallel) {
#if defined(TWOROUND_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 8)
#endif
      for (long k = 0; k < nv; ++k) work(k);
    } else {
      for (long k = 0; k < nv; ++k) work(k);
    }

    ExperimentRow row;
    row.id = id++;
    row.theta = theta;
    row.valuations_total = nv;
    double risky_sum = 0.0;
    double truthful_sum = 0.0;
    long kept = 0;
    for (long k = 0; k < nv; ++k) {
      const auto& s = cells[static_cast<std::size_t>(k)];
      row.raw_draws += s.draws;
      row.unordered += s.unordered;
      row.indeterminate += s.indeterminate;
      if (!usable[static_cast<std::size_t>(k)] || s.risky_count == 0 || s.truthful_count == 0) continue;
      ++kept;
      risky_sum += s.risky_max;
      truthful_sum += s.truthful_max;
    }
    row.valuations_skipped = nv - kept;
    row.risky_count = kept;
    row.truthful_count = kept;
    if (kept > 0) {
      row.risky_avg = risky_sum / static_cast<double>(kept);
      row.truthful_avg = truthful_sum / static_cast<double>(kept);
    }
    row.increment_pct = increment(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ExperimentRow> run_table(int table, const ExperimentConfig& config) {
  switch (table) {
    case 2: return run_gap_experiment(config);
    case 3: return run_theta_experiment(config);
    case 4: return run_random_valuation_experiment(config);
    default: raise(ErrorKind::kInvalidArgument, "table must be 2, 3 or 4");
  }
}

}  // namespace tworound
