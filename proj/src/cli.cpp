#include "tworound/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tworound/errors.hpp"
#include "tworound/io.hpp"

namespace tworound {

namespace {

void error_record(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(env, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || env[used] != '\0') {
    raise(ErrorKind::kInvalidArgument, std::string(kSeedEnvVar) + " must be a nonnegative integer");
  }
  return v;
}

N12Rank parse_rank(const std::string& text) {
  N12Rank r{};
  std::istringstream in(text);
  char c1 = 0;
  char c2 = 0;
  if (!(in >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ',' || c2 != ',' || !in.eof()) {
    raise(ErrorKind::kInvalidArgument, "rank must look like 2,1,3");
  }
  return r;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

struct Options {
  // validate
  std::string file;
  std::string kind = "auto";
  // check-dsic
  std::string mechanism;
  bool oracle = false;
  std::string grid = "0:8:1";
  int bidders = 0;
  // analyze-ne
  std::string mode;
  std::string values;
  std::string y;
  double x2 = 0.25;
  double step = kDefaultBidStep;
  std::string rank;
  // simulate
  std::string input;
  int runs = 1;
  // reproduce
  int table = 0;
  int draws = 10'000;
  int valuation_draws = 1'000;
  std::string out;
  std::string config;
  std::string sampler;
  bool serial = false;
  // shared
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
};

int do_validate(const Options& o, std::ostream& out) {
  const Json j = read_json_file(o.file);
  const std::string kind = o.kind == "auto" ? detect_kind(j) : o.kind;
  emit(out, validate_document(j, kind));
  return kExitOk;
}

int do_check_dsic(const Options& o, std::ostream& out) {
  const Mechanism mech = mechanism_from_json(read_json_file(o.mechanism));
  std::optional<BidGrid> grid;
  if (o.oracle) grid = BidGrid::parse(o.grid);
  const auto verdict = check_dsic(mech, grid, o.bidders);
  emit(out, to_json(verdict, o.oracle));
  return verdict.is_dsic ? kExitOk : kExitNegative;
}

int do_analyze_ne(const Options& o, std::ostream& out) {
  const auto values = values_from_json(read_json_file(o.values));
  const Json yj = read_json_file(o.y);
  if (o.mode == "n11") {
    if (values.v.size() < 3) raise(ErrorKind::kSchema, "n11 needs at least three values");
    const auto y = y_from_json(yj);
    const Json report = n11_report(values.v[0], values.v[1], values.v[2], y, o.step);
    emit(out, report);
    return report["truthful_ne"].get<bool>() || report["risky_ne"].get<bool>() ? kExitOk : kExitNegative;
  }
  if (values.v.size() != 5) raise(ErrorKind::kSchema, "n12 needs exactly five values");
  const auto y = y_from_json(yj);
  if (y.theta() != 4) raise(ErrorKind::kSchema, "n12 needs four Y entries");
  N12Params p;
  std::copy(values.v.begin(), values.v.end(), p.v.begin());
  std::copy(y.values().begin(), y.values().end(), p.y.begin());
  p.x2 = o.x2;
  p.step = o.step;
  if (values.bid_override.size() > 3) raise(ErrorKind::kSchema, "bid_override covers bidders 1..3 only");
  for (std::size_t i = 0; i < values.bid_override.size(); ++i) p.bid_override[i] = values.bid_override[i];
  p.validate();
  std::vector<N12Report> reports;
  if (o.rank.empty()) {
    reports = n12_check_all(p);
  } else {
    reports.push_back(n12_check_rank(p, parse_rank(o.rank)));
  }
  emit(out, n12_report(p, reports));
  for (const auto& r : reports) {
    if (r.is_ne) return kExitOk;
  }
  return kExitNegative;
}

int do_simulate(const Options& o, std::ostream& out) {
  const auto in = simulate_input_from_json(read_json_file(o.input));
  const auto result = evaluate(in.mechanism, in.bids, in.values);
  if (o.format == "csv") {
    out << auction_table_csv(result);
    return kExitOk;
  }
  SplitMix64 rng(o.seed);
  Json runs = Json::array();
  double total = 0.0;
  for (int i = 0; i < o.runs; ++i) {
    const auto run = simulate_run(in.mechanism, in.bids, rng);
    total += run.payment;
    runs.push_back(to_json(run));
  }
  emit(out, Json{{"expected", to_json(result)},
                 {"seed", o.seed},
                 {"runs", runs},
                 {"mean_realized_revenue", total / o.runs}});
  return kExitOk;
}

int do_reproduce(const Options& o, const CLI::App& sub, std::ostream& out) {
  ExperimentConfig c = ExperimentConfig::for_table(o.table);
  bool seed_from_config = false;
  if (!o.config.empty()) {
    const Json j = read_json_file(o.config);
    if (auto t = config_table(j); t && *t != o.table) {
      raise(ErrorKind::kSchema, "config is for table " + std::to_string(*t));
    }
    c = config_from_json(j, o.table);
    seed_from_config = j.contains("seed");
  }
  if (sub.count("--seed") > 0 || !seed_from_config) c.seed = o.seed;
  if (sub.count("--draws") > 0) c.draws = o.draws;
  if (sub.count("--valuation-draws") > 0) c.valuation_draws = o.valuation_draws;
  if (!o.sampler.empty()) c.sampler = parse_sampler(o.sampler);
  c.parallel = !o.serial;
  const auto rows = run_table(o.table, c);
  const std::string text = o.format == "csv" ? rows_to_csv(rows) : to_json(rows).dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) raise(ErrorKind::kInvalidArgument, "cannot write '" + o.out + "'");
    f << text;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o.seed = default_seed();
  } catch (const Error& e) {
    error_record(err, "usage", e.what());
    return kExitUsage;
  }

  CLI::App app{"Two-round auctions: DSIC checks, equilibrium analysis, revenue tables"};
  app.name("tworound");
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a JSON input against its schema");
  validate->add_option("file", o.file, "JSON document")->required();
  validate->add_option("--kind", o.kind, "Schema to apply")
      ->check(CLI::IsMember({"auto", "mechanism", "simulate", "values", "y", "config"}))
      ->capture_default_str();

  auto* dsic = app.add_subcommand("check-dsic", "Decide DSIC from the marginals; optionally search for a deviation");
  dsic->add_option("--mechanism", o.mechanism, "Mechanism JSON")->required();
  dsic->add_flag("--oracle", o.oracle, "Run the brute-force deviation search");
  dsic->add_option("--grid", o.grid, "Bid grid lo:hi:step for the search")->capture_default_str();
  dsic->add_option("--bidders", o.bidders, "Bidders in the search (0 = theta)")->capture_default_str();

  auto* ne = app.add_subcommand("analyze-ne", "Classify Nash equilibria");
  ne->add_option("--mode", o.mode, "n11 or n12")->required()->check(CLI::IsMember({"n11", "n12"}));
  ne->add_option("--values", o.values, "Valuations JSON")->required();
  ne->add_option("--Y", o.y, "Exclusion-indexed Y JSON")->required();
  ne->add_option("--x2", o.x2, "Second-rank allocation for n12, in (0, 0.5]")->capture_default_str();
  ne->add_option("--step", o.step, "Bid grid step for witness bids")->capture_default_str();
  ne->add_option("--rank", o.rank, "Single n12 ordering, e.g. 2,1,3");

  auto* sim = app.add_subcommand("simulate", "Exact expected outcome plus seeded realized runs");
  sim->add_option("--input", o.input, "Mechanism + bids JSON")->required();
  sim->add_option("--runs", o.runs, "Realized runs")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--seed", o.seed, "RNG seed (default 42 or $TWOROUND_SEED)");
  sim->add_option("--format", o.format, "json or csv (per-subset table)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto* rep = app.add_subcommand("reproduce", "Regenerate a revenue table");
  rep->add_option("--table", o.table, "2, 3 or 4")->required()->check(CLI::IsMember({2, 3, 4}));
  rep->add_option("--seed", o.seed, "RNG seed (default 42 or $TWOROUND_SEED)");
  rep->add_option("--draws", o.draws, "Y draws per cell")->check(CLI::PositiveNumber)->capture_default_str();
  rep->add_option("--valuation-draws", o.valuation_draws, "Valuations for table 4")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rep->add_option("--config", o.config, "Config JSON");
  rep->add_option("--sampler", o.sampler, "normalized-uniform or dirichlet")
      ->check(CLI::IsMember({"normalized-uniform", "dirichlet"}));
  rep->add_option("--out", o.out, "Output file (default stdout)");
  rep->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  rep->add_flag("--serial", o.serial, "Use the serial kernel");
  rep->callback([&] {
    if (rep->count("--format") == 0) o.format = "csv";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_record(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return do_validate(o, out);
    if (dsic->parsed()) return do_check_dsic(o, out);
    if (ne->parsed()) return do_analyze_ne(o, out);
    if (sim->parsed()) return do_simulate(o, out);
    return do_reproduce(o, *rep, out);
  } catch (const Json::parse_error& e) {
    error_record(err, "parse", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    error_record(err, to_string(e.kind()), e.what());
    const bool usage = e.kind() == ErrorKind::kInvalidArgument || e.kind() == ErrorKind::kResourceLimit;
    return usage ? kExitUsage : kExitInvalid;
  } catch (const Json::exception& e) {
    error_record(err, "schema", e.what());
    return kExitInvalid;
  }
}

}  // namespace tworound
