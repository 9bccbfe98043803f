#include "tworound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tworound/errors.hpp"

namespace tworound {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) raise(ErrorKind::kSchema, std::string("missing key '") + key + "'");
  return j.at(key);
}

double as_number(const Json& j, const std::string& what) {
  if (!j.is_number()) raise(ErrorKind::kSchema, what + " must be a number");
  return j.get<double>();
}

int as_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) raise(ErrorKind::kSchema, what + " must be an integer");
  return j.get<int>();
}

std::vector<double> as_numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) raise(ErrorKind::kSchema, what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_number(e, what + " entry"));
  return out;
}

Json number_or_null(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::kInvalidArgument, "cannot read '" + path + "'");
  return Json::parse(in);
}

Mechanism mechanism_from_json(const Json& j) {
  const int theta = as_int(field(j, "theta"), "theta");
  const int alpha = as_int(field(j, "alpha"), "alpha");
  if (theta < 1 || theta > kMaxTheta || alpha < 1 || alpha > theta) {
    raise(ErrorKind::kSchema, "need 1 <= alpha <= theta <= 20");
  }
  AllocationRule x(as_numbers(field(j, "x"), "x"));
  if (j.contains("probs")) {
    const auto& probs = j.at("probs");
    if (!probs.is_array()) raise(ErrorKind::kSchema, "probs must be an array");
    std::vector<std::pair<Subset, double>> pairs;
    for (const auto& e : probs) {
      Subset s;
      for (double p : as_numbers(field(e, "subset"), "subset")) {
        if (p != std::floor(p)) raise(ErrorKind::kSchema, "subset entries must be integers");
        s.push_back(static_cast<int>(p));
      }
      pairs.emplace_back(std::move(s), as_number(field(e, "p"), "p"));
    }
    return Mechanism(SelectionDistribution::from_pairs(theta, alpha, pairs), std::move(x));
  }
  if (j.contains("Y")) {
    if (alpha != theta - 1) raise(ErrorKind::kSchema, "\"Y\" needs alpha = theta - 1");
    ExclusionY y(as_numbers(j.at("Y"), "Y"));
    if (y.theta() != theta) raise(ErrorKind::kSchema, "Y length must equal theta");
    return Mechanism(from_exclusion_Y(y), std::move(x));
  }
  raise(ErrorKind::kSchema, "mechanism needs \"probs\" or \"Y\"");
}

Json to_json(const Mechanism& mech) {
  Json probs = Json::array();
  const auto& subsets = mech.selection().subsets();
  const auto p = mech.selection().probs();
  for (std::size_t k = 0; k < subsets.size(); ++k) probs.push_back({{"subset", subsets[k]}, {"p", p[k]}});
  const auto x = mech.allocation().x();
  return {{"theta", mech.theta()},
          {"alpha", mech.alpha()},
          {"x", std::vector<double>(x.begin(), x.end())},
          {"probs", probs}};
}

SimulateInput simulate_input_from_json(const Json& j) {
  Mechanism mech = mechanism_from_json(field(j, "mechanism"));
  const auto& b = field(j, "bids");
  BidProfile bids{as_numbers(field(b, "first_round"), "first_round"),
                  as_numbers(field(b, "second_round"), "second_round")};
  std::vector<double> values;
  if (j.contains("values")) values = as_numbers(j.at("values"), "values");
  validate_profile(mech, bids);
  if (!values.empty() && values.size() != bids.first_round.size()) {
    raise(ErrorKind::kSchema, "values and bids differ in length");
  }
  return {std::move(mech), std::move(bids), std::move(values)};
}

ValuesInput values_from_json(const Json& j) {
  ValuesInput in;
  if (j.is_array()) {
    in.v = as_numbers(j, "values");
  } else {
    in.v = as_numbers(field(j, "v"), "v");
    if (j.contains("bid_override")) {
      const auto& o = j.at("bid_override");
      if (!o.is_array()) raise(ErrorKind::kSchema, "bid_override must be an array");
      for (const auto& e : o) {
        in.bid_override.push_back(e.is_null() ? std::nullopt : std::optional<double>(as_number(e, "bid_override")));
      }
    }
  }
  for (double v : in.v) {
    if (!std::isfinite(v) || v < 0.0) raise(ErrorKind::kSchema, "values must be finite and nonnegative");
  }
  return in;
}

ExclusionY y_from_json(const Json& j) {
  return ExclusionY(as_numbers(j.is_array() ? j : field(j, "Y"), "Y"));
}

std::optional<int> config_table(const Json& j) {
  if (j.is_object() && j.contains("table")) return as_int(j.at("table"), "table");
  return std::nullopt;
}

ExperimentConfig config_from_json(const Json& j, int table) {
  if (!j.is_object()) raise(ErrorKind::kSchema, "config must be an object");
  ExperimentConfig c = ExperimentConfig::for_table(table);
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      raise(ErrorKind::kSchema, "seed must be a nonnegative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("draws")) c.draws = as_int(j.at("draws"), "draws");
  if (j.contains("valuation_draws")) c.valuation_draws = as_int(j.at("valuation_draws"), "valuation_draws");
  if (j.contains("valuation_max")) c.valuation_max = as_number(j.at("valuation_max"), "valuation_max");
  if (j.contains("thetas")) {
    c.thetas.clear();
    for (double t : as_numbers(j.at("thetas"), "thetas")) c.thetas.push_back(static_cast<int>(t));
  }
  if (j.contains("valuations")) {
    c.valuations.clear();
    const auto& vs = j.at("valuations");
    if (!vs.is_array()) raise(ErrorKind::kSchema, "valuations must be an array of triples");
    for (const auto& e : vs) {
      const auto v = as_numbers(e, "valuation");
      if (v.size() != 3) raise(ErrorKind::kSchema, "each valuation needs exactly three entries");
      c.valuations.push_back({v[0], v[1], v[2]});
    }
  }
  if (j.contains("sampler")) {
    if (!j.at("sampler").is_string()) raise(ErrorKind::kSchema, "sampler must be a string");
    c.sampler = parse_sampler(j.at("sampler").get<std::string>());
  }
  try {
    c.validate();
  } catch (const Error& e) {
    raise(ErrorKind::kSchema, e.what());
  }
  return c;
}

std::string detect_kind(const Json& j) {
  if (j.is_array()) raise(ErrorKind::kSchema, "bare arrays are ambiguous; pass --kind values or --kind y");
  if (!j.is_object()) raise(ErrorKind::kSchema, "document must be a JSON object");
  if (j.contains("mechanism") && j.contains("bids")) return "simulate";
  if (j.contains("theta") && j.contains("alpha")) return "mechanism";
  if (j.contains("v")) return "values";
  if (j.contains("Y")) return "y";
  if (j.contains("table") || j.contains("draws") || j.contains("valuations") || j.contains("thetas")) return "config";
  raise(ErrorKind::kSchema, "unrecognized document");
}

Json validate_document(const Json& j, const std::string& kind) {
  Json out{{"valid", true}, {"kind", kind}};
  if (kind == "mechanism") {
    const auto mech = mechanism_from_json(j);
    out["theta"] = mech.theta();
    out["alpha"] = mech.alpha();
    out["beta"] = mech.beta();
    out["marginals"] = marginal_probabilities(mech.selection());
  } else if (kind == "simulate") {
    const auto in = simulate_input_from_json(j);
    out["theta"] = in.mechanism.theta();
    out["bidders"] = in.bids.size();
  } else if (kind == "values") {
    out["count"] = values_from_json(j).v.size();
  } else if (kind == "y") {
    const auto y = y_from_json(j);
    out["theta"] = y.theta();
    out["ordered"] = y.ordered();
    out["within_bounds"] = y.within_bounds();
  } else if (kind == "config") {
    const int table = config_table(j).value_or(2);
    const auto c = config_from_json(j, table);
    out["table"] = table;
    out["draws"] = c.draws;
  } else {
    raise(ErrorKind::kInvalidArgument, "unknown kind '" + kind + "'");
  }
  return out;
}

Json to_json(const DeviationWitness& w) {
  return {{"deviator", w.deviator},
          {"value", w.value},
          {"first_bid", w.first_bid},
          {"second_bid", w.second_bid},
          {"family", w.risky() ? "risky" : "conservative"},
          {"first_round", w.profile.first_round},
          {"second_round", w.profile.second_round},
          {"truthful_utility", w.truthful_utility},
          {"deviation_utility", w.deviation_utility},
          {"gain", w.gain()}};
}

Json to_json(const DsicVerdict& v, bool oracle_used) {
  Json out{{"is_dsic", v.is_dsic}, {"violated_condition", to_string(v.violated)}, {"marginals", v.marginals}};
  if (oracle_used) {
    out["oracle"] = true;
    out["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  }
  return out;
}

Json to_json(const AuctionResult& r) {
  Json table = Json::array();
  for (const auto& row : r.table) {
    table.push_back({{"subset", row.positions},
                     {"probability", row.probability},
                     {"bidders", row.round.bidders},
                     {"winner_rank", row.winner_rank},
                     {"payment", row.payment}});
  }
  Json out{{"first_round_order", r.first_round_order}};
  if (!r.utilities.empty()) out["utilities"] = r.utilities;
  out["win_probability"] = r.win_probability;
  out["expected_payment"] = r.expected_payment;
  out["revenue"] = r.revenue;
  out["table"] = table;
  return out;
}

std::string auction_table_csv(const AuctionResult& r) {
  std::ostringstream os;
  os << "subset,probability,winner_rank,payment\n";
  for (const auto& row : r.table) {
    for (std::size_t i = 0; i < row.positions.size(); ++i) os << (i ? " " : "") << row.positions[i];
    os << ',' << compact(row.probability) << ',' << row.winner_rank << ',' << compact(row.payment) << '\n';
  }
  return os.str();
}

Json to_json(const RealizedRun& r) {
  return {{"subset", r.positions},
          {"winner", r.winner ? Json(*r.winner) : Json(nullptr)},
          {"payment", r.payment}};
}

Json n11_report(double v1, double v2, double v3, const ExclusionY& y, double step) {
  const auto c = n11_classify(v1, v2, v3, y, step);
  Json out{{"mode", "n11"},
           {"theta", c.theta},
           {"ratio", c.ratio},
           {"threshold", c.threshold},
           {"truthful_ne", c.truthful_ne},
           {"risky_ne", c.risky_ne},
           {"indeterminate", c.indeterminate},
           {"risky_bid", number_or_null(c.risky_bid)}};
  Json rev = Json::object();
  if (c.truthful_ne) rev["truthful"] = n11_revenue(N11Rank::kTruthful, v1, v2, v3, y);
  if (c.risky_ne) rev["risky"] = n11_revenue(N11Rank::kRisky, v1, v2, v3, y);
  out["revenue"] = rev;
  out["tail_mass_threshold"] = n11_lemma3_threshold(v1, v2, v3);
  out["supremum_bound"] = n11_supremum_bound(v1, v2, y);
  return out;
}

Json to_json(const N12Report& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"bidder", c.bidder},
                     {"position", c.position},
                     {"swap", to_string(c.swap)},
                     {"args", c.args},
                     {"V", finite_or_null(c.v_value)},
                     {"Y", c.y_value},
                     {"relation", c.needs_less ? "<" : ">"},
                     {"flipped", c.flipped},
                     {"degenerate", c.degenerate},
                     {"holds", c.holds},
                     {"indeterminate", c.indeterminate},
                     {"underlined", c.underlined},
                     {"auto_satisfied", c.auto_satisfied}});
  }
  return {{"rank", r.rank},
          {"bids", r.bids},
          {"is_ne", r.is_ne},
          {"indeterminate", r.indeterminate},
          {"conditions", conds}};
}

Json n12_report(const N12Params& params, const std::vector<N12Report>& reports) {
  Json ranks = Json::array();
  for (const auto& r : reports) ranks.push_back(to_json(r));
  return {{"mode", "n12"},
          {"x2", params.x2},
          {"Y23", ycoef23(params.y, params.x2)},
          {"Y12", ycoef12(params.y)},
          {"ranks", ranks}};
}

Json to_json(const std::vector<ExperimentRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row{{"experiment_id", r.id}};
    row["v"] = r.v ? Json(std::vector<double>(r.v->begin(), r.v->end())) : Json(nullptr);
    row["theta"] = r.theta;
    row["risky_count"] = r.risky_count;
    row["risky_avg_rev"] = number_or_null(r.risky_avg);
    row["truthful_count"] = r.truthful_count;
    row["truthful_avg_rev"] = number_or_null(r.truthful_avg);
    row["increment_pct"] = number_or_null(r.increment_pct);
    row["raw_draws"] = r.raw_draws;
    row["discarded"] = {{"unordered", r.unordered}, {"indeterminate", r.indeterminate}};
    if (!r.v) {
      row["valuations_total"] = r.valuations_total;
      row["valuations_skipped"] = r.valuations_skipped;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << "experiment_id,v1,v2,v3,theta,risky_count,risky_avg_rev,truthful_count,truthful_avg_rev,increment_pct\n";
  const auto opt = [](const std::optional<double>& v, int digits) { return v ? fixed(*v, digits) : std::string(); };
  for (const auto& r : rows) {
    os << r.id << ',';
    if (r.v) {
      os << compact((*r.v)[0]) << ',' << compact((*r.v)[1]) << ',' << compact((*r.v)[2]);
    } else {
      os << ",,";
    }
    os << ',' << r.theta << ',' << r.risky_count << ',' << opt(r.risky_avg, 4) << ',' << r.truthful_count << ','
       << opt(r.truthful_avg, 4) << ',' << opt(r.increment_pct, 4) << '\n';
  }
  return os.str();
}

}  // namespace tworound
