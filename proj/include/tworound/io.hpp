#pragma once

// JSON schemas for the CLI inputs and serializers for every result type.
//
// mechanism   {"theta": 4, "alpha": 3, "x": [0.7, 0.3, 0],
//              "probs": [{"subset": [1,2,3], "p": 0.25}, ...]}
//             With alpha = theta - 1, "Y": [Y_1, ..., Y_theta] may replace "probs".
// simulate    {"mechanism": {...}, "bids": {"first_round": [...], "second_round": [...]},
//              "values": [...]}            values optional
// values      {"v": [v1, v2, ...], "bid_override": [null, 455, null]}  or a bare array
// Y           {"Y": [Y_1, ..., Y_theta]}  or a bare array
// config      {"table": 2, "seed": 42, "draws": 10000, "valuation_draws": 1000,
//              "valuation_max": 1000, "valuations": [[450,350,200]], "thetas": [3],
//              "sampler": "normalized-uniform"}  every key optional

#include <string>
#include <vector>

#include <json.hpp>

#include "tworound/dsic.hpp"
#include "tworound/engine.hpp"
#include "tworound/equilibrium.hpp"
#include "tworound/experiments.hpp"
#include "tworound/n12.hpp"

namespace tworound {

using Json = nlohmann::ordered_json;

/// Throws Error(kInvalidArgument) if unreadable; nlohmann parse errors pass through.
Json read_json_file(const std::string& path);

Mechanism mechanism_from_json(const Json& j);
Json to_json(const Mechanism& mech);

struct SimulateInput {
  Mechanism mechanism;
  BidProfile bids;
  std::vector<double> values;
};
SimulateInput simulate_input_from_json(const Json& j);

struct ValuesInput {
  std::vector<double> v;
  std::vector<std::optional<double>> bid_override;
};
ValuesInput values_from_json(const Json& j);
ExclusionY y_from_json(const Json& j);

/// Starts from the table's defaults and applies any keys present.
ExperimentConfig config_from_json(const Json& j, int table);
/// The "table" key, if present.
std::optional<int> config_table(const Json& j);

/// "mechanism", "simulate", "values", "y" or "config"; throws kSchema if none fits.
std::string detect_kind(const Json& j);
/// Parses `j` as `kind` and returns a short summary.
Json validate_document(const Json& j, const std::string& kind);

Json to_json(const DeviationWitness& w);
Json to_json(const DsicVerdict& v, bool oracle_used);

Json to_json(const AuctionResult& r);
std::string auction_table_csv(const AuctionResult& r);
Json to_json(const RealizedRun& r);

Json n11_report(double v1, double v2, double v3, const ExclusionY& y, double step);
Json to_json(const N12Report& r);
Json n12_report(const N12Params& params, const std::vector<N12Report>& reports);

Json to_json(const std::vector<ExperimentRow>& rows);
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace tworound
