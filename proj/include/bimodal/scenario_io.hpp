#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bimodal/latency.hpp"
#include "bimodal/network.hpp"
#include "bimodal/objective.hpp"
#include "bimodal/paths.hpp"

namespace bimodal {

inline constexpr int kScenarioSchemaVersion = 1;

/// Parses a scenario document into a network. Edges without an
/// explicit "omega" take the reference plane of their lane class scaled by
/// length; aerial edges with latency "auto" use the Euclidean distance to the
/// hub. Throws a validation error naming the offending field. Does not run
/// Validate(); LoadScenario does.
Network ScenarioFromJson(const nlohmann::json& doc);
Network LoadScenario(const std::filesystem::path& path);
/// Reads and parses without semantic validation.
Network ParseScenarioFile(const std::filesystem::path& path);

/// Canonical form: every derived value written out explicitly, so loading
/// the result reproduces the network exactly.
nlohmann::json ScenarioToJson(const Network& network);
void SaveScenario(const Network& network, const std::filesystem::path& path);

inline constexpr double kDefaultMeanEdgeKm = 2.1;

struct TntpOptions {
  int hub = 10;                      // TNTP node number
  double demand_per_node = 5000.0;   // parcels/hour at every non-hub node
  double nominal_total = 81000.0;    // beta
  double cost_cap = 50000.0;
  double three_lane_capacity = 10000.0;  // strictly above => three lanes
  // Target mean road-edge length. Unset: geographic (lon/lat) coordinates are
  // used as projected, planar ones are rescaled to kDefaultMeanEdgeKm.
  std::optional<double> mean_edge_km;
  Constants constants{};             // beta and cost cap are overridden
  LatencyPlane two_lane = TwoLaneReferencePlane();
  LatencyPlane three_lane = ThreeLaneReferencePlane();
};

/// Builds a scenario from the TNTP network, node-coordinate and link-flow
/// files. Nominal flows are proportional to flow/capacity and sum to beta.
Network ImportTntp(const std::filesystem::path& net_path, const std::filesystem::path& node_path,
                   const std::filesystem::path& flow_path, const TntpOptions& options = {});

/// CSV with header `truck_flow,total_flow,latency_hours`.
std::vector<LatencySample> ReadSamplesCsv(const std::filesystem::path& path);
void WriteSamplesCsv(std::span<const LatencySample> samples, const std::filesystem::path& path);

/// {"omega":[w0,w1,w2]}
nlohmann::json PlaneToJson(const LatencyPlane& plane);
LatencyPlane PlaneFromJson(const nlohmann::json& doc);

struct ResultRow {
  double gamma = 0.0;
  Mode mode = Mode::kBimodal;
  std::string status;
  double objective_minutes = 0.0;
  double parcel_latency_minutes = 0.0;
  double societal_latency_minutes = 0.0;
  double operational_cost = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  std::vector<double> edge_truck_flows;
  std::vector<double> path_flows;
  std::vector<double> drone_demands;

  bool operator==(const ResultRow&) const = default;
};

std::string ResultsToCsv(std::span<const ResultRow> rows);
std::vector<ResultRow> ResultsFromCsv(const std::string& text);
/// Throws a domain error for an empty row set and an I/O error on write
/// failure.
void ExportResults(std::span<const ResultRow> rows, const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

/// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace bimodal
