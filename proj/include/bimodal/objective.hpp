#pragma once

#include <string_view>

#include <json.hpp>

#include "bimodal/network.hpp"
#include "bimodal/paths.hpp"
#include "bimodal/qp_problem.hpp"

namespace bimodal {

enum class Mode {
  kBimodal,    // trucks and drones
  kTruckOnly,  // every parcel goes by road
};

std::string_view ToString(Mode mode);
Mode ParseMode(std::string_view text);

struct ParcelLatency {
  double average = 0.0;    // L, hours
  double truck_sum = 0.0;  // L^R, parcel-hours per hour
  double drone_sum = 0.0;  // L^A, parcel-hours per hour
};

struct Metrics {
  double parcel_latency = 0.0;     // hours
  double truck_latency_sum = 0.0;
  double drone_latency_sum = 0.0;
  double societal_latency = 0.0;   // hours
  double operational_cost = 0.0;   // $/hour
  double objective = 0.0;          // gamma * L + (1 - gamma) * L^S, hours
};

/// Road latency of every edge at the assignment's truck flows.
std::vector<double> EdgeLatencies(const Network& network, const FlowAssignment& assignment);

/// Demand-weighted mean delivery time. Throws a domain error when the
/// network has no demand.
ParcelLatency ComputeParcelLatency(const Network& network, const PathSet& paths,
                                   const FlowAssignment& assignment);

/// Nominal-flow-weighted road latency normalised by beta.
double ComputeSocietalLatency(const Network& network, const FlowAssignment& assignment);

Metrics ComputeMetrics(const Network& network, const PathSet& paths,
                       const FlowAssignment& assignment, double gamma);

/// QP in the path flows whose objective equals gamma * L + (1 - gamma) * L^S
/// on every feasible point.
///
/// Q = B' diag(gamma * m * (w1 + w2) / D) B with B the edge-path incidence
/// matrix and D the total demand, so paths sharing an edge couple off the
/// diagonal. Constraint rows, in order:
///   -f_p <= 0                          one per path
///   m * sum_{p -> v} f_p <= d_v        drone demand stays non-negative
///   (c_T - m c_D) * sum_p f_p <= C_0 - c_D * D     operating cost cap
/// Equality rows m * sum_{p -> v} f_p = d_v are added for every node in
/// truck-only mode and, in bimodal mode, for demanded nodes without an
/// aerial edge.
///
/// Throws a domain error for gamma outside [0, 1] and a feasibility error
/// when a demanded node can be served by neither mode.
QpProblem AssembleQp(const Network& network, const PathSet& paths, double gamma, Mode mode);

/// Dense debug dump of Q, a, G, h, A, b and the constant.
nlohmann::json QpToJson(const QpProblem& problem);

}  // namespace bimodal
