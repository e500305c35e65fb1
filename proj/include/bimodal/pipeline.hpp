#pragma once

#include <string>
#include <vector>

#include "bimodal/network.hpp"
#include "bimodal/objective.hpp"
#include "bimodal/paths.hpp"
#include "bimodal/qp_solver.hpp"
#include "bimodal/scenario_io.hpp"

namespace bimodal {

inline constexpr double kMinutesPerHour = 60.0;

struct CellResult {
  double gamma = 0.0;
  Mode mode = Mode::kBimodal;
  Solution solution;
  FlowAssignment assignment;
  Metrics metrics;
  std::string failure;  // set when the cell threw during a sweep
};

/// Assemble, solve and evaluate one (gamma, mode) cell. Feasibility errors
/// from assembly propagate; solver outcomes are reported in the status.
CellResult RunCell(const Network& network, const PathSet& paths, double gamma, Mode mode,
                   const QpSolverConfig& config = {});

/// Runs every (gamma, mode) pair, gamma-major, on up to `jobs` threads. The
/// output order does not depend on scheduling. A cell that fails is kept
/// with status "infeasible" or "error".
std::vector<CellResult> Sweep(const Network& network, const PathSet& paths,
                              const std::vector<double>& gammas, const std::vector<Mode>& modes,
                              const QpSolverConfig& config = {}, unsigned jobs = 1);

/// Converts to the reporting units (minutes for latencies).
ResultRow ToResultRow(const CellResult& cell);

}  // namespace bimodal
