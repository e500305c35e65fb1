#include "bimodal/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "bimodal/error.hpp"

namespace bimodal {

CellResult RunCell(const Network& network, const PathSet& paths, double gamma, Mode mode,
                   const QpSolverConfig& config) {
  CellResult cell;
  cell.gamma = gamma;
  cell.mode = mode;
  const QpProblem problem = AssembleQp(network, paths, gamma, mode);
  cell.solution = Solve(problem, config);
  if (cell.solution.status == SolveStatus::kInfeasible) return cell;

  // Interior iterates can sit a hair below zero after unscaling.
  std::vector<double> flows(cell.solution.f.begin(), cell.solution.f.end());
  for (double& f : flows) f = std::max(f, 0.0);
  cell.assignment = DeriveFlows(network, paths, flows);
  cell.metrics = ComputeMetrics(network, paths, cell.assignment, gamma);
  return cell;
}

std::vector<CellResult> Sweep(const Network& network, const PathSet& paths,
                              const std::vector<double>& gammas, const std::vector<Mode>& modes,
                              const QpSolverConfig& config, unsigned jobs) {
  std::vector<CellResult> cells(gammas.size() * modes.size());
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (std::size_t m = 0; m < modes.size(); ++m) {
      cells[g * modes.size() + m].gamma = gammas[g];
      cells[g * modes.size() + m].mode = modes[m];
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      CellResult& cell = cells[i];
      try {
        cell = RunCell(network, paths, cell.gamma, cell.mode, config);
      } catch (const Error& e) {
        cell.failure = e.what();
        if (e.kind() == ErrorKind::kFeasibility) cell.solution.status = SolveStatus::kInfeasible;
      }
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return cells;
}

ResultRow ToResultRow(const CellResult& cell) {
  ResultRow row;
  row.gamma = cell.gamma;
  row.mode = cell.mode;
  const bool infeasible = cell.solution.status == SolveStatus::kInfeasible;
  if (!cell.failure.empty() && !infeasible) {
    row.status = "error";
  } else {
    row.status = std::string(ToString(cell.solution.status));
  }
  row.iterations = cell.solution.iterations;
  if (infeasible || !cell.failure.empty()) return row;
  row.objective_minutes = cell.metrics.objective * kMinutesPerHour;
  row.parcel_latency_minutes = cell.metrics.parcel_latency * kMinutesPerHour;
  row.societal_latency_minutes = cell.metrics.societal_latency * kMinutesPerHour;
  row.operational_cost = cell.metrics.operational_cost;
  row.kkt_residual = cell.solution.kkt.max();
  row.edge_truck_flows = cell.assignment.edge_flow;
  row.path_flows = cell.assignment.path_flow;
  row.drone_demands = cell.assignment.drone_demand;
  return row;
}

}  // namespace bimodal
