// bimodal: validate scenarios, enumerate truck paths, fit latency planes and
// solve the truck/drone routing QP over gamma sweeps.
//
// Exit codes: 0 ok, 1 validation or feasibility, 2 solver did not converge,
// 3 I/O.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bimodal/error.hpp"
#include "bimodal/latency.hpp"
#include "bimodal/network.hpp"
#include "bimodal/objective.hpp"
#include "bimodal/paths.hpp"
#include "bimodal/pipeline.hpp"
#include "bimodal/qp_solver.hpp"
#include "bimodal/scenario_io.hpp"

namespace {

using namespace bimodal;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return kExitIo;
    case ErrorKind::kSolver: return kExitSolver;
    default: return kExitInvalid;
  }
}

void Emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    WriteFile(output, text);
    spdlog::info("wrote {}", output);
  }
}

int ExitCodeFor(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return kExitOk;
    case SolveStatus::kInfeasible: return kExitInvalid;
    case SolveStatus::kMaxIterations: return kExitSolver;
  }
  return kExitSolver;
}

struct Options {
  std::string scenario;
  std::string output;
  std::size_t max_edges = kDefaultMaxEdges;
  double tol = QpSolverConfig{}.kkt_tolerance;
  int max_iter = QpSolverConfig{}.max_iterations;
  double gamma = 0.5;
  std::string mode = "bimodal";
  std::vector<double> gammas{0.0, 0.5, 1.0};
  std::vector<std::string> modes{"bimodal", "truck_only"};
  unsigned jobs = 1;
  bool count_only = false;
  std::string samples;
  std::string net, nodes, flows;
  TntpOptions tntp;
  double mean_edge_km = 0.0;
};

QpSolverConfig SolverConfig(const Options& o) {
  QpSolverConfig config;
  config.kkt_tolerance = o.tol;
  config.max_iterations = o.max_iter;
  return config;
}

int CmdValidate(const Options& o) {
  const Network net = ParseScenarioFile(o.scenario);
  const auto violations = Validate(net);
  for (const auto& v : violations) std::cout << v.code << ": " << v.detail << "\n";
  if (!violations.empty()) return kExitInvalid;
  std::cout << "ok: " << net.nodes.size() << " nodes, " << net.road_edges.size()
            << " road edges, " << net.aerial_edges.size() << " aerial edges\n";
  return kExitOk;
}

int CmdPaths(const Options& o) {
  const Network net = LoadScenario(o.scenario);
  const PathSet paths = EnumeratePaths(net, o.max_edges);
  for (NodeId v : paths.unreachable()) {
    spdlog::warn("node {} has no road path within {} edges", net.nodes[v.index()].name, o.max_edges);
  }
  if (o.count_only) {
    std::cout << paths.size() << "\n";
    return kExitOk;
  }
  std::ostringstream csv;
  csv << "path_id,destination,edges,nodes\n";
  for (const auto& p : paths.paths()) {
    csv << p.id.value << ',' << net.nodes[p.destination.index()].name << ',';
    for (std::size_t i = 0; i < p.edges.size(); ++i) csv << (i ? ";" : "") << p.edges[i].value;
    csv << ',';
    for (std::size_t i = 0; i < p.nodes.size(); ++i) csv << (i ? ";" : "") << net.nodes[p.nodes[i].index()].name;
    csv << '\n';
  }
  Emit(csv.str(), o.output);
  std::cerr << paths.size() << " paths with at most " << o.max_edges << " edges\n";
  return kExitOk;
}

int CmdFit(const Options& o) {
  const auto samples = ReadSamplesCsv(o.samples);
  const PlaneFit fit = FitPlane(samples);
  nlohmann::json doc = PlaneToJson(fit.plane);
  doc["samples"] = samples.size();
  doc["rmse"] = fit.rmse;
  doc["max_residual"] = fit.max_residual;
  doc["condition_number"] = fit.condition_number;
  Emit(doc.dump(2) + "\n", o.output);
  return kExitOk;
}

void Report(const CellResult& cell) {
  const ResultRow row = ToResultRow(cell);
  spdlog::info("gamma={} mode={} status={} J={:.6g} min L={:.6g} min L^S={:.6g} min cost={:.6g} kkt={:.2e} iters={}",
               row.gamma, ToString(row.mode), row.status, row.objective_minutes,
               row.parcel_latency_minutes, row.societal_latency_minutes, row.operational_cost,
               row.kkt_residual, row.iterations);
}

int CmdSolve(const Options& o) {
  const Network net = LoadScenario(o.scenario);
  const PathSet paths = EnumeratePaths(net, o.max_edges);
  const CellResult cell = RunCell(net, paths, o.gamma, ParseMode(o.mode), SolverConfig(o));
  Report(cell);
  const ResultRow row = ToResultRow(cell);
  Emit(ResultsToCsv(std::span(&row, 1)), o.output);
  return ExitCodeFor(cell.solution.status);
}

int CmdSweep(const Options& o) {
  const Network net = LoadScenario(o.scenario);
  const PathSet paths = EnumeratePaths(net, o.max_edges);
  spdlog::info("{} paths, {} gammas x {} modes on {} jobs", paths.size(), o.gammas.size(),
               o.modes.size(), o.jobs);
  std::vector<Mode> modes;
  for (const auto& m : o.modes) modes.push_back(ParseMode(m));
  const auto cells = Sweep(net, paths, o.gammas, modes, SolverConfig(o), o.jobs);

  std::vector<ResultRow> rows;
  int code = kExitOk;
  for (const auto& cell : cells) {
    if (!cell.failure.empty()) spdlog::error("gamma={} mode={}: {}", cell.gamma, ToString(cell.mode), cell.failure);
    Report(cell);
    rows.push_back(ToResultRow(cell));
    const int cell_code = cell.failure.empty() || cell.solution.status == SolveStatus::kInfeasible
                              ? ExitCodeFor(cell.solution.status)
                              : kExitSolver;
    code = std::max(code, cell_code);
  }
  if (o.output.empty() || o.output == "-") {
    std::cout << ResultsToCsv(rows);
  } else {
    ExportResults(rows, o.output);
  }
  return code;
}

int CmdImportTntp(Options o) {
  if (o.mean_edge_km > 0.0) o.tntp.mean_edge_km = o.mean_edge_km;
  const Network net = ImportTntp(o.net, o.nodes, o.flows, o.tntp);
  const auto violations = Validate(net);
  for (const auto& v : violations) std::cerr << v.code << ": " << v.detail << "\n";
  Emit(ScenarioToJson(net).dump(2) + "\n", o.output);
  return violations.empty() ? kExitOk : kExitInvalid;
}

void SetUpLogging() {
  auto logger = spdlog::stderr_color_mt("bimodal");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("BIMODAL_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace

int main(int argc, char** argv) {
  SetUpLogging();
  Options o;
  CLI::App app{"Truck and drone parcel routing"};
  app.require_subcommand(1);

  auto add_scenario = [&o](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  };
  auto add_output = [&o](CLI::App* cmd) {
    cmd->add_option("-o,--output", o.output, "Output file (default stdout)");
  };
  auto add_paths = [&o](CLI::App* cmd) {
    cmd->add_option("--max-edges", o.max_edges, "Longest truck path in edges")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto add_solver = [&o](CLI::App* cmd) {
    cmd->add_option("--tol", o.tol, "KKT tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "Interior point iteration limit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario and list violations");
  add_scenario(validate);

  auto* paths = app.add_subcommand("paths", "Enumerate hub-rooted simple truck paths");
  add_scenario(paths);
  add_paths(paths);
  add_output(paths);
  paths->add_flag("--count", o.count_only, "Print only the number of paths");

  auto* fit = app.add_subcommand("fit", "Fit a latency plane to samples");
  fit->add_option("--samples", o.samples, "CSV truck_flow,total_flow,latency_hours")
      ->required()
      ;
  add_output(fit);

  auto* solve = app.add_subcommand("solve", "Solve one (gamma, mode) cell");
  add_scenario(solve);
  add_paths(solve);
  add_solver(solve);
  add_output(solve);
  solve->add_option("--gamma", o.gamma, "Weight on parcel latency")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--mode", o.mode, "bimodal or truck_only")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Solve every gamma and mode combination");
  add_scenario(sweep);
  add_paths(sweep);
  add_solver(sweep);
  add_output(sweep);
  sweep->add_option("--gammas,--gamma", o.gammas, "Comma separated weights in [0, 1]")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--mode,--modes", o.modes, "Modes to run")->delimiter(',')->capture_default_str();
  sweep->add_option("-j,--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  auto* tntp = app.add_subcommand("import-tntp", "Build a scenario from TNTP files");
  tntp->add_option("--net", o.net, "Network file")->required();
  tntp->add_option("--nodes", o.nodes, "Node coordinate file")->required();
  tntp->add_option("--flows", o.flows, "Link flow file")->required();
  tntp->add_option("--hub", o.tntp.hub, "Hub node number")->capture_default_str();
  tntp->add_option("--demand", o.tntp.demand_per_node, "Parcels/hour per non-hub node")->capture_default_str();
  tntp->add_option("--beta", o.tntp.nominal_total, "Total nominal flow")->capture_default_str();
  tntp->add_option("--cost-cap", o.tntp.cost_cap, "Operating cost cap, $/hour")->capture_default_str();
  tntp->add_option("--mean-edge-km", o.mean_edge_km, "Rescale coordinates to this mean edge length");
  add_output(tntp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate) return CmdValidate(o);
    if (*paths) return CmdPaths(o);
    if (*fit) return CmdFit(o);
    if (*solve) return CmdSolve(o);
    if (*sweep) return CmdSweep(o);
    if (*tntp) return CmdImportTntp(o);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  }
  return kExitInvalid;
}
