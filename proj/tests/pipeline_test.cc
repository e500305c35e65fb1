#include "bimodal/pipeline.hpp"

#include <random>

#include <gtest/gtest.h>

#include "bimodal/error.hpp"
#include "test_util.hpp"

namespace bimodal {
namespace {

const std::vector<Mode> kBothModes{Mode::kBimodal, Mode::kTruckOnly};

TEST(RunCell, MetricsAgreeWithSolverObjective) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  const CellResult cell = RunCell(net, paths, 0.5, Mode::kBimodal);
  ASSERT_EQ(cell.solution.status, SolveStatus::kOptimal);
  EXPECT_NEAR(cell.metrics.objective, cell.solution.objective, 1e-9 * cell.metrics.objective);
  EXPECT_LE(cell.metrics.operational_cost, net.constants.cost_cap * (1.0 + 1e-9));
  for (double d : cell.assignment.drone_demand) EXPECT_GE(d, 0.0);
}

TEST(RunCell, InfeasibleCellHasNoMetrics) {
  Network net = testing::DiamondNetwork();
  net.constants.cost_cap = 1.0;
  const PathSet paths = EnumeratePaths(net);
  const CellResult cell = RunCell(net, paths, 0.5, Mode::kTruckOnly);
  EXPECT_EQ(cell.solution.status, SolveStatus::kInfeasible);
  const ResultRow row = ToResultRow(cell);
  EXPECT_EQ(row.status, "infeasible");
  EXPECT_TRUE(row.path_flows.empty());
}

TEST(Sweep, GridShapeAndOrder) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  const auto cells = Sweep(net, paths, {0.0, 0.5, 1.0}, kBothModes);
  ASSERT_EQ(cells.size(), 6u);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(cells[i].gamma, (std::vector<double>{0.0, 0.5, 1.0})[i / 2]);
    EXPECT_EQ(cells[i].mode, kBothModes[i % 2]);
    EXPECT_EQ(cells[i].solution.status, SolveStatus::kOptimal);
  }
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  const Network net = LoadScenario(testing::DataPath("example_network.json"));
  const PathSet paths = EnumeratePaths(net);
  const std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 1.0};
  auto csv = [&](unsigned jobs) {
    std::vector<ResultRow> rows;
    for (const auto& c : Sweep(net, paths, gammas, kBothModes, {}, jobs)) rows.push_back(ToResultRow(c));
    return ResultsToCsv(rows);
  };
  const std::string serial = csv(1);
  EXPECT_EQ(csv(4), serial);
  EXPECT_EQ(csv(16), serial);
  EXPECT_EQ(csv(1), serial);
}

TEST(Sweep, FailingCellIsRecordedAndRunContinues) {
  Network net = testing::DiamondNetwork();
  net.road_edges.erase(net.road_edges.begin() + 2, net.road_edges.end());  // t by drone only
  const PathSet paths = EnumeratePaths(net);
  const auto cells = Sweep(net, paths, {0.5}, kBothModes, {}, 2);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].solution.status, SolveStatus::kOptimal);
  EXPECT_TRUE(cells[0].failure.empty());
  EXPECT_EQ(cells[1].solution.status, SolveStatus::kInfeasible);
  EXPECT_NE(cells[1].failure.find("truck-only"), std::string::npos);
  EXPECT_EQ(ToResultRow(cells[1]).status, "infeasible");
}

TEST(ToResultRow, ReportsMinutes) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  const CellResult cell = RunCell(net, paths, 0.5, Mode::kBimodal);
  const ResultRow row = ToResultRow(cell);
  EXPECT_EQ(row.parcel_latency_minutes, cell.metrics.parcel_latency * 60.0);
  EXPECT_EQ(row.societal_latency_minutes, cell.metrics.societal_latency * 60.0);
  EXPECT_EQ(row.objective_minutes, cell.metrics.objective * 60.0);
  EXPECT_EQ(row.operational_cost, cell.metrics.operational_cost);
  EXPECT_EQ(row.status, "optimal");
  EXPECT_EQ(row.path_flows.size(), paths.size());
  EXPECT_EQ(row.edge_truck_flows.size(), net.road_edges.size());
  EXPECT_EQ(row.drone_demands.size(), net.node_count());
  EXPECT_EQ(row.iterations, cell.solution.iterations);
}

class TradeOffProperty : public ::testing::TestWithParam<int> {};

TEST_P(TradeOffProperty, DronesHelpAndGammaTradesLatencies) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  const Network net = testing::RandomNetwork(rng);
  const PathSet paths = EnumeratePaths(net, net.node_count());
  const std::vector<double> gammas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const auto cells = Sweep(net, paths, gammas, kBothModes);
  constexpr double kSlack = 2e-6;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const CellResult& both = cells[2 * g];
    const CellResult& trucks = cells[2 * g + 1];
    ASSERT_EQ(both.solution.status, SolveStatus::kOptimal);
    if (trucks.solution.status == SolveStatus::kOptimal) {
      EXPECT_LE(both.solution.objective, trucks.solution.objective + 1e-8);
    }
  }
  for (std::size_t mode = 0; mode < 2; ++mode) {
    for (std::size_t g = 1; g < gammas.size(); ++g) {
      const CellResult& lo = cells[2 * (g - 1) + mode];
      const CellResult& hi = cells[2 * g + mode];
      if (lo.solution.status != SolveStatus::kOptimal || hi.solution.status != SolveStatus::kOptimal) continue;
      EXPECT_LE(hi.metrics.parcel_latency, lo.metrics.parcel_latency + kSlack);
      EXPECT_GE(hi.metrics.societal_latency, lo.metrics.societal_latency - kSlack);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(RandomNetworks, TradeOffProperty, ::testing::Range(1, 31));

}  // namespace
}  // namespace bimodal
