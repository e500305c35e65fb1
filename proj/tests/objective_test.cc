#include "bimodal/objective.hpp"

#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "bimodal/error.hpp"
#include "bimodal/latency.hpp"
#include "test_util.hpp"

namespace bimodal {
namespace {

// hub -> v over one edge whose latency at 0.4 trucks/h is 0.2 h, plus a drone.
Network MixedDeliveryNetwork() {
  Network net;
  net.nodes = {{"hub", std::nullopt}, {"v", std::nullopt}};
  net.hub = NodeId{0};
  RoadEdge e;
  e.id = EdgeId{0};
  e.from = NodeId{0};
  e.to = NodeId{1};
  e.length_km = 1.0;
  e.lanes = 2;
  e.nominal_flow = 0.0;
  e.plane = {{0.196, 0.005, 0.005}};
  net.road_edges = {e};
  net.aerial_edges = {AerialEdge{AerialEdgeId{0}, NodeId{0}, NodeId{1}, 0.3}};
  net.demand = {0.0, 100.0};
  net.constants.parcels_per_truck = 125;
  net.constants.nominal_total = 100.0;
  return net;
}

// Evaluates gamma * L + (1 - gamma) * L^S straight from the definitions,
// without going through the metric functions under test.
double DirectObjective(const Network& net, const PathSet& paths, const std::vector<double>& f,
                       double gamma) {
  const double m = net.constants.parcels_per_truck;
  std::vector<double> edge_flow(net.road_edges.size(), 0.0);
  std::vector<double> truck(net.node_count(), 0.0);
  for (const auto& p : paths.paths()) {
    for (EdgeId e : p.edges) edge_flow[e.index()] += f[p.id.index()];
    truck[p.destination.index()] += m * f[p.id.index()];
  }
  std::vector<double> latency(net.road_edges.size());
  for (const auto& e : net.road_edges) {
    const auto& w = e.plane.omega;
    const double x = edge_flow[e.id.index()];
    latency[e.id.index()] = w[0] + w[1] * x + w[2] * (x + e.nominal_flow);
  }
  double truck_sum = 0.0;
  for (const auto& p : paths.paths()) {
    double l = 0.0;
    for (EdgeId e : p.edges) l += latency[e.index()];
    truck_sum += m * f[p.id.index()] * l;
  }
  double drone_sum = 0.0;
  for (const auto& a : net.aerial_edges) {
    drone_sum += (net.demand[a.to.index()] - truck[a.to.index()]) * a.latency_hours;
  }
  double societal = 0.0;
  for (const auto& e : net.road_edges) societal += e.nominal_flow * latency[e.id.index()];
  societal /= net.constants.nominal_total;
  const double parcel = (truck_sum + drone_sum) / net.total_demand();
  return gamma * parcel + (1.0 - gamma) * societal;
}

TEST(ParcelLatency, PureDrone) {
  const Network net = MixedDeliveryNetwork();
  const PathSet paths = EnumeratePaths(net);
  const auto a = DeriveFlows(net, paths, std::vector<double>{0.0});
  const ParcelLatency l = ComputeParcelLatency(net, paths, a);
  EXPECT_DOUBLE_EQ(l.average, 0.3);
  EXPECT_EQ(l.truck_sum, 0.0);
}

TEST(ParcelLatency, HalfTruckHalfDrone) {
  const Network net = MixedDeliveryNetwork();
  const PathSet paths = EnumeratePaths(net);
  const auto a = DeriveFlows(net, paths, std::vector<double>{0.4});
  const ParcelLatency l = ComputeParcelLatency(net, paths, a);
  EXPECT_NEAR(l.truck_sum, 10.0, 1e-12);
  EXPECT_NEAR(l.drone_sum, 15.0, 1e-12);
  EXPECT_NEAR(l.average, 0.25, 1e-14);
}

TEST(ParcelLatency, ZeroDemandIsUndefined) {
  Network net = MixedDeliveryNetwork();
  net.demand = {0.0, 0.0};
  const PathSet paths = EnumeratePaths(net);
  const auto a = DeriveFlows(net, paths, std::vector<double>{0.0});
  EXPECT_THROW(ComputeParcelLatency(net, paths, a), Error);
}

TEST(SocietalLatency, HandValue) {
  Network net = MixedDeliveryNetwork();
  net.road_edges[0].plane = {{0.01, 0.002, 0.001}};
  net.road_edges[0].nominal_flow = 100.0;
  net.constants.nominal_total = 100.0;
  const PathSet paths = EnumeratePaths(net);
  const auto a = DeriveFlows(net, paths, std::vector<double>{0.0});
  EXPECT_NEAR(ComputeSocietalLatency(net, a), 0.11, 1e-15);
}

TEST(SocietalLatency, NoNominalFlow) {
  const Network net = MixedDeliveryNetwork();
  const PathSet paths = EnumeratePaths(net);
  const auto a = DeriveFlows(net, paths, std::vector<double>{0.5});
  EXPECT_EQ(ComputeSocietalLatency(net, a), 0.0);
}

TEST(AssembleQp, SharedEdgeCouplesPaths) {
  // hub -> u -> v: both paths use the first edge.
  Network net;
  net.nodes = {{"hub", std::nullopt}, {"u", std::nullopt}, {"v", std::nullopt}};
  net.hub = NodeId{0};
  const double c = 0.003;
  net.road_edges = {
      RoadEdge{EdgeId{0}, NodeId{0}, NodeId{1}, 1.0, 2, 0.0, {{0.01, 0.001, c - 0.001}}},
      RoadEdge{EdgeId{1}, NodeId{1}, NodeId{2}, 1.0, 2, 0.0, {{0.01, 0.004, 0.001}}},
  };
  net.aerial_edges = {AerialEdge{AerialEdgeId{0}, NodeId{0}, NodeId{1}, 0.1},
                      AerialEdge{AerialEdgeId{1}, NodeId{0}, NodeId{2}, 0.1}};
  net.demand = {0.0, 0.5, 0.5};
  net.constants.parcels_per_truck = 1;
  net.constants.nominal_total = 1.0;
  const PathSet paths = EnumeratePaths(net);
  ASSERT_EQ(paths.size(), 2u);
  const QpProblem qp = AssembleQp(net, paths, 1.0, Mode::kBimodal);
  EXPECT_NEAR(qp.Q(0, 1), c, 1e-15);
  EXPECT_NEAR(qp.Q(1, 0), c, 1e-15);
  EXPECT_NEAR(qp.Q(0, 0), c, 1e-15);
  EXPECT_NEAR(qp.Q(1, 1), c + 0.005, 1e-15);
}

TEST(AssembleQp, SinglePathDiagonal) {
  const Network net = MixedDeliveryNetwork();
  const PathSet paths = EnumeratePaths(net);
  const double gamma = 0.7;
  const QpProblem qp = AssembleQp(net, paths, gamma, Mode::kBimodal);
  const auto& w = net.road_edges[0].plane.omega;
  EXPECT_NEAR(qp.Q(0, 0), gamma * 125.0 * (w[1] + w[2]) / 100.0, 1e-15);
}

TEST(AssembleQp, GammaZeroIsAffine) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  const QpProblem qp = AssembleQp(net, paths, 0.0, Mode::kBimodal);
  EXPECT_EQ(qp.Q.cwiseAbs().maxCoeff(), 0.0);
  // Only the nominal-flow weighted slopes remain in a.
  for (const auto& p : paths.paths()) {
    double expected = 0.0;
    for (EdgeId e : p.edges) {
      const auto& edge = net.road_edges[e.index()];
      expected += edge.nominal_flow * (edge.plane.omega[1] + edge.plane.omega[2]);
    }
    EXPECT_NEAR(qp.a(p.id.value), expected / net.constants.nominal_total, 1e-15);
  }
}

TEST(AssembleQp, RowLayout) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  const auto n = static_cast<Eigen::Index>(paths.size());
  const QpProblem bimodal = AssembleQp(net, paths, 0.5, Mode::kBimodal);
  EXPECT_EQ(bimodal.num_inequalities(), n + 3 + 1);
  EXPECT_EQ(bimodal.num_equalities(), 0);
  const QpProblem trucks = AssembleQp(net, paths, 0.5, Mode::kTruckOnly);
  EXPECT_EQ(trucks.num_inequalities(), n + 1);
  EXPECT_EQ(trucks.num_equalities(), 3);
  EXPECT_NO_THROW(CheckDimensions(bimodal));
  EXPECT_NO_THROW(CheckDimensions(trucks));
}

TEST(AssembleQp, NodeWithoutDroneGetsEqualityInBimodalMode) {
  Network net = testing::DiamondNetwork();
  net.aerial_edges.pop_back();  // t loses its drone
  const PathSet paths = EnumeratePaths(net);
  const QpProblem qp = AssembleQp(net, paths, 0.5, Mode::kBimodal);
  ASSERT_EQ(qp.num_equalities(), 1);
  EXPECT_DOUBLE_EQ(qp.b(0), net.demand[3]);
}

TEST(AssembleQp, Errors) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  EXPECT_THROW(AssembleQp(net, paths, -0.1, Mode::kBimodal), Error);
  EXPECT_THROW(AssembleQp(net, paths, 1.1, Mode::kBimodal), Error);
  EXPECT_NO_THROW(AssembleQp(net, paths, 0.0, Mode::kBimodal));
  EXPECT_NO_THROW(AssembleQp(net, paths, 1.0, Mode::kBimodal));
  EXPECT_THROW(AssembleQp(net, EnumeratePaths(testing::TwoNodeNetwork()), 0.5, Mode::kBimodal), Error);

  // t reachable only by drone: fine with drones, infeasible without.
  Network cut = net;
  cut.road_edges.erase(cut.road_edges.begin() + 2, cut.road_edges.end());
  const PathSet cut_paths = EnumeratePaths(cut);
  EXPECT_NO_THROW(AssembleQp(cut, cut_paths, 0.5, Mode::kBimodal));
  try {
    AssembleQp(cut, cut_paths, 0.5, Mode::kTruckOnly);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFeasibility);
  }
}

TEST(Evaluate, ZeroFlowIsConstantAndQuadraticIsHomogeneous) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  QpProblem qp = AssembleQp(net, paths, 0.5, Mode::kBimodal);
  const Vector zero = Vector::Zero(qp.num_variables());
  EXPECT_EQ(Evaluate(qp, zero), qp.constant);
  qp.a.setZero();
  qp.constant = 0.0;
  const Vector f = Vector::LinSpaced(qp.num_variables(), 0.1, 1.0);
  EXPECT_NEAR(Evaluate(qp, 2.0 * f), 4.0 * Evaluate(qp, f), 1e-15);
}

TEST(QpToJson, DenseDump) {
  const Network net = testing::DiamondNetwork();
  const PathSet paths = EnumeratePaths(net);
  const QpProblem qp = AssembleQp(net, paths, 0.5, Mode::kTruckOnly);
  const auto doc = QpToJson(qp);
  EXPECT_EQ(doc["Q"].size(), paths.size());
  EXPECT_EQ(doc["a"].size(), paths.size());
  EXPECT_EQ(doc["G"].size(), static_cast<std::size_t>(qp.num_inequalities()));
  EXPECT_EQ(doc["A"].size(), 3u);
  EXPECT_EQ(doc["constant"].get<double>(), qp.constant);
}

TEST(Mode, Names) {
  EXPECT_EQ(ToString(Mode::kBimodal), "bimodal");
  EXPECT_EQ(ToString(Mode::kTruckOnly), "truck_only");
  EXPECT_EQ(ParseMode("truck_only"), Mode::kTruckOnly);
  EXPECT_EQ(ParseMode("bimodal"), Mode::kBimodal);
  EXPECT_THROW(ParseMode("boat"), Error);
}

class ObjectiveProperty : public ::testing::TestWithParam<int> {};

TEST_P(ObjectiveProperty, ConsistencyConvexityAndCostRow) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  Network net;
  PathSet paths;
  do {  // hubs with no outgoing road make the property vacuous
    net = testing::RandomNetwork(rng);
    paths = EnumeratePaths(net, net.node_count());
  } while (paths.size() == 0);
  const double gamma = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const QpProblem qp = AssembleQp(net, paths, gamma, Mode::kBimodal);

  EXPECT_TRUE(qp.Q.isApprox(qp.Q.transpose(), 0.0));
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(qp.Q, Eigen::EigenvaluesOnly);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8);

  const auto x = testing::RandomFeasibleFlows(rng, net, paths);
  const auto y = testing::RandomFeasibleFlows(rng, net, paths);
  const Vector fx = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
  const Vector fy = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));

  const double j = Evaluate(qp, fx);
  const Metrics metrics = ComputeMetrics(net, paths, DeriveFlows(net, paths, x), gamma);
  EXPECT_NEAR(j, metrics.objective, 1e-9 * std::abs(metrics.objective));
  EXPECT_NEAR(j, DirectObjective(net, paths, x, gamma), 1e-9 * std::abs(j));

  const double mid = Evaluate(qp, 0.5 * (fx + fy));
  EXPECT_LE(mid, 0.5 * (j + Evaluate(qp, fy)) + 1e-12 * std::abs(j));

  // Last inequality row is the cost cap: G_row f - h = C(f) - C_0.
  const Vector slack = qp.G * fx - qp.h;
  const double cost = OperationalCost(DeriveFlows(net, paths, x), net.constants);
  EXPECT_NEAR(slack(slack.size() - 1), cost - net.constants.cost_cap,
              1e-9 * std::max(cost, net.constants.cost_cap));
}

INSTANTIATE_TEST_SUITE_P(RandomNetworks, ObjectiveProperty, ::testing::Range(1, 101));

}  // namespace
}  // namespace bimodal
