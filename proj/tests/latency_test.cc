#include "bimodal/latency.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bimodal/error.hpp"
#include "bimodal/scenario_io.hpp"
#include "test_util.hpp"

namespace bimodal {
namespace {

std::vector<LatencySample> Synthesize(const LatencyPlane& plane, int count, double noise,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> total(100.0, 2000.0);
  std::uniform_real_distribution<double> ratio(0.0, 0.2);
  std::uniform_real_distribution<double> jitter(-noise, noise);
  std::vector<LatencySample> out;
  for (int i = 0; i < count; ++i) {
    const double t = total(rng);
    const double x = ratio(rng) * t;
    const double exact = plane.omega[0] + plane.omega[1] * x + plane.omega[2] * t;
    out.push_back({x, t, exact + (noise > 0.0 ? jitter(rng) : 0.0)});
  }
  return out;
}

TEST(EdgeLatency, HandValues) {
  EXPECT_DOUBLE_EQ(EdgeLatency({{0.05, 0.002, 0.001}}, 0.0, 0.0), 0.05);
  EXPECT_DOUBLE_EQ(EdgeLatency({{0.01, 0.002, 0.001}}, 10.0, 100.0), 0.14);
}

TEST(EdgeLatency, RejectsNegativeFlows) {
  const LatencyPlane p{{0.01, 0.002, 0.001}};
  EXPECT_THROW(EdgeLatency(p, -1.0, 0.0), Error);
  EXPECT_THROW(EdgeLatency(p, 0.0, -1.0), Error);
}

TEST(EdgeLatency, TruckShareRaisesLatencyAtFixedTotal) {
  for (const LatencyPlane& p : {TwoLaneReferencePlane(), ThreeLaneReferencePlane()}) {
    const double total = 1500.0;
    double previous = -1.0;
    for (double share : {0.001, 0.01, 0.05, 0.1}) {
      const double trucks = share * total;
      const double l = EdgeLatency(p, trucks, total - trucks);
      EXPECT_GT(l, previous);
      previous = l;
    }
  }
}

TEST(EdgeLatency, MonotoneInEachArgument) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(1e-6, 0.1), f(0.0, 5000.0), d(0.0, 100.0);
  for (int i = 0; i < 200; ++i) {
    const LatencyPlane p{{w(rng), w(rng), w(rng)}};
    const double x = f(rng), n = f(rng), dx = d(rng);
    EXPECT_GE(EdgeLatency(p, x + dx, n), EdgeLatency(p, x, n));
    EXPECT_GE(EdgeLatency(p, x, n + dx), EdgeLatency(p, x, n));
  }
}

TEST(ScalePlane, Examples) {
  const LatencyPlane p{{0.02, 0.004, 0.002}};
  EXPECT_EQ(ScalePlane(p, 1.0, 1.0), p);
  const LatencyPlane doubled = ScalePlane(p, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(doubled.omega[0], 0.04);
  EXPECT_DOUBLE_EQ(doubled.omega[1], 0.008);
  EXPECT_DOUBLE_EQ(doubled.omega[2], 0.004);
  EXPECT_THROW(ScalePlane(p, 0.0, 1.0), Error);
  EXPECT_THROW(ScalePlane(p, 1.0, -1.0), Error);
}

TEST(ScalePlane, ReferenceLengths) {
  EXPECT_EQ(kTwoLaneReferenceLengthKm, 0.5);
  EXPECT_EQ(kThreeLaneReferenceLengthKm, 2.0);
}

TEST(ScalePlane, InvertibleAndHomogeneous) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(1e-6, 0.1), len(0.1, 10.0), f(0.0, 3000.0);
  for (int i = 0; i < 200; ++i) {
    const LatencyPlane p{{w(rng), w(rng), w(rng)}};
    const double a = len(rng), b = len(rng);
    const LatencyPlane back = ScalePlane(ScalePlane(p, a, b), b, a);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(back.omega[j], p.omega[j], 1e-12 * p.omega[j]);
    const double x = f(rng), n = f(rng);
    EXPECT_NEAR(EdgeLatency(ScalePlane(p, a, b), x, n), (a / b) * EdgeLatency(p, x, n),
                1e-12 * (a / b) * EdgeLatency(p, x, n));
  }
}

TEST(AerialLatency, Examples) {
  EXPECT_EQ(AerialLatency(0.0, 25.0), 0.0);
  EXPECT_DOUBLE_EQ(AerialLatency(5.0, 25.0), 0.2);
  EXPECT_DOUBLE_EQ(AerialLatency(2.0, 25.0), 0.08);
  EXPECT_THROW(AerialLatency(1.0, 0.0), Error);
  EXPECT_THROW(AerialLatency(-1.0, 25.0), Error);
}

TEST(FitPlane, RecoversNoiselessPlane) {
  const LatencyPlane truth{{0.1, 0.01, 0.001}};
  const PlaneFit fit = FitPlane(Synthesize(truth, 20, 0.0, 3));
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(fit.plane.omega[j], truth.omega[j], 1e-9);
  EXPECT_LT(fit.rmse, 1e-12);
  EXPECT_LE(fit.condition_number, kMaxFitCondition);
}

TEST(FitPlane, NoisySamplesStayWithinNoise) {
  const LatencyPlane truth{{0.1, 0.01, 0.001}};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PlaneFit fit = FitPlane(Synthesize(truth, 50, 1e-3, seed));
    EXPECT_LE(fit.rmse, 1e-3);
    EXPECT_GE(fit.max_residual, fit.rmse);
  }
}

TEST(FitPlane, DegenerateSamples) {
  const std::vector<LatencySample> same(3, LatencySample{10.0, 100.0, 0.1});
  try {
    FitPlane(same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate"), std::string::npos);
  }
  EXPECT_THROW(FitPlane(std::vector<LatencySample>(2, LatencySample{1.0, 2.0, 0.1})), Error);
  // Truck flow a fixed share of total flow: the two flow columns are collinear.
  std::vector<LatencySample> collinear;
  for (int i = 1; i <= 10; ++i) collinear.push_back({0.1 * i * 100, i * 100.0, 0.01 * i});
  EXPECT_THROW(FitPlane(collinear), Error);
}

TEST(FitPlane, NonPhysicalPlaneIsRejected) {
  // Latency falling with total flow.
  std::vector<LatencySample> samples;
  for (int i = 0; i < 10; ++i) {
    const double t = 100.0 + 100.0 * i, x = (i % 3) * 10.0;
    samples.push_back({x, t, 1.0 + 0.001 * x - 0.0001 * t});
  }
  try {
    FitPlane(samples);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("non-physical"), std::string::npos);
  }
}

TEST(FitPlane, ReferencePlanesMatchBundledSamples) {
  const struct {
    const char* file;
    LatencyPlane plane;
  } cases[] = {{"samples/two_lane.csv", TwoLaneReferencePlane()},
               {"samples/three_lane.csv", ThreeLaneReferencePlane()}};
  for (const auto& c : cases) {
    const PlaneFit fit = FitPlane(ReadSamplesCsv(testing::DataPath(c.file)));
    for (int j = 0; j < 3; ++j) {
      EXPECT_GT(fit.plane.omega[j], 0.0);
      EXPECT_NEAR(fit.plane.omega[j], c.plane.omega[j], 1e-9 * c.plane.omega[j]) << c.file << " w" << j;
    }
  }
}

TEST(FitPlane, TwoLaneRoadsAreMoreTruckSensitive) {
  EXPECT_GT(TwoLaneReferencePlane().omega[1], ThreeLaneReferencePlane().omega[1]);
}

}  // namespace
}  // namespace bimodal
