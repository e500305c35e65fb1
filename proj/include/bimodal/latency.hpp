#pragma once

#include <array>
#include <span>

namespace bimodal {

/// Affine road latency in hours:
///   latency = w0 + w1 * truck_flow + w2 * (truck_flow + nominal_flow)
/// with flows in vehicles/hour. All weights are strictly positive.
struct LatencyPlane {
  std::array<double, 3> omega{};

  double intercept() const { return omega[0]; }
  double truck_slope() const { return omega[1]; }
  double total_slope() const { return omega[2]; }

  bool operator==(const LatencyPlane&) const = default;
};

/// One observation of average link travel time.
struct LatencySample {
  double truck_flow = 0.0;  // stopping vehicles/hour
  double total_flow = 0.0;  // all vehicles/hour, >= truck_flow
  double latency = 0.0;     // hours
};

struct PlaneFit {
  LatencyPlane plane;
  double rmse = 0.0;
  double max_residual = 0.0;
  double condition_number = 0.0;  // of the column-equilibrated normal matrix
};

/// Condition numbers above this are treated as rank deficiency.
inline constexpr double kMaxFitCondition = 1e12;

/// Road latency for a truck flow riding on top of a nominal flow. Throws a
/// domain error for negative flows.
double EdgeLatency(const LatencyPlane& plane, double truck_flow, double nominal_flow);

/// Least-squares plane through the samples, solved through the normal
/// equations on equilibrated columns [1, truck_flow, total_flow].
///
/// Throws a domain error for fewer than 3 samples, invalid samples, a
/// near-singular design ("degenerate samples"), or a fitted weight <= 0
/// ("non-physical plane").
PlaneFit FitPlane(std::span<const LatencySample> samples);

/// Rescales every weight by target_length / reference_length.
LatencyPlane ScalePlane(const LatencyPlane& plane, double target_length_km,
                        double reference_length_km);

/// Straight-line drone travel time in hours.
double AerialLatency(double distance_km, double drone_speed_kmh);

/// Reference planes for the two simulated road classes, fitted from the
/// synthetic samples under data/samples/. Lengths are the road lengths the
/// samples describe.
inline constexpr double kTwoLaneReferenceLengthKm = 0.5;
inline constexpr double kThreeLaneReferenceLengthKm = 2.0;
LatencyPlane TwoLaneReferencePlane();
LatencyPlane ThreeLaneReferencePlane();

}  // namespace bimodal
