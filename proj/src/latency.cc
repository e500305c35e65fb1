#include "bimodal/latency.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "bimodal/error.hpp"

namespace bimodal {

double EdgeLatency(const LatencyPlane& plane, double truck_flow, double nominal_flow) {
  if (!(truck_flow >= 0.0) || !(nominal_flow >= 0.0)) {
    throw DomainError("edge latency needs non-negative flows, got truck=" +
                      std::to_string(truck_flow) + " nominal=" + std::to_string(nominal_flow));
  }
  return plane.omega[0] + plane.omega[1] * truck_flow +
         plane.omega[2] * (truck_flow + nominal_flow);
}

PlaneFit FitPlane(std::span<const LatencySample> samples) {
  if (samples.size() < 3) {
    throw DomainError("plane fit needs at least 3 samples, got " + std::to_string(samples.size()));
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd latency(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (!(s.truck_flow >= 0.0) || !(s.total_flow >= s.truck_flow) || !(s.latency > 0.0)) {
      throw DomainError("invalid latency sample at row " + std::to_string(i));
    }
    design(i, 0) = 1.0;
    design(i, 1) = s.truck_flow;
    design(i, 2) = s.total_flow;
    latency(i) = s.latency;
  }

  // Equilibrate columns so the condition number reflects geometry, not units.
  Eigen::Vector3d scale = design.colwise().norm().transpose();
  for (int j = 0; j < 3; ++j) {
    if (scale(j) == 0.0) throw DomainError("degenerate samples: all-zero flow column");
    design.col(j) /= scale(j);
  }
  const Eigen::Matrix3d normal = design.transpose() * design;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxFitCondition)) {
    throw DomainError("degenerate samples: normal matrix condition number " +
                      std::to_string(condition) + " exceeds 1e12");
  }

  const Eigen::Vector3d scaled = normal.llt().solve(design.transpose() * latency);
  const Eigen::VectorXd residual = design * scaled - latency;

  PlaneFit fit;
  for (int j = 0; j < 3; ++j) fit.plane.omega[j] = scaled(j) / scale(j);
  fit.rmse = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
  fit.max_residual = residual.cwiseAbs().maxCoeff();
  fit.condition_number = condition;

  for (int j = 0; j < 3; ++j) {
    if (!(fit.plane.omega[j] > 0.0)) {
      throw DomainError("non-physical plane: weight w" + std::to_string(j) + " = " +
                        std::to_string(fit.plane.omega[j]) +
                        " is not positive; restrict the samples to the low truck-ratio regime");
    }
  }
  return fit;
}

LatencyPlane ScalePlane(const LatencyPlane& plane, double target_length_km,
                        double reference_length_km) {
  if (!(target_length_km > 0.0) || !(reference_length_km > 0.0)) {
    throw DomainError("plane scaling needs positive lengths");
  }
  const double ratio = target_length_km / reference_length_km;
  LatencyPlane out = plane;
  for (double& w : out.omega) w *= ratio;
  return out;
}

double AerialLatency(double distance_km, double drone_speed_kmh) {
  if (!(drone_speed_kmh > 0.0)) throw DomainError("drone speed must be positive");
  if (!(distance_km >= 0.0)) throw DomainError("aerial distance must be non-negative");
  return distance_km / drone_speed_kmh;
}

// Least-squares fits of data/samples/{two,three}_lane.csv; latency_test keeps
// these in sync with the files.
LatencyPlane TwoLaneReferencePlane() {
  return {{0.007848702989574883, 6.310201030387328e-05, 4.9498538533542944e-06}};
}
LatencyPlane ThreeLaneReferencePlane() {
  return {{0.021562912198302194, 4.5011350431100994e-05, 4.241845995980712e-06}};
}

}  // namespace bimodal
