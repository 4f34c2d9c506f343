#pragma once

// Rigid-rotation launch of a central configuration and fixed-step RK4
// integration of the planar four-body problem (G = 1).

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "cc4/core.hpp"

namespace cc4 {

inline constexpr double kDynamicsCollision = 1e-6;
inline constexpr int kDefaultStepsPerPeriod = 20000;

using Positions4 = Eigen::Matrix<double, 2, 4>;

struct SimState {
  double time = 0.0;
  Positions4 positions = Positions4::Zero();
  Positions4 velocities = Positions4::Zero();
  Eigen::Vector4d masses = Eigen::Vector4d::Ones();

  Eigen::Vector2d momentum() const { return velocities * masses; }
  Eigen::Vector2d center_of_mass() const { return positions * masses / masses.sum(); }
};

struct ConservationMonitor {
  double energy = 0.0;            // kinetic minus U
  double angular_momentum = 0.0;  // z-component about the origin
  std::array<double, 6> mutual_distances{};  // (12, 13, 14, 23, 24, 34)
};

ConservationMonitor monitor(const SimState& state);

/// Largest relative deviations from the initial monitor seen so far.
struct DriftReport {
  double distance = 0.0;
  double energy = 0.0;
  double angular_momentum = 0.0;
};

/// Angular rate of the relative equilibrium generated by multiplier lambda.
inline double angular_rate(double lambda) { return std::sqrt(lambda); }
double rotation_period(double lambda);

/// Sets v_i = omega * J (q_i - c), J the +90 degree rotation.
SimState launch_rigid_rotation(const Positions4& positions, const Eigen::Vector4d& masses, double omega);

/// Positions and masses from solve_masses, spun at omega = sqrt(lambda).
/// Throws InfeasibleShape when some mass is not positive.
SimState launch_relative_equilibrium(const ShapeParams<double>& params, double lambda = kDefaultLambda,
                                     double eps_sign = kDefaultEpsSign);

SimState launch_relative_equilibrium(const SpecialCaseSolution<double>& solution);

struct IntegrationResult {
  SimState final_state;
  DriftReport drift;
};

/// Called after every step with the step index (1-based), the state and the
/// running drift.
using StepObserver = std::function<void(int, const SimState&, const DriftReport&)>;

/// Classical fourth-order Runge-Kutta with fixed step dt. Throws
/// CollisionDetected if any pair comes closer than 1e-6.
IntegrationResult integrate(const SimState& state, double dt, int n_steps,
                            const StepObserver& observer = {});

}  // namespace cc4
