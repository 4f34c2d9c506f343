#include "cc4/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cc4/verify.hpp"

namespace cc4 {

namespace {

constexpr std::array<std::pair<int, int>, 6> kPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Positions4 accelerations(const Positions4& q, const Eigen::Vector4d& m) {
  Positions4 acc = Positions4::Zero();
  for (const auto& [i, j] : kPairs) {
    const Eigen::Vector2d d = q.col(j) - q.col(i);
    const double r = d.norm();
    if (r < kDynamicsCollision) {
      throw CollisionDetected("bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " collided (distance " + std::to_string(r) + ")");
    }
    const Eigen::Vector2d g = d / (r * r * r);
    acc.col(i) += m(j) * g;
    acc.col(j) -= m(i) * g;
  }
  return acc;
}

double relative_change(double now, double initial) {
  const double scale = std::abs(initial);
  return scale > 0.0 ? std::abs(now - initial) / scale : std::abs(now - initial);
}

void accumulate(DriftReport& drift, const ConservationMonitor& now, const ConservationMonitor& initial) {
  for (std::size_t k = 0; k < now.mutual_distances.size(); ++k)
    drift.distance = std::max(drift.distance, relative_change(now.mutual_distances[k], initial.mutual_distances[k]));
  drift.energy = std::max(drift.energy, relative_change(now.energy, initial.energy));
  drift.angular_momentum =
      std::max(drift.angular_momentum, relative_change(now.angular_momentum, initial.angular_momentum));
}

}  // namespace

ConservationMonitor monitor(const SimState& state) {
  const auto& q = state.positions;
  const auto& v = state.velocities;
  const auto& m = state.masses;
  ConservationMonitor out;
  double kinetic = 0.0;
  for (int i = 0; i < 4; ++i) {
    kinetic += 0.5 * m(i) * v.col(i).squaredNorm();
    out.angular_momentum += m(i) * (q(0, i) * v(1, i) - q(1, i) * v(0, i));
  }
  double u = 0.0;
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    const auto [i, j] = kPairs[k];
    const double r = (q.col(i) - q.col(j)).norm();
    out.mutual_distances[k] = r;
    u += m(i) * m(j) / r;
  }
  out.energy = kinetic - u;
  return out;
}

double rotation_period(double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  return 2.0 * std::numbers::pi / angular_rate(lambda);
}

SimState launch_rigid_rotation(const Positions4& positions, const Eigen::Vector4d& masses, double omega) {
  if (!positions.allFinite() || !masses.allFinite() || (masses.array() <= 0.0).any())
    throw InvalidInput("launch needs finite positions and positive masses");
  SimState state;
  state.positions = positions;
  state.masses = masses;
  const Eigen::Vector2d c = state.center_of_mass();
  Eigen::Matrix2d turn;
  turn << 0.0, -1.0, 1.0, 0.0;
  state.velocities = omega * turn * (positions.colwise() - c);
  const double scale = std::max(1.0, std::abs(omega) * (masses.sum()) * (positions.colwise() - c).cwiseAbs().maxCoeff());
  if (state.momentum().lpNorm<Eigen::Infinity>() > 1e-12 * scale)
    throw std::logic_error("rigid-rotation launch has non-zero total momentum");
  return state;
}

SimState launch_relative_equilibrium(const ShapeParams<double>& params, double lambda, double eps_sign) {
  const auto sol = solve_masses(params, lambda, eps_sign);
  if (!sol.feasible) {
    throw InfeasibleShape("shape " + detail::describe(params.s(), params.t()) +
                          " has a non-positive mass; it is not a central configuration");
  }
  return launch_rigid_rotation(symmetric_positions(params.s(), params.t()),
                               Eigen::Vector4d(sol.m1, sol.m2, sol.m3, sol.m4), angular_rate(lambda));
}

SimState launch_relative_equilibrium(const SpecialCaseSolution<double>& solution) {
  return launch_rigid_rotation(symmetric_positions(solution.s, solution.t),
                               Eigen::Vector4d(solution.m1, solution.m2, solution.m3, solution.m4),
                               angular_rate(solution.lambda));
}

IntegrationResult integrate(const SimState& state, double dt, int n_steps, const StepObserver& observer) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive");
  if (n_steps < 0) throw InvalidInput("step count must be non-negative");

  const ConservationMonitor initial = monitor(state);
  const Eigen::Vector4d& m = state.masses;
  IntegrationResult out{state, {}};
  Positions4& q = out.final_state.positions;
  Positions4& v = out.final_state.velocities;

  for (int step = 1; step <= n_steps; ++step) {
    const Positions4 k1v = accelerations(q, m);
    const Positions4 k1q = v;
    const Positions4 k2v = accelerations(q + 0.5 * dt * k1q, m);
    const Positions4 k2q = v + 0.5 * dt * k1v;
    const Positions4 k3v = accelerations(q + 0.5 * dt * k2q, m);
    const Positions4 k3q = v + 0.5 * dt * k2v;
    const Positions4 k4v = accelerations(q + dt * k3q, m);
    const Positions4 k4q = v + dt * k3v;
    q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    out.final_state.time = state.time + step * dt;

    const ConservationMonitor now = monitor(out.final_state);
    for (double r : now.mutual_distances) {
      if (r < kDynamicsCollision) throw CollisionDetected("bodies collided at t = " + std::to_string(out.final_state.time));
    }
    accumulate(out.drift, now, initial);
    if (observer) observer(step, out.final_state, out.drift);
  }
  return out;
}

}  // namespace cc4
