#pragma once

// Independent checks built straight from the Newtonian equations. Nothing in
// here calls the closed-form mass expressions.

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "cc4/core.hpp"

namespace cc4 {

inline constexpr double kCollisionDistance = 1e-12;
inline constexpr double kSingularPivot = 1e-13;
inline constexpr double kReductionTolerance = 1e-12;

/// Point masses in the plane, one column per body. At least three bodies.
class PlanarConfig {
 public:
  PlanarConfig(Eigen::Matrix2Xd positions, Eigen::VectorXd masses);

  const Eigen::Matrix2Xd& positions() const { return positions_; }
  const Eigen::VectorXd& masses() const { return masses_; }
  Eigen::Index size() const { return positions_.cols(); }

  Eigen::Vector2d center_of_mass() const;
  double total_mass() const { return masses_.sum(); }

 private:
  Eigen::Matrix2Xd positions_;
  Eigen::VectorXd masses_;
};

/// q1 = (-1,0), q2 = (1,0), q3 = (0,t), q4 = (0,s) as columns.
Eigen::Matrix<double, 2, 4> symmetric_positions(double s, double t);

PlanarConfig assemble_config(const MassSolution<double>& solution);
PlanarConfig assemble_config(const SpecialCaseSolution<double>& solution);

struct ResidualReport {
  double lambda_est = 0.0;
  double max_residual = 0.0;
  Eigen::VectorXd per_body_residual;
  double lambda_ui = 0.0;
  bool is_central = false;
};

/// Per-body accelerations sum_{j != i} m_j (q_j - q_i) / |q_j - q_i|^3.
/// Throws CollisionDetected when two bodies are closer than min_distance.
Eigen::Matrix2Xd gravitational_accelerations(const PlanarConfig& config,
                                             double min_distance = kCollisionDistance);

/// Newtonian potential U = sum_{k<j} m_k m_j / |q_k - q_j|.
double potential(const PlanarConfig& config);

/// Sum over bodies of |F_i + lambda (q_i - c)|^2.
double residual_objective(const PlanarConfig& config, double lambda);

/// Fits the scalar lambda of -lambda (q_i - c) = F_i by least squares over all
/// 2n components and reports how well the fit closes.
ResidualReport cc_residual(const PlanarConfig& config, double tol);

struct ReducedSolution {
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double c_y = 0.0;
  /// |t m3/(1+t^2)^{3/2} + s m4/(1+s^2)^{3/2} - lambda c_y|, the equation left
  /// out of the square solve.
  double consistency_residual = 0.0;
};

/// Solves equations 1, 3 and 4 of the reduced four-equation system for
/// (m2, m3, m4). c_y defaults to center_ordinate(params).
ReducedSolution solve_reduced_system(const ShapeParams<double>& params, double lambda,
                                     std::optional<double> c_y = std::nullopt);

/// True iff the horizontal equations force nothing further: m1 == m2 and the
/// horizontal center of mass vanishes, both within 1e-12.
bool check_reduction(const ShapeParams<double>& params, const std::array<double, 4>& masses,
                     double lambda);

}  // namespace cc4
