#include "cc4/verify.hpp"

#include <cmath>
#include <string>

namespace cc4 {

PlanarConfig::PlanarConfig(Eigen::Matrix2Xd positions, Eigen::VectorXd masses)
    : positions_(std::move(positions)), masses_(std::move(masses)) {
  if (positions_.cols() < 3) throw InvalidInput("a planar configuration needs at least three bodies");
  if (masses_.size() != positions_.cols())
    throw InvalidInput("got " + std::to_string(masses_.size()) + " masses for " +
                       std::to_string(positions_.cols()) + " bodies");
  if (!positions_.allFinite() || !masses_.allFinite())
    throw InvalidInput("positions and masses must be finite");
  if ((masses_.array() <= 0.0).any()) throw InvalidInput("masses must be strictly positive");
}

Eigen::Vector2d PlanarConfig::center_of_mass() const {
  return positions_ * masses_ / masses_.sum();
}

Eigen::Matrix<double, 2, 4> symmetric_positions(double s, double t) {
  Eigen::Matrix<double, 2, 4> q;
  q << -1.0, 1.0, 0.0, 0.0,
        0.0, 0.0,   t,   s;
  return q;
}

PlanarConfig assemble_config(const MassSolution<double>& solution) {
  if (!solution.feasible) throw InvalidInput("cannot assemble a configuration with non-positive masses");
  Eigen::Vector4d m(solution.m1, solution.m2, solution.m3, solution.m4);
  return PlanarConfig(symmetric_positions(solution.s, solution.t), m);
}

PlanarConfig assemble_config(const SpecialCaseSolution<double>& solution) {
  Eigen::Vector4d m(solution.m1, solution.m2, solution.m3, solution.m4);
  return PlanarConfig(symmetric_positions(solution.s, solution.t), m);
}

Eigen::Matrix2Xd gravitational_accelerations(const PlanarConfig& config, double min_distance) {
  const auto& q = config.positions();
  const auto& m = config.masses();
  const Eigen::Index n = config.size();
  Eigen::Matrix2Xd acc = Eigen::Matrix2Xd::Zero(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::Vector2d d = q.col(j) - q.col(i);
      const double r = d.norm();
      if (r < min_distance) {
        throw CollisionDetected("bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                " are closer than " + std::to_string(min_distance));
      }
      const Eigen::Vector2d g = d / (r * r * r);
      acc.col(i) += m(j) * g;
      acc.col(j) -= m(i) * g;
    }
  }
  return acc;
}

double potential(const PlanarConfig& config) {
  const auto& q = config.positions();
  const auto& m = config.masses();
  double u = 0.0;
  for (Eigen::Index k = 0; k < config.size(); ++k)
    for (Eigen::Index j = k + 1; j < config.size(); ++j) u += m(k) * m(j) / (q.col(k) - q.col(j)).norm();
  return u;
}

double residual_objective(const PlanarConfig& config, double lambda) {
  const Eigen::Matrix2Xd rel = config.positions().colwise() - config.center_of_mass();
  return (gravitational_accelerations(config) + lambda * rel).squaredNorm();
}

ResidualReport cc_residual(const PlanarConfig& config, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("residual tolerance must be positive");
  const Eigen::Vector2d c = config.center_of_mass();
  const Eigen::Matrix2Xd rel = config.positions().colwise() - c;
  const Eigen::Matrix2Xd acc = gravitational_accelerations(config);

  ResidualReport report;
  // argmin_lambda sum |F_i + lambda r_i|^2  =>  lambda = -<F, r> / <r, r>
  report.lambda_est = -(acc.cwiseProduct(rel)).sum() / rel.squaredNorm();
  const Eigen::Matrix2Xd residual = acc + report.lambda_est * rel;
  report.per_body_residual = residual.cwiseAbs().colwise().maxCoeff().transpose();
  report.max_residual = report.per_body_residual.maxCoeff();

  const double inertia = rel.colwise().squaredNorm().dot(config.masses());
  report.lambda_ui = potential(config) / inertia;
  report.is_central = report.max_residual < tol && report.lambda_est > 0.0;
  return report;
}

ReducedSolution solve_reduced_system(const ShapeParams<double>& params, double lambda,
                                     std::optional<double> c_y) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) throw InvalidInput("lambda must be a finite positive number");
  const double s = params.s();
  const double t = params.t();
  const double hyp_s = std::pow(1.0 + s * s, 1.5);
  const double hyp_t = std::pow(1.0 + t * t, 1.5);
  const double gap = t - s;
  const double gap3 = gap * gap * gap;

  ReducedSolution out;
  out.c_y = c_y.value_or(center_ordinate(params));

  // Unknowns (m2, m3, m4); rows are equations 1, 3, 4.
  Eigen::Matrix3d a;
  a << 2.0 / 8.0,        1.0 / hyp_t, 1.0 / hyp_s,
       -2.0 * t / hyp_t, 0.0,         (s - t) / gap3,
       -2.0 * s / hyp_s, gap / gap3,  0.0;
  const Eigen::Vector3d b = lambda * Eigen::Vector3d(1.0, -(t - out.c_y), -(s - out.c_y));

  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(a);
  if (!(lu.rcond() >= kSingularPivot)) {
    throw SingularSystem("reduced system is singular at " + detail::describe(s, t) +
                         " (reciprocal condition " + std::to_string(lu.rcond()) + ")");
  }
  const Eigen::Vector3d x = lu.solve(b);
  out.m2 = x(0);
  out.m3 = x(1);
  out.m4 = x(2);
  out.consistency_residual = std::abs(t / hyp_t * out.m3 + s / hyp_s * out.m4 - lambda * out.c_y);
  return out;
}

bool check_reduction(const ShapeParams<double>& params, const std::array<double, 4>& masses,
                     double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const double s = params.s();
  const double t = params.t();
  const double hyp_s = std::pow(1.0 + s * s, 1.5);
  const double hyp_t = std::pow(1.0 + t * t, 1.5);
  const auto [m1, m2, m3, m4] = masses;

  // Horizontal components for bodies 3 and 4 each give lambda c_x in terms of
  // m2 - m1; they agree for t != s only when m1 == m2.
  const double cx_from_apex = (m2 - m1) / (hyp_t * lambda);
  const double cx_from_inner = (m2 - m1) / (hyp_s * lambda);
  const double scale = std::max({1.0, std::abs(m1), std::abs(m2)});
  const bool symmetric = std::abs(m1 - m2) <= kReductionTolerance * scale &&
                         std::abs(cx_from_apex - cx_from_inner) <= kReductionTolerance * scale;

  const double total = m1 + m2 + m3 + m4;
  const double cx = (m2 - m1) / total;
  return symmetric && std::abs(cx) <= kReductionTolerance;
}

}  // namespace cc4
