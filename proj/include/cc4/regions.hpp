#pragma once

// Feasibility regions of the (s, t) plane. Labels follow the sign law of the
// closed-form masses:
//   m4 > 0  <=>  p1 p2 > 0
//   m3 > 0  <=>  p3 p4 p2 > 0      (p5 > 0 everywhere)
//   m1 > 0  <=>  p4 p2 < 0
// A = {p1 > 0, p2 > 0}, B = {p1 < 0, p2 < 0}; C and D are the all-positive
// cells below and above t = sqrt(3).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cc4/core.hpp"

namespace cc4 {

enum class RegionLabel { A, B, C, D, Boundary, Infeasible, Invalid };

const char* to_string(RegionLabel label);
std::optional<RegionLabel> region_label_from_string(const std::string& name);

inline bool all_masses_positive(RegionLabel label) {
  return label == RegionLabel::C || label == RegionLabel::D;
}

/// Accepts any finite (s, t); geometry outside t > s > 0 yields Invalid.
RegionLabel classify(double s, double t, double eps_sign = kDefaultEpsSign);

enum class CurveId { P1, P2, P4 };

const char* to_string(CurveId id);

struct BoundaryPolyline {
  CurveId curve_id = CurveId::P1;
  Eigen::Matrix2Xd samples;  // column k = (s_k, t_k), s increasing
  Eigen::VectorXd defects;   // |p_curve| at each sample
  double max_defect = 0.0;
};

/// Unique t > s with 2(t - s) = sqrt(1+s^2) sqrt(1+t^2), for 0 <= s < sqrt(3).
/// Bisection to relative width 1e-12 followed by at most three Newton steps.
double p2_curve_t(double s);

/// t = s + sqrt(1+s^2); defined for s >= 0 (s = 0 is outside the open domain).
double p4_curve_t(double s);

BoundaryPolyline trace_p1(double s_lo, double s_hi, int n);
BoundaryPolyline trace_p2(double s_lo, double s_hi, int n);
BoundaryPolyline trace_p4(double s_lo, double s_hi, int n);

struct TriplePoint {
  double s = 0.0;
  double t = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p4 = 0.0;
  int iterations = 0;
};

/// Newton on {p1 = 0, p4 = 0}; p2 is evaluated at the result and must vanish.
TriplePoint triple_intersection(double s_seed = 0.5, double t_seed = 1.8);

struct RasterSpec {
  double s_lo = 0.01;
  double s_hi = 2.5;
  double t_lo = 0.02;
  double t_hi = 4.5;
  int s_cells = 512;
  int t_cells = 512;

  double ds() const { return (s_hi - s_lo) / s_cells; }
  double dt() const { return (t_hi - t_lo) / t_cells; }
  double s_center(int i) const { return s_lo + (i + 0.5) * ds(); }
  double t_center(int j) const { return t_lo + (j + 0.5) * dt(); }
};

struct CellMasses {
  double m1 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double c_y = 0.0;
};

struct RasterCell {
  double s = 0.0;
  double t = 0.0;
  RegionLabel label = RegionLabel::Invalid;
  std::optional<SignProfile<double>> profile;  // absent on Invalid cells
  std::optional<CellMasses> masses;            // absent on Invalid and Boundary cells
};

/// Cells are stored row-major: row j (t index) outer, column i (s index) inner.
struct RegionRaster {
  RasterSpec spec;
  std::vector<RasterCell> cells;

  const RasterCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * spec.s_cells + i]; }
};

RegionRaster scan(const RasterSpec& spec, double lambda = kDefaultLambda,
                  double eps_sign = kDefaultEpsSign);

/// 4-connected components over the cells selected by `member`. Returns one id
/// per cell (-1 for non-members) and the component count.
struct ComponentLabels {
  std::vector<int> ids;
  int count = 0;
};

template <typename Predicate>
ComponentLabels label_components(const RegionRaster& raster, Predicate member);

struct ComponentExtents {
  RegionLabel label = RegionLabel::Invalid;
  double s_min = 0.0, s_max = 0.0, t_min = 0.0, t_max = 0.0;  // cell centers
  int i_min = 0, i_max = 0, j_min = 0, j_max = 0;
  std::size_t cell_count = 0;
  double area = 0.0;
  int components = 0;
  /// Smallest number of cells between the labeled set and the raster edge.
  int edge_margin = 0;
  /// True when some labeled cell is 4-adjacent to an Invalid (t <= s) cell.
  bool touches_invalid = false;
};

/// Bounding box and cell-count area of every cell carrying `label`.
/// Throws LabelAbsent if no cell does.
ComponentExtents component_extents(const RegionRaster& raster, RegionLabel label);

}  // namespace cc4

#include "cc4/regions_impl.hpp"
