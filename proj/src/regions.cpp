#include "cc4/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cc4 {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kBracketLimit = 1e6;
constexpr double kBisectionWidth = 1e-12;
constexpr int kNewtonPolish = 3;

double p1_raw(double t) { return 8.0 - std::pow(1.0 + t * t, 1.5); }

double p2_raw(double s, double t) {
  const double base = 2.0 / std::sqrt(1.0 + s * s);
  const double apex = std::sqrt(1.0 + t * t) / (t - s);
  return base * base * base - apex * apex * apex;
}

double p4_raw(double s, double t) {
  const double gap = t - s;
  return std::pow(1.0 + s * s, 1.5) - gap * gap * gap;
}

void check_sampling(double s_lo, double s_hi, int n) {
  if (!std::isfinite(s_lo) || !std::isfinite(s_hi) || !(s_lo < s_hi))
    throw InvalidInput("curve sampling needs finite s_lo < s_hi");
  if (n < 2) throw InvalidInput("curve sampling needs at least two points");
}

double sample_s(double s_lo, double s_hi, int n, int k) {
  if (k == n - 1) return s_hi;
  return s_lo + (s_hi - s_lo) * k / (n - 1);
}

template <typename CurveT, typename Defect>
BoundaryPolyline sample_curve(CurveId id, double s_lo, double s_hi, int n, CurveT curve_t,
                              Defect defect) {
  BoundaryPolyline line;
  line.curve_id = id;
  line.samples.resize(2, n);
  line.defects.resize(n);
  for (int k = 0; k < n; ++k) {
    const double s = sample_s(s_lo, s_hi, n, k);
    const double t = curve_t(s);
    line.samples(0, k) = s;
    line.samples(1, k) = t;
    line.defects(k) = std::abs(defect(s, t));
  }
  line.max_defect = line.defects.maxCoeff();
  return line;
}

}  // namespace

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::A: return "A";
    case RegionLabel::B: return "B";
    case RegionLabel::C: return "C";
    case RegionLabel::D: return "D";
    case RegionLabel::Boundary: return "Boundary";
    case RegionLabel::Infeasible: return "Infeasible";
    case RegionLabel::Invalid: return "Invalid";
  }
  return "?";
}

std::optional<RegionLabel> region_label_from_string(const std::string& name) {
  for (auto label : {RegionLabel::A, RegionLabel::B, RegionLabel::C, RegionLabel::D,
                     RegionLabel::Boundary, RegionLabel::Infeasible, RegionLabel::Invalid}) {
    if (name == to_string(label)) return label;
  }
  return std::nullopt;
}

const char* to_string(CurveId id) {
  switch (id) {
    case CurveId::P1: return "p1";
    case CurveId::P2: return "p2";
    case CurveId::P4: return "p4";
  }
  return "?";
}

RegionLabel classify(double s, double t, double eps_sign) {
  if (!ShapeParams<double>::is_valid(s, t)) return RegionLabel::Invalid;
  const auto pr = sign_profile(ShapeParams<double>(s, t), eps_sign);
  if (pr.sign1 == Sign::Boundary || pr.sign2 == Sign::Boundary || pr.sign4 == Sign::Boundary)
    return RegionLabel::Boundary;

  const bool m4_positive = pr.p1 * pr.p2 > 0.0;
  const bool m3_positive = pr.p3 * pr.p4 * pr.p2 > 0.0;
  const bool m1_positive = pr.p4 * pr.p2 < 0.0;
  const bool below_sqrt3 = pr.p1 > 0.0;
  if (m4_positive && m3_positive && m1_positive) return below_sqrt3 ? RegionLabel::C : RegionLabel::D;
  if (m4_positive) return below_sqrt3 ? RegionLabel::A : RegionLabel::B;
  return RegionLabel::Infeasible;
}

double p2_curve_t(double s) {
  if (!std::isfinite(s) || s < 0.0 || s >= kSqrt3)
    throw InvalidInput("the p2 = 0 curve exists only for 0 <= s < sqrt(3)");
  const double root_s = std::sqrt(1.0 + s * s);
  // g is strictly increasing in t for s < sqrt(3), negative at t = s.
  auto g = [&](double t) { return 2.0 * (t - s) - root_s * std::sqrt(1.0 + t * t); };
  auto dg = [&](double t) { return 2.0 - root_s * t / std::sqrt(1.0 + t * t); };

  double lo = s;
  double hi = s + 1.0;
  while (g(hi) <= 0.0) {
    lo = hi;
    hi = s + 2.0 * (hi - s);
    if (hi > kBracketLimit) {
      throw RootNotBracketed("p2 = 0 root for s = " + std::to_string(s) +
                             " lies beyond t = 1e6; s is too close to sqrt(3)");
    }
  }
  while (hi - lo > kBisectionWidth * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int k = 0; k < kNewtonPolish; ++k) {
    const double step = g(t) / dg(t);
    const double next = t - step;
    if (!(next > lo - kBisectionWidth * hi && next < hi + kBisectionWidth * hi)) break;
    t = next;
    if (step == 0.0) break;
  }
  return t;
}

double p4_curve_t(double s) {
  if (!std::isfinite(s) || s < 0.0) throw InvalidInput("the p4 = 0 curve is sampled for s >= 0");
  return s + std::sqrt(1.0 + s * s);
}

BoundaryPolyline trace_p1(double s_lo, double s_hi, int n) {
  check_sampling(s_lo, s_hi, n);
  if (s_lo < 0.0 || s_hi >= kSqrt3) throw InvalidInput("p1 curve tracing needs 0 <= s_lo < s_hi < sqrt(3)");
  return sample_curve(
      CurveId::P1, s_lo, s_hi, n, [](double) { return kSqrt3; },
      [](double, double t) { return p1_raw(t); });
}

BoundaryPolyline trace_p2(double s_lo, double s_hi, int n) {
  check_sampling(s_lo, s_hi, n);
  if (s_lo < 0.0 || s_hi >= kSqrt3) throw InvalidInput("p2 curve tracing needs 0 <= s_lo < s_hi < sqrt(3)");
  auto line = sample_curve(CurveId::P2, s_lo, s_hi, n, p2_curve_t, p2_raw);
  for (Eigen::Index k = 1; k < line.samples.cols(); ++k) {
    if (!(line.samples(1, k) > line.samples(1, k - 1))) {
      throw std::logic_error("traced p2 curve is not strictly increasing near s = " +
                             std::to_string(line.samples(0, k)));
    }
  }
  return line;
}

BoundaryPolyline trace_p4(double s_lo, double s_hi, int n) {
  check_sampling(s_lo, s_hi, n);
  if (!(s_lo > 0.0)) throw InvalidInput("p4 curve tracing needs 0 < s_lo < s_hi");
  return sample_curve(CurveId::P4, s_lo, s_hi, n, p4_curve_t, p4_raw);
}

TriplePoint triple_intersection(double s_seed, double t_seed) {
  Eigen::Vector2d x(s_seed, t_seed);
  TriplePoint out;
  for (int it = 1; it <= 50; ++it) {
    const double s = x(0);
    const double t = x(1);
    const double gap = t - s;
    const Eigen::Vector2d f(p1_raw(t), p4_raw(s, t));
    Eigen::Matrix2d jac;
    jac << 0.0, -3.0 * t * std::sqrt(1.0 + t * t),
        3.0 * s * std::sqrt(1.0 + s * s) + 3.0 * gap * gap, -3.0 * gap * gap;
    const Eigen::Vector2d step = jac.partialPivLu().solve(f);
    x -= step;
    out.iterations = it;
    if (step.lpNorm<Eigen::Infinity>() <= 1e-16 * x.lpNorm<Eigen::Infinity>()) break;
  }
  out.s = x(0);
  out.t = x(1);
  if (!ShapeParams<double>::is_valid(out.s, out.t))
    throw std::runtime_error("triple-point Newton iteration left the domain t > s > 0");
  out.p1 = p1_raw(out.t);
  out.p2 = p2_raw(out.s, out.t);
  out.p4 = p4_raw(out.s, out.t);
  if (std::abs(out.p2) > 1e-10)
    throw std::runtime_error("p1 = p4 = 0 intersection does not lie on p2 = 0");
  return out;
}

RegionRaster scan(const RasterSpec& spec, double lambda, double eps_sign) {
  if (!(std::isfinite(spec.s_lo) && std::isfinite(spec.s_hi) && spec.s_lo < spec.s_hi) ||
      !(std::isfinite(spec.t_lo) && std::isfinite(spec.t_hi) && spec.t_lo < spec.t_hi))
    throw InvalidInput("scan ranges must be finite and non-empty");
  if (spec.s_cells <= 0 || spec.t_cells <= 0) throw InvalidInput("scan resolution must be positive");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");

  RegionRaster raster;
  raster.spec = spec;
  raster.cells.resize(static_cast<std::size_t>(spec.s_cells) * spec.t_cells);
  for (int j = 0; j < spec.t_cells; ++j) {
    for (int i = 0; i < spec.s_cells; ++i) {
      RasterCell& cell = raster.cells[static_cast<std::size_t>(j) * spec.s_cells + i];
      cell.s = spec.s_center(i);
      cell.t = spec.t_center(j);
      cell.label = classify(cell.s, cell.t, eps_sign);
      if (cell.label == RegionLabel::Invalid) continue;
      const ShapeParams<double> params(cell.s, cell.t);
      cell.profile = sign_profile(params, eps_sign);
      if (cell.label == RegionLabel::Boundary) continue;
      const auto sol = solve_masses(params, lambda, eps_sign);
      cell.masses = CellMasses{sol.m1, sol.m3, sol.m4, sol.c_y};
    }
  }
  return raster;
}

ComponentExtents component_extents(const RegionRaster& raster, RegionLabel label) {
  const auto& spec = raster.spec;
  ComponentExtents ext;
  ext.label = label;
  ext.i_min = spec.s_cells;
  ext.j_min = spec.t_cells;
  ext.i_max = -1;
  ext.j_max = -1;
  for (int j = 0; j < spec.t_cells; ++j) {
    for (int i = 0; i < spec.s_cells; ++i) {
      if (raster.at(i, j).label != label) continue;
      ++ext.cell_count;
      ext.i_min = std::min(ext.i_min, i);
      ext.i_max = std::max(ext.i_max, i);
      ext.j_min = std::min(ext.j_min, j);
      ext.j_max = std::max(ext.j_max, j);
      const bool invalid_neighbour =
          (i > 0 && raster.at(i - 1, j).label == RegionLabel::Invalid) ||
          (i + 1 < spec.s_cells && raster.at(i + 1, j).label == RegionLabel::Invalid) ||
          (j > 0 && raster.at(i, j - 1).label == RegionLabel::Invalid) ||
          (j + 1 < spec.t_cells && raster.at(i, j + 1).label == RegionLabel::Invalid);
      ext.touches_invalid = ext.touches_invalid || invalid_neighbour;
    }
  }
  if (ext.cell_count == 0) throw LabelAbsent(std::string("no raster cell is labeled ") + to_string(label));

  ext.s_min = spec.s_center(ext.i_min);
  ext.s_max = spec.s_center(ext.i_max);
  ext.t_min = spec.t_center(ext.j_min);
  ext.t_max = spec.t_center(ext.j_max);
  ext.area = static_cast<double>(ext.cell_count) * spec.ds() * spec.dt();
  ext.components = label_components(raster, [label](const RasterCell& c) { return c.label == label; }).count;
  ext.edge_margin = std::min({ext.i_min, spec.s_cells - 1 - ext.i_max, ext.j_min, spec.t_cells - 1 - ext.j_max});
  return ext;
}

}  // namespace cc4
