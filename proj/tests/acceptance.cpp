// Acceptance suite: one line per criterion, non-zero exit if any fails.
//
//   cc4_acceptance <path-to-cc4-tool> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cc4/core.hpp"
#include "cc4/dynamics.hpp"
#include "cc4/regions.hpp"
#include "cc4/verify.hpp"
#include "oracle.hpp"
#include "sampling.hpp"

namespace fs = std::filesystem;
using namespace cc4;
using cc4::testing::rel_diff;

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED{" << what << "}";
    }
  }
};

int g_failures = 0;

void criterion(const std::string& id, const std::string& title, double time_limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0) out.require(elapsed < time_limit_s, "runtime " + std::to_string(elapsed) + " s");
  if (!out.pass) ++g_failures;
  std::printf("[%s] %s %s (%.3f s)%s\n", out.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), elapsed,
              out.detail.str().c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// p2 and its gradient, written out independently of the library.
struct P2Eval {
  double value, ds, dt;
};

P2Eval p2_with_gradient(double s, double t) {
  const double gap = t - s;
  const double hs = std::pow(1.0 + s * s, -1.5);
  const double ht = std::pow(1.0 + t * t, 1.5);
  const double g3 = std::pow(gap, -3.0);
  const double g4 = std::pow(gap, -4.0);
  return {8.0 * hs - ht * g3,
          -24.0 * s * std::pow(1.0 + s * s, -2.5) - 3.0 * ht * g4,
          -(3.0 * t * std::sqrt(1.0 + t * t) * g3 - 3.0 * ht * g4)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cc4_acceptance <cc4-tool> <scratch-dir>\n";
    return 2;
  }
  const std::string tool = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  criterion("AC1", "special configuration reproduction", 1.0, [](Outcome& o) {
    const auto sol = solve_q4_centered(1.0, 1.0);
    o.require(sol.t == kSqrt3, "t == sqrt(3)");
    o.require(std::abs(sol.s - kSqrt3 / 3.0) <= 2e-16, "s == sqrt(3)/3");
    o.require(sol.m1 == 1.0 && sol.m2 == 1.0 && sol.m3 == 1.0, "m1 = m2 = m3 = 1");
    o.require(rel_diff(sol.m4, 5.0 / 9.0 * kSqrt3) < 1e-15, "m4 = (5/9) sqrt(3)");
    const auto report = cc_residual(assemble_config(sol), 1e-10);
    o.require(report.is_central, "is_central");
    o.require(report.max_residual < 1e-10, "max_residual " + num(report.max_residual));
    o.require(std::abs(report.lambda_est - 1.0) < 1e-10, "lambda_est " + num(report.lambda_est));
    o.detail << " max_residual=" << num(report.max_residual) << " lambda_est-1=" << num(report.lambda_est - 1.0);
  });

  criterion("AC2", "uniqueness of the q4-centered shape on a 2000x2000 grid", 30.0, [](Outcome& o) {
    constexpr int n = 2000;
    constexpr double hi = 3.0;
    const double h = hi / n;
    // Nodes at k h, k = 1..n; a cell is a candidate when both c_y - s and p2
    // change sign over its four corners.
    std::vector<double> offset((n + 1) * (n + 1), std::nan(""));
    std::vector<double> p2((n + 1) * (n + 1), std::nan(""));
    auto idx = [](int i, int j) { return static_cast<std::size_t>(j) * (n + 1) + i; };
    for (int j = 1; j <= n; ++j) {
      for (int i = 1; i <= n; ++i) {
        const double s = i * h;
        const double t = j * h;
        if (!ShapeParams<double>::is_valid(s, t)) continue;
        const ShapeParams<double> p(s, t);
        offset[idx(i, j)] = center_ordinate(p) - s;
        p2[idx(i, j)] = sign_profile(p).p2;
      }
    }
    auto straddles = [&](const std::vector<double>& f, int i, int j) {
      const double c[4] = {f[idx(i, j)], f[idx(i + 1, j)], f[idx(i, j + 1)], f[idx(i + 1, j + 1)]};
      bool neg = false, pos = false;
      for (double v : c) {
        if (std::isnan(v)) return false;
        neg = neg || v <= 0.0;
        pos = pos || v >= 0.0;
      }
      return neg && pos;
    };
    std::vector<std::pair<int, int>> candidates;
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i)
        if (straddles(offset, i, j) && straddles(p2, i, j)) candidates.emplace_back(i, j);

    // Single-linkage clusters under 8-connectivity.
    std::vector<int> cluster(candidates.size(), -1);
    int clusters = 0;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      if (cluster[a] >= 0) continue;
      std::vector<std::size_t> stack = {a};
      cluster[a] = clusters;
      while (!stack.empty()) {
        const auto cur = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < candidates.size(); ++b) {
          if (cluster[b] >= 0) continue;
          if (std::abs(candidates[b].first - candidates[cur].first) <= 1 &&
              std::abs(candidates[b].second - candidates[cur].second) <= 1) {
            cluster[b] = clusters;
            stack.push_back(b);
          }
        }
      }
      ++clusters;
    }
    o.detail << " candidates=" << candidates.size() << " clusters=" << clusters;
    o.require(clusters == 1, "exactly one cluster");
    if (clusters != 1) return;

    double s = 0.0, t = 0.0;
    for (const auto& [i, j] : candidates) {
      s += (i + 0.5) * h;
      t += (j + 0.5) * h;
    }
    s /= static_cast<double>(candidates.size());
    t /= static_cast<double>(candidates.size());
    for (int it = 0; it < 50; ++it) {
      const auto f2 = p2_with_gradient(s, t);
      const double f1 = 8.0 - std::pow(1.0 + t * t, 1.5);
      const double d1t = -3.0 * t * std::sqrt(1.0 + t * t);
      // [0 d1t; f2.ds f2.dt] [ds dt]^T = [f1 f2]^T
      const double dt_step = f1 / d1t;
      const double ds_step = (f2.value - f2.dt * dt_step) / f2.ds;
      s -= ds_step;
      t -= dt_step;
      if (std::abs(ds_step) + std::abs(dt_step) < 1e-16) break;
    }
    const double err = std::max(std::abs(s - kSqrt3 / 3.0), std::abs(t - kSqrt3));
    const double centered = std::abs(center_ordinate(ShapeParams<double>(s, t)) - s);
    o.detail << " newton_error=" << num(err) << " |c_y-s|=" << num(centered);
    o.require(err < 1e-9, "Newton limit within 1e-9 of (sqrt3/3, sqrt3)");
    o.require(centered < 1e-6, "|c_y - s| < 1e-6 at the limit");
  });

  criterion("AC3", "closed forms agree with the reduced-system oracle (1e4 samples)", 10.0, [](Outcome& o) {
    std::mt19937_64 rng(20240003);
    int done = 0;
    double worst_rel = 0.0, worst_consistency = 0.0;
    ShapeParams<double> worst(1.0, 2.0);
    while (done < 10000) {
      const auto p = testing::random_valid_shape(rng, 10.0);
      if (std::abs(sign_profile(p).p2) <= 1e-3) continue;
      const auto sol = solve_masses(p, 1.0);
      const auto red = solve_reduced_system(p, 1.0);
      const double rel = std::max({rel_diff(sol.m2, red.m2), rel_diff(sol.m3, red.m3), rel_diff(sol.m4, red.m4)});
      if (rel > worst_rel) {
        worst_rel = rel;
        worst = p;
      }
      worst_consistency = std::max(worst_consistency, red.consistency_residual);
      ++done;
    }
    // Error of each double-precision path against the 50-digit reference at the worst sample.
    const auto sol = solve_masses(worst, 1.0);
    const auto red = solve_reduced_system(worst, 1.0);
    const auto ref = oracle::reference(worst.s(), worst.t(), 1.0);
    const auto error = [](double m2, double m3, double m4, const oracle::Reference& r) {
      return std::max({rel_diff(m2, static_cast<double>(r.m2)), rel_diff(m3, static_cast<double>(r.m3)),
                       rel_diff(m4, static_cast<double>(r.m4))});
    };
    o.detail << " worst_rel=" << num(worst_rel) << " worst_consistency=" << num(worst_consistency)
             << " at(s,t)=(" << num(worst.s()) << "," << num(worst.t()) << ") p4=" << num(sign_profile(worst).p4)
             << " closed_vs_ref=" << num(error(sol.m2, sol.m3, sol.m4, ref))
             << " reduced_vs_ref=" << num(error(red.m2, red.m3, red.m4, ref));
    o.require(worst_rel < 1e-10, "relative agreement 1e-10");
    o.require(worst_consistency < 1e-10, "consistency residual 1e-10");
  });

  criterion("AC4", "Newtonian closure on 1e3 feasible shapes", 0.0, [](Outcome& o) {
    std::mt19937_64 rng(20240004);
    double worst_residual = 0.0, worst_ui = 0.0, worst_lambda = 0.0;
    int central = 0;
    for (int k = 0; k < 1000; ++k) {
      const auto sol = solve_masses(testing::random_feasible_shape(rng), 1.0);
      const auto report = cc_residual(assemble_config(sol), 1e-9);
      central += report.is_central;
      worst_residual = std::max(worst_residual, report.max_residual);
      worst_ui = std::max(worst_ui, std::abs(report.lambda_ui - report.lambda_est) / report.lambda_est);
      worst_lambda = std::max(worst_lambda, std::abs(report.lambda_est - 1.0));
    }
    o.detail << " central=" << central << "/1000 worst_residual=" << num(worst_residual)
             << " worst_|ui-est|/est=" << num(worst_ui) << " worst_|est-1|=" << num(worst_lambda);
    o.require(central == 1000, "all central at tol 1e-9");
    o.require(worst_ui < 1e-9, "lambda = U/I within 1e-9");
    o.require(worst_lambda < 1e-9, "lambda_est within 1e-9 of input");
  });

  criterion("AC5", "sign lemmas: p5 > 0, p2 curve bounded and monotone, asymptote", 0.0, [](Outcome& o) {
    std::mt19937_64 rng(20240005);
    int negative = 0;
    for (int k = 0; k < 100000; ++k) negative += !(sign_profile(testing::random_valid_shape(rng, 10.0)).p5 > 0.0);
    o.require(negative == 0, std::to_string(negative) + " samples with p5 <= 0");

    const auto line = trace_p2(0.0, 1.72, 2000);
    bool bounded = true, monotone = true;
    for (Eigen::Index k = 0; k < line.samples.cols(); ++k) {
      bounded = bounded && line.samples(0, k) < kSqrt3;
      if (k > 0) monotone = monotone && line.samples(1, k) > line.samples(1, k - 1);
    }
    o.require(bounded, "trace_p2 samples s < sqrt(3)");
    o.require(monotone, "trace_p2 strictly increasing");
    const double far = p2_curve_t(1.72);
    o.require(far > 10.0, "t(1.72) > 10");
    o.detail << " t(1.72)=" << num(far) << " max_defect=" << num(line.max_defect);
  });

  criterion("AC6", "triple point (sqrt3/3, sqrt3); printed (sqrt3/3, 3) rejected", 0.0, [](Outcome& o) {
    const auto tp = triple_intersection();
    o.require(std::abs(tp.s - kSqrt3 / 3.0) < 1e-12 && std::abs(tp.t - kSqrt3) < 1e-12, "location");
    o.require(std::abs(tp.p1) < 1e-10 && std::abs(tp.p2) < 1e-10 && std::abs(tp.p4) < 1e-10, "|p1|,|p2|,|p4| < 1e-10");
    const auto printed = sign_profile(ShapeParams<double>(kSqrt3 / 3.0, 3.0));
    const bool printed_fails = !(std::abs(printed.p1) < 1e-10 && std::abs(printed.p2) < 1e-10 &&
                                 std::abs(printed.p4) < 1e-10);
    o.require(printed_fails, "printed point must fail the same test");
    o.require(std::abs(printed.p1) > 23.0, "|p1| at t = 3 exceeds 23");
    o.detail << " |p1(t=3)|=" << num(std::abs(printed.p1));
  });

  criterion("AC7", "two bounded all-positive components on the default 512x512 scan", 0.0, [](Outcome& o) {
    const RasterSpec spec;  // s in [0.01, 2.5], t in [0.02, 4.5], 512 x 512
    const auto raster = scan(spec);
    const auto comps = label_components(raster, [](const RasterCell& c) { return all_masses_positive(c.label); });
    o.require(comps.count == 2, "exactly two components (got " + std::to_string(comps.count) + ")");
    const auto c = component_extents(raster, RegionLabel::C);
    const auto d = component_extents(raster, RegionLabel::D);
    o.require(c.components == 1 && d.components == 1, "one component each for C and D");
    o.require(c.t_max < kSqrt3, "C box in t < sqrt(3)");
    o.require(d.t_min > kSqrt3 && d.t_max < kSqrt3 + 2.0, "D box in sqrt(3) < t < sqrt(3)+2");
    o.detail << " C=[" << num(c.s_min) << "," << num(c.s_max) << "]x[" << num(c.t_min) << "," << num(c.t_max)
             << "] margin=" << c.edge_margin << " D=[" << num(d.s_min) << "," << num(d.s_max) << "]x["
             << num(d.t_min) << "," << num(d.t_max) << "] margin=" << d.edge_margin;
    o.require(d.edge_margin >= 1, "D box strictly interior to the scan window");
    o.require(c.edge_margin >= 1, "C box strictly interior to the scan window");
  });

  criterion("AC8", "relative equilibrium dynamics at (1, 2)", 0.0, [](Outcome& o) {
    const double period = rotation_period(1.0);
    const auto state = launch_relative_equilibrium(ShapeParams<double>(1.0, 2.0), 1.0);
    const auto run = integrate(state, period / 20000, 20000);
    o.detail << " drift(dist,E,L)=(" << num(run.drift.distance) << "," << num(run.drift.energy) << ","
             << num(run.drift.angular_momentum) << ")";
    o.require(run.drift.distance < 1e-6, "distance drift < 1e-6");
    o.require(run.drift.energy < 1e-6, "energy drift < 1e-6");
    o.require(run.drift.angular_momentum < 1e-6, "angular momentum drift < 1e-6");

    const auto q = symmetric_positions(0.3, 0.9);
    const Eigen::Vector4d ones = Eigen::Vector4d::Ones();
    const double lambda_fit = cc_residual(PlanarConfig(q, ones), 1e-9).lambda_est;
    const auto wrong = integrate(launch_rigid_rotation(q, ones, angular_rate(lambda_fit)),
                                 rotation_period(lambda_fit) / 20000, 20000);
    o.detail << " control=" << num(wrong.drift.distance);
    o.require(wrong.drift.distance > 1e-2, "negative control distance drift > 1e-2");

    // At 20000 steps the drift sits at round-off, so the order is measured on
    // coarser steps where truncation error dominates.
    double previous = 0.0;
    for (int steps : {400, 800, 1600}) {
      const double drift = integrate(state, period / steps, steps).drift.distance;
      if (previous > 0.0) {
        const double ratio = previous / drift;
        o.detail << " ratio(" << steps << ")=" << num(ratio);
        o.require(ratio >= 12.0 && ratio <= 20.0, "halving dt reduces drift by 12..20");
      }
      previous = drift;
    }
  });

  criterion("AC9", "repeated scan output is byte-identical", 0.0, [&](Outcome& o) {
    const fs::path a = scratch / "scan_a.csv";
    const fs::path b = scratch / "scan_b.csv";
    for (const auto& path : {a, b}) {
      const std::string cmd = "\"" + tool + "\" scan --out \"" + path.string() + "\" > /dev/null";
      o.require(std::system(cmd.c_str()) == 0, "scan exit status");
    }
    const std::string ca = slurp(a);
    const std::string cb = slurp(b);
    o.detail << " bytes=" << ca.size();
    o.require(!ca.empty() && ca == cb, "identical CSV");
    o.require(slurp(a.string() + ".json") == slurp(b.string() + ".json"), "identical sidecar");
  });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
