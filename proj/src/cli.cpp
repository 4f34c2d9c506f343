#include "cc4/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>

#include "CLI11.hpp"
#include "cc4/dynamics.hpp"
#include "cc4/io.hpp"
#include "cc4/regions.hpp"
#include "cc4/verify.hpp"

namespace cc4::cli {

using nlohmann::json;

namespace {

struct CommandFailure {
  int code;
  std::string kind;
  std::string message;
};

// Maps library exceptions onto the exit-code contract.
template <typename Body>
int guarded(json& env, Body&& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    env["result"] = {{"error", {{"kind", "InvalidInput"}, {"message", e.what()}}}};
    return kUsage;
  } catch (const DegenerateDenominator& e) {
    env["result"] = {{"error", {{"kind", "DegenerateDenominator"}, {"message", e.what()}}}};
    return kDegenerate;
  } catch (const SingularSystem& e) {
    env["result"] = {{"error", {{"kind", "SingularSystem"}, {"message", e.what()}}}};
    return kDegenerate;
  } catch (const InfeasibleMass& e) {
    env["result"] = {{"error", {{"kind", "InfeasibleMass"}, {"message", e.what()}}}};
    return kInfeasible;
  } catch (const InfeasibleShape& e) {
    env["result"] = {{"error", {{"kind", "InfeasibleShape"}, {"message", e.what()}}}};
    return kInfeasible;
  } catch (const CommandFailure& e) {
    env["result"] = {{"error", {{"kind", e.kind}, {"message", e.message}}}};
    return e.code;
  } catch (const std::exception& e) {
    env["result"] = {{"error", {{"kind", "VerificationFailed"}, {"message", e.what()}}}};
    return kVerificationFailed;
  }
}

json profile_json(const SignProfile<double>& pr) {
  return {{"p1", pr.p1}, {"p2", pr.p2}, {"p3", pr.p3}, {"p4", pr.p4}, {"p5", pr.p5},
          {"signs",
           {to_string(pr.sign1), to_string(pr.sign2), to_string(pr.sign3), to_string(pr.sign4),
            to_string(pr.sign5)}}};
}

json residual_json(const ResidualReport& r) {
  return {{"lambda_est", r.lambda_est},
          {"max_residual", r.max_residual},
          {"per_body_residual", std::vector<double>(r.per_body_residual.begin(), r.per_body_residual.end())},
          {"lambda_ui", r.lambda_ui},
          {"is_central", r.is_central}};
}

double residual_tolerance(double lambda) { return kResidualTolerance * std::max(1.0, lambda); }

void flatten(const json& node, const std::string& prefix, std::ostream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (node.is_array()) {
    for (std::size_t k = 0; k < node.size(); ++k) flatten(node[k], prefix + "[" + std::to_string(k) + "]", out);
  } else if (node.is_number_float()) {
    out << prefix << " = " << io::format_double(node.get<double>()) << '\n';
  } else if (node.is_string()) {
    out << prefix << " = " << node.get<std::string>() << '\n';
  } else {
    out << prefix << " = " << node.dump() << '\n';
  }
}

void emit(const json& env, bool plain, std::ostream& out) {
  if (plain) {
    flatten(env, "", out);
  } else {
    out << env.dump(2) << '\n';
  }
}

std::ofstream open_output(const std::string& path) {
  if (path.empty()) throw CommandFailure{kUsage, "InvalidInput", "--out is required"};
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CommandFailure{kIo, "IoError", "cannot open '" + path + "' for writing"};
  return file;
}

void close_output(std::ofstream& file, const std::string& path) {
  file.close();
  if (!file) throw CommandFailure{kIo, "IoError", "failed writing '" + path + "'"};
}

json extents_json(const RegionRaster& raster, RegionLabel label) {
  try {
    const auto ext = component_extents(raster, label);
    return {{"components", ext.components},
            {"cells", ext.cell_count},
            {"area", ext.area},
            {"bounding_box", {{"s_min", ext.s_min}, {"s_max", ext.s_max}, {"t_min", ext.t_min}, {"t_max", ext.t_max}}},
            {"edge_margin_cells", ext.edge_margin},
            {"touches_invalid", ext.touches_invalid}};
  } catch (const LabelAbsent&) {
    return nullptr;
  }
}

}  // namespace

double eps_sign_from_env() {
  const char* raw = std::getenv("CC4_EPS_SIGN");
  if (raw == nullptr || *raw == '\0') return kDefaultEpsSign;
  const auto value = io::parse_double(raw);
  if (!value || *value < 0.0) throw InvalidInput(std::string("CC4_EPS_SIGN is not a non-negative number: ") + raw);
  return *value;
}

json envelope(const std::string& command, json inputs) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"inputs", std::move(inputs)},
          {"result", nullptr},
          {"warnings", json::array()}};
}

int run_solve(const SolveOptions& options, std::ostream& out) {
  json env = envelope("solve", {{"s", options.s}, {"t", options.t}, {"lambda", options.lambda}});
  const int code = guarded(env, [&] {
    const double eps = eps_sign_from_env();
    env["inputs"]["eps_sign"] = eps;
    const ShapeParams<double> params(options.s, options.t);
    const auto profile = sign_profile(params, eps);
    const RegionLabel region = classify(options.s, options.t, eps);
    env["result"] = {{"profile", profile_json(profile)}, {"region", to_string(region)}};

    const auto sol = solve_masses(params, options.lambda, eps);
    json& result = env["result"];
    result["masses"] = {{"m1", sol.m1}, {"m2", sol.m2}, {"m3", sol.m3}, {"m4", sol.m4}};
    result["c_y"] = sol.c_y;
    result["lambda"] = sol.lambda;
    result["feasible"] = sol.feasible;

    const auto oracle = solve_reduced_system(params, options.lambda);
    result["oracle"] = {{"m2", oracle.m2}, {"m3", oracle.m3}, {"m4", oracle.m4},
                        {"consistency_residual", oracle.consistency_residual}};

    if (!sol.feasible) {
      result["verification"] = nullptr;
      env["warnings"].push_back("some mass is not positive; no central configuration with positive masses");
      return static_cast<int>(kInfeasible);
    }
    const auto report = cc_residual(assemble_config(sol), residual_tolerance(options.lambda));
    result["verification"] = residual_json(report);
    return static_cast<int>(report.is_central ? kOk : kVerificationFailed);
  });
  emit(env, options.plain, out);
  return code;
}

int run_special(const SpecialOptions& options, std::ostream& out) {
  json inputs = {{"lambda", options.lambda}};
  if (options.m2) inputs["m2"] = *options.m2;
  if (options.m4) inputs["m4"] = *options.m4;
  json env = envelope("special", inputs);
  const int code = guarded(env, [&] {
    if (options.m2.has_value() == options.m4.has_value())
      throw InvalidInput("give exactly one of --m2 or --m4");
    const double eps = eps_sign_from_env();
    double m2 = 0.0;
    if (options.m2) {
      m2 = *options.m2;
    } else {
      if (!(*options.m4 > 0.0)) throw InfeasibleMass("target m4 must be positive");
      // m4 = (8/9) sqrt3 lambda - (sqrt3/3) m2  =>  m2 = 8 lambda / 3 - sqrt3 m4
      m2 = 8.0 * options.lambda / 3.0 - std::numbers::sqrt3 * *options.m4;
      if (!(m2 > 0.0)) throw InfeasibleMass("no positive m2 gives m4 = target at this lambda");
      const double round_trip = lambda_for_target_m4(m2, *options.m4);
      env["warnings"].push_back("m2 derived from lambda and m4; lambda round-trip " +
                                io::format_double(round_trip));
    }
    const auto sol = solve_q4_centered(options.lambda, m2, eps);
    const auto report = cc_residual(assemble_config(sol), residual_tolerance(options.lambda));
    env["result"] = {{"s", sol.s},
                     {"t", sol.t},
                     {"masses", {{"m1", sol.m1}, {"m2", sol.m2}, {"m3", sol.m3}, {"m4", sol.m4}}},
                     {"lambda", sol.lambda},
                     {"verification", residual_json(report)}};
    return static_cast<int>(report.is_central ? kOk : kVerificationFailed);
  });
  emit(env, options.plain, out);
  return code;
}

int run_scan(const ScanOptions& options, std::ostream& out) {
  json env = envelope("scan", {{"smin", options.s_min},
                               {"smax", options.s_max},
                               {"tmin", options.t_min},
                               {"tmax", options.t_max},
                               {"res", options.resolution},
                               {"lambda", options.lambda},
                               {"out", options.out}});
  const int code = guarded(env, [&] {
    const double eps = eps_sign_from_env();
    env["inputs"]["eps_sign"] = eps;
    if (options.resolution <= 0) throw InvalidInput("--res must be positive");
    const RasterSpec spec{options.s_min, options.s_max, options.t_min, options.t_max,
                          options.resolution, options.resolution};
    const RegionRaster raster = scan(spec, options.lambda, eps);

    std::ofstream file = open_output(options.out);
    io::CsvWriter csv(file);
    csv.header({"s", "t", "label", "p1", "p2", "p3", "p4", "p5", "m1", "m3", "m4", "c_y"});
    std::map<std::string, std::size_t> counts;
    for (const auto& cell : raster.cells) {
      ++counts[to_string(cell.label)];
      csv.field(cell.s).field(cell.t).field(to_string(cell.label));
      if (cell.profile) {
        for (double p : cell.profile->values()) csv.field(p);
      } else {
        for (int k = 0; k < 5; ++k) csv.empty();
      }
      if (cell.masses) {
        csv.field(cell.masses->m1).field(cell.masses->m3).field(cell.masses->m4).field(cell.masses->c_y);
      } else {
        csv.empty().empty().empty().empty();
      }
      csv.end_row();
    }
    close_output(file, options.out);

    const auto positive = label_components(raster, [](const RasterCell& c) { return all_masses_positive(c.label); });
    json c_ext = extents_json(raster, RegionLabel::C);
    json d_ext = extents_json(raster, RegionLabel::D);
    json sidecar = {{"schema_version", kSchemaVersion},
                    {"raster",
                     {{"s_range", {spec.s_lo, spec.s_hi}},
                      {"t_range", {spec.t_lo, spec.t_hi}},
                      {"resolution", {spec.s_cells, spec.t_cells}}}},
                    {"all_positive_components", positive.count},
                    {"components",
                     {{"C", c_ext.is_null() ? 0 : c_ext["components"].get<int>()},
                      {"D", d_ext.is_null() ? 0 : d_ext["components"].get<int>()}}},
                    {"extents", {{"C", c_ext}, {"D", d_ext}}},
                    {"label_counts", counts}};
    const std::string sidecar_path = options.out + ".json";
    std::ofstream side = open_output(sidecar_path);
    side << sidecar.dump(2) << '\n';
    close_output(side, sidecar_path);

    if (counts["Invalid"] == raster.cells.size())
      env["warnings"].push_back("every cell lies outside the domain t > s > 0");
    env["result"] = {{"sidecar", sidecar_path}, {"summary", sidecar}};
    return static_cast<int>(kOk);
  });
  emit(env, false, out);
  return code;
}

int run_curves(const CurvesOptions& options, std::ostream& out) {
  json env = envelope("curves", {{"curve", options.curve}, {"n", options.n}, {"out", options.out}});
  if (options.s_min) env["inputs"]["smin"] = *options.s_min;
  if (options.s_max) env["inputs"]["smax"] = *options.s_max;
  const int code = guarded(env, [&] {
    const std::vector<std::string> known = {"p1", "p2", "p4"};
    std::vector<std::string> wanted;
    if (options.curve == "all") {
      wanted = known;
    } else if (std::find(known.begin(), known.end(), options.curve) != known.end()) {
      wanted = {options.curve};
    } else {
      throw InvalidInput("unknown curve '" + options.curve + "'; expected p1, p2, p4 or all");
    }
    if (options.n < 2) throw InvalidInput("--n must be at least 2");

    std::vector<BoundaryPolyline> lines;
    for (const auto& id : wanted) {
      if (id == "p1") lines.push_back(trace_p1(options.s_min.value_or(0.01), options.s_max.value_or(1.7), options.n));
      if (id == "p2") lines.push_back(trace_p2(options.s_min.value_or(0.0), options.s_max.value_or(1.7), options.n));
      if (id == "p4") lines.push_back(trace_p4(options.s_min.value_or(0.01), options.s_max.value_or(2.5), options.n));
    }
    const TriplePoint triple = triple_intersection();

    std::ofstream file = open_output(options.out);
    io::CsvWriter csv(file);
    csv.header({"curve", "s", "t", "defect"});
    json summary = json::object();
    for (const auto& line : lines) {
      for (Eigen::Index k = 0; k < line.samples.cols(); ++k)
        csv.field(to_string(line.curve_id)).field(line.samples(0, k)).field(line.samples(1, k)).field(line.defects(k)).end_row();
      summary[to_string(line.curve_id)] = {{"samples", line.samples.cols()}, {"max_defect", line.max_defect}};
    }
    const double triple_defect = std::max({std::abs(triple.p1), std::abs(triple.p2), std::abs(triple.p4)});
    csv.field("triple").field(triple.s).field(triple.t).field(triple_defect).end_row();
    close_output(file, options.out);

    env["result"] = {{"curves", summary},
                     {"triple_point", {{"s", triple.s}, {"t", triple.t}, {"defect", triple_defect}}}};
    return static_cast<int>(kOk);
  });
  emit(env, false, out);
  return code;
}

int run_simulate(const SimulateOptions& options, std::ostream& out) {
  json env = envelope("simulate", {{"s", options.s},
                                   {"t", options.t},
                                   {"lambda", options.lambda},
                                   {"periods", options.periods},
                                   {"steps_per_period", options.steps_per_period},
                                   {"every", options.every},
                                   {"out", options.out}});
  const int code = guarded(env, [&] {
    const double eps = eps_sign_from_env();
    if (options.periods < 0) throw InvalidInput("--periods must be non-negative");
    if (options.steps_per_period <= 0) throw InvalidInput("--steps-per-period must be positive");
    if (options.every <= 0) throw InvalidInput("--every must be positive");
    const ShapeParams<double> params(options.s, options.t);
    const SimState start = launch_relative_equilibrium(params, options.lambda, eps);
    const double dt = rotation_period(options.lambda) / options.steps_per_period;
    const long long total = static_cast<long long>(options.periods) * options.steps_per_period;
    if (total > std::numeric_limits<int>::max()) throw InvalidInput("too many steps");
    const int n_steps = static_cast<int>(total);

    std::ofstream file = open_output(options.out);
    io::CsvWriter csv(file);
    std::vector<std::string> header = {"step", "time"};
    for (int i = 1; i <= 4; ++i) {
      header.push_back("x" + std::to_string(i));
      header.push_back("y" + std::to_string(i));
    }
    header.insert(header.end(), {"energy_drift", "L_drift", "maxdist_drift"});
    csv.header(header);

    const auto result = integrate(start, dt, n_steps, [&](int step, const SimState& state, const DriftReport& drift) {
      if (step % options.every != 0 && step != n_steps) return;
      csv.field(step).field(state.time);
      for (int i = 0; i < 4; ++i) csv.field(state.positions(0, i)).field(state.positions(1, i));
      csv.field(drift.energy).field(drift.angular_momentum).field(drift.distance).end_row();
    });
    close_output(file, options.out);

    const double closure = (result.final_state.positions - start.positions).lpNorm<Eigen::Infinity>();
    const bool passed = result.drift.distance < kDriftThreshold && result.drift.energy < kDriftThreshold &&
                        result.drift.angular_momentum < kDriftThreshold;
    env["result"] = {{"steps", n_steps},
                     {"dt", dt},
                     {"masses", {start.masses(0), start.masses(1), start.masses(2), start.masses(3)}},
                     {"drift",
                      {{"energy", result.drift.energy},
                       {"angular_momentum", result.drift.angular_momentum},
                       {"max_distance", result.drift.distance}}},
                     {"rotational_closure", closure},
                     {"threshold", kDriftThreshold},
                     {"passed", passed}};
    return static_cast<int>(passed ? kOk : kVerificationFailed);
  });
  emit(env, false, out);
  return code;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse central-configuration solver for the symmetric concave four-body problem", "cc4"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "masses making the shape (s, t) central");
  solve_cmd->add_option("--s", solve.s, "ordinate of the inner body q4")->required();
  solve_cmd->add_option("--t", solve.t, "ordinate of the apex body q3")->required();
  solve_cmd->add_option("--lambda", solve.lambda, "central-configuration multiplier")->capture_default_str();
  auto* json_flag = solve_cmd->add_flag("--json", "JSON report (default)");
  solve_cmd->add_flag("--plain", solve.plain, "flat key = value report")->excludes(json_flag);

  SpecialOptions special;
  double special_m2 = 0.0;
  double special_m4 = 0.0;
  auto* special_cmd = app.add_subcommand("special", "configuration with the center of mass on q4");
  special_cmd->add_option("--lambda", special.lambda, "central-configuration multiplier")->required();
  auto* m2_opt = special_cmd->add_option("--m2", special_m2, "common mass of q1, q2, q3");
  auto* m4_opt = special_cmd->add_option("--m4", special_m4, "target mass of q4");
  m2_opt->excludes(m4_opt);
  auto* special_json = special_cmd->add_flag("--json", "JSON report (default)");
  special_cmd->add_flag("--plain", special.plain, "flat key = value report")->excludes(special_json);

  ScanOptions scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "classify a grid of (s, t) cells");
  scan_cmd->add_option("--smin", scan_opts.s_min)->capture_default_str();
  scan_cmd->add_option("--smax", scan_opts.s_max)->capture_default_str();
  scan_cmd->add_option("--tmin", scan_opts.t_min)->capture_default_str();
  scan_cmd->add_option("--tmax", scan_opts.t_max)->capture_default_str();
  scan_cmd->add_option("--res", scan_opts.resolution, "cells per axis")->capture_default_str();
  scan_cmd->add_option("--lambda", scan_opts.lambda)->capture_default_str();
  scan_cmd->add_option("--out", scan_opts.out, "CSV output; a .json sidecar is written next to it")->required();

  CurvesOptions curves;
  double curves_smin = 0.0;
  double curves_smax = 0.0;
  auto* curves_cmd = app.add_subcommand("curves", "sample the p1, p2, p4 zero curves");
  curves_cmd->add_option("--curve", curves.curve, "p1, p2, p4 or all")->capture_default_str();
  curves_cmd->add_option("--n", curves.n, "samples per curve")->capture_default_str();
  auto* curves_smin_opt = curves_cmd->add_option("--smin", curves_smin);
  auto* curves_smax_opt = curves_cmd->add_option("--smax", curves_smax);
  curves_cmd->add_option("--out", curves.out, "CSV output")->required();

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate the relative equilibrium");
  sim_cmd->add_option("--s", sim.s)->required();
  sim_cmd->add_option("--t", sim.t)->required();
  sim_cmd->add_option("--lambda", sim.lambda)->capture_default_str();
  sim_cmd->add_option("--periods", sim.periods)->capture_default_str();
  sim_cmd->add_option("--steps-per-period", sim.steps_per_period)->capture_default_str();
  sim_cmd->add_option("--every", sim.every, "write every k-th step")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (*special_cmd) {
    if (*m2_opt) special.m2 = special_m2;
    if (*m4_opt) special.m4 = special_m4;
    if (!special.m2 && !special.m4) {
      err << "special: one of --m2 or --m4 is required\n";
      return kUsage;
    }
  }
  if (*curves_smin_opt) curves.s_min = curves_smin;
  if (*curves_smax_opt) curves.s_max = curves_smax;

  if (*solve_cmd) return run_solve(solve, out);
  if (*special_cmd) return run_special(special, out);
  if (*scan_cmd) return run_scan(scan_opts, out);
  if (*curves_cmd) return run_curves(curves, out);
  if (*sim_cmd) return run_simulate(sim, out);
  return kUsage;
}

}  // namespace cc4::cli
