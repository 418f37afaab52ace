#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morandim/dini.hpp"
#include "morandim/estimator.hpp"
#include "morandim/log.hpp"
#include "morandim/serialize.hpp"

using nlohmann::json;
using namespace morandim;

namespace {

// Usage and configuration mistakes exit with status 2; domain violations
// raised by the library exit with status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  json parsed;
  try {
    in >> parsed;
  } catch (const json::parse_error& e) {
    throw UsageError("parse error in " + path + ": " + e.what());
  }
  return parsed;
}

double get_num(const json& cfg, const std::string& key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_number()) throw UsageError("config key must be numeric: " + key);
  return cfg[key].get<double>();
}

std::string get_str(const json& cfg, const std::string& key,
                    const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_string()) throw UsageError("config key must be a string: " + key);
  return cfg[key].get<std::string>();
}

ProfileFunction profile_from(const json& cfg) {
  if (!cfg.contains("profile")) throw UsageError("config needs a profile block");
  const json& p = cfg["profile"];
  const std::string family = get_str(p, "family", "");
  std::vector<double> params;
  if (p.contains("params")) {
    if (!p["params"].is_array()) throw UsageError("profile params must be an array");
    for (const json& v : p["params"]) params.push_back(v.get<double>());
  }
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw UsageError("profile family " + family + " expects " +
                       std::to_string(n) + " parameters");
  };
  if (family == "constant") {
    need(1);
    return ProfileFunction::constant(params[0]);
  }
  if (family == "affine") {
    need(2);
    return ProfileFunction::affine(params[0], params[1]);
  }
  if (family == "extremal") {
    need(1);
    return ProfileFunction::extremal(get_num(cfg, "lambda", 0.0),
                                     get_num(cfg, "alpha", 1.0), params[0]);
  }
  if (family == "table") {
    json pts;
    if (p.contains("points")) {
      pts = p["points"];
    } else if (p.contains("path")) {
      pts = load_json_file(get_str(p, "path", ""));
    } else {
      throw UsageError("table profile needs points or path");
    }
    if (!pts.is_array() || pts.empty())
      throw UsageError("table points must be a non-empty array of pairs");
    std::vector<std::array<double, 2>> points;
    for (const json& row : pts) {
      if (!row.is_array() || row.size() != 2)
        throw UsageError("table points must be [theta, value] pairs");
      points.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    return ProfileFunction::table(points);
  }
  throw UsageError("unknown profile family: " + family);
}

int ambient_dimension(const json& cfg) {
  const double d = get_num(cfg, "d", 1.0);
  if (d < 1 || d > 10 || d != static_cast<int>(d))
    throw UsageError("d must be an integer in [1,10]");
  return static_cast<int>(d);
}

PiecewiseScaleFunction assemble_from(const json& cfg) {
  AssemblyOptions opts;
  opts.epochs = static_cast<int>(get_num(cfg, "epochs", 0.0));
  opts.x_max = get_num(cfg, "x_max", 12.0);
  return assemble_scale_function(profile_from(cfg), get_num(cfg, "lambda", 0.0),
                                 get_num(cfg, "alpha", 1.0), opts);
}

RatioSequence sequence_from(const json& cfg) {
  const int d = ambient_dimension(cfg);
  if (cfg.contains("ratios")) {
    if (!cfg["ratios"].is_array() || cfg["ratios"].empty())
      throw UsageError("ratios must be a non-empty array");
    std::vector<double> depths;
    double acc = 0.0;
    for (const json& r : cfg["ratios"]) {
      const double ratio = r.get<double>();
      if (!(ratio > 0.0 && ratio < 1.0))
        throw UsageError("ratios must lie in (0,1)");
      acc += std::log(1.0 / ratio);
      depths.push_back(acc);
    }
    return RatioSequence(d, std::move(depths));
  }
  const PiecewiseScaleFunction g = assemble_from(cfg);
  const double w0 = get_num(cfg, "w0", 1.0);
  std::size_t levels = static_cast<std::size_t>(get_num(cfg, "n_levels", 0.0));
  if (levels == 0)
    levels = levels_within(g, d, get_num(cfg, "x_max", 12.0), w0);
  return synthesize_sequence(g, d, levels, w0).sequence;
}

void emit_output(const json& cfg, const std::string& content) {
  const std::string out = get_str(cfg, "out", "");
  if (out.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out, content.back() == '\n' ? content : content + "\n");
  }
}

int cmd_validate(const json& cfg) {
  const ProfileFunction h = profile_from(cfg);
  const ClassReport report = check_profile_admissible(
      h, get_num(cfg, "lambda", 0.0), get_num(cfg, "alpha", 1.0),
      static_cast<std::size_t>(get_num(cfg, "grid_points", 10000.0)));
  emit_output(cfg, class_report_json(report).dump(2));
  return report.member ? 0 : 1;
}

int cmd_synthesize(const json& cfg) {
  const int d = ambient_dimension(cfg);
  const PiecewiseScaleFunction g = assemble_from(cfg);
  const double w0 = get_num(cfg, "w0", 1.0);
  std::size_t levels = static_cast<std::size_t>(get_num(cfg, "n_levels", 0.0));
  if (levels == 0)
    levels = levels_within(g, d, get_num(cfg, "x_max", 12.0), w0);
  const SynthesisResult result = synthesize_sequence(g, d, levels, w0);
  emit_output(cfg, synthesis_json(result).dump(2));
  return 0;
}

int cmd_estimate(const json& cfg) {
  const int d = ambient_dimension(cfg);
  const double x_hi = get_num(cfg, "x_max", 12.0);
  const double w0 = get_num(cfg, "w0", 1.0);
  const double x_lo = get_num(cfg, "x_lo", std::max(w0, x_hi - 10.0));
  const std::vector<double> grid = default_theta_grid(
      static_cast<std::size_t>(get_num(cfg, "theta_grid", 64.0)));
  const PiecewiseScaleFunction g = assemble_from(cfg);

  DimensionProfile profile;
  const std::size_t levels = levels_within(g, d, x_hi, w0);
  if (levels <= (std::size_t{1} << 21)) {
    const SynthesisResult result = synthesize_sequence(g, d, levels, w0);
    // The last materialized breakpoint usually lands a hair before x_hi.
    const double x_top = std::min(
        x_hi, std::log(result.sequence.depth(result.sequence.size())));
    const ScaleTrace trace = ScaleTrace::from_sequence(result.sequence, x_lo, x_top);
    const std::size_t n_max = static_cast<std::size_t>(get_num(cfg, "n_max", 64.0));
    const std::size_t n_min = static_cast<std::size_t>(get_num(cfg, "n_min", 8.0));
    profile = estimate_profile(trace, grid, &result.sequence, 1, {n_min, n_max});
  } else {
    const StreamSummary summary = stream_synthesize(g, d, x_lo, x_hi);
    profile = estimate_profile(ScaleTrace::from_summary(summary), grid);
  }
  if (get_str(cfg, "format", "csv") == "json") {
    emit_output(cfg, profile_json(profile).dump(2));
  } else {
    emit_output(cfg, profile_csv(profile));
  }
  return 0;
}

int cmd_oracle(const json& cfg) {
  const RatioSequence seq = sequence_from(cfg);
  const HomogeneousMoranSet set{seq.dimension(), seq};
  CoverSpec spec;
  spec.delta = get_num(cfg, "delta", 0.5);
  spec.theta = get_num(cfg, "theta", 1.0);
  const double t = optimal_exponent(set, spec);
  const double s = get_num(cfg, "s", t);
  std::size_t depth = static_cast<std::size_t>(get_num(cfg, "depth", 0.0));
  if (depth == 0)
    depth = std::min(seq.size(),
                     static_cast<std::size_t>(16 / set.d));
  const CostReport report = brute_force_cover_cost(set, spec, s, depth);
  emit_output(cfg, cost_report_json(report, spec, t).dump(2));
  return 0;
}

int cmd_emit(const json& cfg) {
  const std::size_t depth = static_cast<std::size_t>(get_num(cfg, "depth", 2.0));
  std::vector<Cube> cubes;
  if (cfg.contains("ratios")) {
    const RatioSequence seq = sequence_from(cfg);
    cubes = enumerate_cubes(HomogeneousMoranSet{seq.dimension(), seq}, depth);
  } else {
    const InhomogeneousMoranSet set(
        profile_from(cfg), get_num(cfg, "lambda", 0.0), get_num(cfg, "alpha", 1.0),
        ambient_dimension(cfg), static_cast<int>(get_num(cfg, "epochs", 4.0)),
        get_num(cfg, "w0", 1.0));
    if (cfg.contains("eta")) {
      PsiAddress eta;
      for (const json& row : cfg["eta"])
        eta.push_back({row[0].get<int>(), row[1].get<int>()});
      cubes = set.restriction(eta, depth);
    } else {
      cubes = set.emit(depth);
    }
  }
  if (get_str(cfg, "format", "csv") == "json") {
    emit_output(cfg, cubes_json(cubes).dump(2));
  } else {
    emit_output(cfg, cubes_csv(cubes));
  }
  return 0;
}

int cmd_bounds(const json& cfg) {
  const ProfileFunction h = profile_from(cfg);
  const double lambda = get_num(cfg, "lambda", 0.0);
  const double alpha = get_num(cfg, "alpha", 1.0);
  const double eps = get_num(cfg, "eps", 0.25);
  std::vector<EnvelopeStep> rows;
  if (cfg.contains("theta")) {
    const double theta = get_num(cfg, "theta", 0.5);
    rows.push_back(eta_beta(theta, eps, h(theta), lambda, alpha));
  } else {
    for (double theta : default_theta_grid(
             static_cast<std::size_t>(get_num(cfg, "theta_grid", 64.0))))
      rows.push_back(eta_beta(theta, eps, h(theta), lambda, alpha));
  }
  if (get_str(cfg, "format", "csv") == "json") {
    emit_output(cfg, envelope_json(rows).dump(2));
  } else {
    emit_output(cfg, envelope_csv(rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moran set synthesis, dimension estimation, and cover oracles"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, format;
  int depth = -1, epochs = -1, theta_grid = -1;
  unsigned long long seed = 0;
  app.add_option("--config", config_path, "JSON job configuration");
  app.add_option("--out", out_path, "output path (default stdout)");
  app.add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--depth", depth, "construction depth override");
  app.add_option("--epochs", epochs, "epoch count override");
  app.add_option("--theta-grid", theta_grid, "theta grid size override");
  app.add_option("--seed", seed, "reserved; the pipeline is deterministic");

  CLI::App* sub_validate = app.add_subcommand("validate", "profile admissibility report");
  CLI::App* sub_synthesize = app.add_subcommand("synthesize", "materialize a ratio sequence");
  CLI::App* sub_estimate = app.add_subcommand("estimate", "dimension profile");
  CLI::App* sub_oracle = app.add_subcommand("oracle", "cover cost report");
  CLI::App* sub_emit = app.add_subcommand("emit", "construction cubes");
  CLI::App* sub_bounds = app.add_subcommand("bounds", "envelope step table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep --help at 0 but fold every command line mistake into the usage code.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      cfg = load_json_file(config_path);
      if (!cfg.is_object()) throw UsageError("config root must be a JSON object");
    }
    if (!out_path.empty()) cfg["out"] = out_path;
    if (!format.empty()) cfg["format"] = format;
    if (depth >= 0) cfg["depth"] = depth;
    if (epochs >= 0) cfg["epochs"] = epochs;
    if (theta_grid >= 0) cfg["theta_grid"] = theta_grid;

    if (sub_validate->parsed()) return cmd_validate(cfg);
    if (sub_synthesize->parsed()) return cmd_synthesize(cfg);
    if (sub_estimate->parsed()) return cmd_estimate(cfg);
    if (sub_oracle->parsed()) return cmd_oracle(cfg);
    if (sub_emit->parsed()) return cmd_emit(cfg);
    if (sub_bounds->parsed()) return cmd_bounds(cfg);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
