#include "morandim/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace morandim {
namespace {

using nlohmann::json;

std::string word_symbols(const Cube& cube) {
  const std::size_t d = cube.corner.size();
  std::string out;
  for (std::uint32_t i = 1; i <= cube.depth; ++i) {
    const std::size_t shift = d * (cube.depth - i);
    const std::uint64_t sym = (cube.word >> shift) & ((std::uint64_t{1} << d) - 1);
    if (!out.empty()) out.push_back('.');
    out += std::to_string(sym);
  }
  return out;
}

json violation_json(const Violation& v) {
  return json{{"where", v.where},
              {"constraint", v.constraint},
              {"lhs", v.lhs},
              {"rhs", v.rhs}};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json class_report_json(const ClassReport& report) {
  json violations = json::array();
  for (const Violation& v : report.violations) violations.push_back(violation_json(v));
  return json{{"member", report.member},
              {"violations", violations},
              {"grid_points", report.grid_points},
              {"margin", report.margin}};
}

json sequence_json(const RatioSequence& seq) {
  json ratios = json::array();
  json depths = json::array();
  for (std::size_t k = 1; k <= seq.size(); ++k) {
    ratios.push_back(seq.ratio(k));
    depths.push_back(seq.depth(k));
  }
  return json{{"d", seq.dimension()},
              {"count", seq.size()},
              {"ratios", ratios},
              {"depths", depths}};
}

json synthesis_json(const SynthesisResult& result) {
  return json{{"w0", result.w0},
              {"tracking_max_excess", result.tracking_max_excess},
              {"max_ratio", result.max_ratio},
              {"sequence", sequence_json(result.sequence)}};
}

json stream_summary_json(const StreamSummary& summary) {
  json samples = json::array();
  for (const StreamSample& s : summary.samples)
    samples.push_back(json{{"x", s.x}, {"s", s.s}, {"g", s.g}});
  return json{{"d", summary.d},
              {"w0", summary.w0},
              {"x_lo", summary.x_lo},
              {"x_hi", summary.x_hi},
              {"n_levels", summary.n_levels},
              {"min_gap", summary.min_gap},
              {"tracking_max_excess", summary.tracking_max_excess},
              {"bucket_width", summary.bucket_width()},
              {"samples", samples}};
}

json cost_report_json(const CostReport& report, const CoverSpec& spec,
                      double optimal_exponent) {
  json assignment = json::array();
  for (std::size_t k = 1; k < report.best_assignment.size(); ++k)
    assignment.push_back(report.best_assignment[k]);
  return json{{"delta", spec.delta},
              {"theta", spec.theta},
              {"band_lo", spec.band_lo()},
              {"band_hi", spec.band_hi()},
              {"optimal_exponent", optimal_exponent},
              {"exponent", report.exponent},
              {"flat_cost", report.flat_cost},
              {"best_cost", report.best_cost},
              {"best_assignment", assignment}};
}

json profile_json(const DimensionProfile& profile) {
  json rows = json::array();
  for (std::size_t i = 0; i < profile.theta_grid.size(); ++i)
    rows.push_back(json{{"theta", profile.theta_grid[i]},
                        {"lower", profile.lower[i]},
                        {"upper", profile.upper[i]}});
  return json{{"profile", rows},
              {"hausdorff", profile.hausdorff},
              {"assouad", profile.assouad},
              {"lower_dim", profile.lower_dim},
              {"x_min", profile.x_min},
              {"x_max", profile.x_max},
              {"window_count", profile.window_count},
              {"error_bar", profile.error_bar}};
}

std::string profile_csv(const DimensionProfile& profile) {
  std::ostringstream os;
  os << "# hausdorff=" << format_double(profile.hausdorff)
     << " assouad=" << format_double(profile.assouad)
     << " lower_dim=" << format_double(profile.lower_dim)
     << " error_bar=" << format_double(profile.error_bar) << "\n";
  os << "theta,lower,upper\n";
  for (std::size_t i = 0; i < profile.theta_grid.size(); ++i)
    os << format_double(profile.theta_grid[i]) << ','
       << format_double(profile.lower[i]) << ',' << format_double(profile.upper[i])
       << "\n";
  return os.str();
}

json cubes_json(const std::vector<Cube>& cubes) {
  json out = json::array();
  for (const Cube& c : cubes) {
    json corner = json::array();
    for (double v : c.corner) corner.push_back(v);
    out.push_back(json{{"depth", c.depth},
                       {"word", word_symbols(c)},
                       {"corner", corner},
                       {"side", c.side}});
  }
  return out;
}

std::string cubes_csv(const std::vector<Cube>& cubes) {
  std::ostringstream os;
  const std::size_t d = cubes.empty() ? 0 : cubes.front().corner.size();
  os << "depth,word";
  for (std::size_t j = 0; j < d; ++j) os << ",corner_" << j;
  os << ",side\n";
  for (const Cube& c : cubes) {
    os << c.depth << ',' << word_symbols(c);
    for (double v : c.corner) os << ',' << format_double(v);
    os << ',' << format_double(c.side) << "\n";
  }
  return os.str();
}

json envelope_json(const std::vector<EnvelopeStep>& rows) {
  json out = json::array();
  for (const EnvelopeStep& r : rows)
    out.push_back(json{{"theta", r.theta},
                       {"eps", r.eps},
                       {"h_theta", r.h_theta},
                       {"lambda", r.lambda},
                       {"alpha", r.alpha},
                       {"eta", r.eta},
                       {"beta", r.beta},
                       {"step", r.h_theta + r.eta},
                       {"dini_rhs", dini_bound_rhs(r.theta, r.h_theta, r.lambda, r.alpha)}});
  return out;
}

std::string envelope_csv(const std::vector<EnvelopeStep>& rows) {
  std::ostringstream os;
  os << "theta,eps,h_theta,lambda,alpha,eta,beta,step,dini_rhs\n";
  for (const EnvelopeStep& r : rows) {
    os << format_double(r.theta) << ',' << format_double(r.eps) << ','
       << format_double(r.h_theta) << ',' << format_double(r.lambda) << ','
       << format_double(r.alpha) << ',' << format_double(r.eta) << ','
       << format_double(r.beta) << ',' << format_double(r.h_theta + r.eta) << ','
       << format_double(dini_bound_rhs(r.theta, r.h_theta, r.lambda, r.alpha))
       << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace morandim
