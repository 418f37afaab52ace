#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "morandim_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const std::string& name, const json& cfg) {
  const fs::path path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << cfg.dump(2) << "\n";
  return path;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out_file = work_dir() / ("stdout_" + std::to_string(counter));
  const fs::path err_file = work_dir() / ("stderr_" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string("\"") + MORANDIM_CLI_PATH + "\" " + args +
                          " >" + out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  result.code = WEXITSTATUS(status);
  result.out = read_file(out_file);
  result.err = read_file(err_file);
  return result;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

json affine_profile() {
  return json{{"profile", {{"family", "affine"}, {"params", {0.45, 0.1}}}}};
}

}  // namespace

TEST_CASE("validate accepts a class member") {
  json cfg{{"profile", {{"family", "extremal"}, {"params", {1.0}}}},
           {"lambda", 0.0},
           {"alpha", 1.0}};
  const fs::path path = write_config("validate_member.json", cfg);
  const RunResult r = run_cli("validate --config " + path.string());
  CHECK(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report["member"] == true);
  CHECK(report["violations"].empty());
  // The steepest member sits on the class boundary, so its margin is zero up
  // to rounding.
  CHECK(report["margin"].get<double>() > -1e-9);
}

TEST_CASE("validate rejects the identity profile") {
  json cfg{{"profile", {{"family", "affine"}, {"params", {0.0, 1.0}}}}};
  const fs::path path = write_config("validate_identity.json", cfg);
  const RunResult r = run_cli("validate --config " + path.string());
  CHECK(r.code == 1);
  const json report = json::parse(r.out);
  CHECK(report["member"] == false);
  CHECK(!report["violations"].empty());
}

TEST_CASE("usage mistakes exit with status 2") {
  const fs::path broken = work_dir() / "broken.json";
  {
    std::ofstream out(broken, std::ios::binary);
    out << "{ not json";
  }
  CHECK(run_cli("validate --config " + broken.string()).code == 2);

  json unknown{{"profile", {{"family", "quadratic"}, {"params", {1.0}}}}};
  const fs::path path = write_config("unknown_family.json", unknown);
  const RunResult r = run_cli("validate --config " + path.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown profile family") != std::string::npos);

  json bad_type = affine_profile();
  bad_type["x_max"] = "deep";
  const fs::path tpath = write_config("bad_type.json", bad_type);
  CHECK(run_cli("synthesize --config " + tpath.string()).code == 2);

  CHECK(run_cli("").code == 2);
  CHECK(run_cli("transmogrify").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("domain violations exit with status 1") {
  json cfg{{"d", 1}, {"ratios", {0.5, 0.25}}, {"delta", 0.01}, {"theta", 1.0}};
  const fs::path path = write_config("oracle_empty_band.json", cfg);
  const RunResult r = run_cli("oracle --config " + path.string());
  CHECK(r.code == 1);
  CHECK(r.err.find("empty band intersection") != std::string::npos);
}

TEST_CASE("synthesize reports a tracked sequence") {
  json cfg = affine_profile();
  cfg["x_max"] = 6.0;
  const fs::path path = write_config("synthesize.json", cfg);
  const RunResult r = run_cli("synthesize --config " + path.string());
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["tracking_max_excess"].get<double>() <= 1e-9);
  CHECK(out["max_ratio"].get<double>() <= 0.5);
  const json& seq = out["sequence"];
  CHECK(seq["count"].get<std::size_t>() == seq["ratios"].size());
  CHECK(seq["count"].get<std::size_t>() > 50);
  double prev = 0.0;
  for (const json& depth : seq["depths"]) {
    CHECK(depth.get<double>() > prev);
    prev = depth.get<double>();
  }
  for (const json& ratio : seq["ratios"]) {
    CHECK(ratio.get<double>() > 0.0);
    CHECK(ratio.get<double>() <= 0.5);
  }
}

TEST_CASE("oracle solves the two level worked instance") {
  json cfg{{"d", 1},
           {"ratios", {0.5, 0.25}},
           {"delta", 0.5},
           {"theta", 1.0 / 3.0}};
  const fs::path path = write_config("oracle_worked.json", cfg);
  const RunResult r = run_cli("oracle --config " + path.string());
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["optimal_exponent"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(out["exponent"] == out["optimal_exponent"]);
  CHECK(out["flat_cost"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out["best_cost"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out["best_assignment"] == json::array({2, 2}));
  CHECK(out["band_lo"].get<double>() == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(out["band_hi"].get<double>() == 0.5);
}

TEST_CASE("emit lists depth two cubes as csv") {
  json cfg{{"d", 1}, {"ratios", {0.5, 0.25}}};
  const fs::path path = write_config("emit.json", cfg);
  const RunResult r = run_cli("emit --config " + path.string() + " --depth 2");
  CHECK(r.code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "depth,word,corner_0,side");
  // Sides come from exponentiated log ratios, so compare numerically.
  const std::vector<std::string> words = {"0.0", "0.1", "1.0", "1.1"};
  const std::vector<double> corners = {0.0, 0.375, 0.5, 0.875};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::vector<std::string> cols = split(lines[i + 1], ',');
    REQUIRE(cols.size() == 4);
    CHECK(cols[0] == "2");
    CHECK(cols[1] == words[i]);
    CHECK(std::stod(cols[2]) == doctest::Approx(corners[i]).epsilon(1e-12));
    CHECK(std::stod(cols[3]) == doctest::Approx(0.125).epsilon(1e-12));
  }
}

TEST_CASE("bounds emits the envelope step row") {
  json cfg = affine_profile();
  cfg["theta"] = 0.5;
  cfg["eps"] = 0.25;
  const fs::path path = write_config("bounds_row.json", cfg);
  const RunResult r = run_cli("bounds --config " + path.string());
  CHECK(r.code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "theta,eps,h_theta,lambda,alpha,eta,beta,step,dini_rhs");
  const std::vector<std::string> cols = split(lines[1], ',');
  REQUIRE(cols.size() == 9);
  CHECK(std::stod(cols[0]) == doctest::Approx(0.5));
  CHECK(std::stod(cols[2]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(cols[5]) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(std::stod(cols[6]) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(std::stod(cols[7]) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("flag overrides shape the bounds table") {
  const fs::path path = write_config("bounds_grid.json", affine_profile());
  const RunResult r =
      run_cli("bounds --config " + path.string() + " --theta-grid 5 --format json");
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  REQUIRE(out.is_array());
  CHECK(out.size() == 5);
  for (const json& row : out) {
    CHECK(row["eta"].get<double>() >= 0.0);
    CHECK(row["beta"].get<double>() >= 1.0);
  }
}

TEST_CASE("output lands in the requested file") {
  json cfg{{"d", 1}, {"ratios", {0.5, 0.25}}};
  const fs::path path = write_config("emit_out.json", cfg);
  const fs::path target = work_dir() / "cubes.csv";
  const RunResult r = run_cli("emit --config " + path.string() + " --depth 1 --out " +
                              target.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const std::string content = read_file(target);
  CHECK(lines_of(content).size() == 3);
}

TEST_CASE("estimate is deterministic and tracks the profile") {
  json cfg = affine_profile();
  cfg["x_max"] = 12.0;
  cfg["theta_grid"] = 16;
  const fs::path path = write_config("estimate.json", cfg);
  const fs::path out_a = work_dir() / "estimate_a.csv";
  const fs::path out_b = work_dir() / "estimate_b.csv";
  const RunResult ra =
      run_cli("estimate --config " + path.string() + " --out " + out_a.string());
  const RunResult rb =
      run_cli("estimate --config " + path.string() + " --out " + out_b.string());
  CHECK(ra.code == 0);
  CHECK(rb.code == 0);
  const std::string text_a = read_file(out_a);
  CHECK(!text_a.empty());
  CHECK(text_a == read_file(out_b));

  const std::vector<std::string> lines = lines_of(text_a);
  REQUIRE(lines.size() == 18);
  CHECK(lines[1] == "theta,lower,upper");
  // Header comment carries the scalar summaries.
  CHECK(lines[0].find("# hausdorff=") == 0);
  CHECK(lines[0].find("assouad=") != std::string::npos);

  const std::vector<std::string> last = split(lines.back(), ',');
  REQUIRE(last.size() == 3);
  CHECK(std::stod(last[0]) == 1.0);
  CHECK(std::stod(last[2]) == doctest::Approx(0.55).epsilon(0.06));
  double prev_upper = 0.0;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::vector<std::string> cols = split(lines[i], ',');
    REQUIRE(cols.size() == 3);
    const double lower = std::stod(cols[1]);
    const double upper = std::stod(cols[2]);
    CHECK(lower <= upper + 1e-9);
    CHECK(upper >= prev_upper - 1e-6);
    prev_upper = upper;
  }
}
