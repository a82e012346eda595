#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levybasis_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run run(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = env + " \"" + std::string(LEVYBASIS_CLI) + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          (dir / "stderr.txt").string() + "\"";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("negative Gaussian coefficient exits 2 with the field path") {
  const fs::path dir = scratch("q");
  const fs::path cfg = write_config(dir, R"({"triplet": {"default": {"q": -0.5}}, "integrand": {"constant": 1}})");
  const Run r = run("fnorm --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"", dir);
  CHECK(r.status == 2);
  CHECK(slurp(dir / "stderr.txt").find("triplet.default.q") != std::string::npos);
}

TEST_CASE("fnorm of the stable fixture is (4/3)^(2/3)") {
  const fs::path dir = scratch("fnorm");
  const fs::path cfg =
      write_config(dir, R"({"triplet": {"family": "stable", "p": 0.5, "x": 0.5, "rho": 1}, "integrand": {"constant": 1}})");
  const Run r = run("fnorm --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.status == 0);
  const auto pos = r.out.find("fnorm=");
  REQUIRE(pos != std::string::npos);
  const double v = std::stod(r.out.substr(pos + 6));
  CHECK(std::abs(v - std::pow(4.0 / 3.0, 2.0 / 3.0)) < 1e-9);
  CHECK(fs::exists(dir / "fnorm.csv"));
}

TEST_CASE("usage errors and missing inputs exit 2") {
  const fs::path dir = scratch("usage");
  CHECK(run("", dir).status == 2);
  CHECK(run("bogus", dir).status == 2);
  CHECK(run("modular --out \"" + dir.string() + "\"", dir).status == 2);
  CHECK(run("verify --experiment nope --out \"" + dir.string() + "\"", dir).status == 2);
  CHECK(run("verify --experiment sum_control.exact --out \"" + dir.string() + "\"", dir, "LEVYBASIS_SEED=abc").status == 2);
  CHECK(run("fnorm --config \"" + (dir / "missing.json").string() + "\"", dir).status == 2);
}

TEST_CASE("modular, simulate and integrate write their artifacts") {
  const fs::path dir = scratch("pipeline");
  const fs::path cfg = write_config(dir, R"({
    "domain": {"horizon": 1, "intervals": 3},
    "triplet": {"family": "poisson", "intensity": 2},
    "integrand": {"values": [0.5, 2, -1]},
    "strategy": {"rule": {"type": "sign_of_past_sum"}},
    "replicates": 4})");
  const std::string common = "--config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"";
  const Run m = run("modular " + common, dir);
  REQUIRE(m.status == 0);
  CHECK(m.out.find("iota=") != std::string::npos);
  CHECK(m.out.find("closed_form=") != std::string::npos);
  REQUIRE(run("simulate " + common, dir).status == 0);
  const std::string sim = slurp(dir / "simulate.csv");
  CHECK(sim.rfind("replicate,cell,time_index,box,t_start,t_end,value\n", 0) == 0);
  CHECK(std::count(sim.begin(), sim.end(), '\n') == 1 + 4 * 3);
  REQUIRE(run("integrate " + common, dir).status == 0);
  const std::string integ = slurp(dir / "integrate.csv");
  CHECK(std::count(integ.begin(), integ.end(), '\n') == 1 + 4);
  CHECK(fs::exists(dir / "trajectory.csv"));
}

TEST_CASE("seed precedence: flag over environment over config") {
  const fs::path dir = scratch("seed");
  const fs::path cfg = write_config(dir, R"({"triplet": {"family": "gaussian"}, "seed": 1})");
  const std::string base = "simulate --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"";
  run(base, dir);
  const std::string from_config = slurp(dir / "simulate.csv");
  run(base, dir, "LEVYBASIS_SEED=2");
  const std::string from_env = slurp(dir / "simulate.csv");
  run(base + " --seed 2", dir, "LEVYBASIS_SEED=3");
  const std::string from_flag = slurp(dir / "simulate.csv");
  run(base + " --seed 1", dir, "LEVYBASIS_SEED=2");
  const std::string flag_back = slurp(dir / "simulate.csv");
  CHECK(from_config != from_env);
  CHECK(from_env == from_flag);
  CHECK(flag_back == from_config);

  const fs::path env_out = dir / "env_out";
  run("simulate --config \"" + cfg.string() + "\"", dir, "LEVYBASIS_OUT=\"" + env_out.string() + "\"");
  CHECK(fs::exists(env_out / "simulate.csv"));
}

TEST_CASE("verify writes CSV and JSON and exit status follows the reports") {
  const fs::path dir = scratch("verify");
  const Run r = run("verify --experiment sum_control.exact --experiment drift_sup.comp_poisson --out \"" + dir.string() + "\"", dir);
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS sum_control.exact") != std::string::npos);
  const std::string csv = slurp(dir / "verify.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(fs::exists(dir / "verify.json"));
  const Run tight = run("verify --experiment cf_match.poisson --tolerance-scale 1e-6 --out \"" + dir.string() + "\"", dir);
  CHECK(tight.status == 1);
  CHECK(tight.out.find("FAIL cf_match.poisson") != std::string::npos);
}
