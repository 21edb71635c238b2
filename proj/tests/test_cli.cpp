#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "lane_emden_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const std::string cmd =
      std::string(LANE_EMDEN_CLI) + " " + args + " > " + out.string() + " 2> /dev/null";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
}

}  // namespace

TEST_CASE("profile subcommand") {
  const Run r = run("profile --d 3 --gamma 1.2 --rho0 32");
  REQUIRE(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["R"].get<double>() == doctest::Approx(0.518241).epsilon(1e-6));

  const fs::path csv = scratch_dir() / "p.csv";
  CHECK(run("profile --d 3 --gamma 1.2 --rho0 32 --out " + csv.string()).status == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("# d=3,gamma=1.2,rho0=32,R=0.5182412", 0) == 0);

  const Run gas = run("profile --d 3 --gamma 1.5 --rho0 0.5 --gas");
  REQUIRE(gas.status == 0);
  CHECK(nlohmann::json::parse(gas.out)["gas_radius"].is_number());

  CHECK(run("profile --d 3 --gamma 1.2 --rho0 1").status == 1);
  CHECK(run("profile --d 3 --gamma 1.2 --rho0 32 --out /nonexistent/dir/p.csv").status == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").status == 1);
  CHECK(run("profile --bogus 1").status == 1);
  CHECK(run("profile --d 3 --gamma abc --rho0 2").status == 1);
  CHECK(run("scan --format xml --rho0-min 2 --rho0-max 3 --points 2").status == 1);
  CHECK(run("profile --d 2 --gamma 1.2 --rho0 2").status == 1);
  CHECK(run("stability --d 3 --gamma 1.2").status == 1);
  CHECK(run("critical --d 3 --gamma 1.4 --rho0-min 1.01 --rho0-max 100").status == 1);
  CHECK(run("--help").status == 0);
}

TEST_CASE("scan and stability") {
  const Run scan = run("scan --d 3 --gamma 1.5 --rho0-min 1.1 --rho0-max 1000 --points 4 --mesh 256");
  REQUIRE(scan.status == 0);
  CHECK(scan.out.rfind("rho0,R,M,mu_star,verdict\n", 0) == 0);
  CHECK(scan.out.find("Unstable") == std::string::npos);

  const Run js = run("scan --d 3 --gamma 1.5 --rho0-min 1.1 --rho0-max 10 --points 2 --mesh 256 --format json");
  REQUIRE(js.status == 0);
  CHECK(nlohmann::json::parse(js.out).size() == 2);

  const fs::path eig = scratch_dir() / "eig.csv";
  const Run st = run("stability --d 3 --gamma 1.25 --rho0 1e4 --eig-out " + eig.string());
  REQUIRE(st.status == 0);
  const nlohmann::json j = nlohmann::json::parse(st.out);
  CHECK(j["verdict"] == "Unstable");
  CHECK(j["mu_star"].get<double>() < 0.0);
  CHECK(j["lambda"].is_number());
  CHECK(j["mesh_size"] == 2048);
  CHECK(slurp(eig).rfind("y,chi\n", 0) == 0);
}

TEST_CASE("critical subcommand") {
  const Run r = run("critical --d 3 --gamma 1.25 --rho0-min 1.01 --rho0-max 1e6 --mesh 256 --tol-rho 1e-2");
  REQUIRE(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["upper"].get<double>() / j["lower"].get<double>() - 1.0 <= 1e-2);
}

TEST_CASE("verify subcommand") {
  const Run ok = run("verify --suite explicit,fixed-point");
  CHECK(ok.status == 0);
  CHECK(nlohmann::json::parse(ok.out)["passed"].get<bool>());
  CHECK(run("verify --suite nonsense").status == 1);
  // The tail check does not meet its threshold at the standard cutoff radius.
  CHECK(run("verify --suite tail").status == 3);
}

TEST_CASE("config file") {
  const fs::path cfg = scratch_dir() / "cfg.json";
  std::ofstream(cfg) << R"({"d": 3, "gamma": 1.2, "rho0": 32})";
  const Run r = run("profile --config " + cfg.string());
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["R"].get<double>() == doctest::Approx(0.518241).epsilon(1e-6));

  // Flags override the file.
  const Run o = run("profile --config " + cfg.string() + " --rho0 1");
  CHECK(o.status == 1);

  std::ofstream(cfg) << R"({"d": 3, "colour": "blue"})";
  CHECK(run("profile --config " + cfg.string() + " --rho0 2").status == 1);
  std::ofstream(cfg) << "{not json";
  CHECK(run("profile --config " + cfg.string() + " --rho0 2").status == 1);
  CHECK(run("profile --config " + (scratch_dir() / "absent.json").string()).status == 2);

  const fs::path sample = fs::path(TEST_DATA_DIR) / "config_example.json";
  const Run s = run("scan --config " + sample.string());
  REQUIRE(s.status == 0);
  CHECK(s.out.find(",Stable") != std::string::npos);
  CHECK(s.out.find(",Unstable") != std::string::npos);
}
