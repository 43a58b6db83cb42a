#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fbms/report.hpp"

using namespace fbms;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  Run r;
  const std::string cmd = std::string(FBMS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string without_timestamp(std::string json) {
  auto doc = nlohmann::json::parse(json);
  doc.erase("timestamp");
  return doc.dump();
}

}  // namespace

TEST_CASE("parsing helpers") {
  CHECK(parse_modes("0..8") == std::pair{0, 8});
  CHECK(parse_modes("3") == std::pair{3, 3});
  CHECK_THROWS_AS(parse_modes("a..b"), ConfigError);
  CHECK(parse_grids("512,1024,2048") == std::vector<int>{512, 1024, 2048});
  CHECK_THROWS_AS(parse_grids("512,x"), ConfigError);
  CHECK(parse_surface("disk") == SurfaceKind::disk);
  CHECK_THROWS_AS(parse_surface("torus"), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(validate(c, "spectrum"));
  c.grids = {1024, 512};
  CHECK_THROWS_AS(validate(c, "spectrum"), ConfigError);
  c.grids = {512, 1000};
  CHECK_THROWS_AS(validate(c, "spectrum"), ConfigError);
  c.grids = {};
  CHECK_THROWS_AS(validate(c, "spectrum"), ConfigError);
  c = RunConfig{};
  c.problem = "neumann";
  CHECK_THROWS_AS(validate(c, "spectrum"), ConfigError);
  c = RunConfig{};
  c.surface = SurfaceKind::disk;
  c.problem = "radial-l0";
  CHECK_THROWS_AS(validate(c, "spectrum"), ConfigError);
  c = RunConfig{};
  c.guard = 0.0;
  CHECK_THROWS_AS(validate(c, "index"), ConfigError);
}

TEST_CASE("JSON and CSV serialization") {
  RunReport r;
  r.command = "spectrum";
  ResultRow row;
  row.problem = "robin";
  row.mode = 1;
  row.eigenvalues = {-3.3816054689055, 0.1};
  row.multiplicity = {2, 2};
  row.extrapolated = {-3.38160546891, std::numeric_limits<double>::quiet_NaN()};
  row.order = {2.0, 2.0};
  r.results.push_back(row);
  r.timestamp = "2026-01-01T00:00:00Z";
  const auto doc = nlohmann::json::parse(to_json(r));
  CHECK(doc["results"][0]["extrapolated"][1].is_null());
  CHECK(doc["results"][0]["eigenvalues"][0].get<double>() == -3.3816054689055);
  CHECK(doc.contains("config"));
  CHECK(doc.contains("identities"));
  CHECK(doc["timestamp"] == "2026-01-01T00:00:00Z");
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("problem,mode,index,value,extrapolated,order\n", 0) == 0);
  CHECK(csv.find("robin,1,1,0.10000000000000001,,2") != std::string::npos);
}

TEST_CASE("atomic write") {
  const auto path = std::filesystem::temp_directory_path() / "fbms_atomic_test.json";
  write_atomic(path.string(), "{}\n");
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "{}\n");
  std::filesystem::remove(path);
  CHECK_THROWS(write_atomic("/nonexistent-dir/x.json", "{}"));
}

TEST_CASE("cli: catenoid Robin spectrum has four eigenvalues below -2") {
  const Run r = run_cli("spectrum --surface catenoid --problem robin --modes 0..8 --n 512,1024,2048 --format json");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  int below = 0;
  for (const auto& row : doc["results"]) {
    for (std::size_t k = 0; k < row["extrapolated"].size(); ++k) {
      if (row["extrapolated"][k].get<double>() < -2.0 - 1e-6) below += row["multiplicity"][k].get<int>();
    }
    CHECK(row["certified"].get<bool>());
  }
  CHECK(below == 4);
}

TEST_CASE("cli: disk Robin spectrum on one grid has one negative eigenvalue") {
  const Run r = run_cli("spectrum --surface disk --problem robin --modes 0..8 --n 512 --format json");
  const auto doc = nlohmann::json::parse(r.out);
  int negative = 0;
  for (const auto& row : doc["results"])
    for (std::size_t k = 0; k < row["extrapolated"].size(); ++k)
      if (row["extrapolated"][k].get<double>() < -1e-6) negative += row["multiplicity"][k].get<int>();
  CHECK(negative == 1);
}

TEST_CASE("cli: catenoid Dirichlet ground state") {
  const Run r = run_cli("spectrum --surface catenoid --problem dirichlet --modes 0 --n 1024,2048 --format json");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["results"][0]["extrapolated"][0].get<double>()) <= 1e-6);
}

TEST_CASE("cli: index, nonlocal and exit codes") {
  CHECK(run_cli("index").code == 0);
  CHECK(run_cli("index --surface disk").code == 0);
  CHECK(run_cli("nonlocal").code == 0);
  // Tail certification fails when the truncation is too short to see the tail.
  CHECK(run_cli("nonlocal --mmax 2").code == 3);
  CHECK(run_cli("spectrum --n 1024,512").code == 2);
  CHECK(run_cli("spectrum --surface torus").code == 2);
  CHECK(run_cli("spectrum --problem neumann").code == 2);
  CHECK(run_cli("spectrum --modes 3..1").code == 2);
  CHECK(run_cli("bogus").code == 2);
  CHECK(run_cli("convergence --modes 0..4").code == 0);
}

TEST_CASE("cli: output is deterministic apart from the timestamp") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = (dir / "fbms_det_1.json").string();
  const auto p2 = (dir / "fbms_det_2.json").string();
  const auto p3 = (dir / "fbms_det_3.csv").string();
  CHECK(run_cli("spectrum --problem steklov-jacobi --modes 0..4 -o " + p1).code == 0);
  CHECK(run_cli("spectrum --problem steklov-jacobi --modes 0..4 -o " + p2).code == 0);
  CHECK(run_cli("spectrum --problem steklov-jacobi --modes 0..4 -o " + p3).code == 0);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  CHECK(without_timestamp(slurp(p1)) == without_timestamp(slurp(p2)));
  CHECK(slurp(p3).rfind("problem,mode,index,value,extrapolated,order", 0) == 0);
  for (const auto& p : {p1, p2, p3}) std::filesystem::remove(p);
}
