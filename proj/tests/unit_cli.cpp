#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace {

const std::string kCli = MOTILITY_CLI_PATH;
const std::string kConfig = MOTILITY_FIG1_CONFIG;

int run(const std::string& args, const std::string& stdout_path = "/dev/null") {
  const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + stdout_path + "\" 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cli: stationary prints JSON and exits 0") {
  CHECK(run("stationary --config " + kConfig, "cli_stationary.json") == 0);
  const std::string out = slurp("cli_stationary.json");
  CHECK(out.find("\"radial_state\"") != std::string::npos);
  CHECK(out.find("\"m0\": 0.62") != std::string::npos);
  std::remove("cli_stationary.json");
}

TEST_CASE("cli: usage and configuration errors exit 1") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate --config " + kConfig) == 1);
  CHECK(run("tw --config " + kConfig + " --bogus 3") == 1);
  CHECK(run("stationary") == 1);  // --config is required
  CHECK(run("stationary --config does_not_exist.toml") == 1);
  CHECK(run("stationary --config " + kConfig + " --set nonsense=1") == 1);
  CHECK(run("tw --config " + kConfig + " --n-theta 31") == 1);
}

TEST_CASE("cli: tw writes both CSVs; unreachable velocity exits 2 with a diagnostic") {
  CHECK(run("tw --config " + kConfig + " --v 0.1 --steps 4 --out-shape cli_shape.csv --out-myosin cli_myo.csv") == 0);
  CHECK(slurp("cli_shape.csv").rfind("phi,rho,x,y\n", 0) == 0);
  CHECK(slurp("cli_myo.csv").rfind("x,y,m\n", 0) == 0);
  std::remove("cli_shape.csv");
  std::remove("cli_myo.csv");

  CHECK(run("tw --config " + kConfig + " --v 1e9") == 2);
  CHECK(slurp("cli_stderr.txt").find("branch continuation failed") != std::string::npos);
  std::remove("cli_stderr.txt");
}

TEST_CASE("cli: inputs are not modified") {
  const std::string before = slurp(kConfig);
  CHECK(run("bifurcate --config " + kConfig) == 0);
  CHECK(slurp(kConfig) == before);
}
