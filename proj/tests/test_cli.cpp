#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

namespace {

const std::string kCli = STRATO_CLI_PATH;
const std::string kData = STRATO_TEST_DATA_DIR;

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: tau csv header and exit codes") {
  CHECK(run("--out cli_tau.csv tau --T0 300 --U 10 --h 1000 --q 0.01") == 0);
  const auto text = slurp("cli_tau.csv");
  CHECK(text.rfind("station_id,sigma0,tau_star_dry,tau_star_moist,rho_estimate,pressure_estimate,status\n", 0) == 0);
  CHECK(text.find("0.00999873835468") != std::string::npos);
  std::remove("cli_tau.csv");

  CHECK(run("tau --T0 300 --U 1000 --h 1000") == 1);      // U^2 >= 2 c_p T0
  CHECK(run("tau --U 10 --h 1000") == 1);                 // no T0
  CHECK(run("--mode bogus tau --T0 300 --U 10 --h 1") == 1);
  CHECK(run("batch /nonexistent.csv") == 1);
  CHECK(run("--out /nonexistent/dir/out.csv tau --T0 300 --U 10 --h 1000") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("cli: json batch parses and has one object per row") {
  CHECK(run("--format json --out cli_batch.json batch --manifest cli_manifest.json " + kData + "/soundings_20.csv") == 0);
  const auto arr = nlohmann::json::parse(slurp("cli_batch.json"));
  CHECK(arr.size() == 20);
  CHECK(arr[0].contains("tau_star_moist"));
  const auto man = nlohmann::json::parse(slurp("cli_manifest.json"));
  CHECK(man["records"].size() == 20);
  CHECK(man["gas_profile"] == "paper-atmosphere");
  std::remove("cli_batch.json");
  std::remove("cli_manifest.json");
}

TEST_CASE("cli: sweep table") {
  CHECK(run("--out cli_sweep.csv tau --T0 300 --h 1000 --q 0.01 --sweep U=0:50:100") == 0);
  std::istringstream in(slurp("cli_sweep.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "U,tau_star");
  int rows = 0;
  double prev = -1.0;
  while (std::getline(in, line)) {
    const double t = std::stod(line.substr(line.find(',') + 1));
    CHECK(t > prev);
    prev = t;
    ++rows;
  }
  CHECK(rows == 100);
  std::remove("cli_sweep.csv");
}

TEST_CASE("cli: gas profile from the environment and a config file") {
  {
    std::ofstream g("cli_gas.txt");
    g << "name=hot\nc_pd=2000\n";
    std::ofstream c("cli_config.ini");
    c << "format=json\n";
  }
  CHECK(run("--out cli_env.csv tau --T0 300 --U 10 --h 1000", "STRATO_SHEAR_PROFILE=cli_gas.txt") == 0);
  const auto text = slurp("cli_env.csv");
  // c_p = 2000 changes sigma0.
  CHECK(text.find("0.999916666666667") != std::string::npos);
  CHECK(run("--gas /nonexistent/gas.txt tau --T0 300 --U 10 --h 1000") == 1);

  CHECK(run("--config cli_config.ini --out cli_cfg.out tau --T0 300 --U 10 --h 1000") == 0);
  CHECK(slurp("cli_cfg.out").front() == '[');
  // Flags win over the file.
  CHECK(run("--config cli_config.ini --format csv --out cli_cfg.out tau --T0 300 --U 10 --h 1000") == 0);
  CHECK(slurp("cli_cfg.out").rfind("station_id", 0) == 0);
  for (const char* f : {"cli_gas.txt", "cli_config.ini", "cli_env.csv", "cli_cfg.out"}) std::remove(f);
}

TEST_CASE("cli: solver and diagnostics subcommands") {
  CHECK(run("--format json --out cli_crocco.json solve-crocco --K 1 --U 1 --n 11") == 0);
  const auto j = nlohmann::json::parse(slurp("cli_crocco.json"));
  CHECK(std::abs(j["tau_wall"].get<double>() - 0.46960) < 1e-4);
  std::remove("cli_crocco.json");
  CHECK(run("solve-crocco --K 1 --U 1 --method fd --n 10") == 1);
  CHECK(run("transform-check --T0 300 --U 10 --h 1000") == 0);
  CHECK(run("epsilon-sweep --T0 300 --U 10 --h 1000") == 0);
}
