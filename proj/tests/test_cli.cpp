// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "fdbia/network.hpp"

namespace fs = std::filesystem;
using fdbia::cli::run;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string capture_stdout(const std::vector<std::string>& args, int expected_rc) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  const int rc = run(args);
  std::cout.rdbuf(old);
  CHECK(rc == expected_rc);
  return captured.str();
}

/// Data lines only (manifest comments stripped).
std::string body_of(const std::string& text) {
  std::istringstream is(text);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') continue;
    os << line << "\n";
  }
  return os.str();
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fdbia_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("dof table prints the pinned symmetric values") {
  const std::string out =
      capture_stdout({"dof", "--kd", "2", "--ku", "2", "--md", "2", "--mu", "2"}, 0);
  CHECK(out.find("no-csit sum DoF: 3/2") != std::string::npos);
  CHECK(out.find("exact 2") != std::string::npos);
}

TEST_CASE("region feasibility matches the converse examples") {
  CHECK(capture_stdout({"region", "--ku", "2", "--mu", "2", "--point", "0.5,1"}, 0) ==
        "feasible\n");
  CHECK(capture_stdout({"region", "--ku", "2", "--mu", "2", "--point", "1,0"}, 0) ==
        "feasible\n");
  CHECK(capture_stdout({"region", "--ku", "2", "--mu", "2", "--point", "1,0.1"}, 0) ==
        "infeasible\n");
}

TEST_CASE("unknown flags exit with usage error") {
  CHECK(run({"dof", "--frobnicate"}) == 1);
  CHECK(run({"nonsense-command"}) == 1);
}

TEST_CASE("missing config file exits 1") {
  CHECK(run({"--config", "/nonexistent/fdbia.ini", "dof"}) == 1);
}

TEST_CASE("config file drives a subcommand") {
  const fs::path ini = temp_file("sweep.ini");
  {
    std::ofstream f(ini);
    f << "[rate-sweep]\n"
      << "kd=2\nku=2\nmd=2\nmu=2\n"
      << "snr-grid=10,20\n"
      << "trials=20\n"
      << "seed=3\n";
  }
  const fs::path out = temp_file("from_ini.csv");
  CHECK(run({"--config", ini.string(), "rate-sweep", "--out", out.string()}) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("--snr-grid 10,20") != std::string::npos);
  CHECK(text.find("--trials 20") != std::string::npos);
  // 2 SNR points x 4 systems + header.
  CHECK(std::count(text.begin(), text.end(), '\n') >=
        static_cast<long>(5 + 1 + 8));
}

TEST_CASE("invalid scenario values exit 1") {
  CHECK(run({"rate-sweep", "--trials", "0", "--out", "/dev/null"}) == 1);
  CHECK(run({"scheme-check", "--model", "partial-csit", "--alloc", "9,9"}) == 1);
  CHECK(run({"multicell", "--j-grid", "1", "--out", "/dev/null"}) == 1);
}

TEST_CASE("rate sweep reruns are byte-identical") {
  const fs::path out1 = temp_file("sweep1.csv");
  const fs::path out2 = temp_file("sweep2.csv");
  const std::vector<std::string> args{"rate-sweep", "--snr-grid", "15,30",
                                      "--trials",    "50",        "--seed",
                                      "11",          "--out",     ""};
  auto with_out = [&](const fs::path& p) {
    std::vector<std::string> a = args;
    a.back() = p.string();
    return a;
  };
  CHECK(run(with_out(out1)) == 0);
  CHECK(run(with_out(out2)) == 0);
  CHECK(body_of(slurp(out1)) == body_of(slurp(out2)));
}

TEST_CASE("a run is reproducible from its manifest") {
  const fs::path out1 = temp_file("manifest1.csv");
  CHECK(run({"rate-sweep", "--kd", "2", "--ku", "2", "--md", "2", "--mu", "2",
             "--snr-grid", "25", "--trials", "30", "--seed", "17", "--out",
             out1.string()}) == 0);
  const std::string text = slurp(out1);

  // Recover "# command:" and "# args:" and re-run.
  std::istringstream is(text);
  std::string line, command, args_line;
  while (std::getline(is, line)) {
    if (line.rfind("# command: ", 0) == 0) command = line.substr(11);
    if (line.rfind("# args: ", 0) == 0) args_line = line.substr(8);
  }
  REQUIRE(!command.empty());
  REQUIRE(!args_line.empty());

  std::vector<std::string> rerun{command};
  std::istringstream argstream(args_line);
  std::string tok;
  while (argstream >> tok) rerun.push_back(tok);
  const fs::path out2 = temp_file("manifest2.csv");
  rerun.push_back("--out");
  rerun.push_back(out2.string());

  CHECK(run(rerun) == 0);
  CHECK(body_of(slurp(out2)) == body_of(text));
}

TEST_CASE("multicell sweep writes the documented columns deterministically") {
  const fs::path out1 = temp_file("mc1.csv");
  const fs::path out2 = temp_file("mc2.csv");
  const std::vector<std::string> base{"multicell", "--j-grid", "2,3", "--scheduler",
                                      "max-snr",   "--trials", "25",  "--seed",
                                      "5"};
  auto with_out = [&](const fs::path& p) {
    std::vector<std::string> a = base;
    a.push_back("--out");
    a.push_back(p.string());
    return a;
  };
  CHECK(run(with_out(out1)) == 0);
  CHECK(run(with_out(out2)) == 0);
  const std::string text = slurp(out1);
  CHECK(body_of(text) == body_of(slurp(out2)));
  CHECK(text.find("users_per_cell,scheduler,system,mean_sum_rate,std_err,mean_gap,"
                  "gap_std_err,trials") != std::string::npos);
  CHECK(text.find("max-snr,fd-partial-csit") != std::string::npos);
}

TEST_CASE("duplex and model filters restrict the emitted systems") {
  const fs::path out = temp_file("filtered.csv");
  CHECK(run({"rate-sweep", "--duplex", "fd", "--model", "no-csit", "--snr-grid",
             "20", "--trials", "10", "--out", out.string()}) == 0);
  const std::string text = body_of(slurp(out));
  CHECK(text.find("fd-no-csit") != std::string::npos);
  CHECK(text.find("fd-partial-csit") == std::string::npos);
  CHECK(text.find("hd-") == std::string::npos);
}

TEST_CASE("scheme-check dumps a parseable channel fixture") {
  const fs::path dump = temp_file("channels.csv");
  CHECK(run({"scheme-check", "--model", "no-csit", "--kd", "2", "--ku", "3", "--md",
             "2", "--mu", "2", "--seed", "9", "--dump-channels", dump.string(),
             "--out", "/dev/null"}) == 0);
  const std::string text = slurp(dump);
  const fdbia::NetworkConfig cfg{2, 3, 2, 2};
  const fdbia::ChannelRealization parsed = fdbia::channel_from_csv(cfg, text);
  const fdbia::ChannelRealization expected = fdbia::sample_channels(cfg, 9);
  CHECK((parsed.dl_gain - expected.dl_gain).norm() == 0.0);
  CHECK((parsed.ul_gain - expected.ul_gain).norm() == 0.0);
  CHECK((parsed.cross_gain - expected.cross_gain).norm() == 0.0);
}

TEST_CASE("verify subcommand passes at reduced scale") {
  const std::string out = capture_stdout(
      {"verify", "--draws", "25", "--max-l", "2", "--block-limit", "12"}, 0);
  CHECK(out.find("[FAIL]") == std::string::npos);
  CHECK(out.find("all checks passed") != std::string::npos);
}

TEST_CASE("json outputs parse as structured reports") {
  const std::string dof_json = capture_stdout(
      {"dof", "--kd", "1", "--ku", "3", "--md", "1", "--mu", "3", "--json"}, 0);
  CHECK(dof_json.find("\"no_csit\": \"5/3\"") != std::string::npos);
  CHECK(dof_json.find("\"exact\": \"5/3\"") != std::string::npos);

  const std::string region_json = capture_stdout(
      {"region", "--ku", "2", "--mu", "2", "--point", "0.5,1", "--json"}, 0);
  CHECK(region_json.find("\"feasible\": true") != std::string::npos);
}
