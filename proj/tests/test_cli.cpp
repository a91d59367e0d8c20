#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "moelab/cli.hpp"

using namespace moelab::cli;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// report minus the provenance comment block
std::string data_section(const std::string& report) {
  std::stringstream in(report);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("range expansion") {
  CHECK(parse_range("4") == std::vector<long>{4});
  CHECK(parse_range("2:2:8") == std::vector<long>{2, 4, 6, 8});
  CHECK(parse_range("1,3:1:5") == std::vector<long>{1, 3, 4, 5});
  CHECK_THROWS_AS(parse_range("2:8"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("2:0:8"), std::invalid_argument);
}

TEST_CASE("moments pipeline yields identical bytes for identical configs") {
  MomentsConfig cfg;
  cfg.ks = {2};
  cfg.ns = {2, 4};
  cfg.trials = 2000;
  cfg.seed = 7;
  const auto a = run_moments(cfg);
  const auto b = run_moments(cfg);
  CHECK(a.exit_code == kOk);
  CHECK(a.data == b.data);

  // a different worker count is a different config (echoed in the header)
  // but the data section is bit-identical
  cfg.threads = 4;
  const auto c = run_moments(cfg);
  CHECK(data_section(a.data) == data_section(c.data));

  cfg.seed = 8;
  const auto d = run_moments(cfg);
  CHECK(a.data != d.data);
}

TEST_CASE("moments header embeds the resolved config and check tags") {
  MomentsConfig cfg;
  cfg.ks = {2};
  cfg.ns = {2};
  cfg.trials = 500;
  cfg.seed = 1;
  const auto out = run_moments(cfg);
  CHECK(out.data.find("# moelab") != std::string::npos);
  CHECK(out.data.find("\"seed\":1") != std::string::npos);
  CHECK(out.data.find("second-moment-identity") != std::string::npos);
  CHECK(out.data.find("mean_f") != std::string::npos);
}

TEST_CASE("crossover pipeline emits the solver result") {
  CrossoverConfig cfg;
  cfg.a = 1.0;
  cfg.theta = 0.25;
  cfg.beta_zero = true;
  const auto out = run_crossover(cfg);
  CHECK(out.exit_code == kOk);
  CHECK(out.data.find("5775.89") != std::string::npos);
  CHECK(out.data.find("53.73") != std::string::npos);
}

TEST_CASE("typical-bound pipeline expands grids") {
  TypicalBoundConfig cfg;
  cfg.ls = {2};
  cfg.ks = {2, 4};
  cfg.ns = {100};
  const auto out = run_typical_bound(cfg);
  CHECK(out.exit_code == kOk);
  // header + comment lines + 2 data rows
  CHECK(out.data.find("l,k,n,value,vacuous") != std::string::npos);
}

TEST_CASE("gap-scan pipeline handles an empty grid") {
  GapScanCliConfig cfg;  // empty ls/ks/ns/seeds
  const auto out = run_gap_scan(cfg);
  CHECK(out.exit_code == kOk);
  const auto header_pos = out.data.find("k,n,l,theta,seed");
  REQUIRE(header_pos != std::string::npos);
  const auto after = out.data.substr(out.data.find('\n', header_pos) + 1);
  CHECK(after.empty());
}

TEST_CASE("cli run: valid command writes a deterministic report") {
  const std::string path = "/tmp/moelab_cli_moments.csv";
  const std::vector<std::string> args{"--out",  path, "moments", "--k", "2", "--n", "2",
                                      "--trials", "500", "--seed", "7"};
  CHECK(run_cli(args) == kOk);
  const std::string first = slurp(path);
  CHECK(run_cli(args) == kOk);
  CHECK(slurp(path) == first);
  CHECK(first.find("# command=moments") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("cli run: exit codes for config errors") {
  CHECK(run_cli({"no-such-command"}) == kConfigError);
  // missing required seed
  CHECK(run_cli({"moments", "--k", "2", "--n", "2"}) == kConfigError);
  // infeasible dims surface as config errors
  CHECK(run_cli({"--out", "/tmp/moelab_cli_err.csv", "bell", "--l", "9", "--k", "2",
                 "--n", "2", "--count", "1", "--seed", "1"}) == kConfigError);
  CHECK(run_cli({"--help"}) == kOk);
}

TEST_CASE("cli run: config file provides defaults, flags override") {
  const std::string cfg_path = "/tmp/moelab_cli_config.ini";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[moments]\nseed=1\nk=2\nn=2\ntrials=500\n";
  }
  const std::string out1 = "/tmp/moelab_cli_cfg1.csv";
  const std::string out2 = "/tmp/moelab_cli_cfg2.csv";
  CHECK(run_cli({"--config", cfg_path, "--out", out1, "moments"}) == kOk);
  CHECK(slurp(out1).find("\"seed\":1") != std::string::npos);
  CHECK(run_cli({"--config", cfg_path, "--out", out2, "moments", "--seed", "2"}) == kOk);
  CHECK(slurp(out2).find("\"seed\":2") != std::string::npos);
  std::remove(cfg_path.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("cli run: bell channel round-trip through serialization") {
  const std::string chan = "/tmp/moelab_cli_channel.json";
  const std::string out1 = "/tmp/moelab_cli_bell1.csv";
  const std::string out2 = "/tmp/moelab_cli_bell2.csv";
  CHECK(run_cli({"--out", out1, "bell", "--l", "2", "--k", "2", "--n", "2", "--count",
                 "1", "--seed", "5", "--channel-out", chan}) == kOk);
  CHECK(run_cli({"--out", out2, "bell", "--l", "2", "--k", "2", "--n", "2", "--count",
                 "1", "--seed", "99", "--channel-in", chan}) == kOk);
  // the same channel was analyzed, so the data rows agree
  const auto tail1 = slurp(out1).substr(slurp(out1).rfind('\n', slurp(out1).size() - 2));
  const auto tail2 = slurp(out2).substr(slurp(out2).rfind('\n', slurp(out2).size() - 2));
  CHECK(tail1 == tail2);
  std::remove(chan.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("cli run: default output directory comes from the environment") {
  setenv("MOELAB_OUTPUT_DIR", "/tmp", 1);
  const std::string path = "/tmp/crossover.json";
  std::remove(path.c_str());
  CHECK(run_cli({"crossover", "--a", "1", "--theta", "0.25", "--beta-zero"}) == kOk);
  CHECK(!slurp(path).empty());
  unsetenv("MOELAB_OUTPUT_DIR");
  std::remove(path.c_str());
}

TEST_CASE("gap-scan data is identical across worker counts") {
  GapScanCliConfig cfg;
  cfg.ls = {2};
  cfg.ks = {2, 4};
  cfg.ns = {2};
  cfg.seeds = {1, 2};
  cfg.restarts = 4;
  cfg.threads = 1;
  const auto a = run_gap_scan(cfg);
  cfg.threads = 4;
  const auto b = run_gap_scan(cfg);
  CHECK(data_section(a.data) == data_section(b.data));
}

TEST_CASE("weyl pipeline runs the single-copy identity") {
  WeylConfig cfg;
  cfg.l = 2;
  cfg.k = 2;
  cfg.n = 2;
  cfg.mode = "single";
  cfg.restarts = 6;
  cfg.seed = 3;
  const auto out = run_weyl(cfg);
  CHECK(out.exit_code == kOk);
  CHECK(out.data.find("chi_ens_nats") != std::string::npos);
}

TEST_CASE("tail pipeline produces the fixed column layout") {
  TailConfig cfg;
  cfg.k = 2;
  cfg.n = 8;
  cfg.epsilons = {0.3, 0.6};
  cfg.trials = 2000;
  cfg.seed = 11;
  const auto out = run_tail(cfg);
  CHECK(out.exit_code == kOk);
  CHECK(out.data.find("k,n,alpha,trials,median_f,eps,threshold,frequency,bound,"
                      "binomial_stderr") != std::string::npos);
}

TEST_CASE("net-certify pipeline certifies the small grid net") {
  NetCertifyConfig cfg;
  cfg.l = 1;
  cfg.theta = 0.25;
  cfg.samples = 20000;
  cfg.seed = 13;
  cfg.channels = 2;
  cfg.k = 2;
  cfg.n = 2;
  cfg.soundness_samples = 10000;
  const auto out = run_net_certify(cfg);
  CHECK(out.exit_code == kOk);
  CHECK(out.data.find("\"size\": 26") != std::string::npos);
}
