#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace moelab::cli {

// exit codes: 0 success, 1 mathematical contract violated, 2 configuration error
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kConfigError = 2;

/// Expands "4", "2:2:8" (start:step:stop, inclusive) and comma lists of both.
std::vector<long> parse_range(const std::string& text);

struct PipelineOutput {
  int exit_code = kOk;
  std::string data;     // full report (provenance header + data section)
  std::string summary;  // one-line human summary
};

struct MomentsConfig {
  std::vector<long> ks, ns;
  long trials = 20000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";
};
PipelineOutput run_moments(const MomentsConfig& cfg);

struct TailConfig {
  long k = 4, n = 64;
  std::vector<double> epsilons;
  long trials = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";
};
PipelineOutput run_tail(const TailConfig& cfg);

struct BellConfig {
  long l = 2, k = 2, n = 2;
  int count = 20;
  std::uint64_t seed = 0;
  std::string channel_in;   // analyze a serialized channel instead of sampling
  std::string channel_out;  // persist the sampled channel (count must be 1)
  std::string format = "csv";
};
PipelineOutput run_bell(const BellConfig& cfg);

struct NetCertifyConfig {
  long l = 2;
  double theta = 0.25;
  long samples = 100000;
  std::uint64_t seed = 0;
  int channels = 0;  // soundness channels at (k, n); 0 disables
  long k = 2, n = 2;
  long soundness_samples = 10000;
  std::string net_out;
  int threads = 1;
  std::string format = "json";
};
PipelineOutput run_net_certify(const NetCertifyConfig& cfg);

struct GapScanCliConfig {
  std::vector<long> ls, ks, ns;
  double theta = 0.25;
  std::vector<long> seeds;
  int restarts = 8;
  int threads = 1;
  std::string format = "csv";
};
PipelineOutput run_gap_scan(const GapScanCliConfig& cfg);

struct CrossoverConfig {
  double a = 1.0;
  double theta = 0.25;
  bool beta_zero = false;
  double beta = 1.0;
  std::string format = "json";
};
PipelineOutput run_crossover(const CrossoverConfig& cfg);

struct WeylConfig {
  long l = 2, k = 2, n = 2;
  std::string mode = "single";  // single (m=1) or pair (m=n=1)
  int restarts = 12;
  std::uint64_t seed = 0;
  std::string format = "json";
};
PipelineOutput run_weyl(const WeylConfig& cfg);

struct TypicalBoundConfig {
  std::vector<long> ls, ks, ns;
  std::string format = "csv";
};
PipelineOutput run_typical_bound(const TypicalBoundConfig& cfg);

int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace moelab::cli
