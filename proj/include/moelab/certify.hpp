#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moelab/channels.hpp"
#include "moelab/entropy.hpp"
#include "moelab/nets.hpp"
#include "moelab/rng.hpp"

namespace moelab {

/// Lower bound max(0, ln k - k (c_theta M)^2) on the minimum output entropy,
/// with M the net maximum of f pushed through the channel isometry.
EntropyValue certified_smin_lower(const StinespringChannel& phi, double theta,
                                  const ThetaNet& net);

/// Exact Bell-output entropy: a certified upper bound on the minimum output
/// entropy of phi (x) conj(phi).
EntropyValue certified_product_upper(const StinespringChannel& phi);

// a violation is only declared when the gap clears double-precision noise
inline constexpr double kCertificationMargin = 1e-12;

struct GapReport {
  int l = 0, k = 0, n = 0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::int64_t net_size = 0;
  double net_max = 0.0;
  double c_theta = 0.0;
  EntropyValue lower;       // certified lower bound on S_min(phi)
  EntropyValue bell_upper;  // certified upper bound on S_min(phi x conj phi)
  double gap = 0.0;         // 2*lower - upper; positive would certify violation
  bool certified_violation = false;
  MoeEstimate heuristic_smin;  // context only, never used for certification
};

GapReport violation_gap(const StinespringChannel& phi, double theta, const ThetaNet& net,
                        int restarts, const RngStream& rng);

/// Subspace-dimension condition l/n <= eps^2 / (4 ln(1 + 2/theta)).
bool exist_subspace_condition(std::int64_t l, std::int64_t n, double theta,
                              double epsilon);

struct TheboundResult {
  double value = 0.0;     // c_theta * (h(k, alpha, eps) + 4 alpha / k)
  double constant = 0.0;  // k * value
};

TheboundResult thebound_rhs(int k, double alpha, double theta, double epsilon);

struct TypicalBound {
  double value = 0.0;
  bool vacuous = false;  // exceeds the global maximum sqrt((k-1)/k) of f
};

/// 15/k sqrt(l/n) + 30 sqrt(l)/n + 36 l/(kn) + 10/sqrt(n); dims must be >= 2.
TypicalBound typical_bound_rhs(int l, int k, int n);

struct CrossoverResult {
  double ln_k_star = 0.0;
  double k_star = 0.0;  // exp(ln_k_star), +inf when not representable
  bool finite = false;
  double epsilon = 0.0;
  double constant = 0.0;  // the C entering a ln k - 2a > 2 C^2
};

/// Smallest k (as ln k, by bisection) at which the certified chain
/// a ln k - 2a > 2 C^2 starts to hold, with eps = 2 sqrt(a ln(1 + 2/theta))
/// and alpha = 0 when beta_zero, sqrt(beta) otherwise.
CrossoverResult analytic_crossover(double a, double theta, bool beta_zero,
                                   double beta = 1.0);

struct GapScanConfig {
  std::vector<int> ls, ks, ns;
  double theta = 0.25;
  std::vector<std::uint64_t> seeds;
  int restarts = 8;
  int threads = 1;
};

struct GapScanRow {
  bool ok = false;
  std::string error;
  GapReport report;
};

/// One row per (l, k, n, seed) in grid order; rows with infeasible net
/// dimensions carry an error record and the scan continues.
std::vector<GapScanRow> gap_scan(const GapScanConfig& config);

std::string gap_scan_csv_header();
std::string gap_scan_csv(const std::vector<GapScanRow>& rows);

}  // namespace moelab
