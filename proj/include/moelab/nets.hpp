#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "moelab/channels.hpp"
#include "moelab/linalg.hpp"
#include "moelab/rng.hpp"

namespace moelab {

enum class NetConstruction { kDeterministicGrid, kGreedyVerified };

struct CoveringCertificate {
  std::string method;  // "grid-cell-bound" or "monte-carlo"
  std::uint64_t samples = 0;
  double max_observed_gap = 0.0;
};

/// Finite covering of the unit sphere of C^l with covering radius theta in
/// chord distance. With phase_quotient set, distances are taken modulo a
/// global phase (valid for phase-invariant objectives).
class ThetaNet {
 public:
  ThetaNet(int l, double theta, Matrix points, NetConstruction construction,
           CoveringCertificate certificate, bool phase_quotient);

  int l() const { return l_; }
  double theta() const { return theta_; }
  int size() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }  // l x size, unit columns
  Ket point(int i) const { return Ket::normalized(points_.col(i)); }
  NetConstruction construction() const { return construction_; }
  const CoveringCertificate& certificate() const { return certificate_; }
  bool phase_quotient() const { return phase_quotient_; }
  std::uint64_t content_hash() const { return hash_; }

 private:
  int l_;
  double theta_;
  Matrix points_;
  NetConstruction construction_;
  CoveringCertificate certificate_;
  bool phase_quotient_;
  std::uint64_t hash_;
};

/// Ceiling of (1 + 2/theta)^(2l), saturating at INT64_MAX.
std::int64_t net_cardinality_bound(int l, double theta);

/// Net-to-sphere correction 1/(1 - theta^2 - 2 theta); requires theta in
/// (0, 1/4].
double correction_factor(double theta);

/// Dispatches to the deterministic grid for l <= 4 and the greedy builder for
/// l <= 6; larger l is unsupported.
ThetaNet build_theta_net(int l, double theta, RngStream& rng);

ThetaNet build_grid_net(int l, double theta, bool phase_quotient = false);
ThetaNet build_greedy_net(int l, double theta, RngStream& rng,
                          std::int64_t verify_samples = 20000);

/// Max over uniform sphere samples of the distance to the nearest net point;
/// passes when it stays within theta.
std::pair<double, bool> covering_check(const ThetaNet& net, std::int64_t samples,
                                       const RngStream& rng, int threads = 1);

struct NetMaxResult {
  double max_f = 0.0;
  Ket argmax;  // net point in C^l attaining the maximum
};

/// M = max over net points p of f(V p). The full-sphere guarantee is
/// correction_factor(theta) * M.
NetMaxResult net_max_f(const StinespringChannel& phi, const ThetaNet& net);

std::string net_to_json(const ThetaNet& net);
ThetaNet net_from_json(const std::string& text);
void save_net(const ThetaNet& net, const std::string& path);
ThetaNet load_net(const std::string& path);

}  // namespace moelab
