#include "moelab/certify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "moelab/concentration.hpp"
#include "moelab/parallel.hpp"

namespace moelab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EntropyValue certified_smin_lower(const StinespringChannel& phi, double theta,
                                  const ThetaNet& net) {
  if (net.l() != phi.input_dim() || std::abs(net.theta() - theta) > 1e-12) {
    throw std::invalid_argument("certified_smin_lower: net does not match (l, theta)");
  }
  const double m = net_max_f(phi, net).max_f;
  const double c = correction_factor(theta);
  const double bound =
      std::log(static_cast<double>(phi.output_dim())) - phi.output_dim() * (c * m) * (c * m);
  return EntropyValue{std::max(0.0, bound)};
}

EntropyValue certified_product_upper(const StinespringChannel& phi) {
  return bell_upper_bound_exact(phi);
}

GapReport violation_gap(const StinespringChannel& phi, double theta, const ThetaNet& net,
                        int restarts, const RngStream& rng) {
  GapReport rep;
  rep.l = phi.input_dim();
  rep.k = phi.output_dim();
  rep.n = phi.env_dim();
  rep.theta = theta;
  rep.net_size = net.size();
  rep.net_max = net_max_f(phi, net).max_f;
  rep.c_theta = correction_factor(theta);
  rep.lower = certified_smin_lower(phi, theta, net);
  rep.bell_upper = certified_product_upper(phi);
  rep.gap = 2.0 * rep.lower.nats - rep.bell_upper.nats;
  rep.certified_violation = rep.gap > kCertificationMargin;
  rep.heuristic_smin = min_output_entropy_estimate(phi, restarts, rng);
  return rep;
}

bool exist_subspace_condition(std::int64_t l, std::int64_t n, double theta,
                              double epsilon) {
  if (l < 1 || n < 1) throw std::invalid_argument("exist_subspace_condition: dims must be >= 1");
  if (!(theta > 0.0) || theta > 0.25) {
    throw std::domain_error("exist_subspace_condition: theta must lie in (0, 1/4]");
  }
  if (epsilon <= 0.0) return false;
  const double lhs = static_cast<double>(l) / static_cast<double>(n);
  const double rhs = epsilon * epsilon / (4.0 * std::log(1.0 + 2.0 / theta));
  return lhs <= rhs;
}

TheboundResult thebound_rhs(int k, double alpha, double theta, double epsilon) {
  if (k < 1 || alpha < 0.0 || epsilon < 0.0) {
    throw std::domain_error("thebound_rhs: k >= 1 and nonnegative alpha, epsilon required");
  }
  const double c = correction_factor(theta);
  TheboundResult r;
  r.value = c * (h_bound(k, alpha, epsilon) + 4.0 * alpha / k);
  r.constant = k * r.value;
  return r;
}

TypicalBound typical_bound_rhs(int l, int k, int n) {
  if (l < 2 || k < 2 || n < 2) {
    throw std::domain_error("typical_bound_rhs: all dimensions must be >= 2");
  }
  const double ld = l, kd = k, nd = n;
  TypicalBound r;
  r.value = 15.0 / kd * std::sqrt(ld / nd) + 30.0 * std::sqrt(ld) / nd +
            36.0 * ld / (kd * nd) + 10.0 / std::sqrt(nd);
  r.vacuous = r.value >= std::sqrt((kd - 1.0) / kd);
  return r;
}

CrossoverResult analytic_crossover(double a, double theta, bool beta_zero, double beta) {
  if (!(a > 0.0)) throw std::domain_error("analytic_crossover: a must be positive");
  if (!beta_zero && !(beta > 0.0)) {
    throw std::domain_error("analytic_crossover: beta must be positive");
  }
  CrossoverResult r;
  r.epsilon = 2.0 * std::sqrt(a * std::log(1.0 + 2.0 / theta));
  const double alpha = beta_zero ? 0.0 : std::sqrt(beta);
  r.constant =
      correction_factor(theta) * (2.0 * r.epsilon * (1.0 + 2.0 * alpha + r.epsilon) + 4.0 * alpha);

  auto holds = [&](double ln_k) { return a * ln_k - 2.0 * a > 2.0 * r.constant * r.constant; };
  const double ln_k_max = 1e8;
  if (!holds(ln_k_max)) {
    r.finite = false;
    r.ln_k_star = std::numeric_limits<double>::infinity();
    r.k_star = std::numeric_limits<double>::infinity();
    return r;
  }
  double lo = 0.0, hi = ln_k_max;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = (lo + hi) / 2.0;
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  r.finite = true;
  r.ln_k_star = hi;
  r.k_star = hi < 709.0 ? std::exp(hi) : std::numeric_limits<double>::infinity();
  return r;
}

std::vector<GapScanRow> gap_scan(const GapScanConfig& config) {
  struct Cell {
    int l, k, n;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (int l : config.ls) {
    for (int k : config.ks) {
      for (int n : config.ns) {
        for (std::uint64_t seed : config.seeds) grid.push_back({l, k, n, seed});
      }
    }
  }
  // rows are independent; streams are keyed by cell content, so identical
  // cells reproduce exactly and the output order is the grid order
  std::vector<GapScanRow> rows(grid.size());
  parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    const Cell& cell = grid[i];
    GapScanRow row;
    row.report.l = cell.l;
    row.report.k = cell.k;
    row.report.n = cell.n;
    row.report.theta = config.theta;
    row.report.seed = cell.seed;
    try {
      if (cell.l > 3) {
        throw std::invalid_argument("certified scan supports l <= 3");
      }
      RngStream row_rng = RngStream(cell.seed)
                              .substream(static_cast<std::uint64_t>(cell.l))
                              .substream(static_cast<std::uint64_t>(cell.k))
                              .substream(static_cast<std::uint64_t>(cell.n));
      RngStream net_rng = row_rng.substream(0);
      RngStream chan_rng = row_rng.substream(1);
      const ThetaNet net = build_theta_net(cell.l, config.theta, net_rng);
      const StinespringChannel phi =
          random_subspace_channel(cell.l, cell.k, cell.n, chan_rng);
      GapReport rep = violation_gap(phi, config.theta, net, config.restarts,
                                    row_rng.substream(2));
      rep.seed = cell.seed;
      row.report = std::move(rep);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows[i] = std::move(row);
  });
  return rows;
}

std::string gap_scan_csv_header() {
  return "k,n,l,theta,seed,net_size,net_max_f,c_theta,lower_nats,bell_upper_nats,"
         "gap_nats,certified,heuristic_smin_nats";
}

std::string gap_scan_csv(const std::vector<GapScanRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    const GapReport& r = row.report;
    if (!row.ok) {
      out += "# row (l=" + std::to_string(r.l) + ",k=" + std::to_string(r.k) +
             ",n=" + std::to_string(r.n) + ",seed=" + std::to_string(r.seed) +
             ") error: " + row.error + "\n";
      continue;
    }
    out += std::to_string(r.k) + "," + std::to_string(r.n) + "," + std::to_string(r.l) +
           "," + fmt(r.theta) + "," + std::to_string(r.seed) + ",";
    out += std::to_string(r.net_size) + "," + fmt(r.net_max) + "," + fmt(r.c_theta) +
           "," + fmt(r.lower.nats) + "," + fmt(r.bell_upper.nats) + "," + fmt(r.gap) +
           "," + (r.certified_violation ? "1" : "0") + "," +
           fmt(r.heuristic_smin.value.nats) + "\n";
  }
  return out;
}

}  // namespace moelab
