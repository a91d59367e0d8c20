#include "moelab/nets.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "moelab/concentration.hpp"
#include "moelab/parallel.hpp"

namespace moelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_theta(double theta) {
  if (!(theta > 0.0) || theta > 0.25) {
    throw std::domain_error("theta must lie in (0, 1/4]");
  }
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_net(int l, double theta, const Matrix& pts) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  std::int64_t l64 = l;
  h = fnv1a(h, &l64, sizeof(l64));
  h = fnv1a(h, &theta, sizeof(theta));
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      const double re = pts(r, c).real();
      const double im = pts(r, c).imag();
      h = fnv1a(h, &re, sizeof(re));
      h = fnv1a(h, &im, sizeof(im));
    }
  }
  return h;
}

// Per-sample best overlap with the net: max_p Re<p, x> (plain) or
// max_p |<p, x>| (phase quotient). Tiled so intermediates stay small.
void accumulate_best_overlap(const Matrix& pts, const Matrix& samples, bool quotient,
                             Eigen::VectorXd& best) {
  const Eigen::Index net_tile = 4096;
  const Eigen::Index smp_tile = 512;
  for (Eigen::Index s0 = 0; s0 < samples.cols(); s0 += smp_tile) {
    const Eigen::Index sc = std::min(smp_tile, samples.cols() - s0);
    for (Eigen::Index p0 = 0; p0 < pts.cols(); p0 += net_tile) {
      const Eigen::Index pc = std::min(net_tile, pts.cols() - p0);
      const Matrix g = pts.middleCols(p0, pc).adjoint() * samples.middleCols(s0, sc);
      for (Eigen::Index j = 0; j < sc; ++j) {
        const double v = quotient ? g.col(j).cwiseAbs().maxCoeff()
                                  : g.col(j).real().maxCoeff();
        best(s0 + j) = std::max(best(s0 + j), v);
      }
    }
  }
}

double overlap_to_dist(double q) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * q)); }

Matrix sphere_batch(int dim, Eigen::Index count, RngStream& rng) {
  Matrix batch(dim, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (int i = 0; i < dim; ++i) batch(i, j) = rng.complex_gaussian();
    batch.col(j) /= batch.col(j).norm();
  }
  return batch;
}

struct AxisSpec {
  double range;
  bool pinned;  // angle fixed at pi/2 (phase-quotient slice)
};

// Recursive product-of-angles grid over hyperspherical coordinates of
// S^{d-1}. Cell centers are emitted; per-axis resolution keeps the cell
// half-diagonal below theta in the round metric, with the sine prefactors
// taken at their supremum over the cell. Axis counts shrink toward the
// poles, which also prunes duplicate pole points.
class GridBuilder {
 public:
  GridBuilder(std::vector<AxisSpec> axes, double budget, std::int64_t max_points)
      : axes_(std::move(axes)), budget_(budget), max_points_(max_points) {}

  std::vector<std::vector<double>> run() {
    coords_.clear();
    out_.clear();
    descend(0, 1.0, 1.0);
    return std::move(out_);
  }

 private:
  void descend(std::size_t j, double actual_chain, double inflated_chain) {
    if (j == axes_.size()) {
      std::vector<double> c = coords_;
      c.push_back(actual_chain);
      if (static_cast<std::int64_t>(out_.size()) >= max_points_) {
        throw std::runtime_error("net construction exceeded the cardinality bound");
      }
      out_.push_back(std::move(c));
      return;
    }
    const AxisSpec& ax = axes_[j];
    if (ax.pinned) {
      coords_.push_back(0.0);  // cos(pi/2) factor
      descend(j + 1, actual_chain, inflated_chain);
      coords_.pop_back();
      return;
    }
    const double need = ax.range * inflated_chain / (2.0 * budget_);
    const int m = std::max(1, static_cast<int>(std::ceil(need)));
    const double delta = ax.range / m;
    for (int c = 0; c < m; ++c) {
      const double phi = (c + 0.5) * delta;
      coords_.push_back(actual_chain * std::cos(phi));
      const double sine_sup = std::min(1.0, std::sin(phi) + delta / 2.0);
      descend(j + 1, actual_chain * std::sin(phi), inflated_chain * sine_sup);
      coords_.pop_back();
    }
  }

  std::vector<AxisSpec> axes_;
  double budget_;
  std::int64_t max_points_;
  std::vector<double> coords_;
  std::vector<std::vector<double>> out_;
};

Matrix coords_to_points(const std::vector<std::vector<double>>& reals, int l) {
  Matrix pts(l, static_cast<Eigen::Index>(reals.size()));
  for (std::size_t c = 0; c < reals.size(); ++c) {
    for (int i = 0; i < l; ++i) {
      pts(i, static_cast<Eigen::Index>(c)) = Cplx(reals[c][2 * i], reals[c][2 * i + 1]);
    }
    pts.col(static_cast<Eigen::Index>(c)) /= pts.col(static_cast<Eigen::Index>(c)).norm();
  }
  return pts;
}

}  // namespace

ThetaNet::ThetaNet(int l, double theta, Matrix points, NetConstruction construction,
                   CoveringCertificate certificate, bool phase_quotient)
    : l_(l),
      theta_(theta),
      points_(std::move(points)),
      construction_(construction),
      certificate_(std::move(certificate)),
      phase_quotient_(phase_quotient) {
  if (l < 1) throw std::invalid_argument("ThetaNet: l must be >= 1");
  require_theta(theta);
  if (points_.rows() != l || points_.cols() < 1) {
    throw std::invalid_argument("ThetaNet: points must be a nonempty l x m matrix");
  }
  for (Eigen::Index c = 0; c < points_.cols(); ++c) {
    const double nrm = points_.col(c).norm();
    if (std::abs(nrm - 1.0) > 1e-9) {
      throw std::invalid_argument("ThetaNet: non-unit point at column " +
                                  std::to_string(c));
    }
  }
  if (static_cast<std::int64_t>(points_.cols()) > net_cardinality_bound(l, theta)) {
    throw std::runtime_error("ThetaNet: size exceeds the cardinality bound");
  }
  if (certificate_.max_observed_gap > theta_) {
    throw std::runtime_error("ThetaNet: certificate gap exceeds theta");
  }
  hash_ = hash_net(l_, theta_, points_);
}

std::int64_t net_cardinality_bound(int l, double theta) {
  if (l < 1) throw std::invalid_argument("net_cardinality_bound: l must be >= 1");
  if (!(theta > 0.0)) throw std::domain_error("net_cardinality_bound: theta must be positive");
  const double v = std::pow(1.0 + 2.0 / theta, 2.0 * l);
  if (!(v < 9.2e18)) return INT64_MAX;
  return static_cast<std::int64_t>(std::ceil(v));
}

double correction_factor(double theta) {
  require_theta(theta);
  return 1.0 / (1.0 - theta * theta - 2.0 * theta);
}

ThetaNet build_grid_net(int l, double theta, bool phase_quotient) {
  require_theta(theta);
  if (l < 1 || l > 4) {
    throw std::invalid_argument("build_grid_net: deterministic grid supports 1 <= l <= 4");
  }
  const std::int64_t bound = net_cardinality_bound(l, theta);
  CoveringCertificate cert{"grid-cell-bound", 0, 0.0};

  if (l == 1) {
    if (phase_quotient) {
      Matrix pts = Matrix::Ones(1, 1);
      return ThetaNet(1, theta, std::move(pts), NetConstruction::kDeterministicGrid,
                      cert, true);
    }
    const int m = static_cast<int>(std::ceil(kPi / std::asin(theta / 2.0)));
    Matrix pts(1, m);
    for (int c = 0; c < m; ++c) {
      const double phi = 2.0 * kPi * c / m;
      pts(0, c) = Cplx(std::cos(phi), std::sin(phi));
    }
    return ThetaNet(1, theta, std::move(pts), NetConstruction::kDeterministicGrid,
                    cert, false);
  }

  const int d = 2 * l;
  std::vector<AxisSpec> axes;
  if (phase_quotient) {
    // representative slice: first amplitude real and nonnegative
    axes.push_back({kPi / 2.0, false});
    axes.push_back({kPi / 2.0, true});
    for (int i = 0; i < d - 4; ++i) axes.push_back({kPi, false});
    axes.push_back({2.0 * kPi, false});
  } else {
    for (int i = 0; i < d - 2; ++i) axes.push_back({kPi, false});
    axes.push_back({2.0 * kPi, false});
  }
  int unpinned = 0;
  for (const auto& ax : axes) {
    if (!ax.pinned) ++unpinned;
  }
  const double budget = theta / std::sqrt(static_cast<double>(unpinned));
  GridBuilder builder(std::move(axes), budget, bound);
  Matrix pts = coords_to_points(builder.run(), l);
  return ThetaNet(l, theta, std::move(pts), NetConstruction::kDeterministicGrid, cert,
                  phase_quotient);
}

ThetaNet build_greedy_net(int l, double theta, RngStream& rng,
                          std::int64_t verify_samples) {
  require_theta(theta);
  if (l < 1 || l > 6) {
    throw std::invalid_argument("build_greedy_net: supports 1 <= l <= 6");
  }
  if (verify_samples < 1000) {
    throw std::domain_error("build_greedy_net: verify_samples must be >= 1000");
  }
  const std::int64_t bound = net_cardinality_bound(l, theta);
  std::vector<Vector> pts;
  Vector e1 = Vector::Zero(l);
  e1(0) = Cplx(1.0, 0.0);
  pts.push_back(e1);

  // insert against a shrunken radius so fresh samples stay within theta
  const double insert_radius = 0.9 * theta;
  const Eigen::Index batch_size = 2048;
  double final_gap = 0.0;
  bool verified = false;
  // farthest-point insertion until a full pass of fresh samples is covered
  for (int pass = 0; pass < 1000 && !verified; ++pass) {
    bool clean = true;
    double pass_gap = 0.0;
    std::int64_t seen = 0;
    while (seen < verify_samples) {
      const Eigen::Index cnt =
          std::min<Eigen::Index>(batch_size, verify_samples - seen);
      seen += cnt;
      Matrix batch = sphere_batch(l, cnt, rng);
      Matrix net_pts(l, static_cast<Eigen::Index>(pts.size()));
      for (std::size_t c = 0; c < pts.size(); ++c) {
        net_pts.col(static_cast<Eigen::Index>(c)) = pts[c];
      }
      Eigen::VectorXd best = Eigen::VectorXd::Constant(cnt, -1.0);
      accumulate_best_overlap(net_pts, batch, false, best);
      std::vector<Eigen::Index> uncovered;
      for (Eigen::Index j = 0; j < cnt; ++j) {
        const double gap = overlap_to_dist(best(j));
        pass_gap = std::max(pass_gap, gap);
        if (gap > insert_radius) uncovered.push_back(j);
      }
      while (!uncovered.empty()) {
        clean = false;
        // farthest first
        Eigen::Index far = uncovered[0];
        for (Eigen::Index j : uncovered) {
          if (best(j) < best(far)) far = j;
        }
        const Vector added = batch.col(far);
        pts.push_back(added);
        if (static_cast<std::int64_t>(pts.size()) > bound) {
          throw std::runtime_error("net construction exceeded the cardinality bound");
        }
        std::vector<Eigen::Index> still;
        for (Eigen::Index j : uncovered) {
          best(j) = std::max(best(j), added.dot(batch.col(j)).real());
          if (overlap_to_dist(best(j)) > insert_radius) still.push_back(j);
        }
        uncovered = std::move(still);
      }
    }
    if (clean) {
      final_gap = pass_gap;
      verified = true;
    }
  }
  if (!verified) {
    throw std::runtime_error("build_greedy_net: covering did not stabilize");
  }

  Matrix net_pts(l, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t c = 0; c < pts.size(); ++c) {
    net_pts.col(static_cast<Eigen::Index>(c)) = pts[c];
  }
  CoveringCertificate cert{"monte-carlo", static_cast<std::uint64_t>(verify_samples),
                           final_gap};
  return ThetaNet(l, theta, std::move(net_pts), NetConstruction::kGreedyVerified, cert,
                  false);
}

ThetaNet build_theta_net(int l, double theta, RngStream& rng) {
  require_theta(theta);
  if (l <= 4) return build_grid_net(l, theta, false);
  if (l <= 6) return build_greedy_net(l, theta, rng);
  throw std::invalid_argument("build_theta_net: l > 6 is unsupported");
}

std::pair<double, bool> covering_check(const ThetaNet& net, std::int64_t samples,
                                       const RngStream& rng, int threads) {
  if (samples < 10000) throw std::domain_error("covering_check: samples must be >= 10^4");
  const std::int64_t chunk = 1024;
  const std::int64_t nchunks = (samples + chunk - 1) / chunk;
  std::vector<double> chunk_gap(nchunks, 0.0);
  parallel_for(static_cast<std::size_t>(nchunks), threads, [&](std::size_t i) {
    RngStream sub = rng.substream(i);
    const Eigen::Index cnt =
        static_cast<Eigen::Index>(std::min<std::int64_t>(chunk, samples - i * chunk));
    Matrix batch = sphere_batch(net.l(), cnt, sub);
    Eigen::VectorXd best = Eigen::VectorXd::Constant(cnt, -1.0);
    accumulate_best_overlap(net.points(), batch, net.phase_quotient(), best);
    double gap = 0.0;
    for (Eigen::Index j = 0; j < cnt; ++j) gap = std::max(gap, overlap_to_dist(best(j)));
    chunk_gap[i] = gap;
  });
  const double max_gap = *std::max_element(chunk_gap.begin(), chunk_gap.end());
  return {max_gap, max_gap <= net.theta()};
}

NetMaxResult net_max_f(const StinespringChannel& phi, const ThetaNet& net) {
  if (net.l() != phi.input_dim()) {
    throw std::invalid_argument("net_max_f: net dimension does not match the channel");
  }
  const int k = phi.output_dim();
  const int n = phi.env_dim();
  const Matrix pushed = phi.isometry() * net.points();  // kn x m
  double best = -1.0;
  Eigen::Index best_idx = 0;
  for (Eigen::Index j = 0; j < pushed.cols(); ++j) {
    const double f = f_value_raw(pushed.col(j), k, n);
    if (f > best) {
      best = f;
      best_idx = j;
    }
  }
  return NetMaxResult{best, net.point(static_cast<int>(best_idx))};
}

std::string net_to_json(const ThetaNet& net) {
  nlohmann::json j;
  j["l"] = net.l();
  j["theta"] = net.theta();
  j["construction"] = net.construction() == NetConstruction::kDeterministicGrid
                          ? "deterministic-grid"
                          : "greedy-verified";
  j["phase_quotient"] = net.phase_quotient();
  j["certificate"] = {{"method", net.certificate().method},
                      {"samples", net.certificate().samples},
                      {"max_observed_gap", net.certificate().max_observed_gap}};
  j["content_hash"] = net.content_hash();
  nlohmann::json entries = nlohmann::json::array();
  const Matrix& pts = net.points();
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      entries.push_back({pts(r, c).real(), pts(r, c).imag()});
    }
  }
  j["points"] = std::move(entries);
  return j.dump();
}

ThetaNet net_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int l = j.at("l").get<int>();
  const double theta = j.at("theta").get<double>();
  const auto& entries = j.at("points");
  if (entries.size() % l != 0) {
    throw std::invalid_argument("net_from_json: point count not divisible by l");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(entries.size() / l);
  Matrix pts(l, m);
  std::size_t idx = 0;
  for (Eigen::Index c = 0; c < m; ++c) {
    for (int r = 0; r < l; ++r, ++idx) {
      pts(r, c) = Cplx(entries[idx][0].get<double>(), entries[idx][1].get<double>());
    }
  }
  CoveringCertificate cert;
  cert.method = j.at("certificate").at("method").get<std::string>();
  cert.samples = j.at("certificate").at("samples").get<std::uint64_t>();
  cert.max_observed_gap = j.at("certificate").at("max_observed_gap").get<double>();
  const auto construction = j.at("construction").get<std::string>() == "deterministic-grid"
                                ? NetConstruction::kDeterministicGrid
                                : NetConstruction::kGreedyVerified;
  ThetaNet net(l, theta, std::move(pts), construction, cert,
               j.at("phase_quotient").get<bool>());
  if (net.content_hash() != j.at("content_hash").get<std::uint64_t>()) {
    throw std::runtime_error("net_from_json: content hash mismatch");
  }
  return net;
}

void save_net(const ThetaNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_net: cannot open " + path);
  out << net_to_json(net) << "\n";
}

ThetaNet load_net(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_net: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return net_from_json(ss.str());
}

}  // namespace moelab
