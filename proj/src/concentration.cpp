#include "moelab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "moelab/parallel.hpp"

namespace moelab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// lower median of a sorted sample
double lower_median(std::vector<double> sorted) {
  const std::size_t n = sorted.size();
  return sorted[(n - 1) / 2];
}

Vector sample_sphere_point(int dim, RngStream& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  v /= v.norm();
  return v;
}

std::vector<double> sample_f(int k, int n, long trials, const RngStream& rng,
                             int threads) {
  std::vector<double> fs(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    RngStream sub = rng.substream(i);
    const Vector x = sample_sphere_point(k * n, sub);
    fs[i] = f_value_raw(x, k, n);
  });
  return fs;
}

}  // namespace

double f_value_raw(const Vector& x, int k, int n) {
  if (x.size() != static_cast<Eigen::Index>(k) * n) {
    throw std::invalid_argument("f_value: vector dim does not equal k*n");
  }
  const Matrix X = reshape_row_major(x, k, n);
  Matrix m = X * X.adjoint();
  const double scaled_trace = m.trace().real() / static_cast<double>(k);
  for (int i = 0; i < k; ++i) m(i, i) -= scaled_trace;
  return m.norm();
}

double f_value(const Ket& x, int k, int n) { return f_value_raw(x.amplitudes(), k, n); }

double exact_second_moment(int k, int n) {
  if (k < 1 || n < 1) throw std::invalid_argument("exact_second_moment: dims must be >= 1");
  const double kk = k, nn = n;
  return (kk + nn) / (kk * nn + 1.0) - 1.0 / kk;
}

double h_bound(int k, double alpha, double epsilon) {
  if (k < 1 || alpha < 0.0 || epsilon < 0.0) {
    throw std::domain_error("h_bound: arguments must be nonnegative, k >= 1");
  }
  return 2.0 * epsilon * (1.0 + 2.0 * alpha + epsilon) / k;
}

double deviation_bound_rhs(int k, int n, double epsilon) {
  if (k < 1 || n < 1 || epsilon < 0.0) {
    throw std::domain_error("deviation_bound_rhs: invalid arguments");
  }
  // Levy tail at sphere radius index r = 2kn - 2 and scale eps/sqrt(k);
  // the exponent collapses to -eps^2 (n - 1/k)
  const double scaled = epsilon / std::sqrt(static_cast<double>(k));
  const double r = 2.0 * k * n - 2.0;
  return kLevyC1 * std::exp(-kLevyC2 * scaled * scaled * r);
}

std::string MomentReport::csv_header() {
  return "k,n,trials,mean_f,stderr_mean,median_f,mean_f2,stderr_f2,exact_f2,"
         "bound_mean,bound_median";
}

std::string MomentReport::csv_row() const {
  std::string row = std::to_string(k) + "," + std::to_string(n) + "," +
                    std::to_string(trials);
  for (double v : {mean_f, stderr_mean, median_f, mean_f2, stderr_f2, exact_f2,
                   bound_mean, bound_median}) {
    row += "," + fmt(v);
  }
  return row;
}

std::string MomentReport::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["n"] = n;
  j["trials"] = trials;
  j["mean_f"] = mean_f;
  j["stderr_mean"] = stderr_mean;
  j["median_f"] = median_f;
  j["mean_f2"] = mean_f2;
  j["stderr_f2"] = stderr_f2;
  j["exact_f2"] = exact_f2;
  j["bound_mean"] = bound_mean;
  j["bound_median"] = bound_median;
  j["median_slack"] = median_slack;
  j["mean_within_bound"] = mean_within_bound;
  j["median_within_bound"] = median_within_bound;
  j["f2_matches"] = f2_matches;
  return j.dump();
}

MomentReport estimate_moments(int k, int n, long trials, const RngStream& rng,
                              int threads) {
  if (trials < 100) throw std::domain_error("estimate_moments: trials must be >= 100");
  const std::vector<double> fs = sample_f(k, n, trials, rng, threads);

  MomentReport rep;
  rep.k = k;
  rep.n = n;
  rep.trials = trials;

  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (double f : fs) {
    sum += f;
    sum2 += f * f;
    sum4 += f * f * f * f;
  }
  const double m = sum / trials;
  const double m2 = sum2 / trials;
  const double var_f = std::max(0.0, (sum2 - trials * m * m) / (trials - 1));
  const double var_f2 = std::max(0.0, (sum4 - trials * m2 * m2) / (trials - 1));
  rep.mean_f = m;
  rep.mean_f2 = m2;
  rep.stderr_mean = std::sqrt(var_f / trials);
  rep.stderr_f2 = std::sqrt(var_f2 / trials);

  std::vector<double> sorted = fs;
  std::sort(sorted.begin(), sorted.end());
  rep.median_f = lower_median(std::move(sorted));

  rep.exact_f2 = exact_second_moment(k, n);
  rep.bound_mean = 1.0 / std::sqrt(static_cast<double>(n));
  rep.bound_median = rep.bound_mean * (1.0 + 3.0 / std::sqrt(static_cast<double>(k)));
  // normal-approximation standard error of the sample median
  rep.median_slack = 3.0 * 1.2533 * std::sqrt(var_f / trials);

  rep.mean_within_bound = rep.mean_f <= rep.bound_mean + 2.0 * rep.stderr_mean;
  rep.median_within_bound = rep.median_f <= rep.bound_median + rep.median_slack;
  rep.f2_matches = std::abs(rep.mean_f2 - rep.exact_f2) <= 3.0 * rep.stderr_f2;
  return rep;
}

bool TailReport::all_ok() const {
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (analytic_bound[i] <= 1.0 && !within_bound[i]) return false;
  }
  return true;
}

std::string TailReport::csv_header() {
  return "k,n,alpha,trials,median_f,eps,threshold,frequency,bound,binomial_stderr";
}

std::string TailReport::csv_rows() const {
  std::string out;
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    out += std::to_string(k) + "," + std::to_string(n) + "," + fmt(alpha) + "," +
           std::to_string(trials) + "," + fmt(median_f) + "," + fmt(epsilon_grid[i]) +
           "," + fmt(threshold[i]) + "," + fmt(empirical_tail[i]) + "," +
           fmt(analytic_bound[i]) + "," + fmt(binomial_stderr[i]) + "\n";
  }
  return out;
}

std::string TailReport::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["n"] = n;
  j["alpha"] = alpha;
  j["trials"] = trials;
  j["median_f"] = median_f;
  j["epsilon_grid"] = epsilon_grid;
  j["threshold"] = threshold;
  j["empirical_tail"] = empirical_tail;
  j["analytic_bound"] = analytic_bound;
  j["binomial_stderr"] = binomial_stderr;
  std::vector<bool> wb(within_bound.begin(), within_bound.end());
  j["within_bound"] = wb;
  return j.dump();
}

TailReport empirical_tail(int k, int n, const std::vector<double>& epsilon_grid,
                          long trials, const RngStream& rng, int threads) {
  if (trials < 1000) throw std::domain_error("empirical_tail: trials must be >= 1000");
  for (double e : epsilon_grid) {
    if (e <= 0.0) throw std::domain_error("empirical_tail: epsilons must be positive");
  }
  const std::vector<double> fs = sample_f(k, n, trials, rng, threads);
  std::vector<double> sorted = fs;
  std::sort(sorted.begin(), sorted.end());

  TailReport rep;
  rep.k = k;
  rep.n = n;
  rep.alpha = static_cast<double>(k) / std::sqrt(static_cast<double>(n));
  rep.trials = trials;
  rep.median_f = lower_median(std::move(sorted));
  rep.epsilon_grid = epsilon_grid;
  for (double eps : epsilon_grid) {
    const double thr = rep.median_f + h_bound(k, rep.alpha, eps);
    long exceed = 0;
    for (double f : fs) {
      if (f > thr) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / trials;
    const double bound = deviation_bound_rhs(k, n, eps);
    const double b = std::min(bound, 1.0);
    const double se = std::sqrt(b * (1.0 - b) / trials);
    rep.threshold.push_back(thr);
    rep.empirical_tail.push_back(freq);
    rep.analytic_bound.push_back(bound);
    rep.binomial_stderr.push_back(se);
    rep.within_bound.push_back(freq <= bound + 3.0 * se);
  }
  return rep;
}

std::pair<double, double> lipschitz_bound_check(const Ket& x, const Ket& y, int k, int n) {
  const double lhs = std::abs(f_value(x, k, n) - f_value(y, k, n));
  const Matrix X = ket_to_matrix(x, k, n);
  const Matrix Y = ket_to_matrix(y, k, n);
  const double rhs = (op_norm(X) + op_norm(Y)) * hs_norm(X - Y);
  return {lhs, rhs};
}

std::string OpnormReport::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["n"] = n;
  j["trials"] = trials;
  j["bound"] = bound;
  j["vacuous"] = vacuous;
  j["conditioned"] = conditioned;
  j["violations"] = violations;
  j["violation_fraction"] = violation_fraction;
  j["max_opnorm"] = max_opnorm;
  return j.dump();
}

OpnormReport opnorm_bound_check(int k, int n, long trials, const RngStream& rng,
                                int threads) {
  if (trials < 1000) throw std::domain_error("opnorm_bound_check: trials must be >= 1000");
  std::vector<double> fs(trials), ops(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    RngStream sub = rng.substream(i);
    const Vector x = sample_sphere_point(k * n, sub);
    const Matrix X = reshape_row_major(x, k, n);
    Matrix m = X * X.adjoint();
    ops[i] = std::sqrt(hermitian_eigvals(m)[0]);
    const double scaled_trace = m.trace().real() / static_cast<double>(k);
    for (int d = 0; d < k; ++d) m(d, d) -= scaled_trace;
    fs[i] = m.norm();
  });
  std::vector<double> sorted = fs;
  std::sort(sorted.begin(), sorted.end());
  const double med = lower_median(std::move(sorted));

  OpnormReport rep;
  rep.k = k;
  rep.n = n;
  rep.trials = trials;
  rep.bound = 1.0 / std::sqrt(static_cast<double>(k)) +
              2.0 * std::sqrt(static_cast<double>(k) / n);
  rep.vacuous = rep.bound >= 1.0;  // ||X||_inf <= 1 always holds for unit x
  for (long i = 0; i < trials; ++i) {
    if (fs[i] > med) continue;
    ++rep.conditioned;
    rep.max_opnorm = std::max(rep.max_opnorm, ops[i]);
    if (ops[i] > rep.bound) ++rep.violations;
  }
  rep.violation_fraction =
      rep.conditioned > 0 ? static_cast<double>(rep.violations) / rep.conditioned : 0.0;
  return rep;
}

}  // namespace moelab
