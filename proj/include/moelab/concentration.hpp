#pragma once

#include <string>
#include <vector>

#include "moelab/linalg.hpp"
#include "moelab/rng.hpp"

namespace moelab {

// Levy-family constants for unit spheres: the tail of a Lipschitz function
// around its median is c1 * exp(-c2 * eps^2 * r). Fixed at compile time.
inline constexpr double kLevyC1 = 0.62665706865775006;  // sqrt(pi/8)
inline constexpr double kLevyC2 = 0.5;

/// Hilbert-Schmidt deviation of the reduced state from the maximally mixed
/// one: || XX* - Tr[XX*] I_k/k ||_2 with X the k x n matrix view of x.
double f_value(const Ket& x, int k, int n);
double f_value_raw(const Vector& x, int k, int n);

/// Closed form for E[f^2] over the uniform sphere: (k+n)/(kn+1) - 1/k.
double exact_second_moment(int k, int n);

/// h(k, alpha, eps) = 2 eps (1 + 2 alpha + eps) / k.
double h_bound(int k, double alpha, double epsilon);

/// Tail bound sqrt(pi/8) exp(-eps^2 (n - 1/k)), built from the Levy constants.
double deviation_bound_rhs(int k, int n, double epsilon);

struct MomentReport {
  int k = 0;
  int n = 0;
  long trials = 0;
  double mean_f = 0.0;
  double stderr_mean = 0.0;
  double median_f = 0.0;
  double mean_f2 = 0.0;
  double stderr_f2 = 0.0;
  double exact_f2 = 0.0;
  double bound_mean = 0.0;    // 1/sqrt(n)
  double bound_median = 0.0;  // (1/sqrt(n)) (1 + 3/sqrt(k))
  double median_slack = 0.0;  // order-statistic slack used for the check
  bool mean_within_bound = false;
  bool median_within_bound = false;
  bool f2_matches = false;

  bool all_ok() const { return mean_within_bound && median_within_bound && f2_matches; }
  static std::string csv_header();
  std::string csv_row() const;
  std::string to_json() const;
};

MomentReport estimate_moments(int k, int n, long trials, const RngStream& rng,
                              int threads = 1);

struct TailReport {
  int k = 0;
  int n = 0;
  double alpha = 0.0;  // k/sqrt(n), from k^2 = alpha^2 n
  long trials = 0;
  double median_f = 0.0;
  std::vector<double> epsilon_grid;
  std::vector<double> threshold;       // median_f + h(k, alpha, eps)
  std::vector<double> empirical_tail;  // exceedance frequency
  std::vector<double> analytic_bound;
  std::vector<double> binomial_stderr;
  std::vector<bool> within_bound;  // checked only where the bound is <= 1

  bool all_ok() const;
  static std::string csv_header();
  std::string csv_rows() const;
  std::string to_json() const;
};

TailReport empirical_tail(int k, int n, const std::vector<double>& epsilon_grid,
                          long trials, const RngStream& rng, int threads = 1);

/// Both sides of |f(x) - f(y)| <= (||X||_inf + ||Y||_inf) ||X - Y||_2.
std::pair<double, double> lipschitz_bound_check(const Ket& x, const Ket& y, int k, int n);

struct OpnormReport {
  int k = 0;
  int n = 0;
  long trials = 0;
  double bound = 0.0;  // 1/sqrt(k) + 2 sqrt(k/n)
  bool vacuous = false;
  long conditioned = 0;  // samples with f <= empirical median
  long violations = 0;
  double violation_fraction = 0.0;
  double max_opnorm = 0.0;  // over the conditioned samples
  std::string to_json() const;
};

/// Among samples with f(x) below the empirical median, counts violations of
/// the operator-norm bound on ||X||_inf.
OpnormReport opnorm_bound_check(int k, int n, long trials, const RngStream& rng,
                                int threads = 1);

}  // namespace moelab
