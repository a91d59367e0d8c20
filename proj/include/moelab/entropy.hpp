#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <concepts>
#include <stdexcept>
#include <utility>
#include <vector>

#include "moelab/channels.hpp"
#include "moelab/linalg.hpp"
#include "moelab/parallel.hpp"
#include "moelab/rng.hpp"

namespace moelab {

/// Entropy in nats.
struct EntropyValue {
  double nats = 0.0;
};

struct MoeEstimate {
  EntropyValue value;
  Ket minimizer{Vector::Ones(1)};
  int restarts = 0;
  bool converged = false;
};

/// -sum lambda ln lambda with 0 ln 0 = 0; eigenvalues in [-1e-12, 0] are
/// clamped, anything below -1e-9 is an invalid state.
EntropyValue von_neumann_entropy(const DensityMatrix& rho);
double entropy_from_eigvals(const std::vector<double>& eigvals);

/// (ln k - S(rho), k * ||rho - I_k/k||_2^2); the gap never exceeds the bound.
std::pair<double, double> entropy_gap_bound(const DensityMatrix& rho, int k);

/// Output of the product channel phi (x) conj(phi) on the canonical
/// maximally entangled input.
DensityMatrix bell_output(const StinespringChannel& phi);

/// Exact entropy of bell_output: a certified upper bound on the minimum
/// output entropy of the product channel.
EntropyValue bell_upper_bound_exact(const StinespringChannel& phi);

/// Largest entropy of a d-dimensional state whose top eigenvalue is >= p:
/// -p ln p - (1-p) ln((1-p)/(d-1)). Requires p >= 1/d.
EntropyValue max_entropy_given_lambda(double p, int d);

/// Asymptotic closed-form bound 2 ln k - a ln k / k + 2a/k on the product
/// channel's minimum output entropy at l = a*n. Valid for large k only;
/// certification paths use the exact Bell-output entropy instead.
EntropyValue bell_upper_bound_asymptotic(int k, double a);

template <typename C>
concept PureInputChannel = requires(const C& ch, const Vector& x, const Matrix& h) {
  { ch.input_dim() } -> std::convertible_to<int>;
  { ch.output_dim() } -> std::convertible_to<int>;
  { ch.apply_pure(x) } -> std::convertible_to<Matrix>;
  { ch.adjoint_apply(h) } -> std::convertible_to<Matrix>;
};

namespace detail {

struct OutputEntropy {
  double entropy;
  Matrix log_weight;  // -(ln rho + I), in the eigenbasis of rho
};

inline OutputEntropy output_entropy_and_weight(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const auto& lam = es.eigenvalues();
  const auto& q = es.eigenvectors();
  double s = 0.0;
  Eigen::VectorXd w(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double x = std::max(lam(i), 0.0);
    if (x > 0.0) s -= x * std::log(x);
    const double safe = std::max(lam(i), 1e-18);
    w(i) = -std::log(safe) - 1.0;
  }
  OutputEntropy out;
  out.entropy = std::max(0.0, s);
  out.log_weight = q * w.asDiagonal() * q.adjoint();
  return out;
}

inline double pure_output_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()(i);
    if (x > 0.0) s -= x * std::log(x);
  }
  return std::max(0.0, s);
}

struct RestartResult {
  double value = 0.0;
  Vector x;
  bool converged = false;
};

/// Riemannian projected gradient on the unit sphere with Armijo backtracking.
template <PureInputChannel C>
RestartResult minimize_output_entropy_once(const C& ch, RngStream rng) {
  constexpr int kMaxIter = 200;
  constexpr double kGradTol = 1e-8;
  constexpr double kArmijo = 1e-4;
  const int l = ch.input_dim();

  auto tangent_grad = [&](const Vector& at) -> Vector {
    const auto oe = output_entropy_and_weight(ch.apply_pure(at));
    Vector grad = 2.0 * (ch.adjoint_apply(oe.log_weight) * at);
    grad -= at.dot(grad).real() * at;  // tangent projection
    return grad;
  };

  Vector x = random_unit_vector(l, rng).amplitudes();
  double fx = pure_output_entropy(ch.apply_pure(x));
  int perturbations = 0;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Vector grad = tangent_grad(x);
    const double grad_norm = grad.norm();
    if (grad_norm < kGradTol) break;

    double step = 1.0;
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      Vector cand = x - step * grad;
      cand /= cand.norm();
      const double fc = pure_output_entropy(ch.apply_pure(cand));
      if (fc <= fx - kArmijo * step * grad_norm * grad_norm) {
        x = std::move(cand);
        fx = fc;
        moved = true;
        break;
      }
      step /= 2.0;
    }
    if (!moved) {
      // stalled, likely a non-smooth spectrum; nudge and carry on
      if (++perturbations > 3) break;
      Vector noise(l);
      for (int i = 0; i < l; ++i) noise(i) = rng.complex_gaussian();
      noise -= x.dot(noise) * x;
      x = x + 1e-8 * noise;
      x /= x.norm();
      fx = pure_output_entropy(ch.apply_pure(x));
    }
  }
  RestartResult r;
  r.converged = tangent_grad(x).norm() < kGradTol;
  r.x = std::move(x);
  r.value = pure_output_entropy(ch.apply_pure(r.x));
  return r;
}

}  // namespace detail

/// Multi-start upper bound on the minimum output entropy. Restart i draws its
/// start from rng.substream(i), so results are deterministic for a fixed
/// stream and nonincreasing as restarts grow.
template <PureInputChannel C>
MoeEstimate min_output_entropy_estimate(const C& ch, int restarts, const RngStream& rng,
                                        int threads = 1) {
  if (restarts < 1) throw std::invalid_argument("min_output_entropy_estimate: restarts must be >= 1");
  std::vector<detail::RestartResult> results(restarts);
  parallel_for(static_cast<std::size_t>(restarts), threads, [&](std::size_t i) {
    results[i] = detail::minimize_output_entropy_once(ch, rng.substream(i));
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value < results[best].value) best = i;
  }
  MoeEstimate est;
  est.value = EntropyValue{results[best].value};
  est.minimizer = Ket::normalized(results[best].x);
  est.restarts = restarts;
  est.converged = results[best].converged;
  return est;
}

namespace detail {

template <PureInputChannel C>
std::pair<double, Vector> oracle_search(const C& ch, int grid_resolution);

}  // namespace detail

/// Brute-force reference: deterministic grid over pure states (projective
/// coordinates) plus local shrinking-grid refinement. Supports l <= 3.
template <PureInputChannel C>
EntropyValue min_output_entropy_oracle(const C& ch, int grid_resolution) {
  return EntropyValue{detail::oracle_search(ch, grid_resolution).first};
}

namespace detail {

template <PureInputChannel C>
std::pair<double, Vector> oracle_search(const C& ch, int grid_resolution) {
  const int l = ch.input_dim();
  if (l > 3) throw std::invalid_argument("min_output_entropy_oracle: supports l <= 3");
  if (grid_resolution < 4) throw std::invalid_argument("min_output_entropy_oracle: resolution too small");

  const double pi = 3.14159265358979323846;
  const int nparams = (l == 1) ? 0 : (l == 2 ? 2 : 4);

  auto state_of = [&](const std::vector<double>& p) -> Vector {
    Vector x(l);
    if (l == 1) {
      x(0) = Cplx(1.0, 0.0);
    } else if (l == 2) {
      x(0) = Cplx(std::cos(p[0]), 0.0);
      x(1) = std::sin(p[0]) * std::exp(Cplx(0.0, p[1]));
    } else {
      x(0) = Cplx(std::cos(p[0]), 0.0);
      x(1) = std::sin(p[0]) * std::cos(p[1]) * std::exp(Cplx(0.0, p[2]));
      x(2) = std::sin(p[0]) * std::sin(p[1]) * std::exp(Cplx(0.0, p[3]));
    }
    return x;
  };
  auto eval = [&](const std::vector<double>& p) {
    return pure_output_entropy(ch.apply_pure(state_of(p)));
  };

  std::vector<double> best_p(nparams, 0.0);
  double best = eval(best_p);
  if (l == 1) return {best, state_of(best_p)};

  // coarse pass
  const int ra = grid_resolution;
  const int rp = 2 * grid_resolution;
  std::vector<int> counts = (l == 2) ? std::vector<int>{ra + 1, rp}
                                     : std::vector<int>{ra + 1, ra + 1, rp, rp};
  std::vector<double> spans = (l == 2) ? std::vector<double>{pi / 2, 2 * pi}
                                       : std::vector<double>{pi / 2, pi / 2, 2 * pi, 2 * pi};
  std::vector<int> idx(nparams, 0);
  std::vector<double> p(nparams);
  while (true) {
    for (int d = 0; d < nparams; ++d) {
      const int denom = (spans[d] == 2 * pi) ? counts[d] : counts[d] - 1;
      p[d] = spans[d] * idx[d] / denom;
    }
    const double v = eval(p);
    if (v < best) {
      best = v;
      best_p = p;
    }
    int d = 0;
    while (d < nparams && ++idx[d] == counts[d]) idx[d++] = 0;
    if (d == nparams) break;
  }

  // local refinement: shrinking 5-point grids per axis
  std::vector<double> width(nparams);
  for (int d = 0; d < nparams; ++d) width[d] = spans[d] / counts[d];
  for (int round = 0; round < 14; ++round) {
    std::vector<int> li(nparams, 0);
    std::vector<double> q(nparams);
    while (true) {
      for (int d = 0; d < nparams; ++d) q[d] = best_p[d] + width[d] * 0.5 * (li[d] - 2);
      const double v = eval(q);
      if (v < best) {
        best = v;
        best_p = q;
      }
      int d = 0;
      while (d < nparams && ++li[d] == 5) li[d++] = 0;
      if (d == nparams) break;
    }
    for (int d = 0; d < nparams; ++d) width[d] *= 0.25;
  }
  return {best, state_of(best_p)};
}

}  // namespace detail

}  // namespace moelab
