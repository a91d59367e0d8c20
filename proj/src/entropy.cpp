#include "moelab/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moelab {

double entropy_from_eigvals(const std::vector<double>& eigvals) {
  double s = 0.0;
  for (double lam : eigvals) {
    if (lam < -1e-9) {
      throw std::invalid_argument("entropy: eigenvalue " + std::to_string(lam) +
                                  " below -1e-9");
    }
    if (lam <= 0.0) continue;  // clamp [-1e-12, 0] to 0; 0 ln 0 = 0
    s -= lam * std::log(lam);
  }
  return std::max(0.0, s);
}

EntropyValue von_neumann_entropy(const DensityMatrix& rho) {
  return EntropyValue{entropy_from_eigvals(hermitian_eigvals(rho.matrix()))};
}

std::pair<double, double> entropy_gap_bound(const DensityMatrix& rho, int k) {
  if (rho.dim() != k) throw std::invalid_argument("entropy_gap_bound: dimension mismatch");
  const double gap = std::log(static_cast<double>(k)) - von_neumann_entropy(rho).nats;
  const Matrix dev = rho.matrix() - Matrix::Identity(k, k) / static_cast<double>(k);
  const double bound = k * dev.squaredNorm();
  return {gap, bound};
}

DensityMatrix bell_output(const StinespringChannel& phi) {
  const StinespringChannel product = tensor_channels(phi, conjugate_channel(phi));
  return product.apply_to_ket(bell_state(phi.input_dim()));
}

EntropyValue bell_upper_bound_exact(const StinespringChannel& phi) {
  return von_neumann_entropy(bell_output(phi));
}

EntropyValue max_entropy_given_lambda(double p, int d) {
  if (d < 1) throw std::invalid_argument("max_entropy_given_lambda: d must be >= 1");
  if (p > 1.0 || p < 1.0 / d) {
    throw std::domain_error("max_entropy_given_lambda: p must lie in [1/d, 1]");
  }
  if (p >= 1.0 || d == 1) return EntropyValue{0.0};
  const double rest = (1.0 - p) / (d - 1);
  return EntropyValue{-p * std::log(p) - (1.0 - p) * std::log(rest)};
}

EntropyValue bell_upper_bound_asymptotic(int k, double a) {
  if (k < 2) throw std::invalid_argument("bell_upper_bound_asymptotic: k must be >= 2");
  if (a <= 0.0) throw std::domain_error("bell_upper_bound_asymptotic: a must be positive");
  const double lk = std::log(static_cast<double>(k));
  return EntropyValue{2.0 * lk - a * lk / k + 2.0 * a / k};
}

}  // namespace moelab
