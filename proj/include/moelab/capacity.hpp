#pragma once

#include <string>
#include <vector>

#include "moelab/channels.hpp"
#include "moelab/entropy.hpp"
#include "moelab/linalg.hpp"

namespace moelab {

struct WeylLabel {
  int x = 0;  // shift power
  int y = 0;  // phase power
  int k = 1;  // modulus
};

/// W_z = U^x V^y with U the cyclic shift e_r -> e_{r+1} and
/// V = diag(exp(2 pi i r / k)).
Matrix weyl_operator(const WeylLabel& z);

/// (1/k^2) sum_z W_z A W_z* = (Tr A / k) I_k.
Matrix weyl_twirl(const Matrix& a);

/// Extension of a channel to L(C^{k^2} (x) C^l): the k^2-dimensional label
/// register selects which Weyl unitary rotates the base channel's output.
/// Same minimum output entropy as the base channel; its Holevo capacity is
/// ln k minus that value.
class WeylExtendedChannel {
 public:
  explicit WeylExtendedChannel(StinespringChannel base);

  const StinespringChannel& base() const { return base_; }
  int input_dim() const { return label_dim_ * base_.input_dim(); }
  int output_dim() const { return base_.output_dim(); }
  int label_dim() const { return label_dim_; }  // k^2

  DensityMatrix apply(const DensityMatrix& rho) const;
  Matrix apply_matrix(const Matrix& m) const;
  Matrix apply_pure(const Vector& x) const;
  Matrix adjoint_apply(const Matrix& h) const;

 private:
  StinespringChannel base_;
  int label_dim_;
  std::vector<Matrix> weyls_;
};

WeylExtendedChannel weyl_extend(const StinespringChannel& phi);

struct Ensemble {
  std::vector<double> probabilities;
  std::vector<DensityMatrix> states;

  Ensemble(std::vector<double> probs, std::vector<DensityMatrix> sts);
  int state_dim() const { return states.front().dim(); }
  int size() const { return static_cast<int>(states.size()); }
};

/// chi of one specific ensemble: S(Phi(sum p_i rho_i)) - sum p_i S(Phi(rho_i)).
template <typename C>
double ensemble_holevo_value(const C& ch, const Ensemble& ens) {
  if (ens.state_dim() != ch.input_dim()) {
    throw std::invalid_argument("ensemble_holevo_value: state dimension mismatch");
  }
  Matrix avg = Matrix::Zero(ens.state_dim(), ens.state_dim());
  double mean_entropy = 0.0;
  for (int i = 0; i < ens.size(); ++i) {
    avg += ens.probabilities[i] * ens.states[i].matrix();
    const Matrix out = ch.apply_matrix(ens.states[i].matrix());
    mean_entropy +=
        ens.probabilities[i] * entropy_from_eigvals(hermitian_eigvals((out + out.adjoint()) / 2.0));
  }
  const Matrix out_avg = ch.apply_matrix(avg);
  const double avg_entropy =
      entropy_from_eigvals(hermitian_eigvals((out_avg + out_avg.adjoint()) / 2.0));
  return avg_entropy - mean_entropy;
}

/// The k^2-member ensemble {1/k^2, e_z e_z* (x) rho0}; under the extended
/// channel its average output is maximally mixed and every member's output
/// entropy equals S(Phi(rho0)).
Ensemble weyl_capacity_ensemble(const StinespringChannel& phi, const DensityMatrix& rho0);

struct ExtensionReport {
  int m = 0, n = 0;
  int l1 = 0, k1 = 0, n1 = 0;
  int l2 = 0, k2 = 0, n2 = 0;
  double chi_ens_nats = 0.0;
  double avg_output_entropy_nats = 0.0;
  double per_string_entropy_nats = 0.0;
  double smin_estimate_nats = 0.0;
  double identity_residual = 0.0;  // |chi - (ln(k^m k'^n) - smin estimate)|
  double log_output_dim = 0.0;     // ln(k^m k'^n)
  std::string to_json() const;
};

/// Builds the Weyl string ensemble for the (extended) product channel at
/// m, n in {0,1} with m + n in {1,2}, and checks both capacity identities:
/// average-output entropy equals ln(k^m k'^n) and per-string output entropy
/// equals the product channel's minimum output entropy estimate.
ExtensionReport verify_extension_identity(const StinespringChannel& phi,
                                          const StinespringChannel& omega, int m, int n,
                                          int restarts, const RngStream& rng);

}  // namespace moelab
