#pragma once

#include <string>
#include <vector>

#include "moelab/linalg.hpp"
#include "moelab/rng.hpp"

namespace moelab {

/// Channel in isometry form: V maps C^l into C^k (x) C^n, the channel is
/// rho -> Tr_env[V rho V*]. Tensor legs are ordered (output, environment).
class StinespringChannel {
 public:
  StinespringChannel(int l, int k, int n, Matrix isometry);

  int input_dim() const { return l_; }
  int output_dim() const { return k_; }
  int env_dim() const { return n_; }
  const Matrix& isometry() const { return v_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  DensityMatrix apply_to_ket(const Ket& x) const;

  /// Linear extension of apply to arbitrary square matrices; no state checks.
  Matrix apply_matrix(const Matrix& m) const;

  /// Pushforward of xx* for a (not necessarily unit) vector x. Hot path: the
  /// kn x kn intermediate is never formed.
  Matrix apply_pure(const Vector& x) const;

  /// Adjoint map H -> V* (H (x) I_n) V.
  Matrix adjoint_apply(const Matrix& h) const;

 private:
  int l_, k_, n_;
  Matrix v_;
};

/// Uniform mixture of unitary conjugations rho -> (1/k) sum U_i rho U_i*.
class RandomUnitaryChannel {
 public:
  RandomUnitaryChannel(int n, std::vector<Matrix> unitaries);

  int mixture_size() const { return static_cast<int>(us_.size()); }
  int input_dim() const { return n_; }
  int output_dim() const { return n_; }
  const std::vector<Matrix>& unitaries() const { return us_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  Matrix apply_matrix(const Matrix& m) const;
  Matrix apply_pure(const Vector& x) const;
  Matrix adjoint_apply(const Matrix& h) const;

 private:
  int n_;
  std::vector<Matrix> us_;
};

/// Channel whose isometry image is a Haar-random l-dimensional subspace of
/// C^k (x) C^n (the first l columns of a Haar unitary on C^{kn}).
StinespringChannel random_subspace_channel(int l, int k, int n, RngStream& rng);

/// l = k, n = 1: rho -> rho.
StinespringChannel identity_channel(int k);

/// Sends every input state to I_k/k; environment dimension n = l*k.
StinespringChannel constant_output_channel(int l, int k);

/// Entrywise complex conjugate of the stored isometry.
StinespringChannel conjugate_channel(const StinespringChannel& phi);

/// Product channel with legs reordered so the output space is C^{k1 k2} and
/// the environment is C^{n1 n2}.
StinespringChannel tensor_channels(const StinespringChannel& phi,
                                   const StinespringChannel& omega);

/// Canonical maximally entangled vector (1/sqrt(d)) sum e_i (x) e_i.
Ket bell_state(int d);

/// (apply (x) identity) on the maximally entangled input; PSD iff the map is
/// completely positive.
Matrix choi_matrix(const StinespringChannel& phi);

RandomUnitaryChannel random_unitary_channel(int k, int n, RngStream& rng);

// --- serialization (JSON record of dims and row-major [re, im] entries) ---

std::string channel_to_json(const StinespringChannel& phi);
StinespringChannel channel_from_json(const std::string& text);
void save_channel(const StinespringChannel& phi, const std::string& path);
StinespringChannel load_channel(const std::string& path);

}  // namespace moelab
