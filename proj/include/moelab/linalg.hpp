#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "moelab/rng.hpp"

namespace moelab {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Unit vector in C^d.
class Ket {
 public:
  explicit Ket(Vector amplitudes);
  static Ket normalized(const Vector& v);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }

 private:
  Vector amps_;
};

/// Hermitian, positive semidefinite, trace-one matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);
  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix pure(const Ket& x);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// --- sampling ---

/// Haar-distributed d x d unitary (QR of a complex Ginibre matrix with the
/// R-diagonal phase correction).
Matrix haar_unitary(int d, RngStream& rng);

/// Uniform point on the unit sphere of C^d.
Ket random_unit_vector(int d, RngStream& rng);

/// Full-rank random density matrix (normalized Wishart), for property tests.
DensityMatrix random_density_matrix(int d, RngStream& rng);

// --- reshaping and partial traces (row-major: x[i*n + j] = X(i, j)) ---

Matrix ket_to_matrix(const Ket& x, int k, int n);
Matrix reshape_row_major(const Vector& x, int k, int n);
Ket matrix_to_ket(const Matrix& X);

/// Trace over the environment factor C^n: returns XX*.
DensityMatrix partial_trace_env(const Ket& x, int k, int n);

/// Trace over the output factor C^k; shares nonzero spectrum with XX*.
DensityMatrix partial_trace_out(const Ket& x, int k, int n);

// --- spectra and norms ---

/// Real eigenvalues of a Hermitian matrix, descending. Throws if the input
/// deviates from Hermitian by more than 1e-10.
std::vector<double> hermitian_eigvals(const Matrix& a);

double hs_norm(const Matrix& a);  // Frobenius
double op_norm(const Matrix& a);  // largest singular value

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace moelab
