#include "moelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace moelab {

namespace {

constexpr double kUnitNormTol = 1e-12;
constexpr double kHermTol = 1e-12;
constexpr double kEigTol = -1e-12;
constexpr double kTraceTol = 1e-12;

void require_positive_dim(int d, const char* what) {
  if (d < 1) {
    throw std::invalid_argument(std::string(what) + ": dimension must be >= 1, got " +
                                std::to_string(d));
  }
}

}  // namespace

Ket::Ket(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw std::invalid_argument("Ket: empty amplitude vector");
  const double nrm = amps_.norm();
  if (std::abs(nrm - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("Ket: norm deviates from 1 by " +
                                std::to_string(std::abs(nrm - 1.0)));
  }
}

Ket Ket::normalized(const Vector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("Ket::normalized: zero vector");
  return Ket(v / nrm);
}

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  const double herm_dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kHermTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian, deviation " +
                                std::to_string(herm_dev));
  }
  const double trace_dev = std::abs(m_.trace() - Cplx(1.0, 0.0));
  if (trace_dev > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(trace_dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigTol) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  require_positive_dim(d, "maximally_mixed");
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::pure(const Ket& x) {
  return DensityMatrix(x.amplitudes() * x.amplitudes().adjoint());
}

Matrix haar_unitary(int d, RngStream& rng) {
  require_positive_dim(d, "haar_unitary");
  Matrix a(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) a(i, j) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Vector r_diag = qr.matrixQR().diagonal();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r_diag(j));
    q.col(j) *= (mag > 0.0) ? r_diag(j) / mag : Cplx(1.0, 0.0);
  }
  return q;
}

Ket random_unit_vector(int d, RngStream& rng) {
  require_positive_dim(d, "random_unit_vector");
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
  return Ket::normalized(v);
}

DensityMatrix random_density_matrix(int d, RngStream& rng) {
  require_positive_dim(d, "random_density_matrix");
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_gaussian();
  }
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  // symmetrize away the last bits of rounding
  return DensityMatrix((w + w.adjoint()) / 2.0);
}

Matrix reshape_row_major(const Vector& x, int k, int n) {
  if (x.size() != static_cast<Eigen::Index>(k) * n) {
    throw std::invalid_argument("reshape_row_major: vector has dim " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(k * n));
  }
  Matrix out(k, n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = x(static_cast<Eigen::Index>(i) * n + j);
  }
  return out;
}

Matrix ket_to_matrix(const Ket& x, int k, int n) {
  return reshape_row_major(x.amplitudes(), k, n);
}

Ket matrix_to_ket(const Matrix& X) {
  const int k = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  Vector v(static_cast<Eigen::Index>(k) * n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) v(static_cast<Eigen::Index>(i) * n + j) = X(i, j);
  }
  return Ket(v);
}

DensityMatrix partial_trace_env(const Ket& x, int k, int n) {
  const Matrix X = ket_to_matrix(x, k, n);
  return DensityMatrix(X * X.adjoint());
}

DensityMatrix partial_trace_out(const Ket& x, int k, int n) {
  const Matrix X = ket_to_matrix(x, k, n);
  return DensityMatrix((X.adjoint() * X).transpose());
}

std::vector<double> hermitian_eigvals(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigvals: not square");
  const double herm_dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-10) {
    throw std::invalid_argument("hermitian_eigvals: not Hermitian, deviation " +
                                std::to_string(herm_dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(vals.begin(), vals.end());
  return vals;
}

double hs_norm(const Matrix& a) { return a.norm(); }

double op_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace moelab
