#include "moelab/channels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace moelab {

namespace {

constexpr double kIsometryTol = 1e-10;

Matrix partial_trace_env_matrix(const Matrix& m, int k, int n) {
  Matrix out = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int i2 = 0; i2 < k; ++i2) {
      Cplx s(0.0, 0.0);
      for (int j = 0; j < n; ++j) {
        s += m(static_cast<Eigen::Index>(i) * n + j,
               static_cast<Eigen::Index>(i2) * n + j);
      }
      out(i, i2) = s;
    }
  }
  return out;
}

}  // namespace

StinespringChannel::StinespringChannel(int l, int k, int n, Matrix isometry)
    : l_(l), k_(k), n_(n), v_(std::move(isometry)) {
  if (l < 1 || k < 1 || n < 1) {
    throw std::invalid_argument("StinespringChannel: dimensions must be >= 1");
  }
  if (v_.rows() != static_cast<Eigen::Index>(k) * n || v_.cols() != l) {
    throw std::invalid_argument("StinespringChannel: isometry must be (k*n) x l");
  }
  const double dev = (v_.adjoint() * v_ - Matrix::Identity(l, l)).cwiseAbs().maxCoeff();
  if (dev > kIsometryTol) {
    throw std::invalid_argument("StinespringChannel: V*V deviates from identity by " +
                                std::to_string(dev));
  }
}

DensityMatrix StinespringChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != l_) {
    throw std::invalid_argument("apply: state dim " + std::to_string(rho.dim()) +
                                " != input dim " + std::to_string(l_));
  }
  Matrix out = apply_matrix(rho.matrix());
  return DensityMatrix((out + out.adjoint()) / 2.0);
}

Matrix StinespringChannel::apply_matrix(const Matrix& m) const {
  if (m.rows() != l_ || m.cols() != l_) {
    throw std::invalid_argument("apply_matrix: expected " + std::to_string(l_) +
                                " x " + std::to_string(l_) + " input");
  }
  const Matrix big = v_ * m * v_.adjoint();
  return partial_trace_env_matrix(big, k_, n_);
}

Matrix StinespringChannel::apply_pure(const Vector& x) const {
  if (x.size() != l_) {
    throw std::invalid_argument("apply_pure: vector dim " + std::to_string(x.size()) +
                                " != input dim " + std::to_string(l_));
  }
  const Vector y = v_ * x;
  const Matrix Y = reshape_row_major(y, k_, n_);
  return Y * Y.adjoint();
}

DensityMatrix StinespringChannel::apply_to_ket(const Ket& x) const {
  Matrix out = apply_pure(x.amplitudes());
  return DensityMatrix((out + out.adjoint()) / 2.0);
}

Matrix StinespringChannel::adjoint_apply(const Matrix& h) const {
  if (h.rows() != k_ || h.cols() != k_) {
    throw std::invalid_argument("adjoint_apply: expected k x k input");
  }
  Matrix out = Matrix::Zero(l_, l_);
  for (int i = 0; i < k_; ++i) {
    const auto vi = v_.middleRows(static_cast<Eigen::Index>(i) * n_, n_);
    for (int i2 = 0; i2 < k_; ++i2) {
      if (h(i, i2) == Cplx(0.0, 0.0)) continue;
      const auto vi2 = v_.middleRows(static_cast<Eigen::Index>(i2) * n_, n_);
      out += h(i, i2) * (vi.adjoint() * vi2);
    }
  }
  return out;
}

RandomUnitaryChannel::RandomUnitaryChannel(int n, std::vector<Matrix> unitaries)
    : n_(n), us_(std::move(unitaries)) {
  if (n < 1) throw std::invalid_argument("RandomUnitaryChannel: n must be >= 1");
  if (us_.empty()) throw std::invalid_argument("RandomUnitaryChannel: empty mixture");
  for (const auto& u : us_) {
    if (u.rows() != n || u.cols() != n) {
      throw std::invalid_argument("RandomUnitaryChannel: unitary has wrong shape");
    }
    const double dev = (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
      throw std::invalid_argument("RandomUnitaryChannel: non-unitary member, deviation " +
                                  std::to_string(dev));
    }
  }
}

DensityMatrix RandomUnitaryChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != n_) throw std::invalid_argument("apply: dimension mismatch");
  Matrix out = apply_matrix(rho.matrix());
  return DensityMatrix((out + out.adjoint()) / 2.0);
}

Matrix RandomUnitaryChannel::apply_matrix(const Matrix& m) const {
  if (m.rows() != n_ || m.cols() != n_) {
    throw std::invalid_argument("apply_matrix: dimension mismatch");
  }
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& u : us_) out += u * m * u.adjoint();
  return out / static_cast<double>(us_.size());
}

Matrix RandomUnitaryChannel::apply_pure(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("apply_pure: dimension mismatch");
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& u : us_) {
    const Vector y = u * x;
    out += y * y.adjoint();
  }
  return out / static_cast<double>(us_.size());
}

Matrix RandomUnitaryChannel::adjoint_apply(const Matrix& h) const {
  if (h.rows() != n_ || h.cols() != n_) {
    throw std::invalid_argument("adjoint_apply: dimension mismatch");
  }
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& u : us_) out += u.adjoint() * h * u;
  return out / static_cast<double>(us_.size());
}

StinespringChannel random_subspace_channel(int l, int k, int n, RngStream& rng) {
  if (l < 1 || k < 1 || n < 1) {
    throw std::invalid_argument("random_subspace_channel: dimensions must be >= 1");
  }
  if (static_cast<long long>(l) > static_cast<long long>(k) * n) {
    throw std::invalid_argument("random_subspace_channel: l exceeds k*n");
  }
  const Matrix u = haar_unitary(k * n, rng);
  return StinespringChannel(l, k, n, u.leftCols(l));
}

StinespringChannel identity_channel(int k) {
  return StinespringChannel(k, k, 1, Matrix::Identity(k, k));
}

StinespringChannel constant_output_channel(int l, int k) {
  // columns v_a = (1/sqrt(k)) sum_i e_i (x) f_{a*k+i}; then Tr_env[V xx* V*]
  // is I_k/k for every unit x
  const int n = l * k;
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(k) * n, l);
  const double amp = 1.0 / std::sqrt(static_cast<double>(k));
  for (int a = 0; a < l; ++a) {
    for (int i = 0; i < k; ++i) {
      const Eigen::Index j = static_cast<Eigen::Index>(a) * k + i;
      v(static_cast<Eigen::Index>(i) * n + j, a) = amp;
    }
  }
  return StinespringChannel(l, k, n, v);
}

StinespringChannel conjugate_channel(const StinespringChannel& phi) {
  return StinespringChannel(phi.input_dim(), phi.output_dim(), phi.env_dim(),
                            phi.isometry().conjugate());
}

StinespringChannel tensor_channels(const StinespringChannel& phi,
                                   const StinespringChannel& omega) {
  const int l1 = phi.input_dim(), k1 = phi.output_dim(), n1 = phi.env_dim();
  const int l2 = omega.input_dim(), k2 = omega.output_dim(), n2 = omega.env_dim();
  const int l = l1 * l2, k = k1 * k2, n = n1 * n2;
  const Matrix& v1 = phi.isometry();
  const Matrix& v2 = omega.isometry();
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(k) * n, l);
  for (int i1 = 0; i1 < k1; ++i1) {
    for (int j1 = 0; j1 < n1; ++j1) {
      const Eigen::Index r1 = static_cast<Eigen::Index>(i1) * n1 + j1;
      for (int i2 = 0; i2 < k2; ++i2) {
        for (int j2 = 0; j2 < n2; ++j2) {
          const Eigen::Index r2 = static_cast<Eigen::Index>(i2) * n2 + j2;
          const Eigen::Index row =
              (static_cast<Eigen::Index>(i1) * k2 + i2) * n +
              (static_cast<Eigen::Index>(j1) * n2 + j2);
          for (int a1 = 0; a1 < l1; ++a1) {
            for (int a2 = 0; a2 < l2; ++a2) {
              w(row, static_cast<Eigen::Index>(a1) * l2 + a2) = v1(r1, a1) * v2(r2, a2);
            }
          }
        }
      }
    }
  }
  return StinespringChannel(l, k, n, std::move(w));
}

Ket bell_state(int d) {
  if (d < 1) throw std::invalid_argument("bell_state: d must be >= 1");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i) * d + i) = amp;
  return Ket(v);
}

Matrix choi_matrix(const StinespringChannel& phi) {
  const int l = phi.input_dim();
  const int k = phi.output_dim();
  Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(k) * l,
                             static_cast<Eigen::Index>(k) * l);
  Matrix unit = Matrix::Zero(l, l);
  for (int a = 0; a < l; ++a) {
    for (int b = 0; b < l; ++b) {
      unit(a, b) = Cplx(1.0, 0.0);
      const Matrix block = phi.apply_matrix(unit) / static_cast<double>(l);
      unit(a, b) = Cplx(0.0, 0.0);
      for (int i = 0; i < k; ++i) {
        for (int i2 = 0; i2 < k; ++i2) {
          choi(static_cast<Eigen::Index>(i) * l + a,
               static_cast<Eigen::Index>(i2) * l + b) = block(i, i2);
        }
      }
    }
  }
  return choi;
}

RandomUnitaryChannel random_unitary_channel(int k, int n, RngStream& rng) {
  if (k < 1 || n < 1) {
    throw std::invalid_argument("random_unitary_channel: dimensions must be >= 1");
  }
  std::vector<Matrix> us;
  us.reserve(k);
  for (int i = 0; i < k; ++i) us.push_back(haar_unitary(n, rng));
  return RandomUnitaryChannel(n, std::move(us));
}

std::string channel_to_json(const StinespringChannel& phi) {
  nlohmann::json j;
  j["type"] = "stinespring";
  j["l"] = phi.input_dim();
  j["k"] = phi.output_dim();
  j["n"] = phi.env_dim();
  nlohmann::json entries = nlohmann::json::array();
  const Matrix& v = phi.isometry();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      entries.push_back({v(r, c).real(), v(r, c).imag()});
    }
  }
  j["V"] = std::move(entries);
  return j.dump();
}

StinespringChannel channel_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int l = j.at("l").get<int>();
  const int k = j.at("k").get<int>();
  const int n = j.at("n").get<int>();
  const auto& entries = j.at("V");
  const Eigen::Index rows = static_cast<Eigen::Index>(k) * n;
  if (entries.size() != static_cast<std::size_t>(rows) * l) {
    throw std::invalid_argument("channel_from_json: entry count mismatch");
  }
  Matrix v(rows, l);
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < l; ++c, ++idx) {
      v(r, c) = Cplx(entries[idx][0].get<double>(), entries[idx][1].get<double>());
    }
  }
  return StinespringChannel(l, k, n, std::move(v));
}

void save_channel(const StinespringChannel& phi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_channel: cannot open " + path);
  out << channel_to_json(phi) << "\n";
}

StinespringChannel load_channel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_channel: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return channel_from_json(ss.str());
}

}  // namespace moelab
