#include "moelab/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace moelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

Matrix weyl_operator(const WeylLabel& z) {
  if (z.k < 1 || z.x < 0 || z.y < 0 || z.x >= z.k || z.y >= z.k) {
    throw std::invalid_argument("weyl_operator: label out of range");
  }
  Matrix w = Matrix::Zero(z.k, z.k);
  for (int r = 0; r < z.k; ++r) {
    const double phase = 2.0 * kPi * static_cast<double>(z.y) * r / z.k;
    w((r + z.x) % z.k, r) = std::exp(Cplx(0.0, phase));
  }
  return w;
}

Matrix weyl_twirl(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("weyl_twirl: square matrix required");
  }
  const int k = static_cast<int>(a.rows());
  Matrix out = Matrix::Zero(k, k);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) {
      const Matrix w = weyl_operator({x, y, k});
      out += w * a * w.adjoint();
    }
  }
  return out / static_cast<double>(k * k);
}

WeylExtendedChannel::WeylExtendedChannel(StinespringChannel base)
    : base_(std::move(base)), label_dim_(base_.output_dim() * base_.output_dim()) {
  const int k = base_.output_dim();
  weyls_.reserve(label_dim_);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) weyls_.push_back(weyl_operator({x, y, k}));
  }
}

DensityMatrix WeylExtendedChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != input_dim()) {
    throw std::invalid_argument("WeylExtendedChannel::apply: dimension mismatch");
  }
  Matrix out = apply_matrix(rho.matrix());
  return DensityMatrix((out + out.adjoint()) / 2.0);
}

Matrix WeylExtendedChannel::apply_matrix(const Matrix& m) const {
  if (m.rows() != input_dim() || m.cols() != input_dim()) {
    throw std::invalid_argument("WeylExtendedChannel::apply_matrix: dimension mismatch");
  }
  const int l = base_.input_dim();
  const int k = base_.output_dim();
  Matrix out = Matrix::Zero(k, k);
  for (int z = 0; z < label_dim_; ++z) {
    const Matrix block = m.block(static_cast<Eigen::Index>(z) * l,
                                 static_cast<Eigen::Index>(z) * l, l, l);
    out += weyls_[z] * base_.apply_matrix(block) * weyls_[z].adjoint();
  }
  return out;
}

Matrix WeylExtendedChannel::apply_pure(const Vector& x) const {
  if (x.size() != input_dim()) {
    throw std::invalid_argument("WeylExtendedChannel::apply_pure: dimension mismatch");
  }
  const int l = base_.input_dim();
  const int k = base_.output_dim();
  Matrix out = Matrix::Zero(k, k);
  for (int z = 0; z < label_dim_; ++z) {
    const Vector block = x.segment(static_cast<Eigen::Index>(z) * l, l);
    if (block.squaredNorm() < 1e-30) continue;
    out += weyls_[z] * base_.apply_pure(block) * weyls_[z].adjoint();
  }
  return out;
}

Matrix WeylExtendedChannel::adjoint_apply(const Matrix& h) const {
  if (h.rows() != output_dim() || h.cols() != output_dim()) {
    throw std::invalid_argument("WeylExtendedChannel::adjoint_apply: dimension mismatch");
  }
  const int l = base_.input_dim();
  Matrix out = Matrix::Zero(input_dim(), input_dim());
  for (int z = 0; z < label_dim_; ++z) {
    const Matrix rotated = weyls_[z].adjoint() * h * weyls_[z];
    out.block(static_cast<Eigen::Index>(z) * l, static_cast<Eigen::Index>(z) * l, l, l) =
        base_.adjoint_apply(rotated);
  }
  return out;
}

WeylExtendedChannel weyl_extend(const StinespringChannel& phi) {
  return WeylExtendedChannel(phi);
}

Ensemble::Ensemble(std::vector<double> probs, std::vector<DensityMatrix> sts)
    : probabilities(std::move(probs)), states(std::move(sts)) {
  if (probabilities.empty() || probabilities.size() != states.size()) {
    throw std::invalid_argument("Ensemble: probabilities and states must match");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("Ensemble: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("Ensemble: probabilities sum to " + std::to_string(total));
  }
  const int d = states.front().dim();
  for (const auto& s : states) {
    if (s.dim() != d) throw std::invalid_argument("Ensemble: state dimension mismatch");
  }
}

Ensemble weyl_capacity_ensemble(const StinespringChannel& phi, const DensityMatrix& rho0) {
  if (rho0.dim() != phi.input_dim()) {
    throw std::invalid_argument("weyl_capacity_ensemble: rho0 has wrong dimension");
  }
  const int k = phi.output_dim();
  const int l = phi.input_dim();
  const int labels = k * k;
  std::vector<double> probs(labels, 1.0 / labels);
  std::vector<DensityMatrix> states;
  states.reserve(labels);
  for (int z = 0; z < labels; ++z) {
    Matrix label = Matrix::Zero(labels, labels);
    label(z, z) = Cplx(1.0, 0.0);
    states.emplace_back(kron(label, rho0.matrix()));
  }
  return Ensemble(std::move(probs), std::move(states));
}

std::string ExtensionReport::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  j["n"] = n;
  j["dims"] = {{"l1", l1}, {"k1", k1}, {"n1", n1}, {"l2", l2}, {"k2", k2}, {"n2", n2}};
  j["chi_ens_nats"] = chi_ens_nats;
  j["avg_output_entropy_nats"] = avg_output_entropy_nats;
  j["per_string_entropy_nats"] = per_string_entropy_nats;
  j["smin_estimate_nats"] = smin_estimate_nats;
  j["identity_residual"] = identity_residual;
  j["log_output_dim"] = log_output_dim;
  return j.dump();
}

ExtensionReport verify_extension_identity(const StinespringChannel& phi,
                                          const StinespringChannel& omega, int m, int n,
                                          int restarts, const RngStream& rng) {
  if (m < 0 || n < 0 || m > 1 || n > 1 || m + n < 1) {
    throw std::invalid_argument("verify_extension_identity: m, n in {0,1}, m + n >= 1");
  }
  ExtensionReport rep;
  rep.m = m;
  rep.n = n;
  rep.l1 = phi.input_dim();
  rep.k1 = phi.output_dim();
  rep.n1 = phi.env_dim();
  rep.l2 = omega.input_dim();
  rep.k2 = omega.output_dim();
  rep.n2 = omega.env_dim();

  const bool pair = (m == 1 && n == 1);
  const StinespringChannel single = (m == 1) ? phi : omega;
  const int out_dim = pair ? rep.k1 * rep.k2 : single.output_dim();
  if (pair && rep.l1 * rep.l2 * rep.k1 * rep.k1 * rep.k2 * rep.k2 > 64) {
    throw std::invalid_argument("verify_extension_identity: product dimensions too large");
  }
  rep.log_output_dim = std::log(static_cast<double>(out_dim));

  if (!pair) {
    // single extended channel with the k^2-member ensemble at the estimated
    // minimizer of the base channel
    const MoeEstimate est = min_output_entropy_estimate(single, restarts, rng);
    rep.smin_estimate_nats = est.value.nats;
    const WeylExtendedChannel ext = weyl_extend(single);
    const DensityMatrix rho0 = DensityMatrix::pure(est.minimizer);
    const Ensemble ens = weyl_capacity_ensemble(single, rho0);
    rep.chi_ens_nats = ensemble_holevo_value(ext, ens);

    Matrix avg = Matrix::Zero(out_dim, out_dim);
    double per_string = 0.0;
    for (int i = 0; i < ens.size(); ++i) {
      const Matrix out = ext.apply_matrix(ens.states[i].matrix());
      avg += ens.probabilities[i] * out;
      per_string += ens.probabilities[i] *
                    entropy_from_eigvals(hermitian_eigvals((out + out.adjoint()) / 2.0));
    }
    rep.avg_output_entropy_nats =
        entropy_from_eigvals(hermitian_eigvals((avg + avg.adjoint()) / 2.0));
    rep.per_string_entropy_nats = per_string;
  } else {
    // product of the two extensions on the interleaved legs; string (z, z')
    // rotates the product output by W_z (x) W'_z'
    const StinespringChannel product = tensor_channels(phi, omega);
    const MoeEstimate est = min_output_entropy_estimate(product, restarts, rng);
    rep.smin_estimate_nats = est.value.nats;
    const Matrix rho_out = product.apply_pure(est.minimizer.amplitudes());

    const int labels1 = rep.k1 * rep.k1;
    const int labels2 = rep.k2 * rep.k2;
    Matrix avg = Matrix::Zero(out_dim, out_dim);
    double per_string = 0.0;
    const double p = 1.0 / (labels1 * labels2);
    for (int z1 = 0; z1 < labels1; ++z1) {
      const Matrix w1 = weyl_operator({z1 / rep.k1, z1 % rep.k1, rep.k1});
      for (int z2 = 0; z2 < labels2; ++z2) {
        const Matrix w2 = weyl_operator({z2 / rep.k2, z2 % rep.k2, rep.k2});
        const Matrix w = kron(w1, w2);
        const Matrix out = w * rho_out * w.adjoint();
        avg += p * out;
        per_string +=
            p * entropy_from_eigvals(hermitian_eigvals((out + out.adjoint()) / 2.0));
      }
    }
    rep.avg_output_entropy_nats =
        entropy_from_eigvals(hermitian_eigvals((avg + avg.adjoint()) / 2.0));
    rep.per_string_entropy_nats = per_string;
    rep.chi_ens_nats = rep.avg_output_entropy_nats - per_string;
  }
  rep.identity_residual =
      std::abs(rep.chi_ens_nats - (rep.log_output_dim - rep.smin_estimate_nats));
  return rep;
}

}  // namespace moelab
