#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "moelab/channels.hpp"
#include "moelab/entropy.hpp"

using namespace moelab;

TEST_CASE("random_subspace_channel rejects l > kn") {
  RngStream rng(1);
  CHECK_THROWS_AS(random_subspace_channel(5, 2, 2, rng), std::invalid_argument);
}

TEST_CASE("square isometry is a full unitary") {
  RngStream rng(2);
  const auto phi = random_subspace_channel(4, 2, 2, rng);
  const Matrix& v = phi.isometry();
  CHECK((v * v.adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("l = 1 channel has a single output state") {
  RngStream rng(3);
  const auto phi = random_subspace_channel(1, 2, 3, rng);
  Vector e1 = Vector::Zero(1);
  e1(0) = 1.0;
  const Matrix out1 = phi.apply_pure(e1);
  const Matrix out2 = phi.apply_pure(e1 * std::exp(Cplx(0.0, 1.2)));
  CHECK((out1 - out2).cwiseAbs().maxCoeff() < 1e-12);
  const DensityMatrix direct = partial_trace_env(Ket(phi.isometry().col(0)), 2, 3);
  CHECK((out1 - direct.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("outputs of random channels are valid states") {
  RngStream rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const auto phi = random_subspace_channel(2, 2, 2, rng);
    const Ket x = random_unit_vector(2, rng);
    const DensityMatrix out = phi.apply_to_ket(x);  // constructor validates
    CHECK(out.dim() == 2);
  }
}

TEST_CASE("identity isometry reproduces the Bell marginal") {
  const StinespringChannel phi(4, 2, 2, Matrix::Identity(4, 4));
  const DensityMatrix out = phi.apply(DensityMatrix::pure(bell_state(2)));
  CHECK((out.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trace is preserved on the maximally mixed input") {
  RngStream rng(5);
  const auto phi = random_subspace_channel(3, 2, 3, rng);
  const DensityMatrix out = phi.apply(DensityMatrix::maximally_mixed(3));
  CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("apply on a pure state agrees with the reshaped partial trace") {
  RngStream rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const auto phi = random_subspace_channel(3, 2, 4, rng);
    const Ket x = random_unit_vector(3, rng);
    const DensityMatrix via_apply = phi.apply(DensityMatrix::pure(x));
    const DensityMatrix via_reshape =
        partial_trace_env(Ket::normalized(phi.isometry() * x.amplitudes()), 2, 4);
    CHECK((via_apply.matrix() - via_reshape.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    const DensityMatrix via_ket = phi.apply_to_ket(x);
    CHECK((via_apply.matrix() - via_ket.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("apply_to_ket on a basis column") {
  RngStream rng(7);
  const auto phi = random_subspace_channel(2, 2, 2, rng);
  Vector e1 = Vector::Zero(2);
  e1(0) = 1.0;
  const DensityMatrix out = phi.apply_to_ket(Ket(e1));
  const DensityMatrix expected = partial_trace_env(Ket(phi.isometry().col(0)), 2, 2);
  CHECK((out.matrix() - expected.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conjugate of a real channel is itself, and conjugation is an involution") {
  const StinespringChannel id = identity_channel(3);
  const auto conj_id = conjugate_channel(id);
  CHECK((conj_id.isometry() - id.isometry()).cwiseAbs().maxCoeff() == 0.0);

  RngStream rng(8);
  const auto phi = random_subspace_channel(2, 2, 2, rng);
  const auto twice = conjugate_channel(conjugate_channel(phi));
  CHECK((twice.isometry() - phi.isometry()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conjugate channel outputs are conjugated on real inputs") {
  RngStream rng(9);
  const auto phi = random_subspace_channel(2, 2, 2, rng);
  const auto bar = conjugate_channel(phi);
  Matrix rho(2, 2);
  rho << 0.7, 0.1, 0.1, 0.3;  // real symmetric state
  const Matrix a = phi.apply_matrix(rho);
  const Matrix b = bar.apply_matrix(rho);
  CHECK((b - a.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conjugate channel has the same minimum output entropy") {
  RngStream rng(10);
  const auto phi = random_subspace_channel(2, 2, 2, rng);
  const auto bar = conjugate_channel(phi);
  const RngStream est_rng(77);
  const auto ea = min_output_entropy_estimate(phi, 8, est_rng);
  const auto eb = min_output_entropy_estimate(bar, 8, est_rng);
  CHECK(std::abs(ea.value.nats - eb.value.nats) < 1e-6);
}

TEST_CASE("tensor channel factorizes on product inputs") {
  RngStream rng(11);
  const auto phi = random_subspace_channel(2, 2, 2, rng);
  const auto omega = random_subspace_channel(2, 2, 2, rng);
  const auto prod = tensor_channels(phi, omega);
  const DensityMatrix rho = random_density_matrix(2, rng);
  const DensityMatrix sigma = random_density_matrix(2, rng);
  const Matrix joint = prod.apply_matrix(kron(rho.matrix(), sigma.matrix()));
  const Matrix split = kron(phi.apply_matrix(rho.matrix()), omega.apply_matrix(sigma.matrix()));
  CHECK((joint - split).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(joint.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("product channel maps the Bell input to the Bell state at l = kn") {
  RngStream rng(12);
  const auto phi = random_subspace_channel(4, 2, 2, rng);
  const auto prod = tensor_channels(phi, conjugate_channel(phi));
  const DensityMatrix out = prod.apply_to_ket(bell_state(4));
  const Vector b2 = bell_state(2).amplitudes();
  CHECK((out.matrix() - b2 * b2.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("bell_state basics and rotation invariance") {
  const Ket b1 = bell_state(1);
  CHECK(std::abs(b1.amplitudes()(0) - Cplx(1.0, 0.0)) < 1e-15);
  RngStream rng(13);
  for (int d : {2, 3, 4}) {
    const Ket b = bell_state(d);
    CHECK(std::abs(b.amplitudes().norm() - 1.0) < 1e-15);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix u = haar_unitary(d, rng);
      const Matrix uu = kron(u, u.conjugate());
      CHECK((uu * b.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("random unitary channel: single unitary preserves the spectrum") {
  RngStream rng(14);
  const auto phi = random_unitary_channel(1, 3, rng);
  const DensityMatrix rho = random_density_matrix(3, rng);
  const auto before = hermitian_eigvals(rho.matrix());
  const auto after = hermitian_eigvals(phi.apply(rho).matrix());
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(std::abs(before[i] - after[i]) < 1e-10);
  }
}

TEST_CASE("random unitary channel is unital") {
  RngStream rng(15);
  const auto phi = random_unitary_channel(3, 2, rng);
  const DensityMatrix out = phi.apply(DensityMatrix::maximally_mixed(2));
  CHECK((out.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random unitary channel outputs are states") {
  RngStream rng(16);
  const auto phi = random_unitary_channel(2, 2, rng);
  const Ket x = random_unit_vector(2, rng);
  const auto eigs = hermitian_eigvals(phi.apply_pure(x.amplitudes()));
  double total = 0.0;
  for (double v : eigs) {
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
    total += v;
  }
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("Choi matrices of random channels are PSD") {
  RngStream rng(17);
  const int dims[][3] = {{2, 2, 2}, {3, 2, 3}, {4, 3, 3}, {2, 3, 2}, {4, 2, 2}};
  int count = 0;
  while (count < 50) {
    const auto& d = dims[count % 5];
    const auto phi = random_subspace_channel(d[0], d[1], d[2], rng);
    const auto eigs = hermitian_eigvals(choi_matrix(phi));
    CHECK(eigs.back() >= -1e-9);
    ++count;
  }
}

TEST_CASE("channel serialization round-trips") {
  RngStream rng(18);
  const auto phi = random_subspace_channel(3, 2, 3, rng);
  const std::string text = channel_to_json(phi);
  const auto back = channel_from_json(text);
  CHECK(back.input_dim() == 3);
  CHECK(back.output_dim() == 2);
  CHECK(back.env_dim() == 3);
  CHECK((back.isometry() - phi.isometry()).cwiseAbs().maxCoeff() == 0.0);

  const std::string path = "/tmp/moelab_test_channel.json";
  save_channel(phi, path);
  const auto loaded = load_channel(path);
  CHECK((loaded.isometry() - phi.isometry()).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("adjoint_apply satisfies the trace pairing") {
  // <H, Phi(M)> = <adjoint(H), M> for random H and M
  RngStream rng(20);
  const auto phi = random_subspace_channel(3, 2, 4, rng);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix h = random_density_matrix(2, rng).matrix();
    const Matrix m = random_density_matrix(3, rng).matrix();
    const Cplx lhs = (h.adjoint() * phi.apply_matrix(m)).trace();
    const Cplx rhs = (phi.adjoint_apply(h).adjoint() * m).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  const auto ru = random_unitary_channel(3, 3, rng);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix h = random_density_matrix(3, rng).matrix();
    const Matrix m = random_density_matrix(3, rng).matrix();
    const Cplx lhs = (h.adjoint() * ru.apply_matrix(m)).trace();
    const Cplx rhs = (ru.adjoint_apply(h).adjoint() * m).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("constant output channel sends everything to the mixed state") {
  const auto phi = constant_output_channel(2, 2);
  RngStream rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const Ket x = random_unit_vector(2, rng);
    const Matrix out = phi.apply_pure(x.amplitudes());
    CHECK((out - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
  }
}
