#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qclust/statevector.hpp"
#include "support.hpp"

using namespace qclust;

namespace {

StateVector basis_state(int n, int index) {
  StateVector st;
  st.n_qubits = n;
  st.amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  st.amps[index] = 1.0;
  return st;
}

}  // namespace

TEST_CASE("init_zero produces |0...0>") {
  const auto one = init_zero(1);
  CHECK(one.amps.size() == 2);
  CHECK(one.amps[0] == std::complex<double>(1, 0));
  CHECK(one.amps[1] == std::complex<double>(0, 0));

  const auto two = init_zero(2);
  CHECK(two.amps.size() == 4);
  CHECK(two.amps[0].real() == 1.0);
  CHECK(two.amps.tail(3).norm() == 0.0);

  CHECK_THROWS_AS(init_zero(13), ConfigError);
  CHECK_THROWS_AS(init_zero(0), ConfigError);
}

TEST_CASE("rotation gates act as expected on basis states") {
  const auto flipped = apply_gate(init_zero(1), Gate::rot_y(0, M_PI));
  CHECK(fidelity(flipped, basis_state(1, 1)) == doctest::Approx(1.0).epsilon(1e-10));

  // |0> is a Z eigenstate: RotZ only adds a global phase.
  const auto phased = apply_gate(init_zero(1), Gate::rot_z(0, 1.234));
  CHECK(fidelity(phased, init_zero(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cnot and toffoli follow their truth tables") {
  auto st = apply_gate(init_zero(2), Gate::rot_y(0, M_PI));  // |10>
  st = apply_gate(st, Gate::cnot(0, 1));
  CHECK(fidelity(st, basis_state(2, 3)) == doctest::Approx(1.0).epsilon(1e-10));

  auto st3 = apply_gate(init_zero(3), Gate::rot_y(0, M_PI));
  st3 = apply_gate(st3, Gate::rot_y(1, M_PI));  // |110>
  st3 = apply_gate(st3, Gate::toffoli(0, 1, 2));
  CHECK(fidelity(st3, basis_state(3, 7)) == doctest::Approx(1.0).epsilon(1e-10));

  // control clear: no action
  auto idle = apply_gate(init_zero(2), Gate::cnot(0, 1));
  CHECK(fidelity(idle, init_zero(2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fidelity basics") {
  CHECK(fidelity(init_zero(1), init_zero(1)) == 1.0);
  CHECK(fidelity(init_zero(1), basis_state(1, 1)) == 0.0);
  const auto plus = apply_gate(init_zero(1), Gate::rot_y(0, M_PI / 2));
  CHECK(fidelity(init_zero(1), plus) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(fidelity(init_zero(1), init_zero(2)), UsageError);
}

TEST_CASE("gate matrices are unitary") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Gate gates[] = {
        Gate::rot_y(0, rng.uniform(-M_PI, M_PI)),
        Gate::rot_z(0, rng.uniform(-M_PI, M_PI)),
        Gate::rot3(0, rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI),
                   rng.uniform(-M_PI, M_PI)),
    };
    for (const auto& g : gates) {
      const Eigen::Matrix2cd u = gate_matrix(g);
      CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
    }
  }
}

TEST_CASE("rot3 equals the Rz Ry Rz composition") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = rng.uniform(-M_PI, M_PI);
    const double phi = rng.uniform(-M_PI, M_PI);
    const double lambda = rng.uniform(-M_PI, M_PI);
    const Eigen::Matrix2cd composed = gate_matrix(Gate::rot_z(0, phi)) *
                                      gate_matrix(Gate::rot_y(0, theta)) *
                                      gate_matrix(Gate::rot_z(0, lambda));
    CHECK((rot3_matrix(theta, phi, lambda) - composed).norm() < 1e-14);
  }
}

TEST_CASE("norm is preserved by arbitrary circuits") {
  SplitMix64 rng(13);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto gates = testing::random_circuit(n, 20, rng);
      const auto st = run_circuit(n, gates);
      CHECK(std::abs(st.norm_sq() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("every gate composed with its inverse is the identity") {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3;
    const auto start = testing::random_state(n, rng);
    const Gate gates[] = {
        Gate::rot_y(1, rng.uniform(-M_PI, M_PI)),
        Gate::rot_z(2, rng.uniform(-M_PI, M_PI)),
        Gate::rot3(0, rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI),
                   rng.uniform(-M_PI, M_PI)),
        Gate::cnot(0, 2),
        Gate::toffoli(2, 1, 0),
    };
    for (const auto& g : gates) {
      const auto roundtrip = apply_gate(apply_gate(start, g), inverse(g));
      CHECK(fidelity(roundtrip, start) > 1.0 - 1e-10);
    }
  }
}

TEST_CASE("fidelity is symmetric bit for bit and phase invariant") {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::random_state(3, rng);
    const auto b = testing::random_state(3, rng);
    CHECK(fidelity(a, b) == fidelity(b, a));

    StateVector c = b;
    c.amps *= std::polar(1.0, rng.uniform(-M_PI, M_PI));
    CHECK(std::abs(fidelity(a, b) - fidelity(a, c)) < 1e-12);
  }
}

TEST_CASE("gate index validation") {
  CHECK_THROWS_AS(apply_gate(init_zero(2), Gate::rot_y(2, 0.1)), ConfigError);
  CHECK_THROWS_AS(apply_gate(init_zero(2), Gate::cnot(0, 0)), ConfigError);
  CHECK_THROWS_AS(apply_gate(init_zero(3), Gate::toffoli(0, 1, 1)), ConfigError);
  CHECK_THROWS_AS(apply_gate(init_zero(2), Gate::cnot(0, 5)), ConfigError);
}

TEST_CASE("scalar template instantiates for float") {
  auto st = init_zero<float>(2);
  st = apply_gate(st, GateT<float>::rot_y(0, float(M_PI)));
  st = apply_gate(st, GateT<float>::cnot(0, 1));
  CHECK(std::abs(st.norm_sq() - 1.0f) < 1e-5f);
  CHECK(std::norm(st.amps[3]) == doctest::Approx(1.0).epsilon(1e-5));
}
