#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qclust/errors.hpp"

// Dense statevector simulation of few-qubit circuits.
//
// Amplitude index convention: qubit 0 is the MOST significant bit of the
// basis index, i.e. |q0 q1 ... q_{n-1}> lives at index (q0 q1 ... q_{n-1})_2.
// All operations are pure: they take values and return fresh values.

namespace qclust {

inline constexpr int kMaxQubits = 12;

template <typename Scalar = double>
struct StateVectorT {
  using Complex = std::complex<Scalar>;
  using Amps = Eigen::Vector<Complex, Eigen::Dynamic>;

  int n_qubits = 0;
  Amps amps;

  Eigen::Index dim() const { return amps.size(); }
  Scalar norm_sq() const { return amps.squaredNorm(); }
};

using StateVector = StateVectorT<double>;

enum class GateKind { RotY, RotZ, Rot3, Cnot, Toffoli };

// A circuit element. Rotations act on qubit q0; Cnot has control q0 and
// target q1; Toffoli has controls q0, q1 and target q2.
template <typename Scalar = double>
struct GateT {
  GateKind kind = GateKind::RotY;
  int q0 = 0;
  int q1 = 0;
  int q2 = 0;
  Scalar theta = 0;   // RotY / Rot3 polar angle, RotZ angle
  Scalar phi = 0;     // Rot3 leading z-rotation
  Scalar lambda = 0;  // Rot3 trailing z-rotation

  static GateT rot_y(int q, Scalar theta) { return {GateKind::RotY, q, 0, 0, theta, 0, 0}; }
  static GateT rot_z(int q, Scalar theta) { return {GateKind::RotZ, q, 0, 0, theta, 0, 0}; }
  static GateT rot3(int q, Scalar theta, Scalar phi, Scalar lambda) {
    return {GateKind::Rot3, q, 0, 0, theta, phi, lambda};
  }
  static GateT cnot(int control, int target) {
    return {GateKind::Cnot, control, target, 0, 0, 0, 0};
  }
  static GateT toffoli(int c1, int c2, int target) {
    return {GateKind::Toffoli, c1, c2, target, 0, 0, 0};
  }

  bool is_single_qubit() const {
    return kind == GateKind::RotY || kind == GateKind::RotZ || kind == GateKind::Rot3;
  }
};

using Gate = GateT<double>;
using Circuit = std::vector<Gate>;

// Rz(phi) Ry(theta) Rz(lambda); reaches any SU(2) element.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> rot3_matrix(Scalar theta, Scalar phi, Scalar lambda) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta / 2), s = std::sin(theta / 2);
  const C ep = std::polar(Scalar(1), phi / 2);
  const C el = std::polar(Scalar(1), lambda / 2);
  Eigen::Matrix<C, 2, 2> u;
  u << std::conj(ep) * std::conj(el) * c, -std::conj(ep) * el * s,
       ep * std::conj(el) * s, ep * el * c;
  return u;
}

// 2x2 matrix of a single-qubit gate.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> gate_matrix(const GateT<Scalar>& g) {
  switch (g.kind) {
    case GateKind::RotY:
      return rot3_matrix<Scalar>(g.theta, 0, 0);
    case GateKind::RotZ:
      return rot3_matrix<Scalar>(0, g.theta, 0);
    case GateKind::Rot3:
      return rot3_matrix<Scalar>(g.theta, g.phi, g.lambda);
    default:
      throw UsageError("gate_matrix: not a single-qubit gate");
  }
}

// Inverse element: negated angles for rotations (phi/lambda swap roles),
// Cnot and Toffoli are self-inverse.
template <typename Scalar>
GateT<Scalar> inverse(const GateT<Scalar>& g) {
  GateT<Scalar> inv = g;
  switch (g.kind) {
    case GateKind::RotY:
    case GateKind::RotZ:
      inv.theta = -g.theta;
      break;
    case GateKind::Rot3:
      inv.theta = -g.theta;
      inv.phi = -g.lambda;
      inv.lambda = -g.phi;
      break;
    case GateKind::Cnot:
    case GateKind::Toffoli:
      break;
  }
  return inv;
}

// |0...0> on n_qubits qubits; 1 <= n_qubits <= 12.
template <typename Scalar = double>
StateVectorT<Scalar> init_zero(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("init_zero: n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                      "], got " + std::to_string(n_qubits));
  }
  StateVectorT<Scalar> st;
  st.n_qubits = n_qubits;
  st.amps = StateVectorT<Scalar>::Amps::Zero(Eigen::Index(1) << n_qubits);
  st.amps[0] = std::complex<Scalar>(1, 0);
  return st;
}

namespace detail {

template <typename Scalar>
void check_qubit_index(const StateVectorT<Scalar>& st, int q, const char* who) {
  if (q < 0 || q >= st.n_qubits) {
    throw ConfigError(std::string(who) + ": qubit index " + std::to_string(q) +
                      " out of range for " + std::to_string(st.n_qubits) + " qubits");
  }
}

// Bit mask of qubit q under the MSB-first convention.
inline Eigen::Index qubit_mask(int n_qubits, int q) {
  return Eigen::Index(1) << (n_qubits - 1 - q);
}

template <typename Scalar>
void apply_1q_inplace(StateVectorT<Scalar>& st, int q,
                      const Eigen::Matrix<std::complex<Scalar>, 2, 2>& u) {
  const Eigen::Index mask = qubit_mask(st.n_qubits, q);
  const Eigen::Index dim = st.dim();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const auto a0 = st.amps[i];
    const auto a1 = st.amps[i | mask];
    st.amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
    st.amps[i | mask] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

}  // namespace detail

// U|psi>; norm is preserved by unitarity, never renormalized.
template <typename Scalar>
StateVectorT<Scalar> apply_gate(const StateVectorT<Scalar>& state, const GateT<Scalar>& gate) {
  StateVectorT<Scalar> out = state;
  switch (gate.kind) {
    case GateKind::RotY:
    case GateKind::RotZ:
    case GateKind::Rot3: {
      detail::check_qubit_index(out, gate.q0, "apply_gate");
      detail::apply_1q_inplace(out, gate.q0, gate_matrix(gate));
      break;
    }
    case GateKind::Cnot: {
      detail::check_qubit_index(out, gate.q0, "apply_gate");
      detail::check_qubit_index(out, gate.q1, "apply_gate");
      if (gate.q0 == gate.q1) throw ConfigError("apply_gate: cnot control equals target");
      const Eigen::Index cm = detail::qubit_mask(out.n_qubits, gate.q0);
      const Eigen::Index tm = detail::qubit_mask(out.n_qubits, gate.q1);
      for (Eigen::Index i = 0; i < out.dim(); ++i) {
        if ((i & cm) && !(i & tm)) std::swap(out.amps[i], out.amps[i | tm]);
      }
      break;
    }
    case GateKind::Toffoli: {
      detail::check_qubit_index(out, gate.q0, "apply_gate");
      detail::check_qubit_index(out, gate.q1, "apply_gate");
      detail::check_qubit_index(out, gate.q2, "apply_gate");
      if (gate.q0 == gate.q1 || gate.q0 == gate.q2 || gate.q1 == gate.q2) {
        throw ConfigError("apply_gate: toffoli qubits must be distinct");
      }
      const Eigen::Index c1 = detail::qubit_mask(out.n_qubits, gate.q0);
      const Eigen::Index c2 = detail::qubit_mask(out.n_qubits, gate.q1);
      const Eigen::Index tm = detail::qubit_mask(out.n_qubits, gate.q2);
      for (Eigen::Index i = 0; i < out.dim(); ++i) {
        if ((i & c1) && (i & c2) && !(i & tm)) std::swap(out.amps[i], out.amps[i | tm]);
      }
      break;
    }
  }
  return out;
}

template <typename Scalar>
StateVectorT<Scalar> run_circuit(int n_qubits, const std::vector<GateT<Scalar>>& gates) {
  auto st = init_zero<Scalar>(n_qubits);
  for (const auto& g : gates) st = apply_gate(st, g);
  return st;
}

// |<a|b>|^2, clamped to [0,1] against round-off. Symmetric in its arguments
// bit for bit: the per-element products have identical real parts and negated
// imaginary parts, which the final modulus squares away.
template <typename Scalar>
Scalar fidelity(const StateVectorT<Scalar>& a, const StateVectorT<Scalar>& b) {
  if (a.n_qubits != b.n_qubits) {
    throw UsageError("fidelity: dimension mismatch (" + std::to_string(a.n_qubits) + " vs " +
                     std::to_string(b.n_qubits) + " qubits)");
  }
  const std::complex<Scalar> ov = a.amps.dot(b.amps);
  return std::clamp(std::norm(ov), Scalar(0), Scalar(1));
}

}  // namespace qclust
