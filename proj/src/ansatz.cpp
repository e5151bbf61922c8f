#include "qclust/ansatz.hpp"

#include <string>

namespace qclust {

void validate(const CircuitSpec& spec) {
  if (spec.n_qubits < 1 || spec.n_qubits > kMaxQubits) {
    throw ConfigError("circuit: n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (spec.n_layers < 1) throw ConfigError("circuit: n_layers must be >= 1");
  if ((spec.entangler == Entangler::none) != (spec.n_qubits == 1)) {
    throw ConfigError("circuit: entangler must be none exactly when n_qubits is 1");
  }
  if (spec.entangler == Entangler::cnot_chain_plus_toffoli && spec.n_qubits < 3) {
    throw ConfigError("circuit: the toffoli chain needs at least 3 qubits");
  }
}

int param_count(const CircuitSpec& spec) { return spec.n_qubits * spec.n_layers * 3; }

int param_index(const CircuitSpec& spec, int layer, int qubit, int axis) {
  return ((layer * spec.n_qubits) + qubit) * 3 + axis;
}

EncodingSpec EncodingSpec::cyclic(int n_features, int n_qubits) {
  if (n_features < 1) throw ConfigError("encoding: need at least one feature");
  if (n_qubits < 1) throw ConfigError("encoding: need at least one qubit");
  EncodingSpec enc;
  enc.feature_to_angle.reserve(n_features);
  for (int f = 0; f < n_features; ++f) {
    const int slot = f % (3 * n_qubits);
    enc.feature_to_angle.emplace_back(slot % n_qubits, slot / n_qubits);
  }
  return enc;
}

EncodingSpec EncodingSpec::cyclic_polar(int n_features, int n_qubits, double window_lo,
                                        double window_hi, double polar_margin) {
  if (!(window_hi > window_lo)) throw ConfigError("encoding: polar window must be non-empty");
  if (!(polar_margin >= 0 && polar_margin < M_PI / 2)) {
    throw ConfigError("encoding: polar margin must be in [0, pi/2)");
  }
  EncodingSpec enc = cyclic(n_features, n_qubits);
  enc.polar_chart = true;
  enc.window_lo = window_lo;
  enc.window_hi = window_hi;
  enc.polar_margin = polar_margin;
  return enc;
}

namespace {

void check_encoding(const Eigen::VectorXd& point, const CircuitSpec& spec,
                    const EncodingSpec& enc) {
  if (static_cast<Eigen::Index>(enc.feature_to_angle.size()) != point.size()) {
    throw UsageError("encode: point has " + std::to_string(point.size()) +
                     " features but the encoding maps " +
                     std::to_string(enc.feature_to_angle.size()));
  }
  for (const auto& [q, axis] : enc.feature_to_angle) {
    if (q < 0 || q >= spec.n_qubits || axis < 0 || axis > 2) {
      throw UsageError("encode: feature routed to invalid slot (qubit " + std::to_string(q) +
                       ", axis " + std::to_string(axis) + ")");
    }
  }
}

}  // namespace

Circuit encoding_circuit(const Eigen::VectorXd& point, const CircuitSpec& spec,
                         const EncodingSpec& enc) {
  check_encoding(point, spec, enc);
  Eigen::MatrixXd angles = Eigen::MatrixXd::Zero(spec.n_qubits, 3);
  std::vector<bool> theta_fed(spec.n_qubits, false);
  for (Eigen::Index f = 0; f < point.size(); ++f) {
    const auto& [q, axis] = enc.feature_to_angle[f];
    angles(q, axis) += point[f];
    if (axis == 0) theta_fed[q] = true;
  }
  if (enc.polar_chart) {
    const double span = enc.window_hi - enc.window_lo;
    for (int q = 0; q < spec.n_qubits; ++q) {
      if (!theta_fed[q]) continue;
      const double t = std::clamp((angles(q, 0) - enc.window_lo) / span, 0.0, 1.0);
      angles(q, 0) = enc.polar_margin + t * (M_PI - 2.0 * enc.polar_margin);
    }
  }
  Circuit gates;
  gates.reserve(spec.n_qubits);
  for (int q = 0; q < spec.n_qubits; ++q) {
    gates.push_back(Gate::rot3(q, angles(q, 0), angles(q, 1), angles(q, 2)));
  }
  return gates;
}

Circuit build_circuit(const Eigen::VectorXd& point, const ParamVector& params,
                      const CircuitSpec& spec, const EncodingSpec& enc) {
  validate(spec);
  if (params.size() != param_count(spec)) {
    throw UsageError("variational_state: expected " + std::to_string(param_count(spec)) +
                     " parameters, got " + std::to_string(params.size()));
  }
  Circuit gates = encoding_circuit(point, spec, enc);
  for (int layer = 0; layer < spec.n_layers; ++layer) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      gates.push_back(Gate::rot3(q, params[param_index(spec, layer, q, 0)],
                                 params[param_index(spec, layer, q, 1)],
                                 params[param_index(spec, layer, q, 2)]));
    }
    if (spec.entangler != Entangler::none) {
      for (int q = 0; q + 1 < spec.n_qubits; ++q) gates.push_back(Gate::cnot(q, q + 1));
    }
    if (spec.entangler == Entangler::cnot_chain_plus_toffoli) {
      for (int q = 0; q + 2 < spec.n_qubits; ++q) gates.push_back(Gate::toffoli(q, q + 1, q + 2));
    }
  }
  return gates;
}

StateVector encode(const Eigen::VectorXd& point, const CircuitSpec& spec,
                   const EncodingSpec& enc) {
  validate(spec);
  return run_circuit(spec.n_qubits, encoding_circuit(point, spec, enc));
}

StateVector variational_state(const Eigen::VectorXd& point, const ParamVector& params,
                              const CircuitSpec& spec, const EncodingSpec& enc) {
  return run_circuit(spec.n_qubits, build_circuit(point, params, spec, enc));
}

Eigen::VectorXd fidelity_row(const Eigen::VectorXd& point, const ParamVector& params,
                             const CircuitSpec& spec, const EncodingSpec& enc,
                             const AnchorSet& anchors) {
  if (anchors.n_qubits != spec.n_qubits) {
    throw UsageError("fidelity_row: anchors live on " + std::to_string(anchors.n_qubits) +
                     " qubits, circuit on " + std::to_string(spec.n_qubits));
  }
  const StateVector psi = variational_state(point, params, spec, enc);
  Eigen::VectorXd row(anchors.k);
  for (int a = 0; a < anchors.k; ++a) row[a] = fidelity(psi, anchors.states[a]);
  return row;
}

}  // namespace qclust
