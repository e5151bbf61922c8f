#include "qclust/backend.hpp"

namespace qclust {

FidelityEngine::FidelityEngine(const AnchorSet& anchors, const BackendConfig& cfg)
    : anchors_(anchors), cfg_(cfg) {
  if (cfg_.kind == BackendKind::mps) {
    if (cfg_.chi_max < 1) throw ConfigError("backend: chi must be >= 1");
    anchor_mps_.reserve(anchors_.states.size());
    for (const auto& st : anchors_.states) {
      anchor_mps_.push_back(mps_from_dense(st, cfg_.chi_max));
      anchor_conversion_error_ += anchor_mps_.back().truncation_error_accum;
    }
  }
}

Eigen::VectorXd FidelityEngine::row(const Circuit& circuit) {
  const int n = anchors_.n_qubits;
  Eigen::VectorXd out(anchors_.k);
  if (cfg_.kind == BackendKind::statevector) {
    const StateVector psi = run_circuit(n, circuit);
    for (int a = 0; a < anchors_.k; ++a) out[a] = fidelity(psi, anchors_.states[a]);
  } else {
    const MpsState psi = run_circuit_mps(n, cfg_.chi_max, circuit);
    accumulated_ += psi.truncation_error_accum;
    for (int a = 0; a < anchors_.k; ++a) out[a] = mps_fidelity(psi, anchor_mps_[a]);
  }
  return out;
}

Eigen::MatrixXd FidelityEngine::matrix(const Eigen::MatrixXd& points, const ParamVector& params,
                                       const CircuitSpec& spec, const EncodingSpec& enc) {
  if (anchors_.n_qubits != spec.n_qubits) {
    throw UsageError("backend: anchors live on " + std::to_string(anchors_.n_qubits) +
                     " qubits, circuit on " + std::to_string(spec.n_qubits));
  }
  Eigen::MatrixXd f(points.rows(), anchors_.k);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    f.row(i) = row(build_circuit(points.row(i), params, spec, enc)).transpose();
  }
  return f;
}

}  // namespace qclust
