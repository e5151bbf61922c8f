#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qclust/anchors.hpp"
#include "qclust/ansatz.hpp"
#include "qclust/mps.hpp"
#include "qclust/statevector.hpp"

// Execution backend for fidelity rows: exact dense simulation, or the
// bond-capped MPS simulation of the identical gate lists.

namespace qclust {

enum class BackendKind { statevector, mps };

struct BackendConfig {
  BackendKind kind = BackendKind::statevector;
  int chi_max = 16;  // mps only
};

class FidelityEngine {
 public:
  FidelityEngine(const AnchorSet& anchors, const BackendConfig& cfg);

  // Fidelities of the circuit's output state against every anchor.
  Eigen::VectorXd row(const Circuit& circuit);

  // N x k matrix over all datapoints at the given shared parameters.
  Eigen::MatrixXd matrix(const Eigen::MatrixXd& points, const ParamVector& params,
                         const CircuitSpec& spec, const EncodingSpec& enc);

  // Accumulated relative truncation weight (anchor conversion plus every
  // row computed since the last reset). Always 0 for the dense backend.
  double truncation_error() const { return anchor_conversion_error_ + accumulated_; }
  void reset_truncation_error() { accumulated_ = 0; }

  const BackendConfig& config() const { return cfg_; }

 private:
  const AnchorSet& anchors_;
  BackendConfig cfg_;
  std::vector<MpsState> anchor_mps_;
  double anchor_conversion_error_ = 0;
  double accumulated_ = 0;
};

}  // namespace qclust
