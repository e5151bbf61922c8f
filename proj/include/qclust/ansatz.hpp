#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qclust/anchors.hpp"
#include "qclust/statevector.hpp"

// The variational circuit family: data enters through one initial rotation
// per qubit, then each layer applies a parameterized rotation per qubit
// followed by sequential entangling gates. One shared parameter vector serves
// every datapoint; only the initial rotations depend on the point.

namespace qclust {

enum class Entangler { none, cnot_chain, cnot_chain_plus_toffoli };

struct CircuitSpec {
  int n_qubits = 1;
  int n_layers = 1;
  Entangler entangler = Entangler::none;
};

void validate(const CircuitSpec& spec);

// Flat rotation angles, length n_qubits * n_layers * 3; entry
// ((layer * n_qubits) + qubit) * 3 + axis with axes (theta, phi, lambda).
using ParamVector = Eigen::VectorXd;

int param_count(const CircuitSpec& spec);

int param_index(const CircuitSpec& spec, int layer, int qubit, int axis);

// Routes each feature to a (qubit, axis slot) pair; angles landing on the
// same slot add. The cyclic default fills the theta slot of every qubit
// first, then phi, then lambda, then wraps.
//
// With polar_chart set, accumulated theta-slot angles are mapped affinely
// from [window_lo, window_hi] onto (polar_margin, pi - polar_margin). Raw
// theta angles fold the sphere chart (negative polar flips the azimuth by
// pi, and a window wider than pi lets feature extremes collide near the
// south pole); the chart keeps the feature-to-state map injective, which
// matters for datasets whose classes straddle the window midpoint.
struct EncodingSpec {
  std::vector<std::pair<int, int>> feature_to_angle;
  bool polar_chart = false;
  double window_lo = 0;
  double window_hi = 0;
  double polar_margin = 0.05;

  static EncodingSpec cyclic(int n_features, int n_qubits);
  static EncodingSpec cyclic_polar(int n_features, int n_qubits, double window_lo,
                                   double window_hi, double polar_margin = 0.05);
};

// Gate list preparing |phi_i> from |0...0>.
Circuit encoding_circuit(const Eigen::VectorXd& point, const CircuitSpec& spec,
                         const EncodingSpec& enc);

// Full gate list for |psi_i>: encoding followed by the variational layers.
Circuit build_circuit(const Eigen::VectorXd& point, const ParamVector& params,
                      const CircuitSpec& spec, const EncodingSpec& enc);

StateVector encode(const Eigen::VectorXd& point, const CircuitSpec& spec, const EncodingSpec& enc);

StateVector variational_state(const Eigen::VectorXd& point, const ParamVector& params,
                              const CircuitSpec& spec, const EncodingSpec& enc);

// f_i^a for a = 1..k against each anchor state, via dense simulation.
Eigen::VectorXd fidelity_row(const Eigen::VectorXd& point, const ParamVector& params,
                             const CircuitSpec& spec, const EncodingSpec& enc,
                             const AnchorSet& anchors);

}  // namespace qclust
