#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qclust/statevector.hpp"

// Reference ("anchor") states that define the clusters. One anchor per
// cluster; assignment is by maximal fidelity, so anchors need not be
// orthogonal. For one qubit the anchors are maximally spread points on the
// Bloch sphere: platonic-solid vertices where those exist, a numeric
// max-min-angle constellation otherwise.

namespace qclust {

struct BlochVector {
  double x = 0, y = 0, z = 1;
};

struct AnchorSet {
  int n_qubits = 0;
  int k = 0;
  std::vector<StateVector> states;
  Eigen::MatrixXd gram;             // pairwise fidelities, k x k
  std::vector<BlochVector> bloch;   // filled for single-qubit sets only
};

enum class MultiAnchorMode { basis, optimized };

inline constexpr std::uint64_t kConstellationSeed = 0x5eedc0dedULL;

// Entry (a,b) = fidelity(states[a], states[b]).
Eigen::MatrixXd gram_matrix(const std::vector<StateVector>& states);

StateVector bloch_to_state(const BlochVector& v);

double min_pairwise_angle(const std::vector<BlochVector>& points);

// k maximally spread unit vectors. Closed forms for k in {2, 3, 4, 6, 8, 12,
// 20}; otherwise a seeded multi-start repulsion solve of the max-min-angle
// problem. Every constellation is oriented with the first vector at +z and
// the second in the x-z half-plane (x >= 0); the gram matrix is invariant
// under this gauge choice.
std::vector<BlochVector> sphere_constellation(int k, std::uint64_t seed = kConstellationSeed);

// The numeric solver behind sphere_constellation, exposed so tests can pit it
// against the closed forms.
std::vector<BlochVector> numeric_sphere_constellation(int k, std::uint64_t seed);

// Single-qubit anchors for k clusters, 2 <= k <= 20.
AnchorSet single_qubit_anchor_set(int k, std::uint64_t seed = kConstellationSeed);

// Anchors in a 2^n-dimensional space, 2 <= k <= 4 * 2^n. basis mode takes the
// first k computational basis states (requires k <= 2^n, gram = identity);
// optimized mode runs a seeded ascent on the minimal pairwise value of
// 1 - fidelity, producing a spread set of generally entangled states.
AnchorSet multi_qubit_anchor_set(int n_qubits, int k, std::uint64_t seed,
                                 MultiAnchorMode mode = MultiAnchorMode::optimized);

// True when the anchors are a complete orthonormal basis, in which case the
// per-point fidelities sum to 1 automatically and the one-cluster penalty
// vanishes identically.
bool constraint_is_automatic(const AnchorSet& anchors);

}  // namespace qclust
