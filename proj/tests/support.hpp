#pragma once

// Shared test helpers and independent oracles. Everything here is test-only
// and deliberately avoids the library's summation/pruning code paths it is
// used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qclust/cost.hpp"
#include "qclust/rng.hpp"
#include "qclust/statevector.hpp"

namespace qclust::testing {

inline StateVector random_state(int n_qubits, SplitMix64& rng) {
  GaussianSampler gauss(rng);
  StateVector st;
  st.n_qubits = n_qubits;
  st.amps.resize(Eigen::Index(1) << n_qubits);
  for (Eigen::Index i = 0; i < st.amps.size(); ++i) {
    st.amps[i] = std::complex<double>(gauss.next(), gauss.next());
  }
  st.amps.normalize();
  return st;
}

// Random circuit over the supported gate set; includes a long-range CNOT and
// a Toffoli where the qubit count allows, to exercise routing.
inline Circuit random_circuit(int n_qubits, int n_rotations, SplitMix64& rng) {
  Circuit gates;
  for (int i = 0; i < n_rotations; ++i) {
    const int q = static_cast<int>(rng.next_below(n_qubits));
    switch (rng.next_below(3)) {
      case 0:
        gates.push_back(Gate::rot_y(q, rng.uniform(-M_PI, M_PI)));
        break;
      case 1:
        gates.push_back(Gate::rot_z(q, rng.uniform(-M_PI, M_PI)));
        break;
      default:
        gates.push_back(Gate::rot3(q, rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI),
                                   rng.uniform(-M_PI, M_PI)));
    }
    if (n_qubits >= 2 && rng.next_below(2) == 0) {
      int c = static_cast<int>(rng.next_below(n_qubits));
      int t = static_cast<int>(rng.next_below(n_qubits));
      if (c != t) gates.push_back(Gate::cnot(c, t));
    }
  }
  if (n_qubits >= 3) {
    gates.push_back(Gate::cnot(0, n_qubits - 1));
    gates.push_back(Gate::toffoli(0, 1, n_qubits - 1));
  }
  return gates;
}

// Brute-force clustering cost: a literal triple loop over (i, j, a) plus the
// penalty sum, with no pruning and no shared code with total_cost.
inline double oracle_total_cost(const Eigen::MatrixXd& f, const Eigen::MatrixXd& d,
                                const Eigen::VectorXd& cent_dist, CostVariant variant,
                                double alpha, double lambda, double mu) {
  const Eigen::Index n = f.rows(), k = f.cols();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      for (Eigen::Index a = 0; a < k; ++a) {
        double h = 0.0;
        switch (variant) {
          case CostVariant::original:
            h = d(i, j) * f(i, a) * f(j, a);
            break;
          case CostVariant::inverse_distance:
            h = (1.0 - f(i, a) * f(j, a)) / std::max(d(i, j), 1e-9);
            break;
          case CostVariant::centroid_regularized:
            h = (std::pow(d(i, j), alpha) + lambda * cent_dist[i]) * f(i, a) * f(j, a);
            break;
          case CostVariant::complementary:
            h = (std::pow(d(i, j), alpha) + lambda * cent_dist[i]) * (1.0 - f(i, a)) *
                (1.0 - f(j, a));
            break;
        }
        sum += h;
      }
    }
  }
  double penalty = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) row += f(i, a);
    penalty += (row - 1.0) * (row - 1.0);
  }
  return 0.5 * sum + mu * penalty;
}

struct RandomCostInstance {
  Eigen::MatrixXd fidelities;
  DistanceMatrix dist;
  Eigen::VectorXd cent_dist;
};

inline RandomCostInstance random_cost_instance(Eigen::Index n, Eigen::Index k, SplitMix64& rng) {
  RandomCostInstance inst;
  inst.fidelities.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < k; ++a) inst.fidelities(i, a) = rng.next_double();
  Eigen::MatrixXd pts(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) pts(i, j) = rng.uniform(-3.0, 3.0);
  inst.dist = pairwise_distances(pts, Metric::euclidean);
  inst.cent_dist.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) inst.cent_dist[i] = rng.uniform(0.0, 2.0);
  return inst;
}

// Exhaustive injective-matching accuracy, for checking the Hungarian path.
inline double oracle_matched_accuracy(const std::vector<int>& pred,
                                      const std::vector<int>& truth) {
  const int kp = 1 + *std::max_element(pred.begin(), pred.end());
  const int kt = 1 + *std::max_element(truth.begin(), truth.end());
  const int n = std::max(kp, kt);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    int correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (perm[pred[i]] < kt && perm[pred[i]] == truth[i]) ++correct;
    }
    best = std::max(best, static_cast<double>(correct) / pred.size());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace qclust::testing
