#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qclust/errors.hpp"

// The clustering objective. Pairs of points contribute weighted products of
// their anchor fidelities; a quadratic penalty discourages states whose
// fidelities do not sum to one when the anchors leave that unconstrained.

namespace qclust {

enum class Metric { euclidean, squared_euclidean, manhattan };

struct DistanceMatrix {
  Eigen::MatrixXd d;  // N x N, symmetric, zero diagonal
  Metric metric = Metric::euclidean;
};

DistanceMatrix pairwise_distances(const Eigen::MatrixXd& points, Metric metric);

double point_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Metric metric);

enum class CostVariant { original, inverse_distance, centroid_regularized, complementary };

struct CostConfig {
  CostVariant variant = CostVariant::complementary;
  double alpha = 1.0;          // distance exponent in the centroid variants
  double lambda = 0.0;         // weight of the point-to-own-centroid distance
  double mu = -1.0;            // penalty weight; negative = resolve from the
                               // anchors (0 for a complete orthonormal basis,
                               // 1 otherwise)
  double prune_epsilon = 0.0;  // drop pair terms whose distance weight falls
                               // below prune_epsilon * (largest weight)
  Metric metric = Metric::euclidean;
};

// Floor applied to distances in the inverse variant so coincident points
// degrade gracefully instead of dividing by zero.
inline constexpr double kInverseDistanceFloor = 1e-9;

struct CentroidSet {
  Eigen::MatrixXd centroids;  // k x m, row a = mean of cluster a's members
  std::vector<int> counts;
  std::vector<bool> stale;    // cluster was empty; previous centroid retained
};

// One sampled term h_ij^a. cent_dist_i is d(x_i, c_i), the distance from
// point i to the centroid of its own cluster (used only by the centroid
// variants).
double term(int i, int j, int a, const Eigen::MatrixXd& fidelities, const DistanceMatrix& dist,
            double cent_dist_i, const CostConfig& cfg);

// (sum_a f_i^a - 1)^2.
double constraint_penalty(const Eigen::VectorXd& fidelity_row);

// Distance-derived factor of term (i,j,*); this is what pruning thresholds.
double pair_weight(int i, int j, const DistanceMatrix& dist, double cent_dist_i,
                   const CostConfig& cfg);

// Optional subsampling of unordered pairs; empty = all pairs.
struct PairMask {
  std::vector<std::pair<int, int>> pairs;  // i < j
  bool all() const { return pairs.empty(); }
};

// 1/2 sum_{i != j} sum_a term(i,j,a) + mu * sum_i penalty(row_i), with terms
// below the pruning threshold skipped. Fixed i, j, a loop order, sequential
// accumulation, so the value is reproducible bit for bit.
double total_cost(const Eigen::MatrixXd& fidelities, const DistanceMatrix& dist,
                  const Eigen::VectorXd& cent_dist, const CostConfig& cfg,
                  const PairMask& mask = {});

// dL/dF for the same objective, with distances, centroids and the pruning
// mask held fixed. Feeds the parameter-shift chain rule.
Eigen::MatrixXd cost_gradient_wrt_fidelity(const Eigen::MatrixXd& fidelities,
                                           const DistanceMatrix& dist,
                                           const Eigen::VectorXd& cent_dist, const CostConfig& cfg,
                                           const PairMask& mask = {});

// Mean of each cluster's members; an empty cluster keeps its previous
// centroid (zero when there is none) and is flagged stale.
CentroidSet update_centroids(const Eigen::MatrixXd& points, const std::vector<int>& assignments,
                             int k, const CentroidSet* previous = nullptr);

// d(x_i, c_i) for every point under the configured metric.
Eigen::VectorXd centroid_distances(const Eigen::MatrixXd& points, const CentroidSet& centroids,
                                   const std::vector<int>& assignments, Metric metric);

}  // namespace qclust
