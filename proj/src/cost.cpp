#include "qclust/cost.hpp"

#include <cmath>
#include <string>

namespace qclust {

double point_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Metric metric) {
  switch (metric) {
    case Metric::euclidean:
      return (a - b).norm();
    case Metric::squared_euclidean:
      return (a - b).squaredNorm();
    case Metric::manhattan:
      return (a - b).cwiseAbs().sum();
  }
  throw UsageError("point_distance: unknown metric");
}

DistanceMatrix pairwise_distances(const Eigen::MatrixXd& points, Metric metric) {
  const Eigen::Index n = points.rows();
  DistanceMatrix out;
  out.metric = metric;
  out.d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = point_distance(points.row(i), points.row(j), metric);
      out.d(i, j) = d;
      out.d(j, i) = d;
    }
  }
  return out;
}

double pair_weight(int i, int j, const DistanceMatrix& dist, double cent_dist_i,
                   const CostConfig& cfg) {
  const double d = dist.d(i, j);
  switch (cfg.variant) {
    case CostVariant::original:
      return d;
    case CostVariant::inverse_distance:
      return 1.0 / std::max(d, kInverseDistanceFloor);
    case CostVariant::centroid_regularized:
    case CostVariant::complementary:
      return std::pow(d, cfg.alpha) + cfg.lambda * cent_dist_i;
  }
  throw UsageError("pair_weight: unknown cost variant");
}

double term(int i, int j, int a, const Eigen::MatrixXd& fidelities, const DistanceMatrix& dist,
            double cent_dist_i, const CostConfig& cfg) {
  if (i == j) throw UsageError("term: i and j must differ");
  const double fi = fidelities(i, a);
  const double fj = fidelities(j, a);
  const double w = pair_weight(i, j, dist, cent_dist_i, cfg);
  switch (cfg.variant) {
    case CostVariant::original:
      return w * fi * fj;
    case CostVariant::inverse_distance:
      return w * (1.0 - fi * fj);
    case CostVariant::centroid_regularized:
      return w * fi * fj;
    case CostVariant::complementary:
      return w * (1.0 - fi) * (1.0 - fj);
  }
  throw UsageError("term: unknown cost variant");
}

double constraint_penalty(const Eigen::VectorXd& fidelity_row) {
  const double excess = fidelity_row.sum() - 1.0;
  return excess * excess;
}

namespace {

double resolved_mu(const CostConfig& cfg) {
  if (cfg.mu < 0) {
    throw UsageError("total_cost: mu is unresolved; set it or resolve it from the anchors");
  }
  return cfg.mu;
}

// Largest pair weight, the reference for the pruning threshold.
double max_pair_weight(const Eigen::Index n, const DistanceMatrix& dist,
                       const Eigen::VectorXd& cent_dist, const CostConfig& cfg) {
  double w_max = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) w_max = std::max(w_max, pair_weight(i, j, dist, cent_dist[i], cfg));
  return w_max;
}

}  // namespace

double total_cost(const Eigen::MatrixXd& fidelities, const DistanceMatrix& dist,
                  const Eigen::VectorXd& cent_dist, const CostConfig& cfg, const PairMask& mask) {
  const Eigen::Index n = fidelities.rows();
  const Eigen::Index k = fidelities.cols();
  if (dist.d.rows() != n || dist.d.cols() != n || cent_dist.size() != n) {
    throw UsageError("total_cost: inconsistent shapes");
  }
  const double mu = resolved_mu(cfg);
  const double threshold =
      cfg.prune_epsilon > 0 ? cfg.prune_epsilon * max_pair_weight(n, dist, cent_dist, cfg) : 0.0;

  double pair_sum = 0.0;
  if (mask.all()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        if (threshold > 0 && pair_weight(i, j, dist, cent_dist[i], cfg) < threshold) continue;
        for (Eigen::Index a = 0; a < k; ++a) {
          pair_sum += term(i, j, a, fidelities, dist, cent_dist[i], cfg);
        }
      }
    }
  } else {
    for (const auto& [i, j] : mask.pairs) {
      for (int order = 0; order < 2; ++order) {
        const int x = order == 0 ? i : j;
        const int y = order == 0 ? j : i;
        if (threshold > 0 && pair_weight(x, y, dist, cent_dist[x], cfg) < threshold) continue;
        for (Eigen::Index a = 0; a < k; ++a) {
          pair_sum += term(x, y, a, fidelities, dist, cent_dist[x], cfg);
        }
      }
    }
  }

  double penalty_sum = 0.0;
  if (mu != 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) penalty_sum += constraint_penalty(fidelities.row(i));
  }
  return 0.5 * pair_sum + mu * penalty_sum;
}

Eigen::MatrixXd cost_gradient_wrt_fidelity(const Eigen::MatrixXd& fidelities,
                                           const DistanceMatrix& dist,
                                           const Eigen::VectorXd& cent_dist, const CostConfig& cfg,
                                           const PairMask& mask) {
  const Eigen::Index n = fidelities.rows();
  const Eigen::Index k = fidelities.cols();
  const double mu = resolved_mu(cfg);
  const double threshold =
      cfg.prune_epsilon > 0 ? cfg.prune_epsilon * max_pair_weight(n, dist, cent_dist, cfg) : 0.0;

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, k);

  auto add_pair = [&](Eigen::Index i, Eigen::Index j) {
    // Contribution of ordered term (i,j,*) to dL/dF(i,*) and dL/dF(j,*).
    if (threshold > 0 && pair_weight(i, j, dist, cent_dist[i], cfg) < threshold) return;
    const double w = pair_weight(i, j, dist, cent_dist[i], cfg);
    for (Eigen::Index a = 0; a < k; ++a) {
      const double fi = fidelities(i, a);
      const double fj = fidelities(j, a);
      switch (cfg.variant) {
        case CostVariant::original:
        case CostVariant::centroid_regularized:
          g(i, a) += 0.5 * w * fj;
          g(j, a) += 0.5 * w * fi;
          break;
        case CostVariant::inverse_distance:
          g(i, a) -= 0.5 * w * fj;
          g(j, a) -= 0.5 * w * fi;
          break;
        case CostVariant::complementary:
          g(i, a) -= 0.5 * w * (1.0 - fj);
          g(j, a) -= 0.5 * w * (1.0 - fi);
          break;
      }
    }
  };

  if (mask.all()) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) add_pair(i, j);
  } else {
    for (const auto& [i, j] : mask.pairs) {
      add_pair(i, j);
      add_pair(j, i);
    }
  }

  if (mu != 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double excess = fidelities.row(i).sum() - 1.0;
      for (Eigen::Index a = 0; a < k; ++a) g(i, a) += 2.0 * mu * excess;
    }
  }
  return g;
}

CentroidSet update_centroids(const Eigen::MatrixXd& points, const std::vector<int>& assignments,
                             int k, const CentroidSet* previous) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(assignments.size()) != n) {
    throw UsageError("update_centroids: assignment count does not match point count");
  }
  CentroidSet out;
  out.centroids = Eigen::MatrixXd::Zero(k, points.cols());
  out.counts.assign(k, 0);
  out.stale.assign(k, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = assignments[i];
    if (a < 0 || a >= k) throw UsageError("update_centroids: assignment out of range");
    out.centroids.row(a) += points.row(i);
    ++out.counts[a];
  }
  for (int a = 0; a < k; ++a) {
    if (out.counts[a] > 0) {
      out.centroids.row(a) /= out.counts[a];
    } else {
      out.stale[a] = true;
      if (previous && previous->centroids.rows() == k &&
          previous->centroids.cols() == points.cols()) {
        out.centroids.row(a) = previous->centroids.row(a);
      }
    }
  }
  return out;
}

Eigen::VectorXd centroid_distances(const Eigen::MatrixXd& points, const CentroidSet& centroids,
                                   const std::vector<int>& assignments, Metric metric) {
  const Eigen::Index n = points.rows();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = point_distance(points.row(i), centroids.centroids.row(assignments[i]), metric);
  }
  return out;
}

}  // namespace qclust
