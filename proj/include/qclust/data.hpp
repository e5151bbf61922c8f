#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qclust/errors.hpp"

// Dataset ingestion, synthetic gaussian blobs, the embedded Iris table, and
// the min-max rescaling applied before encoding features as angles.

namespace qclust {

// Default angle window; features are mapped onto [-1.9*pi/2, +1.9*pi/2].
inline constexpr double kRescaleHi = 1.9 * M_PI / 2.0;
inline constexpr double kRescaleLo = -kRescaleHi;

struct Preprocessing {
  bool applied = false;
  Eigen::VectorXd feature_min;
  Eigen::VectorXd feature_max;
  double lo = 0, hi = 0;
  std::vector<bool> constant_feature;  // those map to the window midpoint
};

struct Dataset {
  Eigen::MatrixXd points;  // N x m
  std::optional<std::vector<int>> labels;
  std::vector<std::string> feature_names;
  Preprocessing preprocessing;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index n_features() const { return points.cols(); }
  int label_count() const;
};

// Comma-separated numeric table, UTF-8; a non-numeric first row is treated as
// a header. With has_labels the trailing column holds integer class labels,
// remapped to 0..L-1 in order of sorted value.
Dataset load_csv(const std::string& path, bool has_labels);

// Feature columns (17 significant digits) and, when labels exist, a final
// `label` column.
void write_csv(const Dataset& dataset, const std::string& path);

struct BlobSpec {
  int n_clusters = 3;
  int points_per_cluster = 150;
  int dim = 2;
  std::optional<Eigen::MatrixXd> centers;  // n_clusters x dim; random if absent
  double std_dev = 1.0;
  std::uint64_t seed = 0;
};

// Isotropic gaussian clusters, labeled by generating cluster, sampled with
// the project RNG (SplitMix64 + Box-Muller) so a seed pins every float.
Dataset generate_blobs(const BlobSpec& spec);

// Feature order: sepal length, sepal width, petal length, petal width.
inline constexpr std::pair<int, int> kIrisDefaultPair = {1, 3};  // widths

// The 150-sample Iris table restricted to two features.
Dataset load_iris(std::pair<int, int> feature_pair = kIrisDefaultPair);

// All four features, for multi-qubit encodings.
Dataset load_iris_all();

// FNV-1a digest of a canonical CSV serialization; pins the embedded table.
std::uint64_t dataset_digest(const Dataset& dataset);

// Per-feature affine map of [min, max] onto [lo, hi]; endpoints are attained
// exactly. Constant features map to the midpoint and are flagged.
Dataset rescale(const Dataset& dataset, double lo = kRescaleLo, double hi = kRescaleHi);

}  // namespace qclust
