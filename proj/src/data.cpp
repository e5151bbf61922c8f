#include "qclust/data.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "iris_table.hpp"
#include "qclust/rng.hpp"

namespace qclust {

int Dataset::label_count() const {
  if (!labels || labels->empty()) return 0;
  return *std::max_element(labels->begin(), labels->end()) + 1;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_number(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0' && std::isfinite(out);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Dataset load_csv(const std::string& path, bool has_labels) {
  std::ifstream file(path);
  if (!file) throw IngestionError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;

  while (std::getline(file, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_number(trim(fields[c]), row[c])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty() && names.empty()) {  // header row
        for (const auto& f : fields) names.push_back(trim(f));
        width = fields.size();
        continue;
      }
      throw IngestionError(path + ": non-numeric cell in row " + std::to_string(line_no));
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw IngestionError(path + ": row " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " columns, expected " +
                           std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IngestionError(path + ": no data rows");
  if (has_labels && width < 2) {
    throw IngestionError(path + ": a label column requires at least two columns");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = static_cast<Eigen::Index>(width) - (has_labels ? 1 : 0);
  Dataset out;
  out.points.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out.points(i, j) = rows[i][j];

  if (has_labels) {
    std::vector<double> raw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      raw[i] = rows[i][width - 1];
      if (std::abs(raw[i] - std::round(raw[i])) > 1e-9) {
        throw IngestionError(path + ": non-integer label in data row " + std::to_string(i + 1));
      }
    }
    std::map<long long, int> remap;
    for (double v : raw) remap.emplace(static_cast<long long>(std::llround(v)), 0);
    if (remap.size() < 2) throw IngestionError(path + ": labels must contain at least 2 classes");
    int next = 0;
    for (auto& [value, idx] : remap) idx = next++;
    std::vector<int> labels(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      labels[i] = remap[static_cast<long long>(std::llround(raw[i]))];
    }
    out.labels = std::move(labels);
    if (!names.empty()) names.pop_back();
  }
  out.feature_names = std::move(names);
  return out;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw IngestionError("cannot open '" + path + "' for writing");
  if (!dataset.feature_names.empty()) {
    for (Eigen::Index j = 0; j < dataset.n_features(); ++j) {
      if (j) file << ",";
      file << dataset.feature_names[j];
    }
    if (dataset.labels) file << ",label";
    file << "\n";
  }
  char buf[64];
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    for (Eigen::Index j = 0; j < dataset.n_features(); ++j) {
      if (j) file << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", dataset.points(i, j));
      file << buf;
    }
    if (dataset.labels) file << "," << (*dataset.labels)[i];
    file << "\n";
  }
  if (!file) throw IngestionError("failed writing '" + path + "'");
}

Dataset generate_blobs(const BlobSpec& spec) {
  if (spec.n_clusters < 1) throw ConfigError("blobs: n_clusters must be >= 1");
  if (spec.points_per_cluster < 1) throw ConfigError("blobs: points_per_cluster must be >= 1");
  if (spec.dim < 1) throw ConfigError("blobs: dim must be >= 1");
  if (!(spec.std_dev > 0)) throw ConfigError("blobs: std must be > 0");

  Eigen::MatrixXd centers;
  if (spec.centers) {
    centers = *spec.centers;
    if (centers.rows() != spec.n_clusters || centers.cols() != spec.dim) {
      throw ConfigError("blobs: centers must be n_clusters x dim");
    }
  } else {
    SplitMix64 rng = SplitMix64::split(spec.seed, 0);
    centers.resize(spec.n_clusters, spec.dim);
    for (int c = 0; c < spec.n_clusters; ++c)
      for (int d = 0; d < spec.dim; ++d) centers(c, d) = rng.uniform(-10.0, 10.0);
  }

  GaussianSampler noise(SplitMix64::split(spec.seed, 1));
  const int n = spec.n_clusters * spec.points_per_cluster;
  Dataset out;
  out.points.resize(n, spec.dim);
  std::vector<int> labels(n);
  int row = 0;
  for (int c = 0; c < spec.n_clusters; ++c) {
    for (int p = 0; p < spec.points_per_cluster; ++p, ++row) {
      for (int d = 0; d < spec.dim; ++d) {
        out.points(row, d) = centers(c, d) + spec.std_dev * noise.next();
      }
      labels[row] = c;
    }
  }
  out.labels = std::move(labels);
  return out;
}

namespace {

const std::array<std::string, 4> kIrisFeatureNames = {"sepal_length", "sepal_width",
                                                      "petal_length", "petal_width"};

}

Dataset load_iris(std::pair<int, int> feature_pair) {
  const auto [a, b] = feature_pair;
  if (a < 0 || a >= 4 || b < 0 || b >= 4) {
    throw UsageError("load_iris: feature indices must be in [0, 4)");
  }
  Dataset out;
  out.points.resize(150, 2);
  std::vector<int> labels(150);
  for (int i = 0; i < 150; ++i) {
    out.points(i, 0) = detail::kIrisTable[i][a];
    out.points(i, 1) = detail::kIrisTable[i][b];
    labels[i] = static_cast<int>(detail::kIrisTable[i][4]);
  }
  out.labels = std::move(labels);
  out.feature_names = {kIrisFeatureNames[a], kIrisFeatureNames[b]};
  return out;
}

Dataset load_iris_all() {
  Dataset out;
  out.points.resize(150, 4);
  std::vector<int> labels(150);
  for (int i = 0; i < 150; ++i) {
    for (int j = 0; j < 4; ++j) out.points(i, j) = detail::kIrisTable[i][j];
    labels[i] = static_cast<int>(detail::kIrisTable[i][4]);
  }
  out.labels = std::move(labels);
  out.feature_names.assign(kIrisFeatureNames.begin(), kIrisFeatureNames.end());
  return out;
}

std::uint64_t dataset_digest(const Dataset& dataset) {
  std::string text;
  char buf[64];
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    for (Eigen::Index j = 0; j < dataset.n_features(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,", dataset.points(i, j));
      text += buf;
    }
    if (dataset.labels) {
      std::snprintf(buf, sizeof(buf), "%d", (*dataset.labels)[i]);
      text += buf;
    }
    text += '\n';
  }
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Dataset rescale(const Dataset& dataset, double lo, double hi) {
  if (!(hi > lo)) throw ConfigError("rescale: hi must exceed lo");
  const Eigen::Index n = dataset.size(), m = dataset.n_features();
  Dataset out = dataset;
  out.preprocessing.applied = true;
  out.preprocessing.lo = lo;
  out.preprocessing.hi = hi;
  out.preprocessing.feature_min.resize(m);
  out.preprocessing.feature_max.resize(m);
  out.preprocessing.constant_feature.assign(m, false);

  const double mid = 0.5 * (lo + hi);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double fmin = dataset.points.col(j).minCoeff();
    const double fmax = dataset.points.col(j).maxCoeff();
    out.preprocessing.feature_min[j] = fmin;
    out.preprocessing.feature_max[j] = fmax;
    if (fmax <= fmin) {
      out.preprocessing.constant_feature[j] = true;
      out.points.col(j).setConstant(mid);
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = (dataset.points(i, j) - fmin) / (fmax - fmin);
      out.points(i, j) = lo * (1.0 - t) + hi * t;  // t=0 and t=1 land exactly
    }
  }
  return out;
}

}  // namespace qclust
