#include "qclust/eval.hpp"

#include <fstream>
#include <limits>

namespace qclust {

std::vector<int> assign(const Eigen::MatrixXd& fidelities) {
  if (fidelities.rows() == 0 || fidelities.cols() == 0) {
    throw UsageError("assign: empty fidelity matrix");
  }
  std::vector<int> out(fidelities.rows());
  for (Eigen::Index i = 0; i < fidelities.rows(); ++i) {
    int best = 0;
    for (Eigen::Index a = 1; a < fidelities.cols(); ++a) {
      if (fidelities(i, a) > fidelities(i, best)) best = static_cast<int>(a);
    }
    out[i] = best;
  }
  return out;
}

std::vector<int> hungarian_min_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0) {
    throw UsageError("hungarian_min_assignment: square non-empty matrix required");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Potentials formulation with 1-based sentinels.
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

MatchedAccuracy matched_accuracy(const std::vector<int>& predictions,
                                 const std::vector<int>& truth_labels) {
  if (predictions.size() != truth_labels.size()) {
    throw UsageError("matched_accuracy: length mismatch");
  }
  if (predictions.empty()) throw UsageError("matched_accuracy: empty input");

  int k_pred = 0, k_truth = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] < 0 || truth_labels[i] < 0) {
      throw UsageError("matched_accuracy: negative label");
    }
    k_pred = std::max(k_pred, predictions[i] + 1);
    k_truth = std::max(k_truth, truth_labels[i] + 1);
  }
  if (k_pred > 20 || k_truth > 20) {
    throw UsageError("matched_accuracy: more than 20 clusters or labels");
  }

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k_pred, k_truth);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    counts(predictions[i], truth_labels[i]) += 1.0;
  }

  const int n = std::max(k_pred, k_truth);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  cost.topLeftCorner(k_pred, k_truth) = -counts;
  const std::vector<int> row_to_col = hungarian_min_assignment(cost);

  MatchedAccuracy out;
  out.matching.assign(k_pred, -1);
  double correct = 0;
  for (int p = 0; p < k_pred; ++p) {
    const int label = row_to_col[p];
    if (label < k_truth) {
      out.matching[p] = label;
      correct += counts(p, label);
    }
  }
  out.accuracy = correct / static_cast<double>(predictions.size());
  return out;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index k = n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

}  // namespace

nlohmann::json result_to_json(const RunResult& result) {
  nlohmann::json doc;
  doc["config"] = result.config;
  doc["loss_per_epoch"] = result.loss_per_epoch;
  doc["assignments"] = result.assignments;
  doc["fidelities"] = matrix_to_json(result.fidelities);
  if (result.accuracy) {
    doc["accuracy"] = *result.accuracy;
    doc["matching"] = result.matching;
  }
  if (result.truncation_error) doc["truncation_error"] = *result.truncation_error;
  return doc;
}

RunResult result_from_json(const nlohmann::json& doc) {
  RunResult out;
  out.config = doc.at("config");
  out.loss_per_epoch = doc.at("loss_per_epoch").get<std::vector<double>>();
  out.assignments = doc.at("assignments").get<std::vector<int>>();
  out.fidelities = matrix_from_json(doc.at("fidelities"));
  if (doc.contains("accuracy")) {
    out.accuracy = doc.at("accuracy").get<double>();
    out.matching = doc.at("matching").get<std::vector<int>>();
  }
  if (doc.contains("truncation_error")) {
    out.truncation_error = doc.at("truncation_error").get<double>();
  }
  return out;
}

void write_report(const RunResult& result, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw IngestionError("cannot open '" + path + "' for writing");
  file << result_to_json(result).dump(2) << "\n";
  if (!file) throw IngestionError("failed writing '" + path + "'");
}

void write_assignments_csv(const std::vector<int>& assignments, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw IngestionError("cannot open '" + path + "' for writing");
  file << "row,cluster\n";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    file << i << "," << assignments[i] << "\n";
  }
  if (!file) throw IngestionError("failed writing '" + path + "'");
}

}  // namespace qclust
