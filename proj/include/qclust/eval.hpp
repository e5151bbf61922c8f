#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qclust/errors.hpp"

// Readout and scoring: hard assignments from the fidelity matrix, accuracy
// maximized over cluster-to-label matchings, and the serialized run document.

namespace qclust {

// Per-row argmax; ties break toward the lowest cluster index.
std::vector<int> assign(const Eigen::MatrixXd& fidelities);

// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
// O(n^3)). Returns the column matched to each row.
std::vector<int> hungarian_min_assignment(const Eigen::MatrixXd& cost);

struct MatchedAccuracy {
  double accuracy = 0;
  std::vector<int> matching;  // matching[pred] = truth label, -1 if unmatched
};

// Best accuracy over injective mappings from predicted clusters to true
// labels. Predicted clusters left unmatched count all their points as errors.
MatchedAccuracy matched_accuracy(const std::vector<int>& predictions,
                                 const std::vector<int>& truth_labels);

struct RunResult {
  nlohmann::json config;  // verbatim echo of the resolved run configuration
  std::vector<double> loss_per_epoch;
  std::vector<int> assignments;
  Eigen::MatrixXd fidelities;
  std::optional<double> accuracy;
  std::vector<int> matching;
  std::optional<double> truncation_error;  // present for the mps backend
};

nlohmann::json result_to_json(const RunResult& result);
RunResult result_from_json(const nlohmann::json& doc);

void write_report(const RunResult& result, const std::string& path);

// row,cluster lines for plotting.
void write_assignments_csv(const std::vector<int>& assignments, const std::string& path);

}  // namespace qclust
