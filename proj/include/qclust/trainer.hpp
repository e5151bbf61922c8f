#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qclust/anchors.hpp"
#include "qclust/ansatz.hpp"
#include "qclust/backend.hpp"
#include "qclust/cost.hpp"
#include "qclust/data.hpp"

// The optimization loop: per-epoch fidelity recomputation, self-consistent
// centroids, analytic parameter-shift gradients chained through the cost,
// and Adam updates.

namespace qclust {

enum class GradientMode { parameter_shift, central_difference };

// How the rotation angles relate to datapoints. per_point gives every
// datapoint its own copy of the circuit angles, all starting from one shared
// draw, so each point's state is fine-tuned individually; points that start
// close move coherently because their gradients nearly agree. shared trains
// one angle vector for all points, which for a single qubit collapses to a
// rigid rotation of the encoded cloud and cannot separate clusters the
// encoding left entangled with each other; it is kept for its diagnostic
// value.
enum class ParamMode { per_point, shared };

struct OptimizerConfig {
  double learning_rate = 0.3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  int epochs = 20;
  int batch_pairs = 0;  // unordered pairs sampled per epoch; 0 = all pairs
  GradientMode gradient_mode = GradientMode::parameter_shift;
  double fd_step = 1e-5;  // central-difference half-width
  ParamMode param_mode = ParamMode::per_point;
  double init_spread = 0.3;  // per_point: angles start at one uniform draw
                             // from [-init_spread, init_spread) per slot
  std::uint64_t seed = 0;
};

void validate(const OptimizerConfig& cfg);

struct TrainReport {
  std::vector<double> loss_per_epoch;
  ParamVector final_params;  // shared: length P; per_point: N*P, row-major
  Eigen::MatrixXd fidelity_matrix;  // N x k at the final parameters
  std::vector<int> assignments;
  int epochs_run = 0;
  double wall_time_s = 0;
  std::optional<double> accuracy;  // matched accuracy, when labels exist
  std::vector<int> matching;
  double truncation_error = 0;  // mps: anchor conversion + final pass
  std::string error;            // non-empty when the run aborted early
};

// An objective seen two ways: as a black box for finite differences, and as
// loss-of-fidelities for the exact shift rule. Each rotation angle enters a
// point's circuit once, so each fidelity is a first harmonic in it and the
// +-pi/2 shift of that point's row is exact; the chain rule through
// dloss_dfid handles the products of fidelities in the cost.
struct FidelityObjective {
  std::function<Eigen::MatrixXd(const ParamVector&)> fidelities;
  std::function<double(const Eigen::MatrixXd&)> loss;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> dloss_dfid;
};

double objective_value(const FidelityObjective& objective, const ParamVector& params);

Eigen::VectorXd gradient(const ParamVector& params, const FidelityObjective& objective,
                         GradientMode mode, double fd_step = 1e-5);

struct AdamMoments {
  Eigen::VectorXd m;
  Eigen::VectorXd v;

  static AdamMoments zeros(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
};

// One bias-corrected Adam update; t counts from 1.
void adam_step(ParamVector& params, const Eigen::VectorXd& grads, AdamMoments& moments, int t,
               const OptimizerConfig& cfg);

// Runs the full loop. Inputs are never mutated; the report is deterministic
// for a fixed seed (wall_time_s aside). When log_path is non-empty a CSV
// training log is written, one `epoch,loss[,accuracy]` line per epoch. A
// numeric failure stops the loop and returns the partial report with the
// error field set.
TrainReport train(const Dataset& dataset, const CircuitSpec& spec, const EncodingSpec& enc,
                  const AnchorSet& anchors, const CostConfig& cost_cfg,
                  const OptimizerConfig& opt_cfg, const BackendConfig& backend_cfg = {},
                  const std::string& log_path = "");

}  // namespace qclust
