#include "qclust/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "qclust/eval.hpp"
#include "qclust/rng.hpp"

namespace qclust {

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate > 0)) throw ConfigError("optimizer: learning_rate must be > 0");
  if (!(cfg.beta1 > 0 && cfg.beta1 < 1) || !(cfg.beta2 > 0 && cfg.beta2 < 1)) {
    throw ConfigError("optimizer: beta1 and beta2 must be in (0, 1)");
  }
  if (!(cfg.eps_adam > 0)) throw ConfigError("optimizer: eps_adam must be > 0");
  if (cfg.epochs < 1 || cfg.epochs > 10000) {
    throw ConfigError("optimizer: epochs must be in [1, 10000]");
  }
  if (cfg.batch_pairs < 0) throw ConfigError("optimizer: batch_pairs must be >= 0");
  if (!(cfg.fd_step > 0)) throw ConfigError("optimizer: fd_step must be > 0");
  if (!(cfg.init_spread >= 0)) throw ConfigError("optimizer: init_spread must be >= 0");
}

double objective_value(const FidelityObjective& objective, const ParamVector& params) {
  return objective.loss(objective.fidelities(params));
}

Eigen::VectorXd gradient(const ParamVector& params, const FidelityObjective& objective,
                         GradientMode mode, double fd_step) {
  const Eigen::Index p = params.size();
  Eigen::VectorXd g(p);

  if (mode == GradientMode::central_difference) {
    for (Eigen::Index t = 0; t < p; ++t) {
      ParamVector shifted = params;
      shifted[t] = params[t] + fd_step;
      const double up = objective_value(objective, shifted);
      shifted[t] = params[t] - fd_step;
      const double down = objective_value(objective, shifted);
      g[t] = (up - down) / (2.0 * fd_step);
      if (!std::isfinite(g[t])) {
        throw NumericError("gradient: non-finite central difference at component " +
                           std::to_string(t));
      }
    }
    return g;
  }

  const Eigen::MatrixXd base = objective.fidelities(params);
  const Eigen::MatrixXd dl_df = objective.dloss_dfid(base);
  for (Eigen::Index t = 0; t < p; ++t) {
    ParamVector shifted = params;
    shifted[t] = params[t] + M_PI / 2.0;
    const Eigen::MatrixXd up = objective.fidelities(shifted);
    shifted[t] = params[t] - M_PI / 2.0;
    const Eigen::MatrixXd down = objective.fidelities(shifted);
    g[t] = (dl_df.array() * (up - down).array()).sum() / 2.0;
    if (!std::isfinite(g[t])) {
      throw NumericError("gradient: non-finite shift estimate at component " + std::to_string(t));
    }
  }
  return g;
}

void adam_step(ParamVector& params, const Eigen::VectorXd& grads, AdamMoments& moments, int t,
               const OptimizerConfig& cfg) {
  if (params.size() != grads.size() || moments.m.size() != params.size() ||
      moments.v.size() != params.size()) {
    throw UsageError("adam_step: size mismatch");
  }
  moments.m = cfg.beta1 * moments.m + (1.0 - cfg.beta1) * grads;
  moments.v = cfg.beta2 * moments.v + (1.0 - cfg.beta2) * grads.cwiseProduct(grads);
  const double m_corr = 1.0 - std::pow(cfg.beta1, t);
  const double v_corr = 1.0 - std::pow(cfg.beta2, t);
  params -= cfg.learning_rate *
            ((moments.m / m_corr).array() / ((moments.v / v_corr).array().sqrt() + cfg.eps_adam))
                .matrix();
}

namespace {

PairMask sample_pair_mask(Eigen::Index n, int batch_pairs, SplitMix64 rng) {
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  if (batch_pairs <= 0 || batch_pairs >= total) return {};
  std::vector<std::pair<int, int>> all;
  all.reserve(total);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  // Partial Fisher-Yates: the first batch_pairs entries are the sample.
  for (int s = 0; s < batch_pairs; ++s) {
    const auto pick = s + static_cast<std::size_t>(rng.next_below(all.size() - s));
    std::swap(all[s], all[pick]);
  }
  all.resize(batch_pairs);
  PairMask mask;
  mask.pairs = std::move(all);
  return mask;
}

double resolve_mu(const CostConfig& cfg, const AnchorSet& anchors) {
  if (cfg.mu >= 0) return cfg.mu;
  return constraint_is_automatic(anchors) ? 0.0 : 1.0;
}

// Gradient over the N x P per-point angle matrix. Shifting angle (i, p) only
// moves row i of the fidelity matrix, so the shift rule needs 2*P row
// evaluations per point; central differences swap one row into the full loss.
Eigen::MatrixXd per_point_gradient(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& fid,
                                   const Eigen::MatrixXd& points, const CircuitSpec& spec,
                                   const EncodingSpec& enc, FidelityEngine& engine,
                                   const DistanceMatrix& dist, const Eigen::VectorXd& cent_dist,
                                   const CostConfig& cost, const PairMask& mask,
                                   const OptimizerConfig& opt_cfg) {
  const Eigen::Index n = theta.rows();
  const Eigen::Index p_count = theta.cols();
  Eigen::MatrixXd grads(n, p_count);

  const auto row_at = [&](Eigen::Index i, const ParamVector& angles) {
    return engine.row(build_circuit(points.row(i), angles, spec, enc));
  };

  if (opt_cfg.gradient_mode == GradientMode::parameter_shift) {
    const Eigen::MatrixXd dl_df = cost_gradient_wrt_fidelity(fid, dist, cent_dist, cost, mask);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index p = 0; p < p_count; ++p) {
        ParamVector shifted = theta.row(i);
        shifted[p] += M_PI / 2.0;
        const Eigen::VectorXd up = row_at(i, shifted);
        shifted[p] = theta(i, p) - M_PI / 2.0;
        const Eigen::VectorXd down = row_at(i, shifted);
        grads(i, p) = dl_df.row(i).dot((up - down) / 2.0);
        if (!std::isfinite(grads(i, p))) {
          throw NumericError("train: non-finite shift estimate for point " + std::to_string(i) +
                             " angle " + std::to_string(p));
        }
      }
    }
  } else {
    Eigen::MatrixXd scratch = fid;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index p = 0; p < p_count; ++p) {
        ParamVector shifted = theta.row(i);
        shifted[p] += opt_cfg.fd_step;
        scratch.row(i) = row_at(i, shifted).transpose();
        const double up = total_cost(scratch, dist, cent_dist, cost, mask);
        shifted[p] = theta(i, p) - opt_cfg.fd_step;
        scratch.row(i) = row_at(i, shifted).transpose();
        const double down = total_cost(scratch, dist, cent_dist, cost, mask);
        scratch.row(i) = fid.row(i);
        grads(i, p) = (up - down) / (2.0 * opt_cfg.fd_step);
        if (!std::isfinite(grads(i, p))) {
          throw NumericError("train: non-finite central difference for point " +
                             std::to_string(i) + " angle " + std::to_string(p));
        }
      }
    }
  }
  return grads;
}

}  // namespace

TrainReport train(const Dataset& dataset, const CircuitSpec& spec, const EncodingSpec& enc,
                  const AnchorSet& anchors, const CostConfig& cost_cfg,
                  const OptimizerConfig& opt_cfg, const BackendConfig& backend_cfg,
                  const std::string& log_path) {
  const auto start = std::chrono::steady_clock::now();
  validate(spec);
  validate(opt_cfg);
  if (anchors.n_qubits != spec.n_qubits) {
    throw UsageError("train: anchors and circuit disagree on qubit count");
  }
  if (dataset.size() < 2) throw UsageError("train: need at least two datapoints");

  const Eigen::Index n = dataset.size();
  const bool per_point = opt_cfg.param_mode == ParamMode::per_point;
  const int p_count = param_count(spec);
  CostConfig cost = cost_cfg;
  cost.mu = resolve_mu(cost_cfg, anchors);

  const DistanceMatrix dist = pairwise_distances(dataset.points, cost.metric);
  if (cost.variant == CostVariant::inverse_distance) {
    double min_off = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) min_off = std::min(min_off, dist.d(i, j));
    if (min_off < kInverseDistanceFloor) {
      std::cerr << "warning: coincident datapoints; inverse-distance terms floored at "
                << kInverseDistanceFloor << "\n";
    }
  }

  FidelityEngine engine(anchors, backend_cfg);

  // One shared draw; per_point broadcasts it so every state starts from the
  // same variational rotation and the encoded geometry is preserved.
  SplitMix64 init_rng = SplitMix64::split(opt_cfg.seed, 1);
  ParamVector seed_row(p_count);
  for (int p = 0; p < p_count; ++p) {
    seed_row[p] = per_point ? init_rng.uniform(-opt_cfg.init_spread, opt_cfg.init_spread)
                            : init_rng.uniform(-M_PI, M_PI);
  }
  Eigen::MatrixXd theta(per_point ? n : 1, p_count);
  theta.rowwise() = seed_row.transpose();

  const auto fidelity_rows = [&](const Eigen::MatrixXd& angles) {
    Eigen::MatrixXd f(n, anchors.k);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = per_point ? i : 0;
      f.row(i) =
          engine.row(build_circuit(dataset.points.row(i), angles.row(row), spec, enc)).transpose();
    }
    return f;
  };

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw IngestionError("cannot open '" + log_path + "' for writing");
    log.precision(17);
  }

  TrainReport report;
  AdamMoments moments = AdamMoments::zeros(theta.size());
  CentroidSet centroids;
  bool have_centroids = false;

  for (int epoch = 1; epoch <= opt_cfg.epochs; ++epoch) {
    try {
      const Eigen::MatrixXd fid = fidelity_rows(theta);
      const std::vector<int> assignments = assign(fid);
      centroids = update_centroids(dataset.points, assignments, anchors.k,
                                   have_centroids ? &centroids : nullptr);
      have_centroids = true;
      const Eigen::VectorXd cent_dist =
          centroid_distances(dataset.points, centroids, assignments, cost.metric);

      const double loss = total_cost(fid, dist, cent_dist, cost);
      if (!std::isfinite(loss)) {
        throw NumericError("train: loss is not finite at epoch " + std::to_string(epoch));
      }
      report.loss_per_epoch.push_back(loss);
      report.epochs_run = epoch;

      if (log.is_open()) {
        log << epoch << "," << loss;
        if (dataset.labels) {
          log << "," << matched_accuracy(assignments, *dataset.labels).accuracy;
        }
        log << "\n";
      }

      const PairMask mask =
          sample_pair_mask(n, opt_cfg.batch_pairs, SplitMix64::split(opt_cfg.seed, 1000 + epoch));

      Eigen::MatrixXd grads(theta.rows(), theta.cols());
      if (per_point) {
        grads = per_point_gradient(theta, fid, dataset.points, spec, enc, engine, dist, cent_dist,
                                   cost, mask, opt_cfg);
      } else {
        FidelityObjective objective;
        objective.fidelities = [&](const ParamVector& p) {
          Eigen::MatrixXd one_row = p.transpose();
          return fidelity_rows(one_row);
        };
        objective.loss = [&](const Eigen::MatrixXd& f) {
          return total_cost(f, dist, cent_dist, cost, mask);
        };
        objective.dloss_dfid = [&](const Eigen::MatrixXd& f) {
          return cost_gradient_wrt_fidelity(f, dist, cent_dist, cost, mask);
        };
        grads.row(0) =
            gradient(theta.row(0), objective, opt_cfg.gradient_mode, opt_cfg.fd_step).transpose();
      }

      Eigen::Map<ParamVector> flat_params(theta.data(), theta.size());
      Eigen::Map<const Eigen::VectorXd> flat_grads(grads.data(), grads.size());
      ParamVector packed = flat_params;
      adam_step(packed, flat_grads, moments, epoch, opt_cfg);
      flat_params = packed;
    } catch (const NumericError& err) {
      report.error = err.what();
      break;
    }
  }

  engine.reset_truncation_error();
  report.final_params = ParamVector(theta.size());
  for (Eigen::Index i = 0; i < theta.rows(); ++i) {
    report.final_params.segment(i * p_count, p_count) = theta.row(i).transpose();
  }
  report.fidelity_matrix = fidelity_rows(theta);
  report.assignments = assign(report.fidelity_matrix);
  if (dataset.labels) {
    const MatchedAccuracy acc = matched_accuracy(report.assignments, *dataset.labels);
    report.accuracy = acc.accuracy;
    report.matching = acc.matching;
  }
  if (backend_cfg.kind == BackendKind::mps) {
    report.truncation_error = engine.truncation_error();
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qclust
