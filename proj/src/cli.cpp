#include "qclust/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qclust/anchors.hpp"
#include "qclust/backend.hpp"
#include "qclust/data.hpp"
#include "qclust/eval.hpp"
#include "qclust/trainer.hpp"

namespace qclust {

namespace {

struct ClusterOptions {
  std::string data;
  std::string iris_features = "1,3";
  bool labeled = false;
  int blob_clusters = 3;
  int blob_per = 150;
  int blob_dim = 2;
  double blob_std = 1.0;
  std::string blob_centers;

  int k = 0;
  int qubits = 1;
  int layers = 1;
  std::string entangler = "chain";
  std::string anchor_mode = "auto";
  std::string backend = "statevector";
  int chi = 16;

  std::string cost = "complementary";
  double alpha = 1.0;
  double lambda = 0.0;
  double mu = -1.0;
  double prune_eps = 0.0;
  std::string metric = "euclidean";

  double lr = 0.3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  int epochs = 20;
  int batch = 0;
  std::string grad = "shift";
  double fd_step = 1e-5;
  std::string params = "per-point";
  double init_spread = 0.3;
  std::uint64_t seed = 0;
  bool polar_chart = false;
  double polar_margin = 0.05;

  bool no_rescale = false;
  double lo = kRescaleLo;
  double hi = kRescaleHi;

  std::string out = "result.json";
  std::string assignments_out = "assignments.csv";
  std::string log = "train_log.csv";
};

Eigen::MatrixXd parse_centers(const std::string& text, int n_clusters, int dim) {
  std::vector<std::vector<double>> rows;
  std::stringstream outer(text);
  std::string chunk;
  while (std::getline(outer, chunk, ';')) {
    std::vector<double> row;
    std::stringstream inner(chunk);
    std::string cell;
    while (std::getline(inner, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("centers: cannot parse '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (static_cast<int>(rows.size()) != n_clusters) {
    throw ConfigError("centers: expected " + std::to_string(n_clusters) + " centers, got " +
                      std::to_string(rows.size()));
  }
  Eigen::MatrixXd centers(n_clusters, dim);
  for (int c = 0; c < n_clusters; ++c) {
    if (static_cast<int>(rows[c].size()) != dim) {
      throw ConfigError("centers: center " + std::to_string(c) + " has " +
                        std::to_string(rows[c].size()) + " coordinates, expected " +
                        std::to_string(dim));
    }
    for (int d = 0; d < dim; ++d) centers(c, d) = rows[c][d];
  }
  return centers;
}

Metric parse_metric(const std::string& name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "sqeuclidean") return Metric::squared_euclidean;
  if (name == "manhattan") return Metric::manhattan;
  throw ConfigError("unknown metric '" + name + "'");
}

CostVariant parse_cost(const std::string& name) {
  if (name == "original") return CostVariant::original;
  if (name == "inverse") return CostVariant::inverse_distance;
  if (name == "centroid") return CostVariant::centroid_regularized;
  if (name == "complementary") return CostVariant::complementary;
  throw ConfigError("unknown cost variant '" + name + "'");
}

Dataset load_dataset(const ClusterOptions& opt) {
  if (opt.data == "iris") {
    if (opt.iris_features == "all") return load_iris_all();
    int a = -1, b = -1;
    if (std::sscanf(opt.iris_features.c_str(), "%d,%d", &a, &b) != 2) {
      throw ConfigError("iris-features: expected 'i,j' or 'all', got '" + opt.iris_features +
                        "'");
    }
    return load_iris({a, b});
  }
  if (opt.data == "blobs") {
    BlobSpec spec;
    spec.n_clusters = opt.blob_clusters;
    spec.points_per_cluster = opt.blob_per;
    spec.dim = opt.blob_dim;
    spec.std_dev = opt.blob_std;
    spec.seed = opt.seed;
    if (!opt.blob_centers.empty()) {
      spec.centers = parse_centers(opt.blob_centers, opt.blob_clusters, opt.blob_dim);
    }
    return generate_blobs(spec);
  }
  return load_csv(opt.data, opt.labeled);
}

AnchorSet build_anchors(const ClusterOptions& opt) {
  std::string mode = opt.anchor_mode;
  if (mode == "auto") mode = opt.qubits == 1 ? "platonic" : "basis";
  if (opt.qubits == 1) {
    if (mode != "platonic") {
      throw ConfigError("anchor-mode: one qubit supports only platonic constellations");
    }
    return single_qubit_anchor_set(opt.k);
  }
  if (mode == "basis") return multi_qubit_anchor_set(opt.qubits, opt.k, opt.seed,
                                                     MultiAnchorMode::basis);
  if (mode == "optimized") return multi_qubit_anchor_set(opt.qubits, opt.k, opt.seed,
                                                         MultiAnchorMode::optimized);
  throw ConfigError("unknown anchor-mode '" + mode + "' for multi-qubit anchors");
}

nlohmann::json config_echo(const ClusterOptions& opt, const CostConfig& cost,
                           const OptimizerConfig& optim, const BackendConfig& backend) {
  nlohmann::json cfg;
  cfg["data"] = opt.data;
  cfg["iris_features"] = opt.iris_features;
  cfg["labeled"] = opt.labeled;
  if (opt.data == "blobs") {
    cfg["blob_clusters"] = opt.blob_clusters;
    cfg["blob_per"] = opt.blob_per;
    cfg["blob_dim"] = opt.blob_dim;
    cfg["blob_std"] = opt.blob_std;
    cfg["blob_centers"] = opt.blob_centers;
  }
  cfg["k"] = opt.k;
  cfg["qubits"] = opt.qubits;
  cfg["layers"] = opt.layers;
  cfg["entangler"] = opt.qubits == 1 ? "none" : opt.entangler;
  cfg["anchor_mode"] = opt.anchor_mode == "auto" ? (opt.qubits == 1 ? "platonic" : "basis")
                                                 : opt.anchor_mode;
  cfg["backend"] = backend.kind == BackendKind::mps ? "mps" : "statevector";
  if (backend.kind == BackendKind::mps) cfg["chi"] = backend.chi_max;
  cfg["cost"] = opt.cost;
  cfg["alpha"] = cost.alpha;
  cfg["lambda"] = cost.lambda;
  cfg["mu"] = cost.mu;  // as given; negative means resolved from the anchors
  cfg["prune_epsilon"] = cost.prune_epsilon;
  cfg["metric"] = opt.metric;
  cfg["learning_rate"] = optim.learning_rate;
  cfg["beta1"] = optim.beta1;
  cfg["beta2"] = optim.beta2;
  cfg["eps_adam"] = optim.eps_adam;
  cfg["epochs"] = optim.epochs;
  cfg["batch_pairs"] = optim.batch_pairs;
  cfg["gradient"] = opt.grad;
  cfg["fd_step"] = optim.fd_step;
  cfg["params"] = opt.params;
  cfg["init_spread"] = opt.init_spread;
  cfg["polar_chart"] = opt.polar_chart;
  if (opt.polar_chart) cfg["polar_margin"] = opt.polar_margin;
  cfg["seed"] = optim.seed;
  cfg["rescale"] = !opt.no_rescale;
  cfg["rescale_lo"] = opt.lo;
  cfg["rescale_hi"] = opt.hi;
  cfg["out"] = opt.out;
  cfg["assignments_out"] = opt.assignments_out;
  cfg["log"] = opt.log;
  return cfg;
}

int run_cluster(const ClusterOptions& opt) {
  if (opt.k < 2) throw ConfigError("cluster: k must be >= 2");
  if (opt.qubits < 1 || opt.qubits > kMaxQubits) {
    throw ConfigError("cluster: qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }

  Dataset dataset = load_dataset(opt);
  if (!opt.no_rescale) dataset = rescale(dataset, opt.lo, opt.hi);

  CircuitSpec spec;
  spec.n_qubits = opt.qubits;
  spec.n_layers = opt.layers;
  if (opt.qubits == 1) {
    spec.entangler = Entangler::none;
  } else if (opt.entangler == "chain") {
    spec.entangler = Entangler::cnot_chain;
  } else if (opt.entangler == "chain-toffoli") {
    spec.entangler = Entangler::cnot_chain_plus_toffoli;
  } else {
    throw ConfigError("unknown entangler '" + opt.entangler + "'");
  }
  validate(spec);

  const int n_features = static_cast<int>(dataset.n_features());
  const EncodingSpec enc =
      opt.polar_chart
          ? EncodingSpec::cyclic_polar(n_features, opt.qubits, opt.lo, opt.hi, opt.polar_margin)
          : EncodingSpec::cyclic(n_features, opt.qubits);
  const AnchorSet anchors = build_anchors(opt);

  CostConfig cost;
  cost.variant = parse_cost(opt.cost);
  cost.alpha = opt.alpha;
  cost.lambda = opt.lambda;
  cost.mu = opt.mu;
  cost.prune_epsilon = opt.prune_eps;
  cost.metric = parse_metric(opt.metric);

  OptimizerConfig optim;
  optim.learning_rate = opt.lr;
  optim.beta1 = opt.beta1;
  optim.beta2 = opt.beta2;
  optim.eps_adam = opt.eps_adam;
  optim.epochs = opt.epochs;
  optim.batch_pairs = opt.batch;
  if (opt.grad == "shift") {
    optim.gradient_mode = GradientMode::parameter_shift;
  } else if (opt.grad == "fd") {
    optim.gradient_mode = GradientMode::central_difference;
  } else {
    throw ConfigError("unknown gradient mode '" + opt.grad + "'");
  }
  optim.fd_step = opt.fd_step;
  if (opt.params == "per-point") {
    optim.param_mode = ParamMode::per_point;
  } else if (opt.params == "shared") {
    optim.param_mode = ParamMode::shared;
  } else {
    throw ConfigError("unknown parameter mode '" + opt.params + "'");
  }
  optim.init_spread = opt.init_spread;
  optim.seed = opt.seed;
  validate(optim);

  BackendConfig backend;
  if (opt.backend == "statevector") {
    backend.kind = BackendKind::statevector;
  } else if (opt.backend == "mps") {
    backend.kind = BackendKind::mps;
    backend.chi_max = opt.chi;
  } else {
    throw ConfigError("unknown backend '" + opt.backend + "'");
  }

  const TrainReport report =
      train(dataset, spec, enc, anchors, cost, optim, backend, opt.log);

  RunResult result;
  result.config = config_echo(opt, cost, optim, backend);
  result.loss_per_epoch = report.loss_per_epoch;
  result.assignments = report.assignments;
  result.fidelities = report.fidelity_matrix;
  result.accuracy = report.accuracy;
  result.matching = report.matching;
  if (backend.kind == BackendKind::mps) result.truncation_error = report.truncation_error;
  write_report(result, opt.out);
  write_assignments_csv(report.assignments, opt.assignments_out);

  if (!report.error.empty()) {
    std::cerr << "error: " << report.error << " (partial report written to " << opt.out << ")\n";
    return 4;
  }

  std::cout << "loss=" << (report.loss_per_epoch.empty() ? 0.0 : report.loss_per_epoch.back());
  if (report.accuracy) std::cout << " accuracy=" << *report.accuracy;
  std::cout << "\n";
  return 0;
}

int run_blobs(const ClusterOptions& opt, const std::string& out_path) {
  BlobSpec spec;
  spec.n_clusters = opt.blob_clusters;
  spec.points_per_cluster = opt.blob_per;
  spec.dim = opt.blob_dim;
  spec.std_dev = opt.blob_std;
  spec.seed = opt.seed;
  if (!opt.blob_centers.empty()) {
    spec.centers = parse_centers(opt.blob_centers, opt.blob_clusters, opt.blob_dim);
  }
  const Dataset dataset = generate_blobs(spec);
  write_csv(dataset, out_path);
  std::cout << "wrote " << dataset.size() << " points to " << out_path << "\n";
  return 0;
}

int run_anchors(int qubits, int k, std::uint64_t seed, const std::string& mode) {
  AnchorSet set;
  if (qubits == 1) {
    set = single_qubit_anchor_set(k, seed);
  } else if (mode == "basis") {
    set = multi_qubit_anchor_set(qubits, k, seed, MultiAnchorMode::basis);
  } else if (mode == "optimized" || mode == "auto") {
    set = multi_qubit_anchor_set(qubits, k, seed, MultiAnchorMode::optimized);
  } else {
    throw ConfigError("unknown anchor-mode '" + mode + "' for multi-qubit anchors");
  }

  char buf[160];
  if (!set.bloch.empty()) {
    std::cout << "index,x,y,z\n";
    for (int a = 0; a < set.k; ++a) {
      std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g", a, set.bloch[a].x, set.bloch[a].y,
                    set.bloch[a].z);
      std::cout << buf << "\n";
    }
  } else {
    std::cout << "index,amplitudes(re,im per basis state)\n";
    for (int a = 0; a < set.k; ++a) {
      std::cout << a;
      for (Eigen::Index i = 0; i < set.states[a].dim(); ++i) {
        std::snprintf(buf, sizeof(buf), ",%.12g,%.12g", set.states[a].amps[i].real(),
                      set.states[a].amps[i].imag());
        std::cout << buf;
      }
      std::cout << "\n";
    }
  }
  std::cout << "gram\n";
  for (int a = 0; a < set.k; ++a) {
    for (int b = 0; b < set.k; ++b) {
      if (b) std::cout << ",";
      std::snprintf(buf, sizeof(buf), "%.12g", set.gram(a, b));
      std::cout << buf;
    }
    std::cout << "\n";
  }
  return 0;
}

// One- or two-column CSV of integers (second column wins); a non-numeric
// first row is skipped as a header.
std::vector<int> read_label_column(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IngestionError("cannot open '" + path + "'");
  std::vector<int> values;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    std::stringstream ss(line);
    std::string cell, last;
    while (std::getline(ss, cell, ',')) last = cell;
    if (last.empty()) continue;
    try {
      values.push_back(std::stoi(last));
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw IngestionError(path + ": non-integer value in row " + std::to_string(line_no));
    }
  }
  if (values.empty()) throw IngestionError(path + ": no label rows");
  return values;
}

int run_eval(const std::string& pred_path, const std::string& truth_path) {
  const std::vector<int> pred = read_label_column(pred_path);
  const std::vector<int> truth = read_label_column(truth_path);
  const MatchedAccuracy result = matched_accuracy(pred, truth);
  std::cout << "accuracy=" << result.accuracy << " matching=";
  for (std::size_t p = 0; p < result.matching.size(); ++p) {
    if (p) std::cout << ",";
    std::cout << result.matching[p];
  }
  std::cout << "\n";
  return 0;
}

// Key-value overrides for the cluster subcommand. A key also present on the
// command line is an error, never a silent override.
std::vector<std::string> load_config_file(const std::string& path,
                                          const std::vector<std::string>& raw_args) {
  std::ifstream file(path);
  if (!file) throw IngestionError("cannot open config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(file, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string key, value;
    const auto eq = line.find('=');
    std::stringstream ss(eq == std::string::npos ? line : line.substr(0, eq) + " " +
                                                       line.substr(eq + 1));
    if (!(ss >> key)) continue;
    std::getline(ss, value);
    const auto start = value.find_first_not_of(" \t");
    value = start == std::string::npos ? "" : value.substr(start);
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    const std::string flag = "--" + key;
    for (const auto& arg : raw_args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
        throw ConfigError("config file key '" + key + "' conflicts with command-line flag " +
                          flag);
      }
    }
    extra.push_back(flag);
    if (!value.empty()) extra.push_back(value);
  }
  return extra;
}

int dispatch(std::vector<std::string> args) {
  CLI::App app{"Variational quantum and quantum-inspired clustering"};
  app.require_subcommand(1);

  ClusterOptions opt;
  std::string config_path;

  CLI::App* cluster = app.add_subcommand("cluster", "Cluster a dataset");
  cluster->add_option("--data", opt.data, "CSV path, 'iris', or 'blobs'")->required();
  cluster->add_option("--iris-features", opt.iris_features, "'i,j' feature pair or 'all'");
  cluster->add_flag("--labeled", opt.labeled, "CSV has a trailing label column");
  cluster->add_option("--blob-clusters", opt.blob_clusters, "blob source: cluster count");
  cluster->add_option("--per", opt.blob_per, "blob source: points per cluster");
  cluster->add_option("--dim", opt.blob_dim, "blob source: dimensions");
  cluster->add_option("--std", opt.blob_std, "blob source: standard deviation");
  cluster->add_option("--centers", opt.blob_centers, "blob centers 'x,y;x,y;...'");
  cluster->add_option("--k", opt.k, "number of clusters")->required();
  cluster->add_option("--qubits", opt.qubits, "number of qubits");
  cluster->add_option("--layers", opt.layers, "variational layers");
  cluster->add_option("--entangler", opt.entangler, "chain | chain-toffoli");
  cluster->add_option("--anchor-mode", opt.anchor_mode, "platonic | basis | optimized");
  cluster->add_option("--backend", opt.backend, "statevector | mps");
  cluster->add_option("--chi", opt.chi, "mps bond dimension cap");
  cluster->add_option("--cost", opt.cost, "original | inverse | centroid | complementary");
  cluster->add_option("--alpha", opt.alpha, "distance exponent");
  cluster->add_option("--lambda", opt.lambda, "centroid distance weight");
  cluster->add_option("--mu", opt.mu, "constraint penalty weight (negative = auto)");
  cluster->add_option("--prune-eps", opt.prune_eps, "relative pruning threshold");
  cluster->add_option("--metric", opt.metric, "euclidean | sqeuclidean | manhattan");
  cluster->add_option("--lr", opt.lr, "Adam learning rate");
  cluster->add_option("--beta1", opt.beta1, "Adam beta1");
  cluster->add_option("--beta2", opt.beta2, "Adam beta2");
  cluster->add_option("--eps-adam", opt.eps_adam, "Adam epsilon");
  cluster->add_option("--epochs", opt.epochs, "training epochs");
  cluster->add_option("--batch", opt.batch, "pairs per epoch (0 = all)");
  cluster->add_option("--grad", opt.grad, "shift | fd");
  cluster->add_option("--fd-step", opt.fd_step, "central difference half-width");
  cluster->add_option("--params", opt.params, "per-point | shared angle sharing");
  cluster->add_option("--init-spread", opt.init_spread, "per-point init draw half-width");
  cluster->add_flag("--polar-chart", opt.polar_chart,
                    "map theta-slot angles onto (margin, pi - margin)");
  cluster->add_option("--polar-margin", opt.polar_margin, "polar chart margin");
  cluster->add_option("--seed", opt.seed, "run seed");
  cluster->add_flag("--no-rescale", opt.no_rescale, "skip min-max rescaling");
  cluster->add_option("--lo", opt.lo, "rescale window low end");
  cluster->add_option("--hi", opt.hi, "rescale window high end");
  cluster->add_option("--out,-o", opt.out, "result document path");
  cluster->add_option("--assignments-out", opt.assignments_out, "assignment CSV path");
  cluster->add_option("--log", opt.log, "training log path ('' disables)");
  cluster->add_option("--config", config_path, "key-value overrides file");

  CLI::App* blobs = app.add_subcommand("blobs", "Generate labeled gaussian blobs");
  std::string blobs_out = "blobs.csv";
  blobs->add_option("--k", opt.blob_clusters, "cluster count");
  blobs->add_option("--per", opt.blob_per, "points per cluster");
  blobs->add_option("--dim", opt.blob_dim, "dimensions");
  blobs->add_option("--std", opt.blob_std, "standard deviation");
  blobs->add_option("--centers", opt.blob_centers, "centers 'x,y;x,y;...'");
  blobs->add_option("--seed", opt.seed, "generator seed");
  blobs->add_option("--out,-o", blobs_out, "output CSV path");

  CLI::App* anchors_cmd = app.add_subcommand("anchors", "Print an anchor constellation");
  int anchors_qubits = 1, anchors_k = 0;
  std::uint64_t anchors_seed = kConstellationSeed;
  std::string anchors_mode = "auto";
  anchors_cmd->add_option("--qubits", anchors_qubits, "number of qubits");
  anchors_cmd->add_option("--k", anchors_k, "number of anchors")->required();
  anchors_cmd->add_option("--seed", anchors_seed, "solver seed");
  anchors_cmd->add_option("--mode", anchors_mode, "basis | optimized (multi-qubit)");

  CLI::App* eval_cmd = app.add_subcommand("eval", "Matched accuracy of two label files");
  std::string pred_path, truth_path;
  eval_cmd->add_option("--pred", pred_path, "predicted labels CSV")->required();
  eval_cmd->add_option("--truth", truth_path, "true labels CSV")->required();

  // Pull in --config for the cluster subcommand before the real parse so that
  // conflicts are detected rather than silently resolved.
  if (args.size() > 1 && args[1] == "cluster") {
    for (std::size_t i = 2; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") {
        const auto extra = load_config_file(args[i + 1], args);
        args.insert(args.end(), extra.begin(), extra.end());
        break;
      }
    }
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (cluster->parsed()) return run_cluster(opt);
  if (blobs->parsed()) return run_blobs(opt, blobs_out);
  if (anchors_cmd->parsed()) {
    if (anchors_qubits == 1 && anchors_mode != "auto") {
      throw ConfigError("anchors: --mode applies to multi-qubit constellations only");
    }
    return run_anchors(anchors_qubits, anchors_k, anchors_seed, anchors_mode);
  }
  if (eval_cmd->parsed()) return run_eval(pred_path, truth_path);
  return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    return dispatch(std::move(args));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IngestionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qclust
