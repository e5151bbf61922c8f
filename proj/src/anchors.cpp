#include "qclust/anchors.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "qclust/rng.hpp"

namespace qclust {

namespace {

using Vec3 = Eigen::Vector3d;

std::vector<Vec3> to_eigen(const std::vector<BlochVector>& v) {
  std::vector<Vec3> out;
  out.reserve(v.size());
  for (const auto& p : v) out.emplace_back(p.x, p.y, p.z);
  return out;
}

std::vector<BlochVector> from_eigen(const std::vector<Vec3>& v) {
  std::vector<BlochVector> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back({p.x(), p.y(), p.z()});
  return out;
}

// First point to +z, second into the x-z half-plane with x >= 0.
void orient_canonically(std::vector<Vec3>& pts) {
  const Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(pts[0], Vec3::UnitZ());
  for (auto& p : pts) p = q * p;
  if (pts.size() > 1) {
    const Vec3& v1 = pts[1];
    if (std::abs(v1.x()) > 1e-12 || std::abs(v1.y()) > 1e-12) {
      const double az = std::atan2(v1.y(), v1.x());
      const Eigen::AngleAxisd spin(-az, Vec3::UnitZ());
      for (auto& p : pts) p = spin * p;
    }
  }
  for (auto& p : pts) p.normalize();
}

std::vector<Vec3> closed_form_constellation(int k) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pts;
  switch (k) {
    case 2:
      pts = {Vec3(0, 0, 1), Vec3(0, 0, -1)};
      break;
    case 3:  // trine on a great circle through +z
      for (int i = 0; i < 3; ++i) {
        const double t = 2.0 * M_PI * i / 3.0;
        pts.emplace_back(std::sin(t), 0, std::cos(t));
      }
      break;
    case 4: {
      const double s23 = std::sqrt(2.0 / 3.0), s2 = std::sqrt(2.0);
      pts = {Vec3(0, 0, 1), Vec3(2 * s2 / 3, 0, -1.0 / 3), Vec3(-s2 / 3, s23, -1.0 / 3),
             Vec3(-s2 / 3, -s23, -1.0 / 3)};
      break;
    }
    case 6:
      pts = {Vec3(0, 0, 1),  Vec3(1, 0, 0),  Vec3(0, 1, 0),
             Vec3(-1, 0, 0), Vec3(0, -1, 0), Vec3(0, 0, -1)};
      break;
    case 8:
      for (int sx : {+1, -1})
        for (int sy : {+1, -1})
          for (int sz : {+1, -1}) pts.push_back(Vec3(sx, sy, sz).normalized());
      break;
    case 12:
      for (int sa : {+1, -1}) {
        for (int sb : {+1, -1}) {
          pts.push_back(Vec3(0, sa, sb * phi).normalized());
          pts.push_back(Vec3(sa, sb * phi, 0).normalized());
          pts.push_back(Vec3(sa * phi, 0, sb).normalized());
        }
      }
      break;
    case 20: {
      const double ip = 1.0 / phi;
      for (int sx : {+1, -1})
        for (int sy : {+1, -1})
          for (int sz : {+1, -1}) pts.push_back(Vec3(sx, sy, sz).normalized());
      for (int sa : {+1, -1}) {
        for (int sb : {+1, -1}) {
          pts.push_back(Vec3(0, sa * ip, sb * phi).normalized());
          pts.push_back(Vec3(sa * ip, sb * phi, 0).normalized());
          pts.push_back(Vec3(sa * phi, 0, sb * ip).normalized());
        }
      }
      break;
    }
    default:
      return {};
  }
  return pts;
}

Vec3 random_unit_vector(GaussianSampler& g) {
  Vec3 v(g.next(), g.next(), g.next());
  const double n = v.norm();
  return n > 0 ? Vec3(v / n) : Vec3::UnitZ();
}

// One repulsion run: soft-max weighted push-apart of the closest pairs, with
// a sharpening weight exponent and a decaying step.
std::vector<Vec3> repulsion_run(int k, SplitMix64 rng) {
  GaussianSampler gauss(rng);
  std::vector<Vec3> pts(k);
  for (auto& p : pts) p = random_unit_vector(gauss);

  const int iters = 2000;
  double eta = 0.3;
  const double eta_decay = std::pow(1e-5 / eta, 1.0 / iters);
  double beta = 8.0;
  const double beta_growth = std::pow(2000.0 / beta, 1.0 / iters);

  std::vector<Vec3> force(k);
  for (int it = 0; it < iters; ++it) {
    double dot_max = -1.0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) dot_max = std::max(dot_max, pts[a].dot(pts[b]));

    for (auto& f : force) f.setZero();
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        const double w = std::exp(beta * (pts[a].dot(pts[b]) - dot_max));
        force[a] += w * pts[b];
        force[b] += w * pts[a];
      }
    }
    for (int a = 0; a < k; ++a) {
      Vec3 tangent = force[a] - force[a].dot(pts[a]) * pts[a];
      pts[a] = (pts[a] - eta * tangent).normalized();
    }
    eta *= eta_decay;
    beta *= beta_growth;
  }
  return pts;
}

double min_angle_of(const std::vector<Vec3>& pts) {
  double worst = M_PI;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double d = std::clamp(pts[a].dot(pts[b]), -1.0, 1.0);
      worst = std::min(worst, std::acos(d));
    }
  }
  return worst;
}

}  // namespace

Eigen::MatrixXd gram_matrix(const std::vector<StateVector>& states) {
  if (states.empty()) throw UsageError("gram_matrix: empty state list");
  const int k = static_cast<int>(states.size());
  Eigen::MatrixXd g(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) g(a, b) = fidelity(states[a], states[b]);
  return g;
}

StateVector bloch_to_state(const BlochVector& v) {
  const double theta = std::acos(std::clamp(v.z, -1.0, 1.0));
  const double phi = std::atan2(v.y, v.x);
  StateVector st;
  st.n_qubits = 1;
  st.amps.resize(2);
  st.amps[0] = std::cos(theta / 2);
  st.amps[1] = std::polar(std::sin(theta / 2), phi);
  return st;
}

double min_pairwise_angle(const std::vector<BlochVector>& points) {
  return min_angle_of(to_eigen(points));
}

std::vector<BlochVector> numeric_sphere_constellation(int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("numeric_sphere_constellation: k must be >= 2");
  const int restarts = 30;
  std::vector<Vec3> best;
  double best_angle = -1.0;
  for (int r = 0; r < restarts; ++r) {
    auto pts = repulsion_run(k, SplitMix64::split(seed, r));
    const double angle = min_angle_of(pts);
    if (angle > best_angle) {
      best_angle = angle;
      best = std::move(pts);
    }
  }
  orient_canonically(best);
  return from_eigen(best);
}

std::vector<BlochVector> sphere_constellation(int k, std::uint64_t seed) {
  if (k < 2 || k > 20) {
    throw ConfigError("sphere_constellation: k must be in [2, 20], got " + std::to_string(k));
  }
  auto pts = closed_form_constellation(k);
  if (pts.empty()) return numeric_sphere_constellation(k, seed);
  orient_canonically(pts);
  return from_eigen(pts);
}

AnchorSet single_qubit_anchor_set(int k, std::uint64_t seed) {
  AnchorSet set;
  set.n_qubits = 1;
  set.k = k;
  set.bloch = sphere_constellation(k, seed);
  set.states.reserve(k);
  for (const auto& b : set.bloch) set.states.push_back(bloch_to_state(b));
  set.gram = gram_matrix(set.states);
  return set;
}

namespace {

// Seeded ascent of min_{a<b}(1 - |<a|b>|^2): soft-max weighted descent on the
// largest pairwise fidelities, states renormalized every step.
std::vector<StateVector> optimize_spread_states(int n_qubits, int k, std::uint64_t seed) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  GaussianSampler gauss(SplitMix64::split(seed, 7));
  std::vector<Eigen::VectorXcd> st(k);
  for (auto& s : st) {
    s.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) s[i] = std::complex<double>(gauss.next(), gauss.next());
    s.normalize();
  }

  const int iters = 1500;
  double eta = 0.2;
  const double eta_decay = std::pow(1e-4 / eta, 1.0 / iters);
  double beta = 10.0;
  const double beta_growth = std::pow(500.0 / beta, 1.0 / iters);

  std::vector<Eigen::VectorXcd> grad(k);
  for (int it = 0; it < iters; ++it) {
    double f_max = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        f_max = std::max(f_max, std::norm(st[a].dot(st[b])));
      }
    }
    for (auto& g : grad) g = Eigen::VectorXcd::Zero(dim);
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        const std::complex<double> o_ab = st[a].dot(st[b]);  // <a|b>
        const double w = std::exp(beta * (std::norm(o_ab) - f_max));
        grad[a] += w * std::conj(o_ab) * st[b];  // d|<a|b>|^2 / d a*
        grad[b] += w * o_ab * st[a];
      }
    }
    for (int a = 0; a < k; ++a) {
      Eigen::VectorXcd tangent = grad[a] - st[a].dot(grad[a]) * st[a];
      st[a] = (st[a] - eta * tangent).normalized();
    }
    eta *= eta_decay;
    beta *= beta_growth;
  }

  std::vector<StateVector> out(k);
  for (int a = 0; a < k; ++a) {
    out[a].n_qubits = n_qubits;
    out[a].amps = st[a];
  }
  return out;
}

}  // namespace

AnchorSet multi_qubit_anchor_set(int n_qubits, int k, std::uint64_t seed, MultiAnchorMode mode) {
  if (n_qubits < 2 || n_qubits > kMaxQubits) {
    throw ConfigError("multi_qubit_anchor_set: n_qubits must be in [2, " +
                      std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
  }
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  if (k < 2 || k > 4 * dim) {
    throw ConfigError("multi_qubit_anchor_set: k must be in [2, " + std::to_string(4 * dim) +
                      "] for " + std::to_string(n_qubits) + " qubits, got " + std::to_string(k));
  }

  AnchorSet set;
  set.n_qubits = n_qubits;
  set.k = k;
  if (mode == MultiAnchorMode::basis) {
    if (k > dim) {
      throw ConfigError("multi_qubit_anchor_set: basis mode needs k <= 2^n (" +
                        std::to_string(dim) + "), got k = " + std::to_string(k));
    }
    for (int a = 0; a < k; ++a) {
      StateVector st;
      st.n_qubits = n_qubits;
      st.amps = Eigen::VectorXcd::Zero(dim);
      st.amps[a] = 1.0;
      set.states.push_back(std::move(st));
    }
  } else {
    set.states = optimize_spread_states(n_qubits, k, seed);
  }
  set.gram = gram_matrix(set.states);
  return set;
}

bool constraint_is_automatic(const AnchorSet& anchors) {
  const Eigen::Index dim = Eigen::Index(1) << anchors.n_qubits;
  if (anchors.k != dim) return false;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(anchors.k, anchors.k);
  return (anchors.gram - eye).cwiseAbs().maxCoeff() < 1e-9;
}

}  // namespace qclust
