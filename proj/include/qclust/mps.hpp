#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/statevector.hpp"

// Matrix-product-state simulation of the same circuits, with a hard bond
// dimension cap and accumulated truncation weight. Site s of an n-site chain
// holds an order-3 tensor (left bond, physical = 2, right bond) stored as one
// matrix per physical value. Site 0 is qubit 0, the most significant bit, so
// dense contractions agree index-for-index with StateVectorT.
//
// The chain is kept in mixed-canonical form around an orthogonality center:
// every site left of the center is left-isometric, every site right of it is
// right-isometric. Two-site updates move the center to the touched bond, so
// each SVD there is a true Schmidt decomposition and the discarded weight is
// exactly the global fidelity loss of that cut.

namespace qclust {

template <typename Scalar = double>
struct MpsStateT {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using SiteTensor = std::array<Matrix, 2>;

  int n_qubits = 0;
  std::vector<SiteTensor> tensors;
  int chi_max = 1;
  Scalar truncation_error_accum = 0;
  int center = 0;

  int bond_dim(int bond) const {  // bond b sits between sites b and b+1
    return static_cast<int>(tensors[bond][0].cols());
  }
};

using MpsState = MpsStateT<double>;

// Relative singular-value floor; values below floor * sigma_max are dropped
// even when the bond cap leaves room.
inline constexpr double kMpsSingularFloor = 1e-12;

template <typename Scalar = double>
MpsStateT<Scalar> mps_from_zero(int n_qubits, int chi_max) {
  if (n_qubits < 1) throw ConfigError("mps_from_zero: n_qubits must be >= 1");
  if (chi_max < 1) throw ConfigError("mps_from_zero: chi_max must be >= 1");
  MpsStateT<Scalar> st;
  st.n_qubits = n_qubits;
  st.chi_max = chi_max;
  st.tensors.resize(n_qubits);
  for (auto& t : st.tensors) {
    t[0] = MpsStateT<Scalar>::Matrix::Constant(1, 1, std::complex<Scalar>(1, 0));
    t[1] = MpsStateT<Scalar>::Matrix::Zero(1, 1);
  }
  st.center = 0;
  return st;
}

template <typename Scalar>
std::complex<Scalar> mps_overlap(const MpsStateT<Scalar>& a, const MpsStateT<Scalar>& b) {
  if (a.n_qubits != b.n_qubits) {
    throw UsageError("mps_overlap: dimension mismatch (" + std::to_string(a.n_qubits) + " vs " +
                     std::to_string(b.n_qubits) + " qubits)");
  }
  typename MpsStateT<Scalar>::Matrix t =
      MpsStateT<Scalar>::Matrix::Constant(1, 1, std::complex<Scalar>(1, 0));
  for (int q = 0; q < a.n_qubits; ++q) {
    typename MpsStateT<Scalar>::Matrix next =
        a.tensors[q][0].adjoint() * t * b.tensors[q][0] +
        a.tensors[q][1].adjoint() * t * b.tensors[q][1];
    t = std::move(next);
  }
  return t(0, 0);
}

// |<a|b>|^2 by transfer-matrix contraction; cost linear in the chain length.
template <typename Scalar>
Scalar mps_fidelity(const MpsStateT<Scalar>& a, const MpsStateT<Scalar>& b) {
  return std::clamp(std::norm(mps_overlap(a, b)), Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar mps_norm_sq(const MpsStateT<Scalar>& st) {
  return std::real(mps_overlap(st, st));
}

namespace detail {

template <typename Scalar>
using MpsMatrix = typename MpsStateT<Scalar>::Matrix;

// Thin QR helper: M = Q R with Q of full column rank k = min(rows, cols).
template <typename Scalar>
void thin_qr(const MpsMatrix<Scalar>& m, MpsMatrix<Scalar>& q, MpsMatrix<Scalar>& r) {
  Eigen::HouseholderQR<MpsMatrix<Scalar>> qr(m);
  const Eigen::Index k = std::min(m.rows(), m.cols());
  q = qr.householderQ() * MpsMatrix<Scalar>::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
}

template <typename Scalar>
void move_center_right(MpsStateT<Scalar>& st) {
  const int c = st.center;
  auto& a = st.tensors[c];
  const Eigen::Index chi_l = a[0].rows(), chi_r = a[0].cols();
  MpsMatrix<Scalar> m(2 * chi_l, chi_r);
  for (int s = 0; s < 2; ++s) m.middleRows(s * chi_l, chi_l) = a[s];
  MpsMatrix<Scalar> q, r;
  thin_qr<Scalar>(m, q, r);
  for (int s = 0; s < 2; ++s) a[s] = q.middleRows(s * chi_l, chi_l);
  for (int s = 0; s < 2; ++s) st.tensors[c + 1][s] = r * st.tensors[c + 1][s];
  st.center = c + 1;
}

template <typename Scalar>
void move_center_left(MpsStateT<Scalar>& st) {
  const int c = st.center;
  auto& a = st.tensors[c];
  const Eigen::Index chi_l = a[0].rows(), chi_r = a[0].cols();
  MpsMatrix<Scalar> m(chi_l, 2 * chi_r);
  for (int s = 0; s < 2; ++s) m.middleCols(s * chi_r, chi_r) = a[s];
  MpsMatrix<Scalar> q, r;
  thin_qr<Scalar>(MpsMatrix<Scalar>(m.adjoint()), q, r);
  const MpsMatrix<Scalar> qh = q.adjoint();  // k x 2*chi_r, right-isometric blocks
  for (int s = 0; s < 2; ++s) a[s] = qh.middleCols(s * chi_r, chi_r);
  for (int s = 0; s < 2; ++s) st.tensors[c - 1][s] = st.tensors[c - 1][s] * r.adjoint();
  st.center = c - 1;
}

template <typename Scalar>
void move_center_to(MpsStateT<Scalar>& st, int site) {
  while (st.center < site) move_center_right(st);
  while (st.center > site) move_center_left(st);
}

template <typename Scalar>
void apply_1q_mps(MpsStateT<Scalar>& st, int q,
                  const Eigen::Matrix<std::complex<Scalar>, 2, 2>& u) {
  auto& a = st.tensors[q];
  const MpsMatrix<Scalar> a0 = u(0, 0) * a[0] + u(0, 1) * a[1];
  a[1] = u(1, 0) * a[0] + u(1, 1) * a[1];
  a[0] = a0;
}

// Two-site gate on (q, q+1); g is 4x4 in the basis |s_q s_{q+1}>. The center
// is brought to the bond, the joint tensor is rebuilt, and the SVD is cut at
// chi_max. Kept singular values are renormalized, the discarded relative
// weight goes to truncation_error_accum.
template <typename Scalar>
void apply_2q_adjacent(MpsStateT<Scalar>& st, int q,
                       const Eigen::Matrix<std::complex<Scalar>, 4, 4>& g) {
  move_center_to(st, q);
  auto& a = st.tensors[q];
  auto& b = st.tensors[q + 1];
  const Eigen::Index chi_l = a[0].rows(), chi_r = b[0].cols();

  std::array<std::array<MpsMatrix<Scalar>, 2>, 2> theta;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) theta[s1][s2] = a[s1] * b[s2];

  MpsMatrix<Scalar> m(2 * chi_l, 2 * chi_r);
  for (int t1 = 0; t1 < 2; ++t1) {
    for (int t2 = 0; t2 < 2; ++t2) {
      MpsMatrix<Scalar> block = MpsMatrix<Scalar>::Zero(chi_l, chi_r);
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) block += g(2 * t1 + t2, 2 * s1 + s2) * theta[s1][s2];
      m.block(t1 * chi_l, t2 * chi_r, chi_l, chi_r) = block;
    }
  }

  Eigen::JacobiSVD<MpsMatrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Scalar total = sv.squaredNorm();
  const Scalar sigma_max = sv.size() > 0 ? sv(0) : Scalar(0);

  Eigen::Index keep = std::min<Eigen::Index>(sv.size(), st.chi_max);
  while (keep > 1 && sv(keep - 1) < Scalar(kMpsSingularFloor) * sigma_max) --keep;

  Scalar kept = 0;
  for (Eigen::Index i = 0; i < keep; ++i) kept += sv(i) * sv(i);
  if (total > Scalar(0)) st.truncation_error_accum += (total - kept) / total;

  const Scalar rescale = kept > Scalar(0) ? Scalar(1) / std::sqrt(kept) : Scalar(1);
  const MpsMatrix<Scalar> u = svd.matrixU().leftCols(keep);
  const MpsMatrix<Scalar> sv_t =
      (sv.head(keep) * rescale).template cast<std::complex<Scalar>>().asDiagonal() *
      svd.matrixV().leftCols(keep).adjoint();

  for (int s = 0; s < 2; ++s) a[s] = u.middleRows(s * chi_l, chi_l);
  for (int s = 0; s < 2; ++s) b[s] = sv_t.middleCols(s * chi_r, chi_r);
  st.center = q + 1;
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> swap_matrix() {
  Eigen::Matrix<std::complex<Scalar>, 4, 4> m;
  m.setZero();
  m(0, 0) = m(3, 3) = std::complex<Scalar>(1, 0);
  m(1, 2) = m(2, 1) = std::complex<Scalar>(1, 0);
  return m;
}

// CNOT on adjacent sites (q, q+1); control_left selects which side controls.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> cnot_matrix(bool control_left) {
  Eigen::Matrix<std::complex<Scalar>, 4, 4> m;
  m.setZero();
  const std::complex<Scalar> one(1, 0);
  if (control_left) {  // |c t>: flip t when c = 1
    m(0, 0) = m(1, 1) = one;
    m(2, 3) = m(3, 2) = one;
  } else {  // |t c>: flip t when c = 1
    m(0, 0) = m(2, 2) = one;
    m(1, 3) = m(3, 1) = one;
  }
  return m;
}

// Two-qubit gate between arbitrary sites, routed through adjacent swaps.
// Swaps are ordinary two-site updates and are subject to the same cap.
template <typename Scalar>
void apply_cnot_routed(MpsStateT<Scalar>& st, int control, int target) {
  if (control == target) throw ConfigError("mps_apply_gate: cnot control equals target");
  if (control < target) {
    for (int p = control; p < target - 1; ++p) apply_2q_adjacent(st, p, swap_matrix<Scalar>());
    apply_2q_adjacent(st, target - 1, cnot_matrix<Scalar>(true));
    for (int p = target - 2; p >= control; --p) apply_2q_adjacent(st, p, swap_matrix<Scalar>());
  } else {
    for (int p = control - 1; p > target; --p) apply_2q_adjacent(st, p, swap_matrix<Scalar>());
    apply_2q_adjacent(st, target, cnot_matrix<Scalar>(false));
    for (int p = target + 1; p < control; ++p) apply_2q_adjacent(st, p, swap_matrix<Scalar>());
  }
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> hadamard_matrix() {
  Eigen::Matrix<std::complex<Scalar>, 2, 2> h;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  h << r, r, r, -r;
  return h;
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> t_phase_matrix(bool dagger) {
  Eigen::Matrix<std::complex<Scalar>, 2, 2> t;
  t.setZero();
  t(0, 0) = std::complex<Scalar>(1, 0);
  t(1, 1) = std::polar(Scalar(1), dagger ? Scalar(-M_PI / 4) : Scalar(M_PI / 4));
  return t;
}

// Standard 6-CNOT decomposition; exactly equal to the Toffoli unitary,
// including phase.
template <typename Scalar>
void apply_toffoli_decomposed(MpsStateT<Scalar>& st, int c1, int c2, int t) {
  const auto h = hadamard_matrix<Scalar>();
  const auto tp = t_phase_matrix<Scalar>(false);
  const auto td = t_phase_matrix<Scalar>(true);
  apply_1q_mps(st, t, h);
  apply_cnot_routed(st, c2, t);
  apply_1q_mps(st, t, td);
  apply_cnot_routed(st, c1, t);
  apply_1q_mps(st, t, tp);
  apply_cnot_routed(st, c2, t);
  apply_1q_mps(st, t, td);
  apply_cnot_routed(st, c1, t);
  apply_1q_mps(st, c2, tp);
  apply_1q_mps(st, t, tp);
  apply_1q_mps(st, t, h);
  apply_cnot_routed(st, c1, c2);
  apply_1q_mps(st, c1, tp);
  apply_1q_mps(st, c2, td);
  apply_cnot_routed(st, c1, c2);
}

template <typename Scalar>
void check_site_index(const MpsStateT<Scalar>& st, int q, const char* who) {
  if (q < 0 || q >= st.n_qubits) {
    throw ConfigError(std::string(who) + ": qubit index " + std::to_string(q) +
                      " out of range for " + std::to_string(st.n_qubits) + " qubits");
  }
}

}  // namespace detail

template <typename Scalar>
MpsStateT<Scalar> mps_apply_gate(const MpsStateT<Scalar>& state, const GateT<Scalar>& gate) {
  MpsStateT<Scalar> out = state;
  switch (gate.kind) {
    case GateKind::RotY:
    case GateKind::RotZ:
    case GateKind::Rot3:
      detail::check_site_index(out, gate.q0, "mps_apply_gate");
      detail::apply_1q_mps(out, gate.q0, gate_matrix(gate));
      break;
    case GateKind::Cnot:
      detail::check_site_index(out, gate.q0, "mps_apply_gate");
      detail::check_site_index(out, gate.q1, "mps_apply_gate");
      detail::apply_cnot_routed(out, gate.q0, gate.q1);
      break;
    case GateKind::Toffoli:
      detail::check_site_index(out, gate.q0, "mps_apply_gate");
      detail::check_site_index(out, gate.q1, "mps_apply_gate");
      detail::check_site_index(out, gate.q2, "mps_apply_gate");
      if (gate.q0 == gate.q1 || gate.q0 == gate.q2 || gate.q1 == gate.q2) {
        throw ConfigError("mps_apply_gate: toffoli qubits must be distinct");
      }
      detail::apply_toffoli_decomposed(out, gate.q0, gate.q1, gate.q2);
      break;
  }
  return out;
}

template <typename Scalar>
MpsStateT<Scalar> run_circuit_mps(int n_qubits, int chi_max,
                                  const std::vector<GateT<Scalar>>& gates) {
  auto st = mps_from_zero<Scalar>(n_qubits, chi_max);
  for (const auto& g : gates) st = mps_apply_gate(st, g);
  return st;
}

// Exact (up to the bond cap) MPS form of a dense state, by sweeping SVDs
// left to right. Useful for anchor states and cross-backend checks.
template <typename Scalar>
MpsStateT<Scalar> mps_from_dense(const StateVectorT<Scalar>& sv, int chi_max) {
  using Matrix = typename MpsStateT<Scalar>::Matrix;
  const int n = sv.n_qubits;
  MpsStateT<Scalar> st;
  st.n_qubits = n;
  st.chi_max = std::max(1, chi_max);
  st.tensors.resize(n);

  Matrix carry(1, sv.dim());
  for (Eigen::Index i = 0; i < sv.dim(); ++i) carry(0, i) = sv.amps[i];

  for (int q = 0; q < n - 1; ++q) {
    const Eigen::Index chi_l = carry.rows();
    const Eigen::Index rest = carry.cols() / 2;
    Matrix m(2 * chi_l, rest);
    for (Eigen::Index l = 0; l < chi_l; ++l)
      for (int s = 0; s < 2; ++s) m.row(2 * l + s) = carry.row(l).segment(s * rest, rest);

    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sval = svd.singularValues();
    const Scalar total = sval.squaredNorm();
    const Scalar sigma_max = sval.size() > 0 ? sval(0) : Scalar(0);
    Eigen::Index keep = std::min<Eigen::Index>(sval.size(), st.chi_max);
    while (keep > 1 && sval(keep - 1) < Scalar(kMpsSingularFloor) * sigma_max) --keep;
    Scalar kept = 0;
    for (Eigen::Index i = 0; i < keep; ++i) kept += sval(i) * sval(i);
    if (total > Scalar(0)) st.truncation_error_accum += (total - kept) / total;
    const Scalar rescale = kept > Scalar(0) ? Scalar(1) / std::sqrt(kept) : Scalar(1);

    const Matrix u = svd.matrixU().leftCols(keep);
    st.tensors[q][0] = Matrix(chi_l, keep);
    st.tensors[q][1] = Matrix(chi_l, keep);
    for (Eigen::Index l = 0; l < chi_l; ++l)
      for (int s = 0; s < 2; ++s) st.tensors[q][s].row(l) = u.row(2 * l + s);

    carry = (sval.head(keep) * rescale).template cast<std::complex<Scalar>>().asDiagonal() *
            svd.matrixV().leftCols(keep).adjoint();
  }

  st.tensors[n - 1][0] = carry.col(0);
  st.tensors[n - 1][1] = carry.col(1);
  st.center = n - 1;
  return st;
}

// Full contraction back to 2^n amplitudes; for tests and small n only.
template <typename Scalar>
StateVectorT<Scalar> mps_to_dense(const MpsStateT<Scalar>& st) {
  using Matrix = typename MpsStateT<Scalar>::Matrix;
  Matrix acc = Matrix::Constant(1, 1, std::complex<Scalar>(1, 0));
  for (int q = 0; q < st.n_qubits; ++q) {
    const Eigen::Index rows = acc.rows();
    Matrix next(rows * 2, st.tensors[q][0].cols());
    for (Eigen::Index b = 0; b < rows; ++b)
      for (int s = 0; s < 2; ++s) next.row(2 * b + s) = acc.row(b) * st.tensors[q][s];
    acc = std::move(next);
  }
  StateVectorT<Scalar> out;
  out.n_qubits = st.n_qubits;
  out.amps = acc.col(0);
  return out;
}

}  // namespace qclust
