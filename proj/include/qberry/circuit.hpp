#pragma once

#include "qberry/state_vector.hpp"

#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace qberry {

inline constexpr double pi = std::numbers::pi_v<double>;

/// Standard single-qubit matrices. Rotation angles follow the
/// exp(-i*theta/2 * axis) convention throughout.
namespace mat {

inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, complexd(0, -1), complexd(0, 1), 0;
  return m;
}

inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

inline Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::numbers::sqrt2_v<double>;
}

inline Eigen::Matrix2cd rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, complexd(0, -s), complexd(0, -s), c;
  return m;
}

inline Eigen::Matrix2cd ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

inline Eigen::Matrix2cd rz(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(complexd(0, -theta / 2));
  m(1, 1) = std::exp(complexd(0, theta / 2));
  return m;
}

/// diag(1, e^{i*phi}): Rz up to global phase, used to carry explicit phases.
inline Eigen::Matrix2cd phase(double phi) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  m(1, 1) = std::exp(complexd(0, phi));
  return m;
}

}  // namespace mat

enum class GateKind {
  h,
  x,
  rx,
  ry,
  rz,
  cnot,
  crz,
  matrix_1q,
  controlled_matrix_1q,
  controlled_register_unitary,
};

/// One circuit element. `matrix` is used by the three matrix-payload kinds;
/// `control` is -1 for uncontrolled gates.
struct Gate {
  GateKind kind;
  int target = -1;
  int control = -1;
  double angle = 0.0;
  Eigen::MatrixXcd matrix;
};

namespace gate {

namespace detail {
inline void check_unitary(const Eigen::MatrixXcd& u, const char* what) {
  if (u.rows() != u.cols() ||
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() >
          1e-10)
    throw std::invalid_argument(std::string(what) + ": matrix payload is not unitary");
}
}  // namespace detail

inline Gate h(int wire) { return {GateKind::h, wire}; }
inline Gate x(int wire) { return {GateKind::x, wire}; }
inline Gate rx(double theta, int wire) { return {GateKind::rx, wire, -1, theta}; }
inline Gate ry(double theta, int wire) { return {GateKind::ry, wire, -1, theta}; }
inline Gate rz(double theta, int wire) { return {GateKind::rz, wire, -1, theta}; }
inline Gate cnot(int control, int target) { return {GateKind::cnot, target, control}; }
inline Gate crz(double theta, int control, int target) {
  return {GateKind::crz, target, control, theta};
}

inline Gate matrix_1q(const Eigen::Matrix2cd& u, int wire) {
  detail::check_unitary(u, "matrix_1q");
  Gate g{GateKind::matrix_1q, wire};
  g.matrix = u;
  return g;
}

inline Gate controlled_matrix_1q(const Eigen::Matrix2cd& u, int control, int target) {
  detail::check_unitary(u, "controlled_matrix_1q");
  Gate g{GateKind::controlled_matrix_1q, target, control};
  g.matrix = u;
  return g;
}

/// Dense unitary over every wire except `control`, fired when `control` is 1.
inline Gate controlled_register_unitary(const Eigen::MatrixXcd& u, int control) {
  detail::check_unitary(u, "controlled_register_unitary");
  Gate g{GateKind::controlled_register_unitary, -1, control};
  g.matrix = u;
  return g;
}

}  // namespace gate

/// Gate list over a fixed wire count; gates apply in list order.
struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  explicit Circuit(int n = 0) : n_qubits(n) {}

  Circuit& add(Gate g) {
    gates.push_back(std::move(g));
    return *this;
  }

  Circuit& extend(const Circuit& other) {
    if (other.n_qubits != n_qubits)
      throw std::invalid_argument("Circuit::extend: wire count mismatch");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    return *this;
  }

  std::size_t size() const { return gates.size(); }
};

inline void apply_gate(StateVector& state, const Gate& g) {
  switch (g.kind) {
    case GateKind::h:
      state.apply_1q(mat::hadamard(), g.target);
      break;
    case GateKind::x:
      state.apply_1q(mat::pauli_x(), g.target);
      break;
    case GateKind::rx:
      state.apply_1q(mat::rx(g.angle), g.target);
      break;
    case GateKind::ry:
      state.apply_1q(mat::ry(g.angle), g.target);
      break;
    case GateKind::rz:
      state.apply_1q(mat::rz(g.angle), g.target);
      break;
    case GateKind::cnot:
      state.apply_cnot(g.control, g.target);
      break;
    case GateKind::crz:
      state.apply_controlled_1q(mat::rz(g.angle), g.control, g.target);
      break;
    case GateKind::matrix_1q:
      state.apply_1q(g.matrix, g.target);
      break;
    case GateKind::controlled_matrix_1q:
      state.apply_controlled_1q(g.matrix, g.control, g.target);
      break;
    case GateKind::controlled_register_unitary:
      state.apply_controlled_register_unitary(g.matrix, g.control);
      break;
  }
}

inline void run_circuit(StateVector& state, const Circuit& circuit) {
  if (circuit.n_qubits != state.n_qubits())
    throw std::invalid_argument("run_circuit: wire count mismatch");
  for (const Gate& g : circuit.gates) apply_gate(state, g);
}

/// Dense matrix of the whole circuit, built column by column. Oracle path for
/// tests; guarded to small registers.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  if (circuit.n_qubits > 12)
    throw std::invalid_argument("circuit_unitary: register too large for dense build");
  const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
    basis(col) = 1.0;
    StateVector sv = StateVector::from_amplitudes(std::move(basis));
    run_circuit(sv, circuit);
    u.col(col) = sv.amplitudes();
  }
  return u;
}

/// Gate-by-gate inverse: reversed order, rotation angles negated, matrix
/// payloads conjugate-transposed.
inline Circuit inverse_circuit(const Circuit& circuit) {
  Circuit inv(circuit.n_qubits);
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case GateKind::h:
      case GateKind::x:
      case GateKind::cnot:
        break;
      case GateKind::rx:
      case GateKind::ry:
      case GateKind::rz:
      case GateKind::crz:
        g.angle = -g.angle;
        break;
      case GateKind::matrix_1q:
      case GateKind::controlled_matrix_1q:
      case GateKind::controlled_register_unitary:
        g.matrix = g.matrix.adjoint().eval();
        break;
    }
    inv.add(std::move(g));
  }
  return inv;
}

/// Number of CNOT gates (the crz and controlled-payload kinds are not
/// counted; entangling cost reports use compiled circuits where every
/// two-qubit interaction is a CNOT).
inline std::size_t cnot_count(const Circuit& circuit) {
  std::size_t n = 0;
  for (const Gate& g : circuit.gates)
    if (g.kind == GateKind::cnot) ++n;
  return n;
}

}  // namespace qberry
