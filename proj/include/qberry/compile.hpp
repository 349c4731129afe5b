#pragma once

#include "qberry/circuit.hpp"

#include <cmath>

namespace qberry {

/// Euler angles for U = e^{i*alpha} Rz(beta) Ry(gamma) Rz(delta),
/// with gamma in [0, pi].
struct ZyzAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

/// Factors an arbitrary 2x2 unitary into ZYZ Euler angles. The special-unitary
/// part V = e^{-i*alpha} U has V(0,0) = cos(gamma/2) e^{-i(beta+delta)/2} and
/// V(1,0) = sin(gamma/2) e^{i(beta-delta)/2}; degenerate cases (diagonal or
/// antidiagonal V) put the whole phase into beta with delta = 0.
inline ZyzAngles zyz_decompose(const Eigen::Matrix2cd& u) {
  gate::detail::check_unitary(u, "zyz_decompose");
  ZyzAngles a;
  a.alpha = 0.5 * std::arg(u.determinant());
  const Eigen::Matrix2cd v = std::exp(complexd(0, -a.alpha)) * u;
  const double m00 = std::abs(v(0, 0));
  const double m10 = std::abs(v(1, 0));
  a.gamma = 2.0 * std::atan2(m10, m00);
  if (m10 < 1e-12) {
    a.beta = -2.0 * std::arg(v(0, 0));
  } else if (m00 < 1e-12) {
    a.beta = 2.0 * std::arg(v(1, 0));
  } else {
    const double sum = -2.0 * std::arg(v(0, 0));
    const double diff = 2.0 * std::arg(v(1, 0));
    a.beta = 0.5 * (sum + diff);
    a.delta = 0.5 * (sum - diff);
  }
  return a;
}

inline Eigen::Matrix2cd zyz_reconstruct(const ZyzAngles& a) {
  return std::exp(complexd(0, a.alpha)) * mat::rz(a.beta) * mat::ry(a.gamma) *
         mat::rz(a.delta);
}

/// Appends a controlled-U as the standard two-CNOT network
/// A * CNOT * B * CNOT * C on the target plus a phase gate on the control,
/// where A B C = I and A X B X C = Rz(beta) Ry(gamma) Rz(delta). Exact
/// including global phase.
inline void append_controlled_1q(Circuit& c, const Eigen::Matrix2cd& u, int control,
                                 int target) {
  const ZyzAngles a = zyz_decompose(u);
  c.add(gate::rz(0.5 * (a.delta - a.beta), target));
  c.add(gate::cnot(control, target));
  c.add(gate::rz(-0.5 * (a.delta + a.beta), target));
  c.add(gate::ry(-0.5 * a.gamma, target));
  c.add(gate::cnot(control, target));
  c.add(gate::ry(0.5 * a.gamma, target));
  c.add(gate::rz(a.beta, target));
  c.add(gate::matrix_1q(mat::phase(a.alpha), control));
}

/// Two-site exponential axes: first letter acts on wire_a, second on wire_b.
enum class ExchangeAxis { xx, yy, zz, yx, xy };

namespace detail {

/// Basis-change gate W with W^dag Z W = sigma_axis ('x','y','z').
inline void append_basis_in(Circuit& c, char axis, int wire) {
  if (axis == 'x')
    c.add(gate::h(wire));
  else if (axis == 'y')
    c.add(gate::rx(pi / 2, wire));
}

inline void append_basis_out(Circuit& c, char axis, int wire) {
  if (axis == 'x')
    c.add(gate::h(wire));
  else if (axis == 'y')
    c.add(gate::rx(-pi / 2, wire));
}

inline std::pair<char, char> axis_letters(ExchangeAxis axis) {
  switch (axis) {
    case ExchangeAxis::xx: return {'x', 'x'};
    case ExchangeAxis::yy: return {'y', 'y'};
    case ExchangeAxis::zz: return {'z', 'z'};
    case ExchangeAxis::yx: return {'y', 'x'};
    case ExchangeAxis::xy: return {'x', 'y'};
  }
  throw std::logic_error("axis_letters: unreachable");
}

}  // namespace detail

/// Appends exp(-i*(theta/2) * sigma_a sigma_b) on (wire_a, wire_b):
/// basis changes into Z Z, then CNOT - Rz(theta) - CNOT. Exact including
/// global phase.
inline void append_exchange(Circuit& c, ExchangeAxis axis, double theta, int wire_a,
                            int wire_b) {
  const auto [la, lb] = detail::axis_letters(axis);
  detail::append_basis_in(c, la, wire_a);
  detail::append_basis_in(c, lb, wire_b);
  c.add(gate::cnot(wire_a, wire_b));
  c.add(gate::rz(theta, wire_b));
  c.add(gate::cnot(wire_a, wire_b));
  detail::append_basis_out(c, la, wire_a);
  detail::append_basis_out(c, lb, wire_b);
}

/// Controlled version: the inner Rz becomes Rz(theta/2) - CNOT(control) -
/// Rz(-theta/2) - CNOT(control), which equals Rz(theta) exactly on the
/// control-1 branch and identity (with no stray phase) on the control-0
/// branch; the outer basis changes then cancel pairwise when the control is 0.
inline void append_controlled_exchange(Circuit& c, ExchangeAxis axis, double theta,
                                       int control, int wire_a, int wire_b) {
  if (control == wire_a || control == wire_b)
    throw std::invalid_argument("append_controlled_exchange: control overlaps targets");
  const auto [la, lb] = detail::axis_letters(axis);
  detail::append_basis_in(c, la, wire_a);
  detail::append_basis_in(c, lb, wire_b);
  c.add(gate::cnot(wire_a, wire_b));
  c.add(gate::rz(theta / 2, wire_b));
  c.add(gate::cnot(control, wire_b));
  c.add(gate::rz(-theta / 2, wire_b));
  c.add(gate::cnot(control, wire_b));
  c.add(gate::cnot(wire_a, wire_b));
  detail::append_basis_out(c, la, wire_a);
  detail::append_basis_out(c, lb, wire_b);
}

namespace detail {

/// Uniformly controlled rotation about `axis` ('y' or 'z'): applies
/// R(angles[m]) to `target` when the control wires (ascending, bit m of the
/// angle index = control reading) hold |m>. Compiled recursively into plain
/// rotations and CNOTs via the angle half-sum / half-difference identity.
inline void append_multiplexed_rotation(Circuit& c, char axis,
                                        const std::vector<double>& angles, int target,
                                        const std::vector<int>& controls) {
  if (angles.size() != (std::size_t{1} << controls.size()))
    throw std::logic_error("append_multiplexed_rotation: angle count mismatch");
  bool all_zero = true;
  for (double a : angles)
    if (std::abs(a) > 1e-14) all_zero = false;
  if (all_zero) return;
  if (controls.empty()) {
    c.add(axis == 'y' ? gate::ry(angles[0], target) : gate::rz(angles[0], target));
    return;
  }
  const std::size_t half = angles.size() / 2;
  const int top = controls.back();
  const std::vector<int> rest(controls.begin(), controls.end() - 1);
  std::vector<double> sums(half), diffs(half);
  for (std::size_t r = 0; r < half; ++r) {
    sums[r] = 0.5 * (angles[r] + angles[r + half]);
    diffs[r] = 0.5 * (angles[r] - angles[r + half]);
  }
  c.add(gate::cnot(top, target));
  append_multiplexed_rotation(c, axis, diffs, target, rest);
  c.add(gate::cnot(top, target));
  append_multiplexed_rotation(c, axis, sums, target, rest);
}

}  // namespace detail

/// Compiled state-preparation circuit plus its gate budget.
struct PrepReport {
  Circuit circuit{0};
  std::size_t cnot_gates = 0;
  std::size_t total_gates = 0;
  double cnot_fraction = 0.0;
};

/// Builds a circuit mapping |0...0> to `target` exactly (including global
/// phase) from {Ry, Rz, CNOT} plus one final phase gate. Works by
/// disentangling wires top-down with multiplexed Rz/Ry rotations and
/// inverting the result.
inline PrepReport prepare_state(const Eigen::VectorXcd& target) {
  if (!detail::is_power_of_two(target.size()))
    throw std::invalid_argument("prepare_state: dimension must be a power of two");
  if (std::abs(target.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("prepare_state: target is not normalized");
  const int n = detail::log2_exact(target.size());

  Eigen::VectorXcd psi = target;
  Circuit disentangle(n);
  for (int q = n - 1; q >= 0; --q) {
    const Eigen::Index half = Eigen::Index{1} << q;
    std::vector<double> rz_angles(half), ry_angles(half);
    for (Eigen::Index r = 0; r < half; ++r) {
      const complexd a0 = psi(r);
      const complexd a1 = psi(r + half);
      const double m0 = std::abs(a0), m1 = std::abs(a1);
      rz_angles[r] = (m0 < 1e-14 || m1 < 1e-14) ? 0.0 : std::arg(a0) - std::arg(a1);
      ry_angles[r] = -2.0 * std::atan2(m1, m0);
    }
    std::vector<int> controls(q);
    for (int m = 0; m < q; ++m) controls[m] = m;
    detail::append_multiplexed_rotation(disentangle, 'z', rz_angles, q, controls);
    detail::append_multiplexed_rotation(disentangle, 'y', ry_angles, q, controls);
    for (Eigen::Index r = 0; r < half; ++r) {
      const complexd a0 = psi(r) * std::exp(complexd(0, -rz_angles[r] / 2));
      const complexd a1 = psi(r + half) * std::exp(complexd(0, rz_angles[r] / 2));
      const double g = ry_angles[r];
      psi(r) = std::cos(g / 2) * a0 - std::sin(g / 2) * a1;
      psi(r + half) = std::sin(g / 2) * a0 + std::cos(g / 2) * a1;
    }
  }
  // psi is now e^{i*phi}|0...0>; undo that phase so the inverse is exact.
  const double residual_phase = std::arg(psi(0));
  PrepReport report;
  report.circuit = inverse_circuit(disentangle);
  if (std::abs(residual_phase) > 1e-14) {
    const complexd w = std::exp(complexd(0, residual_phase));
    Eigen::Matrix2cd global = Eigen::Matrix2cd::Identity() * w;
    Circuit phased(n);
    phased.add(gate::matrix_1q(global, 0));
    phased.extend(report.circuit);
    report.circuit = phased;
  }
  report.cnot_gates = cnot_count(report.circuit);
  report.total_gates = report.circuit.size();
  report.cnot_fraction = report.total_gates == 0
                             ? 0.0
                             : static_cast<double>(report.cnot_gates) / report.total_gates;
  return report;
}

}  // namespace qberry
